"""HTTP API and CLI blueprints."""
