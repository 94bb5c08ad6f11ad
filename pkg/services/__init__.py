"""Numerical services: kernel, equilibrium, statics, premium, experiments, verification."""
