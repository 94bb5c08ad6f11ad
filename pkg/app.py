import logging

from flask import Flask, jsonify, request
from werkzeug.exceptions import HTTPException

from config import Config
from routes.api import api_bp
from routes.experiments import experiments_bp


def configure_logging(level, fmt=None):
    """Install one stream handler on the root logger."""
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, '_rangeeq', False):
            root.removeHandler(handler)
    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(fmt or Config.LOG_FORMAT))
    handler._rangeeq = True
    root.addHandler(handler)
    root.setLevel(level)
    return root


def create_app(config_class=Config):
    app = Flask(__name__)
    app.config.from_object(config_class)

    configure_logging(app.config['LOG_LEVEL'], app.config['LOG_FORMAT'])

    # Register blueprints
    app.register_blueprint(api_bp)
    app.register_blueprint(experiments_bp)

    @app.errorhandler(HTTPException)
    def http_error(e):
        # API clients always get JSON, including for unknown paths and wrong methods
        if request.path.startswith(api_bp.url_prefix):
            return jsonify({'success': False, 'error': e.description, 'kind': e.name}), e.code
        return e

    return app


if __name__ == '__main__':
    app = create_app()
    app.run(debug=True, host='0.0.0.0', port=5000)
