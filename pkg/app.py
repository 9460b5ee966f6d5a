import logging

from flask import Flask, jsonify
from flask_cors import CORS
from werkzeug.exceptions import HTTPException

from routes.analysis import analysis_bp
from routes.field import field_bp
from routes.grids import grids_bp
from routes.verify import verify_bp
from utils.errors import HelmholtzError
from utils.grid_store import GridStore
from utils.log_setup import configure_logging

logger = logging.getLogger(__name__)


def create_app(config=None):
    configure_logging()
    app = Flask(__name__)
    _ = CORS(app)

    app.config["DEFAULT_K"] = 1.0
    app.config["GRID_STORE"] = GridStore()
    if config:
        app.config.update(config)

    # register blueprints
    app.register_blueprint(field_bp, url_prefix="/api/field")
    app.register_blueprint(verify_bp, url_prefix="/api/verify")
    app.register_blueprint(analysis_bp, url_prefix="/api/analysis")
    app.register_blueprint(grids_bp, url_prefix="/api/grids")

    @app.errorhandler(HelmholtzError)
    def bad_request(exc):
        return jsonify({"error": str(exc)}), 400

    @app.errorhandler(Exception)
    def internal_error(exc):
        if isinstance(exc, HTTPException):
            return exc
        logger.exception("unhandled error")
        return jsonify({"error": str(exc)}), 500

    @app.route("/health")
    def health():
        """Health check endpoint."""
        return {"status": "ok"}

    return app


app = create_app()
