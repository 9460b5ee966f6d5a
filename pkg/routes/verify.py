from flask import Blueprint, current_app, jsonify, request

from routes.common import flag_arg, float_arg, int_arg
from utils import reports

verify_bp = Blueprint("verify", __name__)


@verify_bp.route("/residual")
def residual():
    """Finite-difference Helmholtz residual, or the envelope PDE residual with envelope=true."""
    point = reports.resolve_point(
        r=float_arg("r"), theta=float_arg("theta"), phi=float_arg("phi", None)
    )
    payload = reports.residual_payload(
        float_arg("k", current_app.config["DEFAULT_K"]),
        float_arg("a", 1.0),
        point,
        h=float_arg("h", 1e-3),
        tol=float_arg("tol", 1e-4),
        envelope=flag_arg("envelope"),
    )
    return jsonify(payload)


@verify_bp.route("/riccati")
def riccati():
    which = request.args.get("which")
    if not which:
        return jsonify({"error": "which parameter is required"}), 400
    payload = reports.riccati_payload(
        which,
        float_arg("from"),
        float_arg("to"),
        tol=float_arg("tol", 1e-10),
        samples=int_arg("samples", 50),
        c0=complex(float_arg("c0_re", 0.0), float_arg("c0_im", 0.0)),
        k=float_arg("k", None),
        branch=request.args.get("branch"),
    )
    return jsonify(payload)
