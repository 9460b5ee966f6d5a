import math

from flask import Blueprint, current_app, jsonify, request

from routes.common import float_arg
from utils import reports

field_bp = Blueprint("field", __name__)


@field_bp.route("/eval")
def evaluate():
    """Field value and branch at a spherical (r, theta[, phi]) or Cartesian (x, y, z) point."""
    k = float_arg("k", current_app.config["DEFAULT_K"])
    a = float_arg("a", 1.0)
    point = reports.resolve_point(
        r=float_arg("r", None),
        theta=float_arg("theta", None),
        phi=float_arg("phi", None),
        x=float_arg("x", None),
        y=float_arg("y", None),
        z=float_arg("z", None),
    )
    return jsonify(reports.eval_payload(k, a, point, branch=request.args.get("branch")))


@field_bp.route("/pq")
def pq():
    """Maps Gaussian beam parameters (w, r_curv, zeta) at axial z to (p, 1/(2q))."""
    payload = reports.pq_payload(
        float_arg("w"),
        float_arg("r_curv", math.inf),
        float_arg("zeta", 0.0),
        float_arg("z"),
        float_arg("k", current_app.config["DEFAULT_K"]),
    )
    return jsonify(payload)
