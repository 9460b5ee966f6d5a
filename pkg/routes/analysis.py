from flask import Blueprint, current_app, jsonify

from routes.common import flag_arg, float_arg
from utils import reports

analysis_bp = Blueprint("analysis", __name__)


def _k():
    return float_arg("k", current_app.config["DEFAULT_K"])


@analysis_bp.route("/window")
def window():
    return jsonify(reports.window_payload())


@analysis_bp.route("/vortex")
def vortex():
    return jsonify(reports.vortex_payload(_k(), float_arg("r"), a=float_arg("a", 1.0)))


@analysis_bp.route("/paraxial")
def paraxial():
    """Exact real part vs the paraxial form at (rho, 0, z)."""
    return jsonify(
        reports.paraxial_payload(_k(), float_arg("z"), float_arg("rho"), a=float_arg("a", 1.0))
    )


@analysis_bp.route("/energy")
def energy():
    payload = reports.energy_payload(
        _k(),
        float_arg("a", 1.0),
        float_arg("rlo"),
        float_arg("rhi"),
        full_theta=flag_arg("full_theta"),
        magnitude=flag_arg("magnitude"),
    )
    return jsonify(payload)
