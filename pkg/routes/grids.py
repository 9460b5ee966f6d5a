from flask import Blueprint, Response, current_app, jsonify, request

from routes.common import float_arg, int_arg
from utils import reports
from utils.field_grids import export_csv, export_json

grids_bp = Blueprint("grids", __name__)


@grids_bp.route("/figure")
def figure():
    """Figure preset grid as JSON (default) or CSV; grids are cached by the app's GridStore."""
    fig = request.args.get("figure")
    if not fig:
        return jsonify({"error": "figure parameter is required"}), 400
    fmt = request.args.get("format", "json").lower()
    if fmt not in ("json", "csv"):
        return jsonify({"error": f"format must be json or csv, got {fmt!r}"}), 400

    store = current_app.config["GRID_STORE"]
    grid = store.figure(
        int_arg("figure"),
        k=float_arg("k", current_app.config["DEFAULT_K"]),
        n_x=int_arg("nx"),
        n_y=int_arg("ny"),
    )
    if fmt == "csv":
        return Response(export_csv(grid), mimetype="text/csv")
    return Response(export_json(grid), mimetype="application/json")


@grids_bp.route("/summary")
def summary():
    store = current_app.config["GRID_STORE"]
    grid = store.figure(
        int_arg("figure", 3),
        k=float_arg("k", current_app.config["DEFAULT_K"]),
        n_x=int_arg("nx"),
        n_y=int_arg("ny"),
    )
    return jsonify(reports.grid_payload(grid, "json"))


@grids_bp.route("/refresh", methods=["POST"])
def refresh():
    current_app.config["GRID_STORE"].refresh()
    return jsonify({"status": "ok"})
