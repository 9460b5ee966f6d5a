"""
Command-line entry point. Every subcommand parses its flags, calls one adapter
from utils.reports and prints the payload either as ``key=value`` pairs or, with
``--json``, as a single JSON document.

Exit codes: 0 success, 2 invalid input or domain error, 3 verification failure.
"""

import argparse
import io
import json
import logging
import math
import sys
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass, field as dataclass_field

from utils import reports
from utils.errors import GridExportError, HelmholtzError
from utils.field_grids import export_csv, export_json
from utils.log_setup import configure_logging
from utils.serialize import format_number, to_jsonable

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILED = 3


@dataclass
class CommandResult:
    exit_code: int
    stdout_payload: str
    diagnostics: list = dataclass_field(default_factory=list)


def _text_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def render(payload, as_json=False):
    if as_json:
        return json.dumps(to_jsonable(payload), allow_nan=False)
    return " ".join(
        f"{key}={_text_value(value)}" for key, value in payload.items() if key != "schema"
    )


def _angle(args, value):
    if value is None or not args.deg:
        return value
    return math.radians(value)


# --- Subcommands ---


def cmd_eval(args, field):
    point = reports.resolve_point(
        r=args.r,
        theta=_angle(args, args.theta),
        phi=_angle(args, args.phi),
        x=args.x,
        y=args.y,
        z=args.z,
    )
    return reports.eval_payload(args.k, args.a, point, branch=args.branch)


def cmd_residual(args, field):
    point = reports.resolve_point(r=args.r, theta=_angle(args, args.theta), phi=_angle(args, args.phi))
    return reports.residual_payload(
        args.k, args.a, point, h=args.h, tol=args.tol, envelope=args.envelope, field=field
    )


def cmd_riccati(args, field):
    return reports.riccati_payload(
        args.which,
        _angle(args, args.start) if args.which == "angular" else args.start,
        _angle(args, args.stop) if args.which == "angular" else args.stop,
        tol=args.tol,
        samples=args.samples,
        c0=complex(args.c0_re, args.c0_im),
        k=args.k,
        branch=args.branch,
    )


def cmd_window(args, field):
    return reports.window_payload()


def cmd_vortex(args, field):
    return reports.vortex_payload(args.k, args.r, a=args.a)


def cmd_paraxial(args, field):
    return reports.paraxial_payload(args.k, args.z, args.rho, a=args.a)


def cmd_energy(args, field):
    return reports.energy_payload(
        args.k, args.a, args.rlo, args.rhi, full_theta=args.full_theta, magnitude=args.magnitude
    )


def cmd_pq(args, field):
    return reports.pq_payload(args.w, args.r_curv, _angle(args, args.zeta), args.z, args.k)


def cmd_grid(args, field):
    grid = reports.build_grid(
        figure=args.figure,
        field=args.field,
        k=args.k,
        a=args.a,
        n_x=args.nx,
        n_y=args.ny,
        threads=args.threads,
    )
    exporter = export_csv if args.format == "csv" else export_json
    if args.out is None:
        document = exporter(grid)
        text = document.decode("utf-8")
        if not args.json:
            # the document itself is the output
            return text.rstrip("\n")
        payload = reports.grid_payload(grid, args.format, n_bytes=len(document))
        payload["document"] = json.loads(text) if args.format == "json" else text
        return payload
    document = exporter(grid, args.out)
    logger.info("wrote %d bytes to %s", len(document), args.out)
    return reports.grid_payload(grid, args.format, args.out, len(document))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON document")
    common.add_argument("--deg", action="store_true", help="angles are given in degrees")
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level to stderr")

    parser = argparse.ArgumentParser(
        prog="helmholtz-beam",
        description="Evaluate, verify and analyse the exact non-paraxial Helmholtz beam.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="field value and branch at a point")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--r", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--x", type=float)
    p.add_argument("--y", type=float)
    p.add_argument("--z", type=float)
    p.add_argument("--branch", choices=["cos", "sin"])
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("residual", parents=[common], help="finite-difference PDE residual")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--phi", type=float)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--envelope", action="store_true", help="check the envelope PDE instead")
    p.set_defaults(handler=cmd_residual)

    p = sub.add_parser("riccati", parents=[common], help="integrator vs closed-form cross-check")
    p.add_argument("--which", choices=["angular", "radial"], required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--c0-re", type=float, default=0.0)
    p.add_argument("--c0-im", type=float, default=0.0)
    p.add_argument("--k", type=float)
    p.add_argument("--branch", choices=["cos", "sin"])
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--samples", type=int, default=50)
    p.set_defaults(handler=cmd_riccati)

    p = sub.add_parser("window", parents=[common], help="admissible theta-window endpoints")
    p.set_defaults(handler=cmd_window)

    p = sub.add_parser("vortex", parents=[common], help="polar angle of the vortex line")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.set_defaults(handler=cmd_vortex)

    p = sub.add_parser("paraxial", parents=[common], help="exact vs paraxial field at (rho, 0, z)")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.set_defaults(handler=cmd_paraxial)

    p = sub.add_parser("energy", parents=[common], help="field energy in a spherical shell")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--rlo", type=float, required=True)
    p.add_argument("--rhi", type=float, required=True)
    p.add_argument("--full-theta", action="store_true", help="integrate over the whole sphere")
    p.add_argument("--magnitude", action="store_true", help="integrate |A| instead of |A|^2")
    p.set_defaults(handler=cmd_energy)

    p = sub.add_parser("pq", parents=[common], help="Gaussian (w, r, zeta) to (p, 1/(2q))")
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--r-curv", type=float, default=math.inf, help="inf for a flat wavefront")
    p.add_argument("--zeta", type=float, default=0.0)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.set_defaults(handler=cmd_pq)

    p = sub.add_parser("grid", parents=[common], help="sample and export a field grid")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--figure", type=int, choices=[3, 4, 5, 6])
    source.add_argument("--field", choices=["exact", "paraxial", "spherical"])
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(handler=cmd_grid)

    return parser


def run(argv, *, field=None):
    """Parse ``argv`` and dispatch; ``field`` replaces the closed form in ``residual``."""
    parser = build_parser()
    out, err = io.StringIO(), io.StringIO()
    try:
        with redirect_stdout(out), redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        code = EXIT_OK if exc.code in (0, None) else EXIT_INVALID
        return CommandResult(code, out.getvalue(), err.getvalue().splitlines())

    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    try:
        payload = args.handler(args, field)
    except (HelmholtzError, GridExportError) as exc:
        logger.debug("%s failed: %s", args.command, exc)
        return CommandResult(EXIT_INVALID, "", [f"error: {exc}"])

    if isinstance(payload, str):
        return CommandResult(EXIT_OK, payload)
    code = EXIT_FAILED if payload.get("passed") is False else EXIT_OK
    diagnostics = [f"{args.command}: check failed"] if code == EXIT_FAILED else []
    return CommandResult(code, render(payload, as_json=args.json), diagnostics)


def main(argv=None):
    configure_logging()
    result = run(sys.argv[1:] if argv is None else argv)
    if result.stdout_payload:
        print(result.stdout_payload)
    for line in result.diagnostics:
        print(line, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
