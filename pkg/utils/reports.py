"""
Thin adapters from user-facing parameters to library calls. Each returns a flat,
JSON-ready dict tagged with a ``schema`` naming the command that produced it;
the command line and the HTTP routes both render these payloads.
"""

import logging
import math

import numpy as np

from utils import analysis, riccati, verification
from utils.core_field import (
    BeamSpec,
    Branch,
    CartesianPoint,
    GaussianBeamParams,
    SphericalPoint,
    beam_parameters_to_pq,
    eval_branch,
    eval_field,
    select_branch,
    spherical_from_cartesian,
)
from utils.errors import DomainError
from utils.field_grids import Axis, FieldKind, field_grid, figure_grid

logger = logging.getLogger(__name__)

DEFAULT_GRID_SIZE = 256
# (x range, y range) per field kind: (r, Z) for exact/paraxial, (R, theta) for spherical
DEFAULT_FIELD_RANGES = {
    FieldKind.EXACT: ((0.0, 1.0), (0.0, 1000.0)),
    FieldKind.PARAXIAL: ((0.0, 1.0), (0.0, 1000.0)),
    FieldKind.SPHERICAL: ((0.0, 10.0), (0.0, np.pi)),
}


def parse_branch(value):
    if value is None or isinstance(value, Branch):
        return value
    try:
        return Branch(str(value).lower())
    except ValueError:
        raise DomainError(f"branch must be 'cos' or 'sin', got {value!r}") from None


def resolve_point(r=None, theta=None, phi=None, x=None, y=None, z=None):
    """Spherical input wins when given; Cartesian input is converted."""
    if r is not None or theta is not None:
        if r is None or theta is None:
            raise DomainError("spherical input needs both r and theta")
        return SphericalPoint(r, theta, 0.0 if phi is None else phi)
    if x is None or y is None or z is None:
        raise DomainError("give either r and theta, or all of x, y and z")
    return spherical_from_cartesian(CartesianPoint(x, y, z))


def eval_payload(k, a, point, branch=None):
    beam = BeamSpec(a=a, k=k)
    branch = parse_branch(branch)
    if branch is None:
        value, branch = eval_field(beam, point)
    else:
        value = eval_branch(beam, point, branch)
    return {"schema": "eval", "re": value.real, "im": value.imag, "branch": branch.value}


def residual_payload(k, a, point, h=verification.DEFAULT_STEP, tol=1e-4, envelope=False, field=None):
    """Helmholtz residual, or the envelope PDE residual with ``envelope``; ``field`` is injected as-is."""
    beam = BeamSpec(a=a, k=k)
    if envelope:
        branch = select_branch(k, point.R)
        report = verification.pde_envelope_residual(beam, point, branch, h, exponent=field)
    else:
        report = verification.helmholtz_residual(beam, point, h, field=field)
    passed = report.relative_magnitude <= tol
    if not passed:
        logger.info("residual %g above tolerance %g", report.relative_magnitude, tol)
    return {
        "schema": "residual",
        "equation": "envelope" if envelope else "helmholtz",
        "re": report.residual.real,
        "im": report.residual.imag,
        "relative_magnitude": report.relative_magnitude,
        "h": report.h,
        "tol": tol,
        "branch": report.branch.value,
        "passed": bool(passed),
    }


def riccati_payload(which, start, stop, tol=1e-10, samples=50, c0=0j, k=None, branch=None):
    try:
        which = riccati.RiccatiKind(which)
    except ValueError:
        raise DomainError(f"which must be 'angular' or 'radial', got {which!r}") from None
    if which is riccati.RiccatiKind.ANGULAR:
        report = riccati.crosscheck_angular(c0, start, stop, tol=tol, n_samples=samples)
    else:
        if k is None:
            raise DomainError("radial cross-check needs k")
        branch = parse_branch(branch) or select_branch(k, start)
        report = riccati.crosscheck_radial(k, start, stop, branch, tol=tol, n_samples=samples)
    return {
        "schema": "riccati",
        "which": which.value,
        "max_abs_error": report.max_abs_error,
        "max_rel_error": report.max_rel_error,
        "interval_lo": report.interval[0],
        "interval_hi": report.interval[1],
        "n_samples": report.n_samples,
        "tolerance": report.tolerance,
        "accept": report.accept,
        "passed": report.passed,
    }


def window_payload():
    window = analysis.admissible_theta_window()
    return {
        "schema": "window",
        "theta0": window.theta0,
        "theta1": window.theta1,
        "theta0_over_pi": window.theta0 / np.pi,
        "theta1_over_pi": window.theta1 / np.pi,
        "theta0_deg": math.degrees(window.theta0),
        "theta1_deg": math.degrees(window.theta1),
    }


def vortex_payload(k, r, a=1.0):
    beam = BeamSpec(a=a, k=k)
    theta = analysis.locate_vortex(beam, r)
    value, _ = eval_field(beam, SphericalPoint(r, theta))
    return {
        "schema": "vortex",
        "theta": theta,
        "theta_over_pi": theta / np.pi,
        "amplitude": abs(value),
        "phase_jump": analysis.vortex_phase_jump(beam, r),
    }


def paraxial_payload(k, z, rho, a=1.0):
    comparison = analysis.paraxial_error(BeamSpec(a=a, k=k), rho, 0.0, z)
    return {
        "schema": "paraxial",
        "exact": comparison.exact,
        "approx": comparison.approx,
        "abs_error": comparison.abs_error,
        "rel_error": comparison.rel_error,
        "fresnel_parameter": comparison.fresnel_parameter,
        "non_paraxial": comparison.non_paraxial,
    }


def energy_payload(k, a, r_lo, r_hi, full_theta=False, magnitude=False):
    if full_theta:
        theta_lo, theta_hi = analysis.full_theta_range()
    else:
        window = analysis.admissible_theta_window()
        theta_lo, theta_hi = window.theta0, window.theta1
    report = analysis.shell_energy(
        BeamSpec(a=a, k=k), r_lo, r_hi, theta_lo, theta_hi, magnitude=magnitude
    )
    return {
        "schema": "energy",
        "R_lo": report.R_lo,
        "R_hi": report.R_hi,
        "theta_lo": report.theta_lo,
        "theta_hi": report.theta_hi,
        "value": report.value,
        "n_radial": report.n_radial,
        "n_angular": report.n_angular,
        "integrand": "|A|" if report.magnitude else "|A|^2",
    }


def pq_payload(w, r_curv, zeta, z, k):
    pq = beam_parameters_to_pq(GaussianBeamParams(w=w, r_curv=r_curv, zeta=zeta, Z=z), k)
    q = pq.q
    return {
        "schema": "pq",
        "p_re": pq.p.real,
        "p_im": pq.p.imag,
        "inv_2q_re": pq.inv_2q.real,
        "inv_2q_im": pq.inv_2q.imag,
        "q_re": q.real,
        "q_im": q.imag,
    }


def build_grid(
    figure=None, field=None, k=1.0, a=1.0, n_x=None, n_y=None, x_range=None, y_range=None, threads=1
):
    """Sample either a figure preset or a library field kind onto a grid."""
    if (figure is None) == (field is None):
        raise DomainError("choose exactly one of figure or field")
    if figure is not None:
        return figure_grid(figure, k=k, n_x=n_x, n_y=n_y, threads=threads)
    try:
        kind = FieldKind(field)
    except ValueError:
        raise DomainError(f"unknown field kind {field!r}") from None
    default_x, default_y = DEFAULT_FIELD_RANGES[kind]
    x_lo, x_hi = x_range or default_x
    y_lo, y_hi = y_range or default_y
    x_axis = Axis("x", x_lo, x_hi, DEFAULT_GRID_SIZE if n_x is None else n_x)
    y_axis = Axis("y", y_lo, y_hi, DEFAULT_GRID_SIZE if n_y is None else n_y)
    return field_grid(kind, BeamSpec(a=a, k=k), x_axis, y_axis, threads=threads)


def grid_payload(grid, fmt, out=None, n_bytes=None):
    return {
        "schema": "grid",
        "generator": grid.generator,
        "format": fmt,
        "out": None if out is None else str(out),
        "nx": grid.x_axis.n,
        "ny": grid.y_axis.n,
        "x_lo": grid.x_axis.lo,
        "x_hi": grid.x_axis.hi,
        "y_lo": grid.y_axis.lo,
        "y_hi": grid.y_axis.hi,
        "masked": grid.masked_count,
        "bytes": n_bytes,
    }
