"""
Analysis of the solution: admissible theta-window, paraxial Cartesian limit,
vortex line at theta = pi/2, and shell-energy quadrature.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import bisect
from scipy.special import roots_legendre

from utils.core_field import (
    BRANCH_SWITCH,
    SphericalPoint,
    eval_field,
    polar_factor,
    radial_factor,
)
from utils.errors import DomainError, SingularityError

logger = logging.getLogger(__name__)

GL_POINTS = 16
REFINE_TOL = 1e-6
MAX_PANELS = 4096
REL_FLOOR = 1e-300
NON_PARAXIAL_REL_ERROR = 0.05
VORTEX_ZERO_TOL = 1e-10
# |ln tan(theta/2)| cut-off for the "whole sphere"; sech^2(36) ~ 2e-31
FULL_SPHERE_CUTOFF = 36.0


@dataclass(frozen=True)
class ThetaWindow:
    theta0: float
    theta1: float


@dataclass(frozen=True)
class ParaxialComparison:
    exact: float
    approx: float
    abs_error: float
    rel_error: float
    fresnel_parameter: float
    non_paraxial: bool


@dataclass(frozen=True)
class EnergyReport:
    R_lo: float
    R_hi: float
    theta_lo: float
    theta_hi: float
    value: float
    n_radial: int
    n_angular: int
    magnitude: bool = False


# --- Theta window ---


def admissible_theta_window():
    return ThetaWindow(theta0=2.0 * math.atan(1.0 / math.e), theta1=2.0 * math.atan(math.e))


def amplitude_within_bound(theta):
    """True iff |ln tan(theta/2)| <= 1, i.e. theta in [theta0, theta1] (endpoints included)."""
    if not 0.0 < theta < np.pi:
        raise DomainError(f"ln tan(theta/2) has a pole at theta={theta}")
    window = admissible_theta_window()
    return window.theta0 <= theta <= window.theta1


def full_theta_range():
    """theta bounds used for whole-sphere integrals; the dropped polar caps are negligible."""
    lo = 2.0 * math.atan(math.exp(-FULL_SPHERE_CUTOFF))
    return lo, np.pi - lo


# --- Paraxial limit ---


def _transverse_radius(X, Y, Z):
    r = math.hypot(X, Y)
    if r == 0.0:
        raise DomainError("on-axis point: ln of the transverse radius diverges")
    if not Z > 0:
        raise DomainError(f"Z must be positive, got {Z}")
    return r


def exact_real_part_cartesian(beam, X, Y, Z):
    """(k*a)/2 * ln((R - Z)/(R + Z)) * cos(kR)/(kR), R = sqrt(r^2 + Z^2).

    The log term is evaluated as ln(r/(R + Z)), which is the same quantity
    without the R - Z cancellation when r << Z.
    """
    r = _transverse_radius(X, Y, Z)
    R = math.hypot(r, Z)
    kr = beam.k * R
    return beam.k * beam.a * math.log(r / (R + Z)) * math.cos(kr) / kr


def paraxial_field(beam, X, Y, Z):
    """(k*a) * ln(r/(2Z)) * cos(kZ)/(kZ)."""
    r = _transverse_radius(X, Y, Z)
    kz = beam.k * Z
    return beam.k * beam.a * math.log(r / (2.0 * Z)) * math.cos(kz) / kz


def paraxial_error(beam, X, Y, Z):
    exact = exact_real_part_cartesian(beam, X, Y, Z)
    approx = paraxial_field(beam, X, Y, Z)
    abs_error = abs(exact - approx)
    rel_error = abs_error / max(abs(exact), REL_FLOOR)
    r = math.hypot(X, Y)
    return ParaxialComparison(
        exact=exact,
        approx=approx,
        abs_error=abs_error,
        rel_error=rel_error,
        fresnel_parameter=beam.k * r * r / (2.0 * Z),
        non_paraxial=rel_error > NON_PARAXIAL_REL_ERROR,
    )


# --- Vortex ---


def locate_vortex(beam, R):
    """Bisect ln tan(theta/2) over the admissible window; the zero is the vortex line."""
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    window = admissible_theta_window()
    theta_star = bisect(polar_factor, window.theta0, window.theta1, xtol=1e-13)
    amplitude, branch = eval_field(beam, SphericalPoint(R, theta_star))
    # |A| is measured against the size of k*a times the radial factor at R
    scale = abs(beam.k * beam.a * complex(radial_factor(beam.k, R)))
    if abs(amplitude) > VORTEX_ZERO_TOL * max(scale, 1.0):
        raise SingularityError(
            f"field does not vanish at theta={theta_star}: |A|={abs(amplitude):g}"
        )
    logger.debug("vortex at theta=%r, |A|=%g (%s branch)", theta_star, abs(amplitude), branch.value)
    return float(theta_star)


def vortex_phase_jump(beam, R, delta=1e-3):
    """Phase of A just above the vortex line minus the phase just below, wrapped to (-pi, pi]."""
    if not 0.0 < delta < np.pi / 2:
        raise DomainError(f"delta must lie in (0, pi/2), got {delta}")
    below, _ = eval_field(beam, SphericalPoint(R, np.pi / 2 - delta))
    above, _ = eval_field(beam, SphericalPoint(R, np.pi / 2 + delta))
    jump = np.angle(above) - np.angle(below)
    return float(np.pi - (np.pi - jump) % (2 * np.pi))


# --- Shell energy ---


@lru_cache(maxsize=None)
def _gauss_legendre(n):
    return roots_legendre(n)


def _composite_rule(breakpoints, panels_per_segment):
    """Nodes and weights of GL_POINTS-point panels, ``panels_per_segment`` per segment."""
    x, w = _gauss_legendre(GL_POINTS)
    nodes, weights = [], []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        edges = np.linspace(a, b, panels_per_segment + 1)
        mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
        half = 0.5 * (edges[1:] - edges[:-1])[:, None]
        nodes.append((mid + half * x).ravel())
        weights.append((half * w).ravel())
    return np.concatenate(nodes), np.concatenate(weights)


def _radial_breakpoints(k, R_lo, R_hi):
    # the branch switch and every zero of the radial factor inside the interval
    points = [R_lo, R_hi]
    switch = BRANCH_SWITCH / k
    if R_lo < switch < R_hi:
        points.append(switch)
    first = max(1, math.ceil(k * max(R_lo, switch) / np.pi))
    n = first
    while n * np.pi / k < R_hi:
        if n * np.pi / k > R_lo:
            points.append(n * np.pi / k)
        n += 1
    return np.array(sorted(set(points)))


def _angular_breakpoints(t_lo, t_hi):
    points = [t_lo, t_hi]
    if t_lo < 0.0 < t_hi:
        points.append(0.0)
    return np.array(sorted(points))


def _shell_sum(beam, radial_rule, angular_rule, power):
    R, w_R = radial_rule
    t, w_t = angular_rule
    # sin(theta) d(theta) = sech^2(t) dt for t = ln tan(theta/2)
    sech2 = 1.0 / np.cosh(t) ** 2
    amplitude = np.abs(beam.k * beam.a * t[None, :] * radial_factor(beam.k, R)[:, None])
    integrand = amplitude**power * (R * R)[:, None] * sech2[None, :]
    return float(2.0 * np.pi * np.sum(integrand * np.outer(w_R, w_t)))


def shell_energy(
    beam, R_lo, R_hi, theta_lo, theta_hi, n_radial=64, n_angular=16, magnitude=False
):
    """Integrate |A|^2 (or |A| with ``magnitude``) * R^2 sin(theta) * 2pi over a spherical shell sector.

    Composite Gauss-Legendre panels never straddle kR = pi/4 or a zero of the
    radial factor. Panel counts double until the result changes by less than
    REFINE_TOL relative; the reported sizes are the panel counts actually used.
    """
    if not 0.0 < R_lo < R_hi:
        raise DomainError(f"need 0 < R_lo < R_hi, got [{R_lo}, {R_hi}]")
    if not 0.0 < theta_lo < theta_hi < np.pi:
        raise DomainError(f"need 0 < theta_lo < theta_hi < pi, got [{theta_lo}, {theta_hi}]")
    if n_radial < 8 or n_angular < 8:
        raise DomainError(f"quadrature sizes must be at least 8, got {n_radial}, {n_angular}")

    power = 1 if magnitude else 2
    radial_points = _radial_breakpoints(beam.k, R_lo, R_hi)
    angular_points = _angular_breakpoints(float(polar_factor(theta_lo)), float(polar_factor(theta_hi)))
    per_radial = max(1, math.ceil(n_radial / (len(radial_points) - 1)))
    per_angular = max(1, math.ceil(n_angular / (len(angular_points) - 1)))

    def estimate(pr, pa):
        return _shell_sum(
            beam,
            _composite_rule(radial_points, pr),
            _composite_rule(angular_points, pa),
            power,
        )

    value = estimate(per_radial, per_angular)
    while True:
        refined = estimate(2 * per_radial, 2 * per_angular)
        per_radial, per_angular = 2 * per_radial, 2 * per_angular
        if refined == 0.0 or abs(refined - value) <= REFINE_TOL * abs(refined):
            value = refined
            break
        value = refined
        if per_radial * (len(radial_points) - 1) >= MAX_PANELS:
            logger.warning("shell energy refinement capped at %d radial panels", MAX_PANELS)
            break
    logger.debug("shell energy %g with %d x %d panels", value, per_radial, per_angular)

    return EnergyReport(
        R_lo=R_lo,
        R_hi=R_hi,
        theta_lo=theta_lo,
        theta_hi=theta_hi,
        value=value,
        n_radial=per_radial * (len(radial_points) - 1),
        n_angular=per_angular * (len(angular_points) - 1),
        magnitude=magnitude,
    )
