"""
Finite-difference checks that the closed form solves the Helmholtz equation
and the envelope PDE, plus the hand-derived identities the solution rests on.

All stencils are three-point central differences per coordinate. The angular
step is ``h``; the radial step is ``h * max(1, R)``.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from utils.core_field import (
    Branch,
    SphericalPoint,
    eval_branch,
    eval_envelope_exponent,
    select_branch,
)
from utils.errors import BranchCrossingError, DomainError

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-3
RESIDUAL_FLOOR = 1e-300
# coarse residuals below PRECISION_FLOOR * k^2 |A| carry no order information
PRECISION_FLOOR = 1e-14


@dataclass(frozen=True)
class ResidualReport:
    residual: complex
    relative_magnitude: float
    h: float
    point: SphericalPoint
    branch: Optional[Branch] = None


@dataclass(frozen=True)
class ConvergenceReport:
    h_values: list
    residuals: list
    estimated_order: Optional[float]
    precision_limited: bool = False


def radial_step(h, R):
    return h * max(1.0, R)


def _check_stencil(pt, h_R, h):
    if not h > 0:
        raise DomainError(f"step h must be positive, got {h}")
    if pt.R - h_R <= 0:
        raise DomainError(f"radial stencil leaves R > 0: R={pt.R}, step={h_R}")
    if not (0.0 < pt.theta - h and pt.theta + h < np.pi):
        raise DomainError(f"angular stencil leaves (0, pi): theta={pt.theta}, step={h}")


def _central(f_plus, f_mid, f_minus, step):
    first = (f_plus - f_minus) / (2.0 * step)
    second = (f_plus - 2.0 * f_mid + f_minus) / (step * step)
    return first, second


def laplacian_spherical_fd(field, pt, h):
    """Second-order FD Laplacian of ``field`` (SphericalPoint -> complex) at ``pt``."""
    h_R = radial_step(h, pt.R)
    _check_stencil(pt, h_R, h)
    R, theta, phi = pt.R, pt.theta, pt.phi

    f0 = complex(field(pt))
    dR, d2R = _central(
        complex(field(SphericalPoint(R + h_R, theta, phi))),
        f0,
        complex(field(SphericalPoint(R - h_R, theta, phi))),
        h_R,
    )
    dT, d2T = _central(
        complex(field(SphericalPoint(R, theta + h, phi))),
        f0,
        complex(field(SphericalPoint(R, theta - h, phi))),
        h,
    )
    _, d2P = _central(
        complex(field(SphericalPoint(R, theta, phi + h))),
        f0,
        complex(field(SphericalPoint(R, theta, phi - h))),
        h,
    )
    sin_theta = math.sin(theta)
    cot_theta = math.cos(theta) / sin_theta
    return (
        d2R
        + 2.0 / R * dR
        + d2P / (R * R * sin_theta * sin_theta)
        + d2T / (R * R)
        + cot_theta * dT / (R * R)
    )


def helmholtz_residual(beam, pt, h=DEFAULT_STEP, field=None):
    """FD residual of Delta A + k^2 A on the branch selected at ``pt``.

    ``field`` replaces the closed form (used to feed deliberately wrong fields).
    """
    branch = select_branch(beam.k, pt.R)
    h_R = radial_step(h, pt.R)
    if pt.R - h_R > 0:
        outer = select_branch(beam.k, pt.R + h_R)
        inner = select_branch(beam.k, pt.R - h_R)
        if inner is not branch or outer is not branch:
            raise BranchCrossingError(
                f"stencil [{pt.R - h_R}, {pt.R + h_R}] crosses kR = pi/4 for k={beam.k}"
            )
    if field is None:
        field = lambda p: eval_branch(beam, p, branch)  # noqa: E731

    A = complex(field(pt))
    residual = laplacian_spherical_fd(field, pt, h) + beam.k**2 * A
    relative = abs(residual) / (beam.k**2 * abs(A) + RESIDUAL_FLOOR)
    return ResidualReport(
        residual=residual, relative_magnitude=float(relative), h=h, point=pt, branch=branch
    )


def pde_envelope_residual(beam, pt, branch, h=DEFAULT_STEP, exponent=None):
    """FD residual of the envelope PDE

        f_RR + i f_R^2 + (2/R) f_R + (f_tt + i f_t^2 + cot(t) f_t)/R^2 - i k^2

    with f from eval_envelope_exponent (or the injected ``exponent``).
    relative_magnitude is |residual| / k^2.
    """
    branch = Branch(branch)
    h_R = radial_step(h, pt.R)
    _check_stencil(pt, h_R, h)
    margin = 10.0 * h
    if abs(pt.theta - np.pi / 2) <= margin:
        raise DomainError(f"theta={pt.theta} is within {margin} of the vortex line")
    kr = beam.k * pt.R
    trig = math.cos(kr) if branch is Branch.COS else math.sin(kr)
    if abs(trig) <= 10.0 * beam.k * h_R:
        raise DomainError(f"kR={kr} is too close to a zero of {branch.value}(kR)")

    if exponent is None:
        exponent = lambda p: eval_envelope_exponent(beam, p, branch)  # noqa: E731

    R, theta = pt.R, pt.theta
    f0 = complex(exponent(pt))
    fR, fRR = _central(
        complex(exponent(SphericalPoint(R + h_R, theta))), f0,
        complex(exponent(SphericalPoint(R - h_R, theta))), h_R,
    )
    fT, fTT = _central(
        complex(exponent(SphericalPoint(R, theta + h))), f0,
        complex(exponent(SphericalPoint(R, theta - h))), h,
    )
    cot_theta = math.cos(theta) / math.sin(theta)
    residual = (
        fRR
        + 1j * fR * fR
        + 2.0 / R * fR
        + (fTT + 1j * fT * fT + cot_theta * fT) / (R * R)
        - 1j * beam.k**2
    )
    relative = abs(residual) / (beam.k**2 + RESIDUAL_FLOOR)
    return ResidualReport(
        residual=complex(residual), relative_magnitude=float(relative), h=h, point=pt, branch=branch
    )


def angular_identity(theta):
    """|d(csc)/dtheta + cot*csc|, each term from its analytic form."""
    if not 0.0 < theta < np.pi:
        raise DomainError(f"csc(theta) has a pole at theta={theta}")
    s, c = math.sin(theta), math.cos(theta)
    derivative = -c / (s * s)
    transport = (c / s) * (1.0 / s)
    return abs(derivative + transport)


def radial_identity(R, k, branch):
    """|g'' + (2/R) g' + k^2 g| for g = cos(kR)/R or sin(kR)/R, derivatives written out term by term."""
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    branch = Branch(branch)
    s, c = math.sin(k * R), math.cos(k * R)
    if branch is Branch.COS:
        g = c / R
        g1 = (-k * s * R - c) / R**2
        g2 = -(k**2) * c / R + 2 * k * s / R**2 + 2 * c / R**3
    else:
        g = s / R
        g1 = (k * c * R - s) / R**2
        g2 = -(k**2) * s / R - 2 * k * c / R**2 + 2 * s / R**3
    return abs(g2 + 2.0 / R * g1 + k**2 * g)


def convergence_order(beam, pt, h0=1e-2, levels=3, field=None):
    """Estimate the FD order from Helmholtz residuals at h0, h0/2, h0/4, ..."""
    if levels < 3:
        raise DomainError(f"levels must be at least 3, got {levels}")
    h_values = [h0 / 2**j for j in range(levels)]
    reports = [helmholtz_residual(beam, pt, h, field=field) for h in h_values]
    residuals = [abs(r.residual) for r in reports]

    A = field(pt) if field is not None else eval_branch(beam, pt, reports[0].branch)
    floor = PRECISION_FLOOR * beam.k**2 * abs(A)
    if residuals[0] <= floor or min(residuals) == 0.0:
        logger.debug("residual %g at h=%g is below the precision floor", residuals[0], h0)
        return ConvergenceReport(h_values, residuals, None, precision_limited=True)

    orders = [math.log2(a / b) for a, b in zip(residuals[:-1], residuals[1:])]
    return ConvergenceReport(h_values, residuals, float(np.mean(orders)))
