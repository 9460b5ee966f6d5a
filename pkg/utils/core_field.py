"""
Closed-form evaluation of the non-paraxial beam

    A = (k*a) * ln(tan(theta/2)) * cos(kR)/(kR)      kR <= pi/4  (Cos branch)
    A = (k*a) * ln(tan(theta/2)) * i*sin(kR)/(kR)    kR >  pi/4  (Sin branch)

together with its envelope exponent f (A = a*exp(i*f)), the spherical <-> Cartesian
transforms, and the classical Gaussian-beam (w, r, zeta) -> (p, 1/(2q)) mapping.

Complex quantities are plain Python ``complex`` values; array variants return
``numpy`` complex arrays.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from utils.errors import DomainError, SingularEnvelopeError

BRANCH_SWITCH = np.pi / 4
SINGULAR_MARGIN = 1e-8
# polar_factor switches formula beyond this |cos(theta)|
AXIS_COS = 0.9
# r_curv sentinel for a flat wavefront; the curvature term is dropped, not divided out.
FLAT_WAVEFRONT = math.inf


class Branch(str, Enum):
    COS = "cos"
    SIN = "sin"


def _require_finite(name, value):
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")


def _require_positive(name, value):
    _require_finite(name, value)
    if value <= 0:
        raise DomainError(f"{name} must be positive, got {value}")


def _require_open_theta(theta):
    if not 0.0 < theta < np.pi:
        raise DomainError(f"theta must lie strictly inside (0, pi), got {theta}")


@dataclass(frozen=True)
class BeamSpec:
    """Amplitude constant ``a`` and wavenumber ``k`` of one beam."""

    a: float
    k: float

    def __post_init__(self):
        _require_finite("a", self.a)
        _require_positive("k", self.k)


@dataclass(frozen=True)
class SphericalPoint:
    R: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        _require_positive("R", self.R)
        _require_finite("theta", self.theta)
        _require_finite("phi", self.phi)
        if not 0.0 <= self.theta <= np.pi:
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}")
        phi = self.phi % (2 * np.pi)
        if phi >= 2 * np.pi:
            phi = 0.0
        object.__setattr__(self, "phi", float(phi))


@dataclass(frozen=True)
class CartesianPoint:
    X: float
    Y: float
    Z: float

    def __post_init__(self):
        for name in ("X", "Y", "Z"):
            _require_finite(name, getattr(self, name))


@dataclass(frozen=True)
class GaussianBeamParams:
    """Waist ``w``, wavefront curvature radius ``r_curv``, Gouy phase ``zeta`` at axial ``Z``."""

    w: float
    r_curv: float
    zeta: float
    Z: float

    def __post_init__(self):
        _require_positive("w", self.w)
        if self.r_curv == 0 or math.isnan(self.r_curv):
            raise DomainError(f"r_curv must be non-zero, got {self.r_curv}")
        _require_finite("zeta", self.zeta)
        _require_finite("Z", self.Z)


@dataclass(frozen=True)
class PQPair:
    p: complex
    inv_2q: complex

    @property
    def q(self):
        return 1.0 / (2.0 * self.inv_2q)


# --- Coordinates ---


def spherical_from_cartesian(pt):
    """Convert a Cartesian point to (R, theta, phi); theta may land on a pole."""
    R = math.hypot(pt.X, pt.Y, pt.Z)
    if R == 0.0:
        raise DomainError("the origin has no spherical representation")
    cos_theta = min(1.0, max(-1.0, pt.Z / R))
    theta = math.acos(cos_theta)
    phi = math.atan2(pt.Y, pt.X)
    return SphericalPoint(R=R, theta=theta, phi=phi)


def cartesian_from_spherical(pt):
    sin_theta = math.sin(pt.theta)
    return CartesianPoint(
        X=pt.R * sin_theta * math.cos(pt.phi),
        Y=pt.R * sin_theta * math.sin(pt.phi),
        Z=pt.R * math.cos(pt.theta),
    )


# --- Field ---


def polar_factor(theta):
    """ln(tan(theta/2)) for scalars or arrays.

    Away from the axis it is computed as -artanh(cos(theta)), which keeps full
    relative accuracy next to theta = pi/2 where the factor (and the field)
    goes through zero. Within |cos(theta)| > AXIS_COS of the axis cos(theta)
    rounds towards +-1, so the log of tan(theta/2) is taken instead, reflected
    onto the nearer pole.
    """
    theta = np.asarray(theta, dtype=float)
    c = np.cos(theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        near_pole = np.log(np.tan(np.minimum(theta, np.pi - theta) / 2))
        equatorial = -np.arctanh(c)
    axial = np.where(theta <= np.pi / 2, near_pole, -near_pole)
    result = np.where(np.abs(c) > AXIS_COS, axial, equatorial)
    return result if result.ndim else result[()]


def select_branch(k, R):
    _require_positive("k", k)
    _require_positive("R", R)
    # tie at kR == pi/4 resolves to Cos
    return Branch.COS if k * R <= BRANCH_SWITCH else Branch.SIN


def eval_branch(beam, pt, branch):
    """Evaluate one branch of the closed form at ``pt`` without checking its regime."""
    _require_open_theta(pt.theta)
    branch = Branch(branch)
    kr = beam.k * pt.R
    angular = beam.k * beam.a * polar_factor(pt.theta)
    if branch is Branch.COS:
        value = complex(angular * np.cos(kr) / kr, 0.0)
    else:
        value = complex(0.0, angular * np.sin(kr) / kr)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError(f"field is not finite at R={pt.R}, theta={pt.theta}")
    return value


def eval_field(beam, pt):
    """Evaluate the piecewise field; returns ``(value, branch)``."""
    branch = select_branch(beam.k, pt.R)
    return eval_branch(beam, pt, branch), branch


def radial_factor(k, R):
    """Vectorised radial profile: cos(kR)/(kR) or i*sin(kR)/(kR), picked per element."""
    R = np.asarray(R, dtype=float)
    if np.any(R <= 0):
        raise DomainError("R must be positive everywhere")
    kr = k * R
    return np.where(kr <= BRANCH_SWITCH, np.cos(kr) / kr + 0j, 1j * np.sin(kr) / kr)


def eval_field_array(beam, R, theta):
    """Elementwise ``eval_field`` over broadcastable arrays of R and theta."""
    theta = np.asarray(theta, dtype=float)
    if np.any((theta <= 0) | (theta >= np.pi)):
        raise DomainError("theta must lie strictly inside (0, pi) everywhere")
    return beam.k * beam.a * polar_factor(theta) * radial_factor(beam.k, R)


def eval_envelope_exponent(beam, pt, branch):
    """Envelope exponent f = f1(R) + f2(theta) such that a*exp(i*f) equals the branch value.

    f1 = -i*ln(cos kR) + i*ln R                 (Cos)
    f1 = -i*ln(sin kR) + i*ln R - i*ln(i)       (Sin)
    f2 = -i*ln(ln tan(theta/2))

    Principal complex logarithms throughout.
    """
    _require_open_theta(pt.theta)
    branch = Branch(branch)
    h = polar_factor(pt.theta)
    if abs(pt.theta - np.pi / 2) < SINGULAR_MARGIN or h == 0.0:
        raise SingularEnvelopeError(f"envelope exponent is singular at theta={pt.theta} (vortex line)")

    kr = beam.k * pt.R
    trig = np.cos(kr) if branch is Branch.COS else np.sin(kr)
    if abs(trig) < SINGULAR_MARGIN:
        raise SingularEnvelopeError(
            f"envelope exponent is singular at kR={kr}: {branch.value}(kR) vanishes"
        )

    f1 = -1j * np.log(complex(trig)) + 1j * np.log(pt.R)
    if branch is Branch.SIN:
        f1 = f1 - 1j * np.log(1j)
    f2 = -1j * np.log(complex(h))
    return complex(f1 + f2)


# --- Gaussian beam parameters ---


def beam_parameters_to_pq(params, k):
    """Map (w, r, zeta, Z) onto the exponent form exp[i(p + (X^2+Y^2)/(2q))]."""
    _require_positive("k", k)
    if math.isinf(params.r_curv):
        curvature = 0.0
    else:
        curvature = k / (2.0 * params.r_curv)
    p = complex(params.zeta - k * params.Z, math.log(params.w))
    inv_2q = complex(-curvature, 1.0 / params.w**2)
    return PQPair(p=p, inv_2q=inv_2q)


def classical_gaussian_field(params, k, a, X, Y):
    """a*(1/w)*exp[-rho^2/w^2 - ikZ - ik*rho^2/(2r) + i*zeta], waist normalised to w0 = 1."""
    rho2 = X * X + Y * Y
    curvature = 0.0 if math.isinf(params.r_curv) else k * rho2 / (2.0 * params.r_curv)
    exponent = complex(-rho2 / params.w**2, -k * params.Z - curvature + params.zeta)
    return a / params.w * complex(np.exp(exponent))


def pq_gaussian_field(pq, a, X, Y):
    rho2 = X * X + Y * Y
    return a * complex(np.exp(1j * (pq.p + rho2 * pq.inv_2q)))
