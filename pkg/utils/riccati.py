"""
Complex Riccati equations behind the separated envelope f = f1(R) + f2(theta).

Angular:  y'(theta) = -i*y^2 - cot(theta)*y + C,          y = df2/dtheta
Radial:   y1'(R)    = -i*y1^2 - (2/R)*y1 - (C/R^2 - i*k^2), y1 = df1/dR

Closed forms exist for C = 0 only; for other C the right-hand sides are still
exposed so they can be integrated numerically. The integrator wraps scipy's
embedded Runge-Kutta 4(5) stepper with a pole guard, since Riccati solutions
blow up in finite time.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import RK45
from scipy.integrate import OdeSolution as DenseOutput

from utils.core_field import SINGULAR_MARGIN, Branch, polar_factor
from utils.errors import (
    DomainError,
    PoleEncounteredError,
    SingularityError,
    StiffnessError,
)

logger = logging.getLogger(__name__)

POLE_GUARD = 1e8
# a cross-check passes when max_rel_error <= ACCEPT_FACTOR * tol
ACCEPT_FACTOR = 100.0
# RK45 spends one evaluation at t0 and one picking the first step, then six per attempt
_EVALS_PER_ATTEMPT = 6
_STARTUP_EVALS = 2


class RiccatiKind(str, Enum):
    ANGULAR = "angular"
    RADIAL = "radial"


@dataclass(frozen=True)
class RiccatiProblem:
    kind: RiccatiKind
    C: complex = 0j
    C0: complex = 0j
    k: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", RiccatiKind(self.kind))
        if self.kind is RiccatiKind.RADIAL and (self.k is None or not self.k > 0):
            raise DomainError(f"radial problem needs k > 0, got {self.k}")

    @property
    def has_closed_form(self):
        return self.C == 0

    def rhs(self):
        if self.kind is RiccatiKind.ANGULAR:
            return lambda t, y: angular_rhs(t, y, self.C)
        return lambda t, y: radial_rhs(t, y, self.C, self.k)


@dataclass
class OdeSolution:
    """Nodes of an integrated trajectory plus optional dense output."""

    t: np.ndarray
    y: np.ndarray
    meta: dict = field(default_factory=dict)
    dense: Optional[DenseOutput] = None

    @property
    def final(self):
        return complex(self.y[-1])

    def __call__(self, t):
        if self.dense is not None:
            return complex(self.dense(t)[0])
        # fixed-step runs carry no interpolant; fall back to linear interpolation
        order = np.argsort(self.t)
        ts, ys = self.t[order], self.y[order]
        return complex(np.interp(t, ts, ys.real), np.interp(t, ts, ys.imag))


@dataclass(frozen=True)
class CrosscheckReport:
    max_abs_error: float
    max_rel_error: float
    interval: tuple
    n_samples: int
    passed: bool
    tolerance: float
    accept: float


# --- Right-hand sides ---


def angular_rhs(theta, y, C=0j):
    if not 0.0 < theta < np.pi:
        raise DomainError(f"cot(theta) is undefined at theta={theta}")
    cot = math.cos(theta) / math.sin(theta)
    return -1j * y * y - cot * y + C


def angular_u_rhs(theta, u, C=0j):
    """The substituted form u' = -(i*csc(theta))*u^2 + C*sin(theta), y = csc(theta)*u."""
    if not 0.0 < theta < np.pi:
        raise DomainError(f"csc(theta) is undefined at theta={theta}")
    sin_theta = math.sin(theta)
    return -1j / sin_theta * u * u + C * sin_theta


def radial_rhs(R, y, C=0j, k=1.0):
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    return -1j * y * y - (2.0 / R) * y - C / (R * R) + 1j * k * k


# --- Closed forms (C = 0) ---


def angular_closed_u(theta, C0=0j):
    """u(theta) = 1/(C0 + i*ln tan(theta/2))."""
    if not 0.0 < theta < np.pi:
        raise DomainError(f"theta must lie strictly inside (0, pi), got {theta}")
    denominator = C0 + 1j * polar_factor(theta)
    if abs(denominator) < SINGULAR_MARGIN:
        raise SingularityError(f"angular closed form has a pole at theta={theta} for C0={C0}")
    return complex(1.0 / denominator)


def angular_closed_y(theta, C0=0j):
    return angular_closed_u(theta, C0) / math.sin(theta)


def radial_closed_y1(R, k, branch):
    """y1 = u1 + i/R with u1 = k*tanh(ikR) = ik*tan(kR) (Cos) or k*coth(ikR) = -ik*cot(kR) (Sin)."""
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    branch = Branch(branch)
    kr = k * R
    if branch is Branch.COS:
        c = math.cos(kr)
        if abs(c) < SINGULAR_MARGIN:
            raise SingularityError(f"tan(kR) has a pole at kR={kr}")
        return complex(0.0, k * math.sin(kr) / c + 1.0 / R)
    s = math.sin(kr)
    if abs(s) < SINGULAR_MARGIN:
        raise SingularityError(f"cot(kR) has a pole at kR={kr}")
    return complex(0.0, -k * math.cos(kr) / s + 1.0 / R)


# --- Integration ---


def integrate_complex_ode(rhs, t0, y0, t1, tol, max_step=np.inf):
    """Adaptive RK 4(5) integration of a scalar complex ODE from t0 to t1 (either direction).

    Local error per step is held below tol*(1 + |y|). Raises PoleEncounteredError
    when |y| exceeds POLE_GUARD and StiffnessError when the step size underflows.
    """
    if t0 == t1:
        raise DomainError("integration interval is empty (t0 == t1)")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")

    def fun(t, y):
        return np.array([rhs(t, complex(y[0]))], dtype=complex)

    solver = RK45(
        fun, t0, np.array([y0], dtype=complex), t1, rtol=tol, atol=tol, max_step=max_step
    )
    ts, ys, interpolants = [float(t0)], [complex(y0)], []
    while solver.status == "running":
        message = solver.step()
        if solver.status == "failed":
            raise StiffnessError(f"step size underflow at t={solver.t}: {message}", solver.t)
        y = complex(solver.y[0])
        if not (math.isfinite(y.real) and math.isfinite(y.imag)) or abs(y) > POLE_GUARD:
            logger.warning("pole guard tripped after t=%s (|y| > %g)", ts[-1], POLE_GUARD)
            raise PoleEncounteredError(
                f"|y| exceeded {POLE_GUARD:g} past t={ts[-1]}", last_good_t=ts[-1]
            )
        ts.append(float(solver.t))
        ys.append(y)
        interpolants.append(solver.dense_output())

    n_steps = len(ts) - 1
    attempts = max(n_steps, (solver.nfev - _STARTUP_EVALS) // _EVALS_PER_ATTEMPT)
    meta = {
        "n_steps": n_steps,
        "n_rejected": attempts - n_steps,
        "n_evaluations": int(solver.nfev),
        "tol": tol,
    }
    logger.debug("integrated [%s, %s] in %d steps (%d rejected)", t0, t1, n_steps, meta["n_rejected"])
    return OdeSolution(
        t=np.array(ts), y=np.array(ys), meta=meta, dense=DenseOutput(ts, interpolants)
    )


def integrate_fixed_step(rhs, t0, y0, t1, n_steps):
    """Classical fixed-step RK4, kept for order measurements."""
    if n_steps < 1:
        raise DomainError(f"n_steps must be at least 1, got {n_steps}")
    step = (t1 - t0) / n_steps
    ts = t0 + step * np.arange(n_steps + 1)
    ts[-1] = t1
    ys = np.empty(n_steps + 1, dtype=complex)
    ys[0] = y = complex(y0)
    for n in range(n_steps):
        t = ts[n]
        k1 = rhs(t, y)
        k2 = rhs(t + step / 2, y + step / 2 * k1)
        k3 = rhs(t + step / 2, y + step / 2 * k2)
        k4 = rhs(t + step, y + step * k3)
        y = y + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[n + 1] = y
    meta = {"n_steps": n_steps, "n_rejected": 0, "n_evaluations": 4 * n_steps, "tol": None}
    return OdeSolution(t=ts, y=ys, meta=meta)


def _compare(solution, closed_form, samples, tol, accept):
    exact = np.array([closed_form(t) for t in samples])
    numeric = np.array([solution(t) for t in samples])
    abs_errors = np.abs(numeric - exact)
    rel_errors = abs_errors / np.abs(exact)
    max_rel = float(rel_errors.max())
    return CrosscheckReport(
        max_abs_error=float(abs_errors.max()),
        max_rel_error=max_rel,
        interval=(float(samples[0]), float(samples[-1])),
        n_samples=len(samples),
        passed=bool(max_rel <= accept),
        tolerance=tol,
        accept=accept,
    )


def crosscheck_angular(C0, theta_a, theta_b, tol=1e-10, n_samples=50, accept=None):
    """Integrate the u-equation (C = 0) seeded by the closed form and compare along the way."""
    C0 = complex(C0)
    if n_samples < 2:
        raise DomainError(f"n_samples must be at least 2, got {n_samples}")
    for theta in (theta_a, theta_b):
        if not 0.0 < theta < np.pi:
            raise DomainError(f"angular interval must lie inside (0, pi), got {theta}")
    if theta_a == theta_b:
        raise DomainError("angular interval is empty")

    # C0 + i*ln tan(theta/2) vanishes only for purely imaginary C0
    if abs(C0.real) < SINGULAR_MARGIN:
        pole = 2.0 * math.atan(math.exp(-C0.imag))
        lo, hi = sorted((theta_a, theta_b))
        if lo - SINGULAR_MARGIN <= pole <= hi + SINGULAR_MARGIN:
            raise DomainError(
                f"closed form has a pole at theta={pole} inside [{lo}, {hi}] for C0={C0}"
            )

    accept = ACCEPT_FACTOR * tol if accept is None else accept
    u0 = angular_closed_u(theta_a, C0)
    solution = integrate_complex_ode(lambda t, u: angular_u_rhs(t, u, 0j), theta_a, u0, theta_b, tol)
    samples = np.linspace(theta_a, theta_b, n_samples)
    return _compare(solution, lambda t: angular_closed_u(t, C0), samples, tol, accept)


def _radial_poles_inside(k, R_a, R_b, branch):
    lo, hi = k * R_a - SINGULAR_MARGIN, k * R_b + SINGULAR_MARGIN
    offset = np.pi / 2 if branch is Branch.COS else 0.0
    n = math.ceil((lo - offset) / np.pi)
    if branch is Branch.SIN:
        n = max(n, 1)
    pole = offset + n * np.pi
    return pole if pole <= hi else None


def crosscheck_radial(k, R_a, R_b, branch, tol=1e-10, n_samples=50, accept=None):
    """Integrate radial_rhs (C = 0) seeded by radial_closed_y1(R_a) and compare on [R_a, R_b]."""
    branch = Branch(branch)
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    if not 0.0 < R_a < R_b:
        raise DomainError(f"need 0 < R_a < R_b, got [{R_a}, {R_b}]")
    if n_samples < 2:
        raise DomainError(f"n_samples must be at least 2, got {n_samples}")
    pole = _radial_poles_inside(k, R_a, R_b, branch)
    if pole is not None:
        raise DomainError(
            f"{branch.value} branch closed form has a pole at kR={pole} inside [{R_a}, {R_b}]"
        )

    accept = ACCEPT_FACTOR * tol if accept is None else accept
    y0 = radial_closed_y1(R_a, k, branch)
    problem = RiccatiProblem(RiccatiKind.RADIAL, k=k)
    solution = integrate_complex_ode(problem.rhs(), R_a, y0, R_b, tol)
    samples = np.linspace(R_a, R_b, n_samples)
    return _compare(solution, lambda t: radial_closed_y1(t, k, branch), samples, tol, accept)
