import math

import numpy as np
import pytest

from utils.analysis import admissible_theta_window
from utils.core_field import BeamSpec, Branch, SphericalPoint, eval_branch, eval_envelope_exponent
from utils.errors import BranchCrossingError, DomainError
from utils.verification import (
    angular_identity,
    convergence_order,
    helmholtz_residual,
    laplacian_spherical_fd,
    pde_envelope_residual,
    radial_identity,
)

WINDOW = admissible_theta_window()


def test_example_point_residual(unit_beam):
    report = helmholtz_residual(unit_beam, SphericalPoint(0.5, 1.0471975511965976), h=1e-3)
    assert report.branch is Branch.COS
    assert report.relative_magnitude <= 1e-4


def _sweep_point(rng, branch):
    k = rng.uniform(0.5, 3.0)
    theta = rng.uniform(WINDOW.theta0, WINDOW.theta1)
    if branch is Branch.COS:
        kr = rng.uniform(0.2, 0.7)
    else:
        kr = rng.uniform(0.9, 20.0)
        while abs(math.sin(kr)) < 0.3:
            kr = rng.uniform(0.9, 20.0)
    return BeamSpec(a=rng.uniform(0.5, 2.0), k=k), SphericalPoint(kr / k, theta, rng.uniform(0, 2 * np.pi))


@pytest.mark.parametrize("branch", [Branch.COS, Branch.SIN])
def test_closed_form_solves_helmholtz(rng, branch):
    for _ in range(100):
        beam, pt = _sweep_point(rng, branch)
        coarse = helmholtz_residual(beam, pt, h=1e-3)
        assert coarse.branch is branch
        assert coarse.relative_magnitude <= 1e-4
        if coarse.relative_magnitude > 1e-6:
            fine = helmholtz_residual(beam, pt, h=5e-4)
            assert fine.relative_magnitude / coarse.relative_magnitude <= 0.3


def test_corrupted_field_fails(unit_beam):
    pt = SphericalPoint(0.5, 1.0471975511965976)
    report = helmholtz_residual(unit_beam, pt, field=lambda p: complex(p.R**2))
    assert report.relative_magnitude > 1.0


def test_stencil_across_branch_switch_is_rejected(unit_beam):
    with pytest.raises(BranchCrossingError):
        helmholtz_residual(unit_beam, SphericalPoint(math.pi / 4, 1.0), h=1e-3)


@pytest.mark.parametrize("pt", [SphericalPoint(5e-4, 1.0), SphericalPoint(1.0, 5e-4)])
def test_stencil_leaving_domain_is_rejected(unit_beam, pt):
    with pytest.raises(DomainError):
        helmholtz_residual(unit_beam, pt, h=1e-3)


def test_laplacian_is_linear(rng):
    beam = BeamSpec(a=1.0, k=1.0)
    for _ in range(500):
        pt = SphericalPoint(rng.uniform(0.5, 5.0), rng.uniform(0.3, 2.8), rng.uniform(0, 2 * np.pi))
        alpha, beta = rng.uniform(-1, 1, size=2) + 1j * rng.uniform(-1, 1, size=2)

        def f(p):
            return eval_branch(beam, p, Branch.COS)

        def g(p):
            return eval_branch(beam, p, Branch.SIN)

        combined = laplacian_spherical_fd(lambda p: alpha * f(p) + beta * g(p), pt, 1e-3)
        separate = alpha * laplacian_spherical_fd(f, pt, 1e-3) + beta * laplacian_spherical_fd(g, pt, 1e-3)
        # second differences at h = 1e-3 round to about eps/h^2 of the stencil values
        assert combined == pytest.approx(separate, rel=1e-8, abs=1e-8)


def test_laplacian_of_radial_square():
    # Laplacian of R^2 is 6 everywhere
    value = laplacian_spherical_fd(lambda p: complex(p.R**2), SphericalPoint(2.0, 1.0, 0.5), 1e-3)
    assert value == pytest.approx(6.0, rel=1e-6)


@pytest.mark.parametrize(
    "branch,pt",
    [
        (Branch.COS, SphericalPoint(0.6, 1.0)),
        (Branch.COS, SphericalPoint(0.7, 2.2)),
        (Branch.SIN, SphericalPoint(2.0, 2.0)),
        (Branch.SIN, SphericalPoint(5.0, 0.9)),
    ],
)
def test_envelope_pde_residual_small(unit_beam, branch, pt):
    report = pde_envelope_residual(unit_beam, pt, branch, h=1e-3)
    assert report.relative_magnitude <= 1e-4


def test_envelope_pde_detects_wrong_exponent(unit_beam):
    pt = SphericalPoint(0.6, 1.0)

    def wrong(p):
        return eval_envelope_exponent(unit_beam, p, Branch.COS) + p.R**2

    report = pde_envelope_residual(unit_beam, pt, Branch.COS, exponent=wrong)
    assert report.relative_magnitude > 1e-2


def test_envelope_pde_refuses_the_vortex_line(unit_beam):
    with pytest.raises(DomainError):
        pde_envelope_residual(unit_beam, SphericalPoint(0.6, math.pi / 2 + 5e-3), Branch.COS, h=1e-3)


def test_angular_identity_on_grid():
    for theta in np.linspace(0.05, np.pi - 0.05, 1000):
        assert angular_identity(theta) <= 1e-12


@pytest.mark.parametrize("k", [0.5, 1.0, 3.0])
@pytest.mark.parametrize("branch", [Branch.COS, Branch.SIN])
def test_radial_identity_on_grid(k, branch):
    for R in np.geomspace(0.5, 50.0, 1000):
        g = math.cos(k * R) / R if branch is Branch.COS else math.sin(k * R) / R
        assert radial_identity(R, k, branch) <= 1e-12 * (1 + k * k * abs(g))


def test_identities_reject_poles():
    with pytest.raises(DomainError):
        angular_identity(0.0)
    with pytest.raises(DomainError):
        radial_identity(0.0, 1.0, Branch.COS)


def test_convergence_order_is_two(unit_beam):
    report = convergence_order(unit_beam, SphericalPoint(10.0, 1.0), h0=1e-3, levels=3)
    assert not report.precision_limited
    assert report.estimated_order == pytest.approx(2.0, abs=0.1)
    assert report.h_values == [1e-3, 5e-4, 2.5e-4]


def test_convergence_needs_three_levels(unit_beam):
    with pytest.raises(DomainError):
        convergence_order(unit_beam, SphericalPoint(10.0, 1.0), levels=2)


def test_laplacian_of_spherical_wave():
    def wave(p):
        return complex(math.sin(p.R) / p.R)

    pt = SphericalPoint(2.0, math.pi / 3)
    assert abs(laplacian_spherical_fd(wave, pt, 1e-3) + wave(pt)) <= 1e-6


def test_laplacian_of_a_constant():
    value = laplacian_spherical_fd(lambda p: 2.5 - 1j, SphericalPoint(1.5, 1.0, 0.3), 1e-3)
    assert abs(value) <= 1e-9


def test_zero_beam_has_zero_residual():
    beam = BeamSpec(a=0.0, k=1.0)
    for pt in (SphericalPoint(0.5, math.pi / 3), SphericalPoint(1.0, math.pi / 3)):
        assert helmholtz_residual(beam, pt, h=1e-3).residual == 0


def test_sin_branch_example_point(unit_beam):
    report = helmholtz_residual(unit_beam, SphericalPoint(1.0, math.pi / 3), h=1e-3)
    assert report.branch is Branch.SIN
    assert report.relative_magnitude <= 1e-5


@pytest.mark.parametrize(
    "branch,pt",
    [(Branch.COS, SphericalPoint(0.5, math.pi / 3)), (Branch.SIN, SphericalPoint(1.2, math.pi / 3))],
)
def test_envelope_pde_at_fine_step(unit_beam, branch, pt):
    report = pde_envelope_residual(unit_beam, pt, branch, h=1e-4)
    assert abs(report.residual) <= 1e-4


@pytest.mark.parametrize("R", [0.6, 2.0])
def test_convergence_order_example_points(unit_beam, R):
    report = convergence_order(unit_beam, SphericalPoint(R, math.pi / 3), h0=1e-2, levels=3)
    assert not report.precision_limited
    assert 1.8 <= report.estimated_order <= 2.2


def test_convergence_of_a_zero_field_is_precision_limited(unit_beam):
    report = convergence_order(unit_beam, SphericalPoint(2.0, math.pi / 3), field=lambda p: 0j)
    assert report.precision_limited
    assert report.estimated_order is None
    assert report.residuals == [0.0, 0.0, 0.0]
