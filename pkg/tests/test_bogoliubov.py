import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bogoliubov2d.asymptotics import c_of_d, i_less_exact
from bogoliubov2d.bogoliubov import (
    MinimizerState,
    ThermoPoint,
    dispersion_G,
    dispersion_tg,
    entropy_density,
    error_diagnostics,
    fcan_energy,
    fs_energy,
    fsim_energy,
    minimize_fsim,
    minimizer_profiles,
    momentum_grid,
    rho_gamma,
    solve_rho0,
)
from bogoliubov2d.errors import ConstraintViolated, DomainViolation
from bogoliubov2d.quadrature import angular_kernel
from bogoliubov2d.scattering import IdealizedProfile

PI = math.pi


# -- entropy -----------------------------------------------------------------------

def test_entropy_examples():
    assert entropy_density(0.0, 0.0) == 0.0
    assert entropy_density(1.0, 0.0) == pytest.approx(2.0 * math.log(2.0), rel=1e-15)
    assert entropy_density(1.0, math.sqrt(2.0)) == 0.0


def test_entropy_domain():
    with pytest.raises(DomainViolation):
        entropy_density(1.0, 1.5)
    with pytest.raises(DomainViolation):
        entropy_density(-0.1, 0.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 1e4), st.floats(0.0, 1.0))
def test_entropy_nonnegative(gamma, frac):
    alpha = frac * math.sqrt(gamma * (gamma + 1.0))
    s = entropy_density(gamma, alpha)
    assert s >= 0.0
    if frac == 1.0:
        assert s <= 1e-9 * (1.0 + gamma)


# -- dispersion and profiles -------------------------------------------------------

def test_free_dispersion():
    st_ = MinimizerState(1.0, 0.5, -1.0, 0.0, IdealizedProfile(0.01))
    p = np.array([0.1, 1.0, 3.0])
    assert np.allclose(dispersion_tg(p, st_), p * p + st_.delta, rtol=1e-15)


def test_phonon_slope(bump_b001):
    st_ = MinimizerState(bump_b001.rho_ref, 0.0, 0.0, 0.0, bump_b001)
    p = 1e-6 * math.sqrt(st_.s)
    slope = math.sqrt(16.0 * PI * st_.rho0 * st_.b)
    assert dispersion_tg(np.array([p]), st_)[0] / p == pytest.approx(slope, rel=1e-6)


def test_scaled_dispersion_example():
    # rho0 b = 1, d = 1, idealized profile, scaled p = 1
    st_ = MinimizerState(2.0, 1.0, 0.0, 0.0, IdealizedProfile(0.5))
    Y = st_.parts_scaled(np.array([1.0]))[3][0]
    assert Y == pytest.approx(math.sqrt(4.0 + 32.0 * PI), rel=1e-15)
    assert dispersion_tg(np.array([1.0]), st_)[0] == pytest.approx(Y, rel=1e-15)


def test_dispersion_G_needs_temperature():
    st_ = MinimizerState(1.0, 0.0, 0.0, 0.0, IdealizedProfile(0.01))
    with pytest.raises(ValueError):
        dispersion_G(np.array([1.0]), st_)
    hot = st_.replace(temperature=2.0)
    assert dispersion_G(np.array([1.0]), hot)[0] == pytest.approx(dispersion_tg(np.array([1.0]), hot)[0] / 2.0)


def test_t0_pure_state(bump_b001):
    st_ = MinimizerState(bump_b001.rho_ref, 0.7, 0.0, 0.0, bump_b001)
    g, a = minimizer_profiles(st_)
    p = np.geomspace(1e-6, 1e3, 200) * math.sqrt(st_.s)
    gamma, alpha = g(p), a(p)
    assert np.all(gamma >= 0)
    assert np.allclose((gamma + 0.5) ** 2 - alpha**2, 0.25, rtol=0, atol=1e-10 * np.max((1 + gamma) ** 2))


def test_free_gas_profiles():
    T = 0.7
    st_ = MinimizerState(1.0, 0.5, -1.0, T, IdealizedProfile(0.01))
    g, a = minimizer_profiles(st_)
    p = np.array([0.05, 0.3, 1.0, 2.5])
    assert np.allclose(g(p), 1.0 / np.expm1((p * p + st_.delta) / T), rtol=1e-14)
    assert np.all(a(p) == 0.0)


def test_thermal_domain_membership():
    st_ = MinimizerState(1.0, 0.3, 0.0, 0.05, IdealizedProfile(0.01))
    g, a = minimizer_profiles(st_)
    p = np.geomspace(1e-4, 10.0, 100)
    gamma, alpha = g(p), a(p)
    assert np.all(alpha**2 <= gamma * (gamma + 1.0) + 1e-12)
    ent = entropy_density(gamma, alpha)
    # strictly mixed where the thermal occupation is resolvable in double precision
    assert np.all(ent >= 0) and np.all(ent[p < 1.0] > 0)


def test_idealized_scaled_gamma_example():
    # T = 0, d = 0, scaled p = 1: gamma = (1 + 8 pi) / (2 sqrt(1 + 16 pi)) - 1/2
    b = 0.01
    st_ = MinimizerState(1.0, 0.0, 0.0, 0.0, IdealizedProfile(b))
    g, _ = minimizer_profiles(st_)
    p = math.sqrt(st_.s)
    expected = (1.0 + 8.0 * PI) / (2.0 * math.sqrt(1.0 + 16.0 * PI)) - 0.5
    assert g(np.array([p]))[0] == pytest.approx(expected, rel=1e-13)


# -- rho_gamma -----------------------------------------------------------------------

def test_rho_gamma_vanishes_without_condensate():
    st_ = MinimizerState(1.0, 0.0, -1.0, 0.0, IdealizedProfile(0.01))
    assert rho_gamma(st_) == 0.0


@pytest.mark.parametrize("d", [0.0, 1.0, 4.0 * PI, 16.0 * PI])
def test_rho_gamma_idealized(d):
    st_ = MinimizerState(1.0, d, 0.0, 0.0, IdealizedProfile(0.01))
    assert rho_gamma(st_) / st_.s == pytest.approx(c_of_d(d), rel=1e-10)


@pytest.mark.parametrize("d", [0.0, 1.0, 10.0])
def test_rho_gamma_scattering_profile_small_b(bump, d):
    sol = bump.at_b(0.002)
    st_ = MinimizerState(sol.rho_ref, d, 0.0, 0.0, sol)
    assert rho_gamma(st_) / st_.s == pytest.approx(c_of_d(d), rel=1e-2)


def test_rho_gamma_free_gas_divergence():
    with pytest.raises(DomainViolation):
        rho_gamma(MinimizerState(0.0, 0.0, 0.0, 1.0, IdealizedProfile(0.01)))


# -- simplified functional ---------------------------------------------------------

def test_fs_empty():
    st_ = MinimizerState(1.0, 0.0, -1.0, 0.0, IdealizedProfile(0.01))
    assert fs_energy(st_) == 0.0


def test_fs_free_gas_pressure():
    mpmath = pytest.importorskip("mpmath")
    T = 0.7
    st_ = MinimizerState(1.0, 0.5, -1.0, T, IdealizedProfile(0.01))
    series = -T * T / (4.0 * PI) * float(mpmath.polylog(2, math.exp(-st_.delta / T)))
    assert fs_energy(st_) == pytest.approx(series, rel=1e-10)


@pytest.mark.parametrize("d", [0.0, 1.0, 10.0])
def test_fs_i_less_matches_closed_form(d):
    b = 0.01
    prof = IdealizedProfile(b)
    st_ = MinimizerState(0.99, d, 0.0, 0.0, prof)
    br = fs_energy(st_, breakdown=True)
    assert br.i_less == pytest.approx(i_less_exact(d, st_.s, prof.epsilon), rel=1e-10)
    assert br.i1 == 0.0


def test_fs_split_invariance(bump_b001):
    st_ = MinimizerState(0.99 * bump_b001.rho_ref, 0.5, 0.0, 0.0, bump_b001)
    base = fs_energy(st_, breakdown=True)
    moved = fs_energy(st_, split=1.5 * bump_b001.epsilon, breakdown=True)
    assert moved.total == pytest.approx(base.total, rel=1e-9, abs=0.0)
    assert moved.i_less != pytest.approx(base.i_less, rel=1e-6, abs=0.0)
    fs_energy(st_, check_split=True)


def test_fsim_constraint(bump_b001):
    tp = ThermoPoint.from_solution(bump_b001)
    st_ = MinimizerState(0.9 * tp.rho, 0.0, 0.0, 0.0, bump_b001)
    with pytest.raises(ConstraintViolated):
        fsim_energy(tp, st_)


def test_fsim_edges():
    b, rho = 0.01, 1.0
    prof = IdealizedProfile(b)
    tp = ThermoPoint(rho, 0.0, 8.0 * PI, b)
    full = MinimizerState(rho, 0.0, 0.0, 0.0, prof)
    assert fsim_energy(tp, full, constraint_tol=math.inf) == pytest.approx(
        fs_energy(full) + 4.0 * PI * b * rho**2, rel=1e-14
    )
    empty = MinimizerState(0.0, 0.0, 0.0, 0.0, prof)
    assert fsim_energy(tp, empty, constraint_tol=math.inf) == pytest.approx(tp.vhat0 * rho**2, rel=1e-14)


def test_solve_rho0_constraint():
    b = 0.01
    tp = ThermoPoint(1.0, 0.0, 8.0 * PI, b)
    st_ = solve_rho0(tp, 2.0, IdealizedProfile(b))
    assert st_.rho0 + rho_gamma(st_) == pytest.approx(tp.rho, rel=1e-13)
    # rho0 / rho = 1 / (1 + C(d) b) exactly in the idealized profile
    assert st_.rho0 / tp.rho == pytest.approx(1.0 / (1.0 + c_of_d(2.0) * b), rel=1e-12)


def test_minimize_fsim_expansion():
    b = 0.01
    tp = ThermoPoint(1.0, 0.0, 8.0 * PI, b)
    res = minimize_fsim(tp, IdealizedProfile(b))
    expansion = 4.0 * PI * b + 4.0 * PI * b * b * math.log(b) + 35.175297245229046 * b * b
    assert res.d_star >= 0.0
    assert abs(res.f_min - expansion) <= 0.5 * b * b
    # the minimum beats the d = 0 point
    st0 = solve_rho0(tp, 0.0, IdealizedProfile(b))
    assert res.f_min <= fsim_energy(tp, st0)


# -- canonical functional ----------------------------------------------------------

def test_fcan_empty_state(bump):
    tp = ThermoPoint.from_solution(bump)
    zero = lambda p: np.zeros_like(np.asarray(p, dtype=float))
    assert fcan_energy(tp, zero, zero, tp.rho, sol=bump) == pytest.approx(0.5 * tp.vhat0 * tp.rho**2, rel=1e-15)


def test_fcan_upper_bound_free_gas(bump):
    from bogoliubov2d.asymptotics import ideal_gas_2d_mu

    T = 1.0
    tp = ThermoPoint.from_solution(bump, temperature=T)
    mu = ideal_gas_2d_mu(tp.rho, T)
    with np.errstate(over="ignore"):
        gamma = lambda p: 1.0 / np.expm1((np.asarray(p) ** 2 - mu) / T)
        zero = lambda p: np.zeros_like(np.asarray(p, dtype=float))
        br = fcan_energy(tp, gamma, zero, 0.0, sol=bump, breakdown=True)
    assert br.rho_gamma == pytest.approx(tp.rho, rel=1e-9)
    f0 = br.kinetic - br.entropy
    assert br.total <= f0 + tp.rho**2 * tp.vhat0


def test_hankel_convolution_matches_angular_kernel(bump):
    """The convolution-theorem double integral against angular-kernel quadrature."""
    tp = ThermoPoint.from_solution(bump)
    gam = lambda p: np.exp(-np.asarray(p, dtype=float) ** 2)
    zero = lambda p: np.zeros_like(np.asarray(p, dtype=float))
    br = fcan_energy(tp, gam, zero, 0.0, sol=bump, breakdown=True)
    x, w = np.polynomial.legendre.leggauss(28)
    p = 2.75 * (x + 1.0)
    wp = 2.75 * w * p * gam(p)
    K = np.empty((p.size, p.size))
    for i in range(p.size):
        for j in range(i, p.size):
            K[i, j] = K[j, i] = angular_kernel(bump.vhat, p[i], p[j])
    # iint V^(p - q) g(p) g(q) d^2p d^2q = 2 pi int int K(p, q) g g p q dp dq
    double = 2.0 * PI * wp @ K @ wp
    assert br.conv_gamma == pytest.approx(0.5 * double / (2.0 * PI) ** 4, rel=1e-8)


# -- diagnostics -------------------------------------------------------------------

def test_e3_vanishes_without_condensate(bump_b001):
    tp = ThermoPoint.from_solution(bump_b001)
    st_ = MinimizerState(tp.rho, 0.5, -tp.rho, 0.0, bump_b001)
    dg = error_diagnostics(tp, st_, with_decomposition=False)
    assert dg.e3 == 0.0


def test_diagnostics_magnitudes(bump_b001):
    tp = ThermoPoint.from_solution(bump_b001)
    st_ = solve_rho0(tp, 0.0, bump_b001)
    dg = error_diagnostics(tp, st_, with_decomposition=False)
    rho2b2 = dg.orders["rho2_b2"]
    # measured constants in |E_i| <= C rho**2 b**2
    for e in (dg.e2, dg.e3, dg.e4):
        assert abs(e) <= 1e-6 * rho2b2
    assert dg.a1_direct <= dg.a1_bound
    assert dg.a23_bound == pytest.approx(st_.rho0**2 * bump_b001.epsilon * bump_b001.a, rel=1e-15)


def test_idealized_a1_less_closed_form():
    b = 0.01
    prof = IdealizedProfile(b)
    tp = ThermoPoint(1.0, 0.0, 8.0 * PI, b)
    st_ = solve_rho0(tp, 0.0, prof)
    dg = error_diagnostics(tp, st_)
    L = prof.epsilon / math.sqrt(st_.s)
    assert dg.a1_less == pytest.approx(8.0 * PI**2 * b * math.asinh(L / (4.0 * math.sqrt(PI))), rel=1e-10)
    assert dg.e1 is None and dg.e2 == dg.e3 == dg.e4 == 0.0


def test_momentum_grid_covers_profile(bump_b001):
    grid = momentum_grid(bump_b001, (1e-3,))
    assert grid.p.min() < 1e-12 and grid.p.max() > 150.0
    assert np.all(np.diff(np.sort(grid.p)) > 0)
