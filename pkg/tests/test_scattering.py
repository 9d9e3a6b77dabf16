import math

import numpy as np
import pytest
from scipy import integrate, special

from bogoliubov2d.constants import EULER_GAMMA
from bogoliubov2d.errors import DensityTooHigh, FitDegenerate, InvalidPotential, NoLogAsymptote
from bogoliubov2d.scattering import (
    IdealizedProfile,
    PotentialSpec,
    check_curvature,
    fourier_radial,
    j0m1,
    solve_scattering,
)

# frozen from the fixed-step oracle below (2e5 RK4 steps) and the DOP853 solver
A_BUMP = 0.0383446340706
CURV_V_BUMP = -207.277436579
CURV_VW_BUMP = -179.185787943


def rk4_scattering_length(pot, n_steps=200_000):
    """Fixed-step RK4 for u'' + u'/r = V u / 2 on [r0, R]; outside u = A ln r + B."""
    R = pot.support_radius
    r0 = 1e-6 * R
    v0 = float(pot(np.array([0.0]))[0])
    y = np.array([1.0 + v0 * r0**2 / 8.0, v0 * r0 / 4.0])
    h = (R - r0) / n_steps
    V = lambda r: float(pot.v(np.array([r]))[0]) if r < R else 0.0

    def f(r, y):
        return np.array([y[1], 0.5 * V(r) * y[0] - y[1] / r])

    r = r0
    for _ in range(n_steps):
        k1 = f(r, y)
        k2 = f(r + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(r + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(r + h, y + h * k3)
        y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        r += h
    A = y[1] * R
    B = y[0] - A * math.log(R)
    return math.exp(-B / A)


def test_bump_scattering_length_frozen(bump):
    assert bump.a == pytest.approx(A_BUMP, rel=1e-10)


@pytest.mark.slow
def test_bump_scattering_length_rk4_oracle(bump):
    assert rk4_scattering_length(PotentialSpec.bump()) == pytest.approx(bump.a, rel=1e-8)


def test_scaling_law(bump):
    sol2 = solve_scattering(PotentialSpec.bump().scaled(2.0))
    assert sol2.a == pytest.approx(bump.a / 2.0, rel=1e-6)


def test_identities(bump):
    # (1/2) int V w0 = 2 pi and V^w(0) = 8 pi b
    assert abs(bump.identity_residual) <= 1e-8 * 2.0 * math.pi
    assert bump.vwhat0 == pytest.approx(8.0 * math.pi * bump.b, rel=1e-8)
    direct = 0.5 * fourier_radial(lambda r: bump.potential(r) * bump.w0(r), 0.0, support=bump.R)
    assert direct == pytest.approx(2.0 * math.pi, rel=1e-9)


def test_epsilon_two_forms(bump):
    eps_a = 2.0 / (bump.a * math.exp(EULER_GAMMA)) * math.exp(-0.5 / bump.b)
    eps_rho = 2.0 / math.exp(EULER_GAMMA) * math.sqrt(bump.rho_ref)
    assert bump.epsilon == pytest.approx(eps_a, rel=1e-12)
    assert bump.epsilon == pytest.approx(eps_rho, rel=1e-12)


def test_far_field(bump):
    r = np.linspace(2.0, 10.0, 17) * bump.R
    assert np.max(np.abs(bump.w0(r) - np.log(r / bump.a))) < 1e-9
    r = np.linspace(1.0, 20.0, 200) * bump.R
    w = bump.w0(r)
    assert np.all(w > 0) and np.all(np.diff(w) >= 0)
    assert np.allclose(bump.w(r), 2.0 * bump.b * bump.w0(r))


def test_fourier_radial_disc():
    disc = lambda r: np.where(np.asarray(r) <= 1.0, 1.0, 0.0)
    assert fourier_radial(disc, 0.0, support=1.0) == pytest.approx(math.pi, rel=1e-12)
    assert fourier_radial(disc, 1.0, support=1.0) == pytest.approx(2.0 * math.pi * special.j1(1.0), rel=1e-10)
    assert special.j1(1.0) == pytest.approx(0.4400505857449335, rel=1e-14)


def test_fourier_radial_gaussian_tail():
    g = lambda r: np.exp(-0.5 * np.asarray(r) ** 2)
    for p in (0.0, 1.0, 3.0):
        assert fourier_radial(g, p) == pytest.approx(2.0 * math.pi * math.exp(-0.5 * p * p), abs=1e-10)


def test_vhat_profiles_match_direct_transform(bump):
    for p in (0.5, 3.0, 12.0):
        direct = fourier_radial(bump.potential, p, support=bump.R)
        assert bump.vhat(np.array([p]))[0] == pytest.approx(direct, abs=1e-11)
    assert bump.vhat0 == pytest.approx(fourier_radial(bump.potential, 0.0, support=bump.R), rel=1e-12)


def test_curvature_against_finite_difference(bump):
    h = 1e-3 / bump.a
    fd = (fourier_radial(bump.potential, h, support=bump.R) - bump.vhat0) / (bump.a**2 * h**2)
    assert bump.curvature_v == pytest.approx(fd, rel=2e-3)
    fdw = bump.vwhat_minus0(np.array([h]))[0] / (bump.a**2 * h**2)
    assert bump.curvature_vw == pytest.approx(fdw, rel=2e-3)
    assert bump.curvature_v == pytest.approx(CURV_V_BUMP, rel=1e-9)
    assert bump.curvature_vw == pytest.approx(CURV_VW_BUMP, rel=1e-9)
    # the second moment oracle C = -(pi / 2) int V r**3 dr / a**2
    m2 = integrate.quad(lambda r: float(bump.potential(np.array([r]))[0]) * r**3, 0.0, 1.0, epsabs=1e-14)[0]
    assert bump.curvature_v == pytest.approx(-0.5 * math.pi * m2 / bump.a**2, rel=1e-10)
    assert bump.curvature_v != pytest.approx(bump.curvature_vw, rel=1e-2)


def test_curvature_even_disc():
    pot = PotentialSpec.smoothed_disc(1.0, 1.0, 0.2)
    sol = solve_scattering(pot)
    # even in p: no linear term, V^(p) - V^(0) = C a**2 p**2 + O(p**4)
    p = np.array([1e-3, 2e-3, 4e-3])
    ratio = sol.vhat_minus0(p) / p**2
    assert np.allclose(ratio, sol.curvature_v * sol.a**2, rtol=1e-5)
    m2 = integrate.quad(lambda r: float(pot(np.array([r]))[0]) * r**3, 0.0, 1.0, epsabs=1e-14, limit=200)[0]
    assert sol.curvature_v == pytest.approx(-0.5 * math.pi * m2 / sol.a**2, rel=1e-9)


def test_curvature_degenerate(bump):
    with pytest.raises(FitDegenerate):
        check_curvature(bump, p_max=0.0)


def test_vhat_flags(bump):
    p = np.linspace(0.0, bump.p_cut, 2001)
    assert np.all(bump.vhat(p) <= bump.vhat0 * (1 + 1e-12))
    assert bump.vhat_bounded
    # the bump's transform changes sign at large p: reported, not enforced
    assert not bump.vhat_nonnegative
    assert bump.vhat(np.array([30.0]))[0] < 0


def test_b_monotone_in_density(bump):
    rhos = np.geomspace(1e-6, 0.5 / bump.a**2, 12)
    bs = [bump.at_density(r).b for r in rhos]
    assert all(x < y for x, y in zip(bs, bs[1:]))


def test_density_too_high(bump):
    with pytest.raises(DensityTooHigh):
        _ = bump.at_density(2.0 / bump.a**2).b


def test_at_b_roundtrip(bump):
    for b in (0.05, 0.01, 0.002):
        assert bump.at_b(b).b == pytest.approx(b, rel=1e-12)


def test_invalid_potentials():
    with pytest.raises(InvalidPotential):
        PotentialSpec(lambda r: -np.ones_like(np.asarray(r, dtype=float)), 1.0)
    with pytest.raises(InvalidPotential):
        PotentialSpec.from_table([0.0, 0.5, 1.0], [1.0, -0.1, 0.0])
    with pytest.raises(InvalidPotential):
        PotentialSpec.bump(amplitude=-1.0)


def test_no_log_asymptote():
    with pytest.raises(NoLogAsymptote):
        solve_scattering(PotentialSpec.bump(), fit_tol=1e-30)


def test_tabulated_potential(tmp_path, bump):
    r = np.linspace(0.0, 1.0, 401)
    v = np.asarray(PotentialSpec.bump()(r))
    path = tmp_path / "v.txt"
    np.savetxt(path, np.column_stack([r, v]))
    sol = solve_scattering(PotentialSpec.from_file(path, mollify=0.01))
    assert sol.vwhat0 == pytest.approx(8.0 * math.pi * sol.b, rel=1e-8)
    # linear interpolation plus mollification perturbs the bump only slightly
    assert sol.a == pytest.approx(bump.a, rel=2e-2)


def test_j0m1_small_arguments():
    mpmath = pytest.importorskip("mpmath")
    for x in (1e-9, 1e-3, 0.1, 0.5, 5.0, 40.0):
        with mpmath.workdps(40):
            exact = float(mpmath.besselj(0, mpmath.mpf(x)) - 1)
        assert j0m1(np.array([x]))[0] == pytest.approx(exact, rel=1e-12)
    assert j0m1(np.array([0.0]))[0] == 0.0


def test_idealized_profile():
    ip = IdealizedProfile(0.01)
    assert ip.vwhat0 == pytest.approx(8.0 * math.pi * 0.01)
    assert ip.vhat0 == pytest.approx(8.0 * math.pi * 0.01)
    assert ip.epsilon == pytest.approx(2.0 * math.exp(-EULER_GAMMA))
    assert ip.b == 0.01


def test_curvature_follows_density(bump):
    sol = bump.at_b(0.01)
    h = 1e-3
    fd = sol.vwhat_minus0(np.array([h]))[0] / (sol.a**2 * h**2)
    assert sol.curvature_vw == pytest.approx(fd, rel=1e-5)
    assert sol.curvature_vw / bump.curvature_vw == pytest.approx(0.01 / bump.b, rel=1e-12)
    assert sol.curvature_v == bump.curvature_v
