import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from bogoliubov2d.constants import EULER_GAMMA
from bogoliubov2d.errors import NonConvergence
from bogoliubov2d.quadrature import (
    DEFAULT_SPEC,
    QuadSpec,
    RadialFunction,
    RadialGrid,
    angular_kernel,
    integrate_interval,
    integrate_log,
    integrate_radial_2d,
    tanh_sinh,
)


def test_quadspec_validation():
    with pytest.raises(ValueError):
        QuadSpec(abs_tol=0.0)
    with pytest.raises(ValueError):
        QuadSpec(tail_order=1)
    with pytest.raises(ValueError):
        QuadSpec(tail_cut=-1.0)
    assert DEFAULT_SPEC.replace(abs_tol=1e-9).abs_tol == 1e-9


def test_radial_gaussian():
    spec = DEFAULT_SPEC.replace(tail_order=40)
    r = integrate_radial_2d(lambda p: np.exp(-np.asarray(p) ** 2), 0.0, math.inf, spec)
    assert r.value == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-10)
    assert r.error < 1e-9


def test_radial_unit_disc_compact():
    f = RadialFunction(lambda p: np.ones_like(np.asarray(p, dtype=float)), scale=1.0, compact=True)
    assert integrate_radial_2d(f, 0.0, math.inf).value == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-12)


def test_radial_bose_integrand():
    # geometric series: sum_n (2 pi)**-1 int p**3 exp(-n p**2) dp = zeta(2) / (4 pi)
    spec = DEFAULT_SPEC.replace(tail_order=40)
    f = lambda p: np.asarray(p) ** 2 / np.expm1(np.asarray(p) ** 2)
    with np.errstate(over="ignore"):
        val = integrate_radial_2d(f, 1e-300, math.inf, spec, scale=1.0).value
    assert val == pytest.approx(math.pi / 24.0, rel=1e-9)
    assert val == pytest.approx(special.zeta(2.0) / (4.0 * math.pi), rel=1e-9)


def test_radial_bose_without_p2_diverges():
    # (exp(p**2) - 1)**-1 behaves like p**-2 at the origin: log divergent against p dp
    f = lambda p: 1.0 / np.expm1(np.asarray(p, dtype=float) ** 2)
    with pytest.raises(NonConvergence), np.errstate(over="ignore"):
        integrate_radial_2d(f, 0.0, math.inf, DEFAULT_SPEC.replace(tail_order=40), scale=1.0)


def test_interval_examples():
    f = lambda r: 2.0 * r * math.log(r) * math.exp(-0.5 * r * r) if r > 0 else 0.0
    inner = integrate_interval(f, 0.0, 1.0, singular="lo").value
    outer = integrate_interval(f, 1.0, math.inf).value
    assert inner + outer == pytest.approx(math.log(2.0) - EULER_GAMMA, abs=1e-12)
    assert integrate_interval(lambda r: 1.0, 0.0, 1.0).value == pytest.approx(1.0, abs=1e-14)
    assert integrate_interval(lambda r: np.log(r), 0.0, 1.0, singular="lo").value == pytest.approx(-1.0, abs=1e-12)


def test_tanh_sinh_inverse_sqrt():
    r = tanh_sinh(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0)
    assert isinstance(r.value, float)
    assert r.value == pytest.approx(2.0, abs=1e-10)


def test_integrate_log_many_decades():
    # int_1e-8^1e4 dp / (1 + p)**2 = 1/(1+1e-8) - 1/(1+1e4)
    val = integrate_log(lambda p: 1.0 / (1.0 + p) ** 2, 1e-8, 1e4).value
    assert val == pytest.approx(1.0 / (1.0 + 1e-8) - 1.0 / (1.0 + 1e4), rel=1e-11)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 0.95))
def test_additivity(frac):
    f = lambda x: math.exp(-x) * math.cos(3.0 * x)
    a, c = 0.0, 4.0
    b = a + frac * (c - a)
    whole = integrate_interval(f, a, c)
    left, right = integrate_interval(f, a, b), integrate_interval(f, b, c)
    tol = 2.0 * (whole.error + left.error + right.error) + 1e-14
    assert abs(whole.value - left.value - right.value) <= tol


def test_tail_cut_stability():
    f = lambda p: 1.0 / (1.0 + np.asarray(p) ** 2) ** 2
    r1 = integrate_radial_2d(f, 0.0, math.inf, DEFAULT_SPEC.replace(tail_cut=1e3))
    r2 = integrate_radial_2d(f, 0.0, math.inf, DEFAULT_SPEC.replace(tail_cut=2e3))
    exact = 1.0 / (4.0 * math.pi)
    assert abs(r1.value - r2.value) <= r1.error + r2.error + 1e-12
    assert r2.value == pytest.approx(exact, rel=1e-10)


def test_angular_kernel_examples():
    one = lambda r: np.ones_like(np.asarray(r, dtype=float))
    assert angular_kernel(one, 0.7, 2.3) == pytest.approx(2.0 * math.pi, rel=1e-14)
    assert angular_kernel(lambda r: np.asarray(r) ** 2, 1.0, 1.0) == pytest.approx(4.0 * math.pi, rel=1e-13)
    gauss = lambda r: np.exp(-np.asarray(r) ** 2)
    # dense trapezoid oracle with 10**6 points
    theta = (np.arange(10**6) + 0.5) * (2.0 * math.pi / 10**6)
    dense = np.sum(np.exp(-(1.0 + 4.0 - 4.0 * np.cos(theta)))) * (2.0 * math.pi / 10**6)
    val = angular_kernel(gauss, 1.0, 2.0)
    assert val == pytest.approx(dense, rel=1e-12)
    assert val == pytest.approx(2.0 * math.pi * math.exp(-5.0) * special.i0(4.0), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.0, 5.0))
def test_angular_kernel_symmetric(p, q):
    g = lambda r: np.exp(-np.asarray(r)) * np.cos(np.asarray(r))
    assert angular_kernel(g, p, q) == angular_kernel(g, q, p)


def test_radial_grid_gaussian():
    grid = RadialGrid(1e-8, 12.0, p_lin=2.0, lin_width=0.25)
    assert grid.integrate2d(np.exp(-grid.p**2)) == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-12)
    assert len(grid) == grid.p.size
