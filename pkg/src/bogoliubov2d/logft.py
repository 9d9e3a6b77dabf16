"""Fourier transforms of logarithmic profiles in two dimensions, as distributions.

A :class:`RadialDistribution` acts on radial test functions ``phi`` as

    delta_coeff * (2 pi)**2 * phi(0)
    + int_{|p| <= r_s} (n(p) phi(p) - n(0) phi(0)) / p**2 d^2p
    + int_{|p| >  r_s}  n(p) phi(p) / p**2 d^2p

with numerator ``n`` and subtraction radius ``r_s``.  This covers the
transform of ``ln|x|`` and the regular part of the transform of the scattering
solution, whose density behaves like ``1 / p**2`` at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .constants import EULER_GAMMA, FOUR_PI_SQ, TWO_PI
from .quadrature import DEFAULT_SPEC, QuadSpec, integrate_interval, integrate_log

__all__ = [
    "C0_EXACT",
    "RadialDistribution",
    "build_phi_hat",
    "build_w_hat",
    "c0_check",
    "c0_from_distributions",
    "delta_cancellation_check",
    "log_ft",
    "p_action",
    "p_distribution",
    "p_scaling_residual",
    "pairing_check",
]

C0_EXACT = FOUR_PI_SQ * (math.log(2.0) - EULER_GAMMA)


@dataclass(frozen=True)
class RadialDistribution:
    """``delta_coeff (2 pi)**2 delta_0`` plus a subtracted ``n(p) / p**2`` density.

    Parameters
    ----------
    delta_coeff : float
        Coefficient of ``(2 pi)**2 delta_0``.
    numerator : callable
        ``n(p)``; the regular density is ``n(p) / p**2``.
    numerator0 : float
        ``n(0)``, subtracted inside ``subtract_radius``.
    subtract_radius : float
        Radius of the subtraction disc.
    numerator_minus0 : callable, optional
        ``n(p) - n(0)`` evaluated without cancellation.
    upper : float
        ``n`` vanishes (to working precision) beyond ``upper``.
    """

    delta_coeff: float
    numerator: Callable
    numerator0: float
    subtract_radius: float
    numerator_minus0: Callable | None = None
    upper: float = math.inf

    def _n_minus0(self, p):
        if self.numerator_minus0 is not None:
            return self.numerator_minus0(p)
        return self.numerator(p) - self.numerator0

    def delta_part(self, phi) -> float:
        return self.delta_coeff * FOUR_PI_SQ * float(phi(np.array([0.0]))[0])

    def inner(self, phi, spec: QuadSpec | None = None, *, phi_minus0=None) -> float:
        """Subtracted disc part ``int_{|p| <= r_s} (n phi - n(0) phi(0)) / p**2``.

        ``phi_minus0`` optionally evaluates ``phi(p) - phi(0)`` without
        cancellation, which matters when ``r_s`` is tiny.
        """
        spec = spec or DEFAULT_SPEC
        rs = self.subtract_radius
        if rs == 0:
            return 0.0
        phi0 = float(phi(np.array([0.0]))[0])
        n0 = self.numerator0

        def g(x):
            # p = rs * x; d^2p / p**2 = 2 pi dx / x
            x = np.atleast_1d(np.asarray(x, dtype=float))
            p = rs * x
            ph = np.asarray(phi(p), dtype=float)
            dph = ph - phi0 if phi_minus0 is None else np.asarray(phi_minus0(p), dtype=float)
            return (self._n_minus0(p) * ph + n0 * dph) / x

        edges = [0.0, 1e-6, 1e-3, 1.0]
        total = 0.0
        for x0, x1 in zip(edges[:-1], edges[1:]):
            total += integrate_interval(lambda x: float(g(x)[0]), x0, x1, spec).value
        return TWO_PI * total

    def outer(self, phi, spec: QuadSpec | None = None, *, hi: float | None = None) -> float:
        """Regular part ``int_{|p| > r_s} n phi / p**2``."""
        spec = spec or DEFAULT_SPEC
        lo = self.subtract_radius
        top = self.upper if hi is None else min(hi, self.upper)

        def g(p):
            p = np.atleast_1d(np.asarray(p, dtype=float))
            return float((self.numerator(p) * np.asarray(phi(p), dtype=float))[0] / p[0])

        total = 0.0
        start = lo
        if lo == 0.0:
            raise ValueError("outer integral needs a positive lower radius")
        mid = min(top, max(lo, 1.0) * 1e3) if math.isinf(top) else top
        if mid > start:
            total += integrate_log(g, start, mid, spec, panel=2.0).value
        if math.isinf(top):
            total += integrate_interval(g, mid, math.inf, spec).value
        return TWO_PI * total

    def action(self, phi, spec: QuadSpec | None = None, *, phi_minus0=None) -> float:
        return self.delta_part(phi) + self.inner(phi, spec, phi_minus0=phi_minus0) + self.outer(phi, spec)

    def __call__(self, phi, spec: QuadSpec | None = None) -> float:
        return self.action(phi, spec)

    def scaled(self, c: float, delta_coeff: float | None = None) -> "RadialDistribution":
        """``c`` times this distribution, optionally with a new delta coefficient."""
        n, nm = self.numerator, self.numerator_minus0
        return RadialDistribution(
            c * self.delta_coeff if delta_coeff is None else delta_coeff,
            lambda p: c * n(p),
            c * self.numerator0,
            self.subtract_radius,
            None if nm is None else (lambda p: c * nm(p)),
            self.upper,
        )


def p_distribution() -> RadialDistribution:
    """``P(phi) = -2 pi (int_{|p|<=1} (phi - phi(0)) / p**2 + int_{|p|>1} phi / p**2)``."""
    return RadialDistribution(
        0.0,
        lambda p: np.full(np.shape(p), -TWO_PI),
        -TWO_PI,
        1.0,
        lambda p: np.zeros(np.shape(p)),
    )


def p_action(phi, spec: QuadSpec | None = None) -> float:
    return p_distribution().action(phi, spec)


def log_ft() -> RadialDistribution:
    """Fourier transform of ``ln|x|``: ``(2 pi)**2 (ln 2 - Gamma) delta_0 + P``."""
    return p_distribution().scaled(1.0, delta_coeff=math.log(2.0) - EULER_GAMMA)


def p_scaling_residual(phi, kappa: float, spec: QuadSpec | None = None) -> float:
    """``P(phi_kappa) - P(phi) - (2 pi)**2 ln|kappa| phi(0)``; zero in exact arithmetic."""
    phi_k = lambda p: phi(kappa * np.asarray(p))
    phi0 = float(phi(np.array([0.0]))[0])
    return p_action(phi_k, spec) - p_action(phi, spec) - FOUR_PI_SQ * math.log(abs(kappa)) * phi0


def c0_check(spec: QuadSpec | None = None) -> float:
    """``2 (2 pi)**2 int_0^inf r ln(r) exp(-r**2 / 2) dr`` by quadrature.

    Compare with ``(2 pi)**2 (ln 2 - Gamma)``.
    """
    spec = spec or DEFAULT_SPEC
    f = lambda r: r * math.log(r) * math.exp(-0.5 * r * r)
    inner = integrate_interval(np.vectorize(f), 0.0, 1.0, spec, singular="lo").value
    outer = integrate_interval(f, 1.0, math.inf, spec).value
    return 2.0 * FOUR_PI_SQ * (inner + outer)


def c0_from_distributions(spec: QuadSpec | None = None) -> float:
    """``L(f^) - P(f)`` for ``f = exp(-p**2 / 2)``, with ``L`` the action of ``ln|x|``.

    ``f^(x) = 2 pi exp(-x**2 / 2)`` so ``L(f^) = (2 pi)**2 int r ln r exp(-r**2/2) dr``.
    """
    spec = spec or DEFAULT_SPEC
    half = 0.5 * c0_check(spec)
    f = lambda p: np.exp(-0.5 * np.asarray(p) ** 2)
    return half - p_action(f, spec)


def build_phi_hat(sol) -> RadialDistribution:
    """Distribution ``phi^`` with ``w^ = (2 pi)**2 delta_0 - phi^``.

    The density is ``V^w(p) / (2 p**2)``, subtracted inside ``|p| <= epsilon``.
    ``inner`` and ``outer`` of the result are the two pieces ``phi^_1`` and
    ``phi^_2``.
    """
    return RadialDistribution(
        0.0,
        lambda p: 0.5 * sol.vwhat(p),
        0.5 * sol.vwhat0,
        sol.epsilon,
        lambda p: 0.5 * sol.vwhat_minus0(p),
        getattr(sol, "p_cut", math.inf),
    )


def build_w_hat(sol) -> RadialDistribution:
    """``w^ = (2 pi)**2 delta_0 - phi^``."""
    return build_phi_hat(sol).scaled(-1.0, delta_coeff=1.0)


def delta_cancellation_check(sol=None, *, b: float | None = None, a: float | None = None, epsilon: float | None = None) -> float:
    """Residual ``1 + 2b ln a - 2b ln 2 + 2b Gamma + 2b ln eps`` of the delta coefficient.

    With ``eps = 2 exp(-Gamma - 1 / (2 b)) / a`` the residual vanishes.  Either
    pass a scattering solution or explicit ``b`` and ``a``; ``epsilon`` may be
    given to test a different cutoff.
    """
    if sol is not None:
        b = sol.b if b is None else b
        a = sol.a if a is None else a
    if b is None or a is None:
        raise ValueError("need a solution or both b and a")
    if epsilon is None:
        epsilon = 2.0 / (a * math.exp(EULER_GAMMA)) * math.exp(-0.5 / b)
    return 1.0 + 2.0 * b * math.log(a) - 2.0 * b * math.log(2.0) + 2.0 * b * EULER_GAMMA + 2.0 * b * math.log(epsilon)


def pairing_check(sol, sigma: float = 1.0, spec: QuadSpec | None = None) -> tuple[float, float]:
    """Pair ``w^`` with a Gaussian in momentum space and compare with real space.

    For ``phi(p) = exp(-sigma**2 p**2 / 2)`` the pairing ``w^(phi)`` equals
    ``int w(x) phi^(x) dx`` with ``phi^(x) = (2 pi / sigma**2) exp(-x**2 / (2 sigma**2))``.
    Returns ``(distribution side, real-space side)``.
    """
    spec = spec or DEFAULT_SPEC
    phi = lambda p: np.exp(-0.5 * (sigma * np.asarray(p)) ** 2)
    lhs = build_w_hat(sol).action(phi, spec)

    def g(r):
        return float(sol.w(np.array([r]))[0]) * math.exp(-0.5 * (r / sigma) ** 2) * r

    R = sol.R
    pts = [R * x for x in (0.25, 0.5, 0.75)]
    inner = integrate_interval(g, 0.0, R, spec, points=pts).value
    outer = integrate_interval(g, R, math.inf, spec).value
    rhs = TWO_PI * (TWO_PI / sigma**2) * (inner + outer)
    return lhs, rhs
