"""Closed forms of the dilute two-dimensional expansion and ideal-gas references.

The ground-state energy per unit area behaves for small ``b`` as

    4 pi rho**2 b + 4 pi rho**2 b**2 ln b + (inf_d C_nu(d)) rho**2 b**2 + o(rho**2 b**2)

where ``C_nu`` is an explicit function of the dispersion shift ``d``.  This
module evaluates the constants, the exact small-momentum integral ``I_<``, the
large-momentum remainder ``I_>``, and compares the expansion with the numerical
minimum of the simplified functional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from .constants import EULER_GAMMA, PI, ZETA_3_2, ZETA_5_2
from .errors import LogDomain, NegativeD, PositiveMu
from .quadrature import DEFAULT_SPEC, QuadSpec, integrate_interval, integrate_radial_2d

__all__ = [
    "C_8PI_AT_0",
    "ExpansionResult",
    "c_nu_of_d",
    "c_of_d",
    "critical_temperature_2d",
    "ground_state_expansion",
    "i_greater",
    "i_less_exact",
    "i_less_quadrature",
    "ideal_gas_2d",
    "ideal_gas_2d_mu",
    "ideal_gas_2d_quadrature",
    "ideal_gas_3d",
    "rho_fc_quadrature",
    "minimize_cnu",
    "polylog_exp",
]

#: ``C_{8 pi}(0) = 2 pi (1 + 4 Gamma + 2 ln pi)``.
C_8PI_AT_0 = 2.0 * PI * (1.0 + 4.0 * EULER_GAMMA + 2.0 * math.log(PI))


def _check_d(d):
    if d < 0:
        raise NegativeD(f"d must be non-negative, got {d}")


def c_of_d(d: float) -> float:
    """Depletion coefficient ``C(d) = 1 - (sqrt(d (d + 16 pi)) - d) / (8 pi)``.

    Evaluated as ``16 pi d / (sqrt(d (d + 16 pi)) + d)**2`` which is free of
    cancellation for large ``d``.
    """
    _check_d(d)
    if d == 0:
        return 1.0
    root = math.sqrt(d * (d + 16.0 * PI))
    return 16.0 * PI * d / (root + d) ** 2


def c_nu_of_d(nu: float, d: float) -> float:
    """The order ``rho**2 b**2`` constant ``C_nu(d)`` of the ground-state expansion."""
    _check_d(d)
    D = math.sqrt(d * (d + 16.0 * PI))
    return (
        (1.0 - (D - d) / (8.0 * PI)) * (2.0 * nu - 16.0 * PI - d)
        + d * d / (16.0 * PI)
        + 2.0 * PI
        + d
        - 4.0 * PI * (math.log(8.0) - 2.0 * EULER_GAMMA)
        - d * D / (16.0 * PI)
        - 0.5 * D
        + 4.0 * PI * math.log(d + D + 8.0 * PI)
    )


def minimize_cnu(nu: float, d_max: float = 1e3, xtol: float = 1e-8, n_scan: int = 400) -> tuple[float, float]:
    """``(d_star, C_nu(d_star))`` with ``d_star`` the minimiser on ``[0, d_max]``.

    ``C_nu`` has a ``sqrt(d)`` term at the origin, so the search runs in
    ``x = sqrt(d)``: a uniform scan brackets the minimum, a bounded Brent
    search refines it, and the boundary ``d = 0`` is always a candidate.
    """
    if not nu > 0:
        raise ValueError("nu must be positive")
    xs = np.linspace(0.0, math.sqrt(d_max), n_scan)
    vals = np.array([c_nu_of_d(nu, x * x) for x in xs])
    i = int(np.argmin(vals))
    if c_nu_of_d(nu, d_max) < c_nu_of_d(nu, 0.999 * d_max):
        raise RuntimeError("C_nu still decreasing at d_max; enlarge the search domain")
    best_d, best_v = xs[i] ** 2, float(vals[i])
    if 0 < i < xs.size - 1 or i == 0:
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, xs.size - 1)]
        # Brent on sqrt(d); xatol on x translates to |dd| <= 2 x xatol
        res = optimize.minimize_scalar(
            lambda x: c_nu_of_d(nu, x * x),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": min(xtol, xtol / max(2.0 * hi, 1e-300))},
        )
        if res.fun < best_v:
            best_d, best_v = float(res.x) ** 2, float(res.fun)
    v0 = c_nu_of_d(nu, 0.0)
    if v0 <= best_v:
        return 0.0, v0
    return best_d, best_v


def _g_antiderivative(u: float) -> float:
    """``int sqrt(u**2 + 16 pi u) du - (u**2 / 2 + 8 pi u) - 32 pi**2``, cancellation-free."""
    r = math.sqrt(u * u + 16.0 * PI * u)
    a = u + 8.0 * PI
    c = 32.0 * PI * PI
    return -c * a / (r + a) - c * math.log(a + r)


def i_less_exact(d: float, rho0b: float, eps: float, *, expand: bool = False) -> float:
    """Small-momentum piece ``I_<(d)`` with the idealized profile.

    ``I_< = (rho0 b)**2 / (4 pi) int_0^L [sqrt((k**2+d)**2 + 16 pi (k**2+d)) - (k**2+d+8 pi)] k dk``
    with ``L = eps / sqrt(rho0 b)``.  By default the integral is returned exactly
    through its antiderivative.  ``expand=True`` returns the large-``L``
    closed form

        (rho0 b)**2 / (4 pi) [d**2/4 + 8 pi**2 + 4 pi d - 16 pi**2 ln(2 eps**2 / (rho0 b))
                              - d sqrt(d (d + 16 pi)) / 4 - 2 pi sqrt(d (d + 16 pi))
                              + 16 pi**2 ln(d + sqrt(d (d + 16 pi)) + 8 pi)]

    which drops terms of relative size ``1 / L**2 = O(b)``.
    """
    _check_d(d)
    if not (rho0b > 0 and eps > 0):
        raise ValueError("rho0b and eps must be positive")
    s = rho0b
    if expand:
        D = math.sqrt(d * (d + 16.0 * PI))
        bracket = (
            d * d / 4.0
            + 8.0 * PI**2
            + 4.0 * PI * d
            - 16.0 * PI**2 * math.log(2.0 * eps**2 / s)
            - 0.25 * d * D
            - 2.0 * PI * D
            + 16.0 * PI**2 * math.log(d + D + 8.0 * PI)
        )
        return s * s / (4.0 * PI) * bracket
    U = eps * eps / s + d
    return s * s / (8.0 * PI) * (_g_antiderivative(U) - _g_antiderivative(d))


def _sqrt_gap(k, d):
    u = k * k + d
    root = np.sqrt(u * u + 16.0 * PI * u)
    return -64.0 * PI**2 / (root + u + 8.0 * PI)


def i_less_quadrature(d: float, rho0b: float, eps: float, spec: QuadSpec | None = None) -> float:
    """Quadrature oracle for :func:`i_less_exact`."""
    _check_d(d)
    L = eps / math.sqrt(rho0b)
    # (rho0 b)**2 / (4 pi) int f k dk = (rho0 b)**2 / 2 * (2 pi)**-1 int f k dk
    return 0.5 * rho0b**2 * integrate_radial_2d(lambda k: _sqrt_gap(k, d), 0.0, L, spec, scale=1.0).value


def i_greater(d: float, rho0b: float, eps: float, spec: QuadSpec | None = None) -> float:
    """Large-momentum piece ``I_>(d)`` with the idealized profile.

    ``(rho0 b)**2 / (4 pi) int_L^inf [sqrt((k**2+d)**2 + 16 pi (k**2+d)) - (k**2+d+8 pi) + 32 pi**2 / k**2] k dk``;
    the integrand decays like ``k**-4`` and the tail is closed analytically.
    """
    _check_d(d)
    spec = (spec or DEFAULT_SPEC).replace(tail_order=4)
    L = eps / math.sqrt(rho0b)

    def f(k):
        k = np.asarray(k, dtype=float)
        u = k * k + d
        root = np.sqrt(u * u + 16.0 * PI * u)
        c = 8.0 * PI
        # (root - u - c) + c**2 / (2 k**2) written over a common denominator
        top = (d + c) + (2.0 * k * k * d + d * d + 2.0 * c * u) / (root + k * k)
        return c * c * top / (2.0 * k * k * (u + c + root))

    return 0.5 * rho0b**2 * integrate_radial_2d(f, L, math.inf, spec, scale=max(L, 1.0)).value


@dataclass(frozen=True)
class ExpansionResult:
    """Terms of the small-``b`` expansion and the measured remainder.

    ``residual = f_min - (leading + log_term + const_term)`` where ``f_min`` is
    the numerical minimum of the simplified functional.
    """

    leading: float
    log_term: float
    const_term: float
    d_star: float
    residual: float
    f_min: float = math.nan
    d_star_numeric: float = math.nan
    rho0_ratio: float = math.nan
    b: float = math.nan
    rho: float = math.nan

    @property
    def residual_ratio(self) -> float:
        """``|residual| / (rho**2 b**2)``."""
        return abs(self.residual) / (self.rho**2 * self.b**2)


def ground_state_expansion(
    tp,
    profile=None,
    spec: QuadSpec | None = None,
    *,
    minimize: bool = True,
    d_max: float = 1e3,
    t0_fraction: float = 0.0,
) -> ExpansionResult:
    """Closed-form terms at ``tp`` and, optionally, the numerical remainder.

    ``profile`` defaults to the idealized profile with ``tp.b``, ``tp.nu`` and
    reference density ``tp.rho``.  The numerical minimum solves the constraint
    ``rho0 + rho_gamma = rho`` for each ``d`` and minimises over ``d``.
    """
    from .bogoliubov import minimize_fsim
    from .scattering import IdealizedProfile

    if tp.temperature != 0:
        raise ValueError("the ground-state expansion is a T = 0 statement")
    rho, b = tp.rho, tp.b
    d_star, cmin = minimize_cnu(tp.nu, d_max)
    leading = 4.0 * PI * rho**2 * b
    log_term = 4.0 * PI * rho**2 * b**2 * math.log(b)
    const_term = cmin * rho**2 * b**2
    if not minimize:
        return ExpansionResult(leading, log_term, const_term, d_star, math.nan, b=b, rho=rho)
    profile = profile or IdealizedProfile(b, tp.nu, rho)
    res = minimize_fsim(tp, profile, spec, d_max=d_max, t0_fraction=t0_fraction)
    residual = res.f_min - (leading + log_term + const_term)
    return ExpansionResult(
        leading, log_term, const_term, d_star, residual, res.f_min, res.d_star, res.rho0 / rho, b, rho
    )


# -- ideal gas references ----------------------------------------------------------

def polylog_exp(s: float, x, n_series: int = 400):
    """``Li_s(e**x)`` for real ``x <= 0`` and ``s > 1``.

    Uses the power series in ``z = e**x`` for ``x < -1`` and the expansion
    ``Gamma(1 - s)(-x)**(s-1) + sum_k zeta(s - k) x**k / k!`` near ``x = 0``
    (for integer ``s`` the pole pair becomes ``x**(s-1) (H_{s-1} - ln(-x)) / (s-1)!``).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x > 0):
        raise PositiveMu("polylog_exp needs x <= 0")
    out = np.empty_like(x)
    far = x < -1.0
    if np.any(far):
        n = np.arange(1, n_series + 1)
        out[far] = np.exp(np.outer(x[far], n)) @ (n ** (-s))
    near = ~far
    if np.any(near):
        xn = x[near]
        total = np.zeros_like(xn)
        term = np.ones_like(xn)
        m = s - 1.0
        integer = float(m).is_integer()
        for k in range(0, 40):
            if k:
                term = term * xn / k
            if integer and k == int(m):
                # integer order: the Gamma pole pairs with zeta(1) into x**m / m! (H_m - ln(-x))
                with np.errstate(divide="ignore", invalid="ignore"):
                    log_part = np.where(xn < 0, sum(1.0 / j for j in range(1, k + 1)) - np.log(-np.where(xn < 0, xn, 1.0)), 0.0)
                total += np.where(xn < 0, term * log_part, 0.0)
            else:
                total += special.zeta(s - k) * term
        if not integer:
            with np.errstate(invalid="ignore"):
                total += np.where(xn < 0, special.gamma(1.0 - s) * (-xn) ** m, 0.0)
        out[near] = total
    return out if out.size > 1 else float(out[0])


def ideal_gas_2d(mu: float, T: float) -> float:
    """Density of the 2D ideal Bose gas, ``-(T / 4 pi) ln(1 - exp(mu / T))``.

    Raises
    ------
    PositiveMu
        For ``mu > 0``.  ``mu = 0`` gives ``inf`` (no finite critical density in 2D).
    """
    if mu > 0:
        raise PositiveMu("chemical potential must be <= 0")
    if not T > 0:
        raise ValueError("T must be positive")
    if mu == 0:
        return math.inf
    return -T / (4.0 * PI) * math.log(-math.expm1(mu / T))


def ideal_gas_2d_mu(rho: float, T: float) -> float:
    """Inverse of :func:`ideal_gas_2d`: ``mu = T ln(1 - exp(-4 pi rho / T))``."""
    if not (rho > 0 and T > 0):
        raise ValueError("rho and T must be positive")
    return T * math.log1p(-math.exp(-4.0 * PI * rho / T))


def ideal_gas_2d_quadrature(mu: float, T: float, spec: QuadSpec | None = None) -> float:
    """``(2 pi)**-2 int (exp((p**2 - mu) / T) - 1)**-1 d^2p`` by quadrature (needs ``mu < 0``)."""
    if not mu < 0:
        raise PositiveMu("the 2D Bose integral converges only for mu < 0")
    f = lambda p: 1.0 / np.expm1((np.asarray(p) ** 2 - mu) / T)
    # beyond 20 sqrt(T) the integrand is below exp(-400)
    return integrate_radial_2d(f, 0.0, 20.0 * math.sqrt(T), spec, scale=math.sqrt(T)).value


def rho_fc_quadrature(T: float, spec: QuadSpec | None = None) -> float:
    """``(2 pi)**-3 int (exp(p**2 / T) - 1)**-1 d^3p`` by radial quadrature."""
    if not T > 0:
        raise ValueError("T must be positive")
    spec = spec or DEFAULT_SPEC
    # p**2 / expm1(p**2 / T) -> T at the origin
    f = lambda p: T if p == 0 else p * p / math.expm1(p * p / T)
    top = 20.0 * math.sqrt(T)
    val = integrate_interval(f, 0.0, top, spec, points=[math.sqrt(T), 4.0 * math.sqrt(T)]).value
    return 4.0 * PI * val / (2.0 * PI) ** 3


def ideal_gas_3d(T: float, rho: float) -> tuple[float, float]:
    """``(F0(T, rho), rho_fc(T))`` for the 3D ideal Bose gas.

    ``rho_fc = zeta(3/2) (T / 4 pi)**(3/2)``.  ``F0`` is the supremum over
    ``mu <= 0`` of ``mu rho - T (T / 4 pi)**(3/2) Li_{5/2}(e**(mu/T))``; the
    maximiser solves ``rho = (T / 4 pi)**(3/2) Li_{3/2}(e**(mu/T))`` and sits at
    ``mu = 0`` once ``rho >= rho_fc``.
    """
    if not (T > 0 and rho > 0):
        raise ValueError("T and rho must be positive")
    lam = (T / (4.0 * PI)) ** 1.5
    rho_fc = ZETA_3_2 * lam
    if rho >= rho_fc:
        return -T * lam * ZETA_5_2, rho_fc
    target = rho / lam

    def f(x):
        return polylog_exp(1.5, x) - target

    hi = 0.0
    lo = -1.0
    while f(lo) > 0:
        lo *= 2.0
    if f(hi - 1e-300) < 0 and target >= ZETA_3_2:
        x = 0.0
    else:
        x = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=1e-15)
    mu = T * x
    return mu * rho - T * lam * polylog_exp(2.5, x), rho_fc


def critical_temperature_2d(rho: float, b: float, xi: float = 14.4) -> float:
    """``T_c = 4 pi rho / ln(xi / (4 pi b))`` (leading term only).

    Raises
    ------
    LogDomain
        If ``xi <= 4 pi b``.
    """
    if not (rho > 0 and 0 < b < 1 and xi > 0):
        raise ValueError("need rho > 0, 0 < b < 1, xi > 0")
    if xi <= 4.0 * PI * b:
        raise LogDomain(f"xi = {xi} must exceed 4 pi b = {4 * PI * b:.6g}")
    return 4.0 * PI * rho / math.log(xi / (4.0 * PI * b))
