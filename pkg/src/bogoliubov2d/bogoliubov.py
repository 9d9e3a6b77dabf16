"""Bogoliubov free-energy functional on translation-invariant quasi-free states in 2D.

States are described by radial profiles ``gamma(p) >= 0`` and ``alpha(p)`` with
``alpha**2 <= gamma (gamma + 1)`` plus a condensate density ``rho0``.  The
simplified functional is minimised by an explicit family parametrised by
``(rho0, delta, t0, T)``; this module evaluates that family, its energy, the
full canonical functional on it and the error terms separating the two.

Scaled variables
----------------
With ``sigma = rho0 b`` the momentum is written ``p = sqrt(sigma) k`` and
``delta = d sigma``.  In these units ``(rho0 + t0) V^w(p) = sigma c(k)`` with
``c(k) = 8 pi (1 + t0 / rho0) V^w(sqrt(sigma) k) / (8 pi b)``, and the
dispersion is ``T G = sigma Y(k)``, ``Y = sqrt((k**2 + d)**2 + 2 (k**2 + d) c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize, special

from .constants import FOUR_PI_SQ, PI, TWO_PI
from .errors import ConstraintViolated, DomainViolation, NonConvergence, SplitMismatch
from .logft import build_phi_hat
from .quadrature import DEFAULT_SPEC, QuadSpec, RadialFunction, RadialGrid, integrate_radial_2d
from .scattering import j0m1

__all__ = [
    "CanonicalBreakdown",
    "Diagnostics",
    "FsBreakdown",
    "MinimizationResult",
    "MinimizerState",
    "ThermoPoint",
    "dispersion_G",
    "dispersion_tg",
    "entropy_density",
    "error_diagnostics",
    "fcan_energy",
    "fs_energy",
    "fsim_energy",
    "minimize_fsim",
    "minimizer_profiles",
    "momentum_grid",
    "rho_gamma",
    "solve_rho0",
]

D_MAX = 1e3


@dataclass(frozen=True)
class ThermoPoint:
    """Total density, temperature and interaction strength ``nu = V^(0) / b``."""

    rho: float
    temperature: float = 0.0
    nu: float = 8.0 * PI
    b: float = 0.01

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")
        if not (self.nu > 0 and 0 < self.b < 1):
            raise ValueError("need nu > 0 and 0 < b < 1")

    @property
    def vhat0(self) -> float:
        return self.nu * self.b

    @classmethod
    def from_solution(cls, sol, temperature: float = 0.0, nu: float | None = None) -> "ThermoPoint":
        """Thermodynamic point at the solution's reference density."""
        return cls(sol.rho_ref, temperature, sol.vhat0 / sol.b if nu is None else nu, sol.b)


@dataclass(frozen=True)
class MinimizerState:
    """Parameters of the explicit minimiser family of the simplified functional.

    ``d`` is dimensionless; the dispersion shift is ``delta = d rho0 b``.
    """

    rho0: float
    d: float = 0.0
    t0: float = 0.0
    temperature: float = 0.0
    profile: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.profile is None:
            raise ValueError("a scattering profile is required")
        if self.rho0 < 0 or self.d < 0 or self.temperature < 0:
            raise ValueError("rho0, d and temperature must be non-negative")
        if not -self.rho0 - 1e-15 * self.rho0 <= self.t0 <= 0:
            raise ValueError("t0 must lie in [-rho0, 0]")

    @property
    def b(self) -> float:
        return self.profile.b

    @property
    def s(self) -> float:
        """``rho0 b``."""
        return self.rho0 * self.b

    @property
    def delta(self) -> float:
        return self.d * self.s

    @property
    def rho_prime(self) -> float:
        return self.rho0 + self.t0

    @property
    def sigma(self) -> float:
        """Momentum-squared scale of the scaled variables."""
        if self.s > 0:
            return self.s
        return self.temperature if self.temperature > 0 else 1.0

    def replace(self, **changes) -> "MinimizerState":
        return replace(self, **changes)

    # scaled ingredients ------------------------------------------------------
    def c_scaled(self, k):
        sig = self.sigma
        return self.rho_prime * 8.0 * PI * self.b * self.profile.profile_t(k, sig) / sig

    def parts_scaled(self, k):
        """``(u, c, X, Y)`` with ``u = k**2 + d`` in scaled units."""
        k = np.asarray(k, dtype=float)
        u = k * k + self.delta / self.sigma
        c = self.c_scaled(k)
        Y = np.sqrt(u * u + 2.0 * u * c)
        return u, c, u + c, Y


# -- pointwise quantities --------------------------------------------------------

def entropy_density(gamma, alpha, *, tol: float = 1e-12):
    """``s(beta) = (beta + 1/2) ln(beta + 1/2) - (beta - 1/2) ln(beta - 1/2)``.

    ``beta = sqrt((1/2 + gamma)**2 - alpha**2)``; ``beta - 1/2`` is formed as
    ``(gamma + gamma**2 - alpha**2) / (beta + 1/2)`` to keep pure states exact.

    Raises
    ------
    DomainViolation
        If ``alpha**2 > gamma (gamma + 1)`` beyond ``tol (1 + gamma)**2``.
    """
    g = np.asarray(gamma, dtype=float)
    a = np.asarray(alpha, dtype=float)
    if np.any(g < 0):
        raise DomainViolation("gamma must be non-negative")
    excess = g * (g + 1.0) - a * a
    if np.any(excess < -tol * (1.0 + g) ** 2):
        raise DomainViolation("alpha**2 exceeds gamma (gamma + 1)")
    excess = np.maximum(excess, 0.0)
    # (1/2 + gamma)**2 - alpha**2 = 1/4 + excess
    beta = np.sqrt(0.25 + excess)
    bm = excess / (beta + 0.5)
    bp = bm + 1.0
    out = special.xlogy(bp, bp) - special.xlogy(bm, bm)
    return out if out.ndim else float(out)


def _unscaled_parts(p, st: MinimizerState):
    p = np.asarray(p, dtype=float)
    u = p * p + st.delta
    c = st.rho_prime * st.profile.vwhat(p)
    Y = np.sqrt(u * u + 2.0 * u * c)
    return u, c, u + c, Y


def dispersion_tg(p, st: MinimizerState):
    """``T G(p) = sqrt((p**2 + delta)**2 + 2 (p**2 + delta)(rho0 + t0) V^w(p))``."""
    return _unscaled_parts(p, st)[3]


def dispersion_G(p, st: MinimizerState):
    """``G(p)``; requires ``T > 0`` (use :func:`dispersion_tg` at ``T = 0``)."""
    if st.temperature <= 0:
        raise ValueError("G is defined for T > 0 only; use dispersion_tg")
    return dispersion_tg(p, st) / st.temperature


def _gamma_alpha(X, Y, c, tg_over_T=None):
    """Pointwise profiles from ``X = u + c``, ``Y = T G``; ``tg_over_T = G`` if ``T > 0``."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        pure = c * c / (2.0 * Y * (X + Y))
        if tg_over_T is None:
            return pure, -c / (2.0 * Y)
        occ = 1.0 / np.expm1(tg_over_T)
        return X * occ / Y + pure, -c * (occ + 0.5) / Y


def minimizer_profiles(st: MinimizerState) -> tuple[RadialFunction, RadialFunction]:
    """``(gamma, alpha)`` of the explicit minimiser family as radial functions.

    At ``T = 0`` the limits ``beta -> 1/2`` are taken analytically:
    ``gamma = c**2 / (2 Y (X + Y))`` and ``alpha = -c / (2 Y)`` with
    ``c = (rho0 + t0) V^w``, ``X = p**2 + delta + c`` and ``Y = T G``.
    """
    T = st.temperature

    def both(p):
        _, c, X, Y = _unscaled_parts(p, st)
        return _gamma_alpha(X, Y, c, None if T == 0 else Y / T)

    scale = math.sqrt(st.sigma)
    gamma = RadialFunction(lambda p: both(p)[0], scale=scale, origin="inverse")
    alpha = RadialFunction(lambda p: both(p)[1], scale=scale, origin="inverse")
    return gamma, alpha


def _k_top(st: MinimizerState) -> float:
    p_cut = getattr(st.profile, "p_cut", None)
    return math.inf if p_cut is None else p_cut / math.sqrt(st.sigma)


def _scaled_integral(f, lo, hi, spec, tail_order=4, points=()):
    """``(2 pi)**-1 int_lo^hi f(k) k dk`` in scaled units (finite or infinite ``hi``)."""
    spec = spec.replace(tail_order=tail_order)
    return integrate_radial_2d(f, lo, hi, spec, scale=1.0, points=points).value


def rho_gamma(st: MinimizerState, spec: QuadSpec | None = None) -> float:
    """``rho_gamma = (2 pi)**-2 int gamma(p) dp`` for the minimiser family.

    The integrand decays like ``p**-4``; the tail beyond the numerical cutoff is
    closed analytically.  At ``T > 0`` the thermal part is integrable only for
    ``delta > 0`` (2D Bose gas).
    """
    spec = spec or DEFAULT_SPEC
    if st.rho_prime == 0 and st.temperature == 0:
        return 0.0
    if st.temperature > 0 and st.rho_prime == 0 and st.delta == 0:
        raise DomainViolation("the free 2D Bose gas at delta = 0 has infinite density")
    T_hat = st.temperature / st.sigma

    def g(k):
        _, c, X, Y = st.parts_scaled(k)
        return _gamma_alpha(X, Y, c, None if T_hat == 0 else Y / T_hat)[0]

    return st.sigma * _scaled_integral(g, 0.0, _k_top(st), spec)


# -- simplified functional ---------------------------------------------------------

@dataclass(frozen=True)
class FsBreakdown:
    """Pieces of ``F^s + delta rho_gamma`` for the minimiser family.

    ``total = i1 + i_less + i_greater + split_correction + thermal`` and
    ``fs = total - delta_rho_gamma``.  ``i1`` collects the counterterm inside the
    split radius, ``i_less`` the square-root integral inside it and
    ``i_greater`` both outside it.
    """

    i1: float
    i_less: float
    i_greater: float
    thermal: float
    split_correction: float
    rho_gamma: float
    delta_rho_gamma: float
    split_radius: float

    @property
    def total(self) -> float:
        return self.i1 + self.i_less + self.i_greater + self.split_correction + self.thermal

    @property
    def fs(self) -> float:
        return self.total - self.delta_rho_gamma


def _sqrt_difference(u, c, X, Y):
    """``Y - X = -c**2 / (X + Y)``."""
    return -c * c / (X + Y)


def _regularised_tail(k, u, c, X, Y, d):
    """``(Y - X) + c**2 / (2 k**2)`` without cancellation."""
    k2 = k * k
    s = (d + c) + (2.0 * k2 * d + d * d + 2.0 * c * u) / (Y + k2)
    return c * c * s / (2.0 * k2 * (X + Y))


def _fs_parts(st: MinimizerState, spec: QuadSpec, split: float):
    sig = st.sigma
    L = split / math.sqrt(sig)
    d_hat = st.delta / sig
    rp = st.rho_prime
    prof = st.profile
    k_top = _k_top(st)
    if rp == 0:
        i_less = i_greater = i1 = corr = 0.0
    else:
        def low(k):
            return _sqrt_difference(*st.parts_scaled(k))

        def high(k):
            u, c, X, Y = st.parts_scaled(k)
            return _regularised_tail(np.asarray(k, dtype=float), u, c, X, Y, d_hat)

        # (2 pi)**-1 int 1/2 (Y - X) p dp = sigma**2 / 2 * (2 pi)**-1 int (Y^ - X^) k dk
        i_less = 0.5 * sig**2 * _scaled_integral(low, 0.0, L, spec)
        i_greater = 0.5 * sig**2 * _scaled_integral(high, L, k_top, spec) if L < k_top else 0.0
        vw0 = prof.vwhat0
        if getattr(prof, "is_idealized", False):
            i1 = 0.0
        else:
            # rho'^2 / (8 pi) int_0^L (V^w^2 - V^w(0)^2) / k dk
            def ct(k):
                k = np.asarray(k, dtype=float)
                dm = 8.0 * PI * prof.b * prof.profile_t_minus1(k, sig)
                return dm * (dm + 2.0 * vw0) / (k * k)

            i1 = rp * rp / 4.0 * _scaled_integral(ct, 0.0, L, spec)
        corr = rp * rp * vw0 * vw0 / (8.0 * PI) * math.log(split / prof.epsilon)
    thermal = 0.0
    T = st.temperature
    if T > 0:
        T_hat = T / sig

        def th(k):
            Y = st.parts_scaled(k)[3]
            with np.errstate(divide="ignore"):
                return np.log(-np.expm1(-Y / T_hat))

        thermal = T * sig * _scaled_integral(th, 0.0, math.inf, spec, tail_order=40)
    return i1, i_less, i_greater, thermal, corr


def fs_energy(
    st: MinimizerState,
    spec: QuadSpec | None = None,
    *,
    split: float | None = None,
    check_split: bool = False,
    split_tol: float = 1e-8,
    breakdown: bool = False,
):
    """``F^s + delta rho_gamma`` at the minimiser family (the closed-form minimum).

    The square-root integral and the counterterm are assembled around the split
    radius (``epsilon`` by default) so that each piece converges separately.
    Moving the split only reshuffles the pieces; ``check_split`` recomputes at
    ``1.5 * split`` and raises :class:`SplitMismatch` if the totals differ by
    more than ``split_tol`` relative.  At ``T = 0`` the entropy term is absent.
    """
    spec = spec or DEFAULT_SPEC
    split = st.profile.epsilon if split is None else split
    parts = _fs_parts(st, spec, split)
    rg = rho_gamma(st, spec) if (st.rho_prime != 0 or st.temperature > 0) else 0.0
    out = FsBreakdown(*parts, rg, st.delta * rg, split)
    if check_split:
        other = FsBreakdown(*_fs_parts(st, spec, 1.5 * split), rg, st.delta * rg, 1.5 * split)
        scale = max(abs(out.total), st.rho_prime**2 * st.b**2, spec.abs_tol)
        if abs(other.total - out.total) > split_tol * scale:
            raise SplitMismatch(
                f"split at {split:.4g} gives {out.total:.12g}, at {1.5 * split:.4g} gives {other.total:.12g}"
            )
    return out if breakdown else out.total


def fsim_energy(
    tp: ThermoPoint,
    st: MinimizerState,
    spec: QuadSpec | None = None,
    *,
    constraint_tol: float = 1e-9,
    fs: FsBreakdown | None = None,
) -> float:
    """Simplified functional on the minimiser family.

    ``F^sim = F^s + 4 pi b (rho0 + t0)(3 rho0 - 2 rho - t0) + V^(0)(rho**2 - rho0**2)``
    with ``V^(0) = tp.nu * tp.b`` and ``b`` taken from the state's profile.

    Raises
    ------
    ConstraintViolated
        If ``rho0 + rho_gamma`` differs from ``tp.rho`` by more than
        ``constraint_tol * rho``.
    """
    spec = spec or DEFAULT_SPEC
    fs = fs or fs_energy(st, spec, breakdown=True)
    if abs(st.rho0 + fs.rho_gamma - tp.rho) > constraint_tol * tp.rho:
        raise ConstraintViolated(
            f"rho0 + rho_gamma = {st.rho0 + fs.rho_gamma:.15g} but rho = {tp.rho:.15g}"
        )
    b = st.b
    rp = st.rho_prime
    return (
        fs.fs
        + 4.0 * PI * b * rp * (3.0 * st.rho0 - 2.0 * tp.rho - st.t0)
        + tp.vhat0 * (tp.rho**2 - st.rho0**2)
    )


def solve_rho0(tp: ThermoPoint, d: float, profile, spec: QuadSpec | None = None, *, t0_fraction: float = 0.0) -> MinimizerState:
    """Condensate density with ``rho0 + rho_gamma(rho0, d) = rho`` by Brent's method.

    ``rho_gamma`` is continuous and increasing in ``rho0``, so the root in
    ``(0, rho]`` is unique.  ``t0 = -t0_fraction * rho0``.
    """
    spec = spec or DEFAULT_SPEC

    def state(r0):
        return MinimizerState(r0, d, -t0_fraction * r0, tp.temperature, profile)

    def f(r0):
        return (r0 + rho_gamma(state(r0), spec)) / tp.rho - 1.0

    hi = tp.rho
    lo = tp.rho * 1e-6
    while f(lo) > 0:
        lo *= 1e-3
        if lo < 1e-300:
            raise NonConvergence("no condensate density satisfies the constraint")
    r0 = optimize.brentq(f, lo, hi, xtol=1e-15 * tp.rho, rtol=4 * np.finfo(float).eps, maxiter=200)
    return state(r0)


@dataclass(frozen=True)
class MinimizationResult:
    d_star: float
    rho0: float
    f_min: float
    rho_gamma: float
    state: MinimizerState
    evaluations: int


def minimize_fsim(
    tp: ThermoPoint,
    profile,
    spec: QuadSpec | None = None,
    *,
    d_max: float = D_MAX,
    t0_fraction: float = 0.0,
    scan: int = 24,
    xtol: float = 1e-7,
) -> MinimizationResult:
    """Minimise ``F^sim`` over ``d in [0, d_max]`` with the constraint solved in ``rho0``.

    A coarse scan in ``sqrt(d)`` brackets the minimum, a bounded Brent search
    refines it, and the boundary ``d = 0`` is always compared.
    """
    spec = spec or DEFAULT_SPEC
    cache: dict[float, tuple[float, MinimizerState]] = {}

    def energy(d):
        d = float(d)
        if d not in cache:
            st = solve_rho0(tp, d, profile, spec, t0_fraction=t0_fraction)
            cache[d] = (fsim_energy(tp, st, spec), st)
        return cache[d][0]

    roots = np.concatenate([np.linspace(0.0, 3.0, scan), np.geomspace(3.5, math.sqrt(d_max), 6)])
    vals = [energy(x * x) for x in roots]
    i = int(np.argmin(vals))
    if i == 0:
        lo, hi = roots[0], roots[1]
    else:
        lo, hi = roots[i - 1], roots[min(i + 1, roots.size - 1)]
    res = optimize.minimize_scalar(lambda x: energy(x * x), bounds=(lo, hi), method="bounded", options={"xatol": xtol})
    best = min(cache, key=lambda d: cache[d][0])
    f_min, st = cache[best]
    return MinimizationResult(best, st.rho0, f_min, tp.rho - st.rho0, st, len(cache))


# -- canonical functional ------------------------------------------------------------

def momentum_grid(profile, scales=(), *, p_lo: float | None = None, order: int = 12, log_width: float = 0.25):
    """Composite Gauss-Legendre momentum grid for the canonical double integrals.

    Log-spaced panels run from ``p_lo`` (default ``1e-10`` times the smallest
    scale) to ``2 / R``; uniform panels of width ``0.5 / R`` continue to
    ``200 / R`` where the Fourier profiles have decayed below 1e-9 of their
    ``p = 0`` values.  The listed ``scales`` and ``epsilon`` become panel edges.
    """
    R = profile.R
    marks = [profile.epsilon] + [x for x in scales if x > 0]
    lo = p_lo if p_lo is not None else 1e-10 * min(marks)
    return RadialGrid(
        lo,
        200.0 / R,
        breakpoints=marks,
        log_width=log_width,
        order=order,
        p_lin=2.0 / R,
        lin_width=0.5 / R,
    )


class _Hankel:
    """``A(r) = int e^{i p x} f(p) dp = 2 pi int J0(p r) f(p) p dp`` on the potential's radial nodes."""

    def __init__(self, profile, grid: RadialGrid, n_panels: int = 64, order: int = 16):
        R = profile.R
        x, w = np.polynomial.legendre.leggauss(order)
        edges = np.linspace(0.0, R, n_panels + 1)
        a, b = edges[:-1, None], edges[1:, None]
        self.r = (0.5 * (b - a) * x + 0.5 * (b + a)).ravel()
        self.wr = (0.5 * (b - a) * w).ravel()
        self.v = profile.potential(self.r)
        self.grid = grid

    def transform(self, values, *, minus0=False, chunk=64):
        """Columns of ``values`` (on grid nodes) -> ``A(r)`` (or ``A(r) - A(0)``)."""
        vals = np.atleast_2d(np.asarray(values, dtype=float).T).T
        wts = (TWO_PI * self.grid.dp * self.grid.p)[:, None] * vals
        out = np.empty((self.r.size, vals.shape[1]))
        f = j0m1 if minus0 else special.j0
        for i in range(0, self.r.size, chunk):
            out[i : i + chunk] = f(np.outer(self.r[i : i + chunk], self.grid.p)) @ wts
        return out

    def pair(self, A, B):
        """``int V(x) A(x) B(x) dx = iint V^(p - q) f(p) g(q) dp dq``."""
        return float(TWO_PI * np.sum(self.wr * self.r * self.v * A * B))


@dataclass(frozen=True)
class CanonicalBreakdown:
    kinetic: float
    entropy: float
    direct: float
    linear: float
    conv_alpha: float
    conv_gamma: float
    rho_gamma: float

    @property
    def total(self) -> float:
        return self.kinetic - self.entropy + self.direct + self.linear + self.conv_alpha + self.conv_gamma


def fcan_energy(
    tp: ThermoPoint,
    gamma,
    alpha,
    rho0: float,
    spec: QuadSpec | None = None,
    *,
    sol,
    grid: RadialGrid | None = None,
    scales=(),
    breakdown: bool = False,
):
    """Canonical functional on regular radial profiles.

    ``(2pi)**-2 int p**2 gamma - T S + V^(0) rho**2 / 2 + rho0 (2pi)**-2 int V^ (gamma + alpha)
    + (2pi)**-4 / 2 iint V^(p - q)(alpha alpha + gamma gamma)``.

    The double integrals use the convolution theorem,
    ``iint V^(p - q) f(p) f(q) = int V(x) A(x)**2 dx`` with ``A`` the inverse
    Fourier transform of ``f``, evaluated on a composite Gauss-Legendre
    momentum grid and the potential's radial nodes.  ``V^(0) = tp.nu * tp.b``
    is used in the direct term, the profile's transform elsewhere.
    """
    grid = grid or momentum_grid(sol, scales)
    hk = _Hankel(sol, grid)
    p = grid.p
    g = np.asarray(gamma(p), dtype=float)
    a = np.asarray(alpha(p), dtype=float)
    if np.any(g < 0):
        raise DomainViolation("gamma must be non-negative")
    vhat = sol.vhat(p)
    kinetic = grid.integrate2d(p * p * g)
    ent = 0.0
    if tp.temperature > 0:
        ent = tp.temperature * grid.integrate2d(entropy_density(g, a))
    A = hk.transform(np.column_stack([a, g]))
    out = CanonicalBreakdown(
        kinetic=kinetic,
        entropy=ent,
        direct=0.5 * tp.vhat0 * tp.rho**2,
        linear=rho0 * grid.integrate2d(vhat * (g + a)),
        conv_alpha=0.5 * hk.pair(A[:, 0], A[:, 0]) / FOUR_PI_SQ**2,
        conv_gamma=0.5 * hk.pair(A[:, 1], A[:, 1]) / FOUR_PI_SQ**2,
        rho_gamma=grid.integrate2d(g),
    )
    return out if breakdown else out.total


@dataclass(frozen=True)
class Diagnostics:
    """Error terms between the canonical and simplified functionals.

    ``e1`` .. ``e4`` are signed values; ``a1_less`` and ``a1_greater`` are the
    two halves of ``int |alpha~|`` (2D measure, no ``(2 pi)`` factors);
    ``a1_bound = rho0**2 V^(0) (a1_less + a1_greater)**2``;
    ``a23_bound = rho0**2 epsilon a``.  ``orders`` holds the reference
    magnitudes ``rho**2 b**2``, ``b ln(1/b)`` and ``rho**2 b**3 ln(1/b)**2``.
    """

    e1: float | None
    e2: float
    e3: float
    e4: float
    a1_less: float
    a1_greater: float
    a1_bound: float
    a1_direct: float | None
    a23_bound: float
    orders: dict
    alpha0_self: float | None = None
    fcan: float | None = None
    fsim: float | None = None

    @property
    def e_sum(self) -> float:
        return (self.e1 or 0.0) + self.e2 + self.e3 + self.e4

    @property
    def decomposition_residual(self) -> float | None:
        if self.fcan is None or self.fsim is None or self.e1 is None:
            return None
        return self.fcan - self.fsim - self.e_sum


def _a1_pieces(st: MinimizerState, spec: QuadSpec) -> tuple[float, float]:
    """Scaled ``A1^<`` and ``A1^>`` (``b int 8 pi t / (2 Y)`` and its regularised tail)."""
    sig = st.sigma
    L = st.profile.epsilon / math.sqrt(sig)
    d_hat = st.delta / sig
    ratio = st.rho0 / st.rho_prime if st.rho_prime else 0.0

    def inner(k):
        # rho0-normalised alpha~ magnitude: (8 pi t) / (2 Y)
        _, c, _, Y = st.parts_scaled(k)
        return 0.5 * c * ratio / Y

    def outer(k):
        k = np.asarray(k, dtype=float)
        u, c, X, Y = st.parts_scaled(k)
        c0 = c * ratio
        # 1/(2 k**2) - 1/(2 Y) = (Y - k**2) / (2 k**2 Y)
        ym = (2.0 * k * k * d_hat + d_hat * d_hat + 2.0 * c * u) / (Y + k * k)
        return np.abs(0.5 * c0 * ym / (k * k * Y))

    # b * int d^2k = b * (2 pi)**2 * (2 pi)**-1 int k dk
    a_less = st.b * FOUR_PI_SQ * _scaled_integral(inner, 0.0, L, spec)
    a_greater = st.b * FOUR_PI_SQ * _scaled_integral(outer, L, _k_top(st), spec)
    return a_less, a_greater


def error_diagnostics(
    tp: ThermoPoint,
    st: MinimizerState,
    spec: QuadSpec | None = None,
    *,
    grid: RadialGrid | None = None,
    with_decomposition: bool = True,
) -> Diagnostics:
    """``E1``..``E4`` on the minimiser family and the ``A1`` estimates.

    ``E2``..``E4`` are evaluated from their definitions; ``E4`` uses
    ``iint V^(p - q) gamma gamma - V^(0) ((2pi)**2 rho_gamma)**2 = int V (A - A0)(A + A0)``
    so the leading cancellation happens analytically.  ``E1`` contains the
    delta component of ``alpha0`` and is expanded as
    ``E1 = D_aa / (2 (2pi)**4) - (2pi)**-2 int alpha g + alpha0(g) / (2 (2pi)**2)``
    with ``g = (rho0 + t0) V^w - rho0 V^`` and
    ``alpha0(g) = (2pi)**2 t0 g(0) - (rho0 + t0) phi^(g)``.  For the idealized
    profile (no potential in real space) only ``E2``..``E4`` (identically 0)
    and the ``A1`` pieces are returned.
    """
    spec = spec or DEFAULT_SPEC
    prof = st.profile
    b = st.b
    orders = {
        "rho2_b2": tp.rho**2 * b**2,
        "b_ln_inv_b": b * math.log(1.0 / b),
        "rho2_b3_ln2": tp.rho**2 * b**3 * math.log(1.0 / b) ** 2,
    }
    a_less, a_greater = _a1_pieces(st, spec)
    a1_bound = st.rho0**2 * prof.vhat0 * (a_less + a_greater) ** 2
    a23 = st.rho0**2 * prof.epsilon * prof.a
    if getattr(prof, "is_idealized", False):
        return Diagnostics(None, 0.0, 0.0, 0.0, a_less, a_greater, a1_bound, None, a23, orders)

    sig = st.sigma
    grid = grid or momentum_grid(prof, (math.sqrt(sig),))
    hk = _Hankel(prof, grid)
    gam, alp = minimizer_profiles(st)
    p = grid.p
    g = gam(p)
    a = alp(p)
    rg = grid.integrate2d(g)
    rp = st.rho_prime
    e2 = st.rho0 * grid.integrate2d(prof.vhat_minus0(p) * g)
    e3 = -rp * grid.integrate2d(prof.vwhat_minus0(p) * g)
    dA = hk.transform(g, minus0=True)[:, 0]
    A0 = FOUR_PI_SQ * rg
    e4 = 0.5 * hk.pair(dA, dA + 2.0 * A0) / FOUR_PI_SQ**2

    # alpha~ = -V^w / (2 Y) + chi_{p > eps} V^w / (2 p**2), per unit rho0
    vw = prof.vwhat(p)
    Y = dispersion_tg(p, st)
    at = -vw / (2.0 * Y) + np.where(p > prof.epsilon, vw / (2.0 * p * p), 0.0)
    At = hk.transform(at)[:, 0]
    a1_direct = st.rho0**2 * hk.pair(At, At)

    e1 = alpha0_self = fcan = fsim = None
    if with_decomposition:
        Aa = hk.transform(a)[:, 0]
        gfun = lambda q: rp * prof.vwhat(q) - st.rho0 * prof.vhat(q)
        gm0 = lambda q: rp * prof.vwhat_minus0(q) - st.rho0 * prof.vhat_minus0(q)
        g0 = rp * prof.vwhat0 - st.rho0 * prof.vhat0
        phi_g = build_phi_hat(prof).action(gfun, spec, phi_minus0=gm0)
        alpha0_g = FOUR_PI_SQ * st.t0 * g0 - rp * phi_g
        alpha0_self = 0.5 * alpha0_g / FOUR_PI_SQ
        e1 = 0.5 * hk.pair(Aa, Aa) / FOUR_PI_SQ**2 - grid.integrate2d(a * gfun(p)) + alpha0_self
        rho = st.rho0 + rg
        tp_c = replace(tp, rho=rho)
        fcan = fcan_energy(tp_c, gam, alp, st.rho0, spec, sol=prof, grid=grid)
        fs = fs_energy(st, spec, breakdown=True)
        fsim = fsim_energy(tp_c, st, spec, fs=replace(fs, rho_gamma=rg), constraint_tol=1e-6)
    return Diagnostics(e1, e2, e3, e4, a_less, a_greater, a1_bound, a1_direct, a23, orders, alpha0_self, fcan, fsim)
