"""Zero-energy scattering in two dimensions and the Fourier profiles built on it.

Units are hbar = 2m = 1.  For a radial potential ``V >= 0`` supported in
``r < R`` the zero-energy solution ``w0`` of ``-Lap w0 + V w0 / 2 = 0`` is
regular at the origin and equals ``ln(r / a)`` outside the support, which
defines the 2D scattering length ``a``.  At a reference density ``rho`` the
dilute parameter is ``b = 1 / |ln(rho a**2)|`` and ``w = 2 b w0``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import special
from scipy.integrate import solve_ivp

from .constants import EPS_PREFACTOR, EULER_GAMMA, PI, TWO_PI
from .errors import DensityTooHigh, FitDegenerate, InvalidPotential, NoLogAsymptote, NonConvergence
from .quadrature import DEFAULT_SPEC, QuadSpec, RadialFunction

__all__ = [
    "IdealizedProfile",
    "PotentialSpec",
    "ScatteringSolution",
    "check_curvature",
    "fourier_radial",
    "j0m1",
    "solve_scattering",
]


def j0m1(x):
    """``J0(x) - 1`` without cancellation for small ``x``."""
    x = np.asarray(x, dtype=float)
    out = special.j0(x) - 1.0
    small = np.abs(x) < 0.5
    if np.any(small):
        q = -0.25 * x[small] ** 2
        term = q.copy()
        acc = term.copy()
        for k in range(2, 10):
            term = term * q / (k * k)
            acc += term
        out[small] = acc
    return out


def _bump_shape(x):
    """``exp(-1 / (1 - x**2))`` for ``|x| < 1``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


def _smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        f0 = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        f1 = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return f0 / (f0 + f1)


@dataclass(frozen=True)
class PotentialSpec:
    """Radial, non-negative potential supported in ``r < support_radius``.

    Use the constructors :meth:`bump`, :meth:`smoothed_disc`,
    :meth:`from_table` and :meth:`from_file` rather than building one by hand;
    they validate the profile.
    """

    v: Callable
    support_radius: float
    smoothness_note: str = ""
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.support_radius > 0:
            raise InvalidPotential("support radius must be positive")
        r = np.linspace(0.0, self.support_radius, 2001)
        vals = np.asarray(self.v(r), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise InvalidPotential("potential is not finite on [0, R]")
        if np.any(vals < 0):
            i = int(np.argmin(vals))
            raise InvalidPotential(f"potential is negative: V({r[i]:.4g}) = {vals[i]:.4g}")
        if not np.any(vals > 0):
            raise InvalidPotential("potential vanishes identically")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r < self.support_radius, self.v(r), 0.0)

    @classmethod
    def bump(cls, amplitude: float = 10.0, radius: float = 1.0) -> "PotentialSpec":
        """``amplitude * exp(-1 / (1 - (r / radius)**2))`` inside ``radius``."""
        if amplitude <= 0 or radius <= 0:
            raise InvalidPotential("bump amplitude and radius must be positive")
        return cls(
            lambda r: amplitude * _bump_shape(np.asarray(r) / radius),
            radius,
            "C-infinity bump",
            {"kind": "bump", "amplitude": amplitude, "radius": radius},
        )

    @classmethod
    def smoothed_disc(cls, height: float = 1.0, radius: float = 1.0, width: float = 0.2) -> "PotentialSpec":
        """Height ``height`` on ``r < radius - width``, smooth fall-off to 0 at ``radius``."""
        if not (height > 0 and 0 < width < radius):
            raise InvalidPotential("need height > 0 and 0 < width < radius")
        return cls(
            lambda r: height * _smooth_step((radius - np.asarray(r)) / width),
            radius,
            "smoothed disc",
            {"kind": "disc", "height": height, "radius": radius, "width": width},
        )

    @classmethod
    def from_table(cls, r, v, mollify: float = 0.02, n_fine: int = 4096) -> "PotentialSpec":
        """Tabulated ``(r, V)`` pairs, linearly interpolated and then mollified.

        The support radius is the last tabulated radius.  The mollifier is a
        normalised bump of half-width ``mollify * R`` applied to the even
        extension of the interpolant; the result is tapered smoothly to zero
        over the last ``mollify * R`` so that it vanishes at ``R``.
        """
        r = np.asarray(r, dtype=float)
        v = np.asarray(v, dtype=float)
        if r.ndim != 1 or r.shape != v.shape or r.size < 2:
            raise InvalidPotential("table needs matching 1D r and V columns with >= 2 rows")
        if np.any(np.diff(r) <= 0) or r[0] < 0:
            raise InvalidPotential("table radii must be non-negative and strictly increasing")
        if np.any(v < 0):
            raise InvalidPotential("tabulated potential has negative entries")
        R = float(r[-1])
        grid = np.linspace(0.0, R, n_fine)
        base = np.interp(grid, r, v, left=v[0], right=0.0)
        h = grid[1] - grid[0]
        half = max(1, int(round(mollify * R / h)))
        kernel = _bump_shape(np.linspace(-1.0, 1.0, 2 * half + 1)[1:-1])
        kernel /= kernel.sum()
        padded = np.concatenate([base[half - 1:0:-1], base, np.zeros(half)])
        smooth = np.convolve(padded, kernel, mode="valid")[: grid.size]
        smooth *= _smooth_step((R - grid) / (mollify * R))
        smooth = np.maximum(smooth, 0.0)
        return cls(
            lambda x: np.interp(x, grid, smooth, right=0.0),
            R,
            "tabulated, linear + mollified",
            {"kind": "table", "mollify": mollify},
        )

    @classmethod
    def from_file(cls, path, **kwargs) -> "PotentialSpec":
        """Read a whitespace- or comma-separated two-column text table."""
        text = Path(path).read_text()
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append([float(x) for x in line.replace(",", " ").split()[:2]])
        data = np.asarray(rows)
        if data.ndim != 2 or data.shape[1] != 2:
            raise InvalidPotential(f"{path}: expected two numeric columns")
        spec = cls.from_table(data[:, 0], data[:, 1], **kwargs)
        spec.params["path"] = str(path)
        return spec

    def scaled(self, lam: float) -> "PotentialSpec":
        """``V_lam(r) = lam**2 V(lam r)``, whose scattering length is ``a / lam``."""
        if lam <= 0:
            raise InvalidPotential("scale factor must be positive")
        v = self.v
        return PotentialSpec(
            lambda r: lam**2 * v(lam * np.asarray(r)),
            self.support_radius / lam,
            self.smoothness_note,
            dict(self.params, scale=lam),
        )


class _NodeTransform:
    """Bessel transform ``2 pi int_0^R J0(p r) g(r) r dr`` on fixed GL nodes."""

    def __init__(self, r, weights):
        self.r = r
        self.weights = weights

    def __call__(self, p, *, minus0=False, chunk=256):
        p = np.asarray(p, dtype=float)
        flat = p.ravel()
        out = np.empty_like(flat)
        f = j0m1 if minus0 else special.j0
        for i in range(0, flat.size, chunk):
            pc = flat[i : i + chunk]
            out[i : i + chunk] = f(np.outer(pc, self.r)) @ self.weights
        return out.reshape(p.shape)

    @property
    def at0(self):
        return float(self.weights.sum())

    def moment(self, k):
        """``2 pi int g r**(k+1) dr``."""
        return float(np.dot(self.weights, self.r**k))


@dataclass(frozen=True)
class ScatteringSolution:
    """Result of :func:`solve_scattering` at a reference density.

    Attributes
    ----------
    a, rho_ref, b, epsilon : float
        Scattering length, reference density, ``1 / |ln(rho_ref a**2)|`` and
        the momentum cutoff ``2 exp(-EULER_GAMMA - 1 / (2 b)) / a``.
    slope, offset : float
        ``u = slope * ln r + offset`` outside the support for the unnormalised
        ODE solution ``u`` with ``u(0) = 1``.
    fit_residual : float
        Max deviation of ``w0`` from ``ln(r / a)`` on the fit window.
    identity_residual : float
        ``(1/2) int V w0 d^2x - 2 pi``.
    curvature_v, curvature_vw0 : float
        ``C`` in ``f(p) = f(0) + C a**2 p**2 + ...`` for ``V^`` and for the
        density-independent ``(V w0)^``; ``curvature_vw = 2 b curvature_vw0``
        is the coefficient for ``V^w`` at the current density.
    vhat_bounded, vhat_nonnegative : bool
        Whether ``V^(p) <= V^(0)`` and ``V^(p) >= 0`` on a sample grid.
    """

    potential: PotentialSpec
    a: float
    rho_ref: float
    slope: float
    offset: float
    fit_residual: float
    identity_residual: float
    _ode: object = field(repr=False)
    _v_t: _NodeTransform = field(repr=False)
    _vw0_t: _NodeTransform = field(repr=False)
    curvature_v: float = math.nan
    curvature_vw0: float = math.nan
    vhat_bounded: bool = True
    vhat_nonnegative: bool = True
    is_idealized = False

    def __post_init__(self):
        if self.rho_ref * self.a**2 >= 1.0:
            raise DensityTooHigh(f"rho a^2 = {self.rho_ref * self.a**2:.4g} >= 1; b is undefined")

    @property
    def curvature_vw(self) -> float:
        return 2.0 * self.b * self.curvature_vw0

    @property
    def b(self) -> float:
        return 1.0 / abs(math.log(self.rho_ref * self.a**2))

    @property
    def epsilon(self) -> float:
        return 2.0 / (self.a * math.exp(EULER_GAMMA)) * math.exp(-0.5 / self.b)

    @property
    def R(self) -> float:
        return self.potential.support_radius

    def at_density(self, rho_ref: float) -> "ScatteringSolution":
        """Same scattering data at another reference density."""
        from dataclasses import replace

        return replace(self, rho_ref=rho_ref)

    def at_b(self, b: float) -> "ScatteringSolution":
        """Reference density at which the dilute parameter equals ``b``."""
        if not 0 < b < 1:
            raise ValueError("b must lie in (0, 1)")
        return self.at_density(math.exp(-1.0 / b) / self.a**2)

    # -- real-space profiles -------------------------------------------------
    def w0(self, r):
        """Normalised scattering solution, ``ln(r / a)`` for ``r >= R``."""
        scalar = np.ndim(r) == 0
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.log(np.maximum(r, 1e-300) / self.a)
        inside = r < self.R
        if np.any(inside):
            ri = r[inside]
            r0 = self._ode.t[0]
            v0 = float(self.potential(np.array([0.0]))[0])
            series = 1.0 + v0 * ri**2 / 8.0
            dense = self._ode.sol(np.maximum(ri, r0))[0]
            out[inside] = np.where(ri < r0, series, dense) / self.slope
        return float(out[0]) if scalar else out

    def w(self, r):
        return 2.0 * self.b * self.w0(r)

    # -- Fourier profiles ------------------------------------------------------
    @property
    def vhat0(self) -> float:
        return self._v_t.at0

    @property
    def vwhat0(self) -> float:
        return 2.0 * self.b * self._vw0_t.at0

    @property
    def nu(self) -> float:
        """``V^(0) / b``."""
        return self.vhat0 / self.b

    def vhat(self, p):
        return self._v_t(p)

    def vwhat(self, p):
        return 2.0 * self.b * self._vw0_t(p)

    def vhat_minus0(self, p):
        """``V^(p) - V^(0)``, accurate for small ``p``."""
        return self._v_t(p, minus0=True)

    def vwhat_minus0(self, p):
        return 2.0 * self.b * self._vw0_t(p, minus0=True)

    def profile_t(self, k, s):
        """``V^w(sqrt(s) k) / (8 pi b)`` in the scaled momentum ``k``."""
        return self._vw0_t(np.sqrt(s) * np.asarray(k)) / (4.0 * PI)

    def profile_t_minus1(self, k, s):
        return self._vw0_t(np.sqrt(s) * np.asarray(k), minus0=True) / (4.0 * PI)

    @property
    def p_cut(self) -> float:
        """Momentum beyond which ``|V^|`` and ``|V^w|`` are below ~1e-14 of their p = 0 values."""
        return 800.0 / self.R


def _gl_nodes(R, n_panels=160, order=20):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, R, n_panels + 1)
    a, b = edges[:-1, None], edges[1:, None]
    r = (0.5 * (b - a) * x + 0.5 * (b + a)).ravel()
    wr = (0.5 * (b - a) * w).ravel()
    return r, wr


def solve_scattering(
    pot: PotentialSpec,
    rho_ref: float = 1.0,
    spec: QuadSpec | None = None,
    *,
    fit_window: tuple[float, float] = (2.0, 10.0),
    fit_points: int = 64,
    fit_tol: float = 1e-8,
    r_start: float = 1e-8,
) -> ScatteringSolution:
    """Solve ``u'' + u'/r = V u / 2`` and extract the scattering length.

    The ODE is launched at ``r_start * R`` from the series
    ``u = 1 + V(0) r**2 / 8`` and integrated with DOP853 to the end of the fit
    window (in units of ``R``).  A least-squares fit of ``u = A ln r + B`` on
    ``fit_points`` radii gives ``a = exp(-B / A)`` and ``w0 = u / A``.

    Raises
    ------
    NoLogAsymptote
        If the fit residual (relative to ``A``) exceeds ``fit_tol``.
    DensityTooHigh
        If ``rho_ref * a**2 >= 1``.
    """
    spec = spec or DEFAULT_SPEC
    R = pot.support_radius
    lo_fit, hi_fit = fit_window
    if not 1.0 < lo_fit < hi_fit:
        raise ValueError("fit window must lie outside the support: 1 < lo < hi (units of R)")
    v0 = float(pot(np.array([0.0]))[0])
    r0 = r_start * R

    def rhs(r, y):
        return [y[1], 0.5 * float(pot(np.array([r]))[0]) * y[0] - y[1] / r]

    y0 = [1.0 + v0 * r0**2 / 8.0, v0 * r0 / 4.0]
    ode = solve_ivp(
        rhs,
        (r0, hi_fit * R),
        y0,
        method="DOP853",
        rtol=min(1e-12, spec.rel_tol),
        atol=1e-14,
        dense_output=True,
    )
    if not ode.success:
        raise NonConvergence(f"scattering ODE failed: {ode.message}")
    rr = np.linspace(lo_fit * R, hi_fit * R, fit_points)
    u = ode.sol(rr)[0]
    design = np.column_stack([np.log(rr), np.ones_like(rr)])
    (A, B), *_ = np.linalg.lstsq(design, u, rcond=None)
    if not A > 0:
        raise NoLogAsymptote("zero-energy solution does not grow logarithmically")
    resid = float(np.max(np.abs(design @ (A, B) - u)) / A)
    if resid > fit_tol or not np.all(np.isfinite(u)):
        raise NoLogAsymptote(f"log fit residual {resid:.3g} exceeds {fit_tol:.1g}")
    a = math.exp(-B / A)

    r_nodes, w_nodes = _gl_nodes(R)
    v_nodes = pot(r_nodes)
    u_nodes = ode.sol(np.maximum(r_nodes, r0))[0]
    base = TWO_PI * w_nodes * r_nodes
    v_t = _NodeTransform(r_nodes, base * v_nodes)
    vw0_t = _NodeTransform(r_nodes, base * v_nodes * u_nodes / A)
    identity = 0.5 * vw0_t.at0 - TWO_PI

    sol = ScatteringSolution(
        potential=pot,
        a=a,
        rho_ref=rho_ref,
        slope=A,
        offset=B,
        fit_residual=resid,
        identity_residual=identity,
        _ode=ode,
        _v_t=v_t,
        _vw0_t=vw0_t,
    )
    cv, cvw, _ = check_curvature(sol, spec)
    sample = np.linspace(0.0, sol.p_cut, 4001)
    bounded = bool(np.all(sol.vhat_minus0(sample) <= 1e-12 * sol.vhat0))
    if not bounded:
        warnings.warn("V^(p) exceeds V^(0) somewhere; the positivity assumption on V^ fails", stacklevel=2)
    # positivity of V^ is an assumption of the analysis; it is reported, not enforced
    nonneg = bool(np.all(sol.vhat(sample) >= -1e-12 * sol.vhat0))
    from dataclasses import replace

    return replace(sol, curvature_v=cv, curvature_vw0=cvw / (2.0 * sol.b), vhat_bounded=bounded, vhat_nonnegative=nonneg)


def check_curvature(sol, spec: QuadSpec | None = None, *, p_max: float | None = None, n_points: int = 64, n_terms: int = 6):
    """Fit ``V^(p) = V^(0) + C a**2 p**2 + ...`` for ``V^`` and ``V^w``.

    The fit uses the even basis ``p**2, p**4, ..., p**(2 n_terms)`` on
    ``(0, p_max]`` with ``p_max = min(1 / (4 a), 1 / R)`` by default.  The
    profiles vary on the scale ``1 / R``, so for ``a << R`` the window
    ``1 / (4 a)`` alone would reach far beyond the Taylor region.

    Returns
    -------
    (curvature_v, curvature_vw, residual)
        The residual is the larger of the two max-abs fit errors relative to
        the corresponding ``|f(0)|``.
    """
    p_max = min(1.0 / (4.0 * sol.a), 1.0 / sol.R) if p_max is None else p_max
    if not p_max > 0 or n_points <= n_terms + 1:
        raise FitDegenerate("curvature window is empty or has too few points")
    p = np.linspace(p_max / n_points, p_max, n_points)
    x = (p / p_max) ** 2
    basis = np.column_stack([x**k for k in range(1, n_terms + 1)])
    if np.linalg.cond(basis) > 1e12:
        raise FitDegenerate("curvature fit basis is ill-conditioned")
    out = []
    resid = 0.0
    for f, f0 in ((sol.vhat_minus0, sol.vhat0), (sol.vwhat_minus0, sol.vwhat0)):
        y = f(p)
        coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
        resid = max(resid, float(np.max(np.abs(basis @ coef - y))) / abs(f0))
        out.append(coef[0] / p_max**2 / sol.a**2)
    return out[0], out[1], resid


def _wynn_epsilon(partial):
    """Wynn's epsilon-algorithm limit estimate of a sequence of partial sums."""
    s = list(partial)
    n = len(s)
    prev = [0.0] * (n + 1)
    cur = s[:]
    best = s[-1]
    for k in range(1, n):
        nxt = []
        for i in range(len(cur) - 1):
            diff = cur[i + 1] - cur[i]
            if diff == 0:
                return cur[i + 1]
            nxt.append(prev[i + 1] + 1.0 / diff)
        prev, cur = cur, nxt
        if k % 2 == 0 and cur:
            best = cur[-1]
    return best


def fourier_radial(f, p: float, spec: QuadSpec | None = None, *, support: float | None = None, max_zeros: int = 400) -> float:
    """2D Fourier transform of a radial function, ``2 pi int J0(p r) f(r) r dr``.

    ``support`` (or a compact :class:`RadialFunction`'s ``scale``) bounds the
    integration range.  Otherwise the integral runs over ``[0, inf)``, split at
    the zeros of ``J0(p r)``, and the alternating series of sub-integrals is
    accelerated with Wynn's epsilon algorithm.  ``p = 0`` returns
    ``2 pi int f r dr`` without any Bessel evaluation.
    """
    from .quadrature import integrate_interval

    spec = spec or DEFAULT_SPEC
    if support is None and isinstance(f, RadialFunction) and f.compact:
        support = f.scale
    if p < 0:
        raise ValueError("p must be non-negative")

    def g0(r):
        return f(r) * r

    if p == 0.0:
        hi = support if support is not None else math.inf
        return TWO_PI * integrate_interval(g0, 0.0, hi, spec).value

    def g(r):
        return special.j0(p * r) * f(r) * r

    if support is not None:
        n = int(p * support / PI) + 2
        zeros = special.jn_zeros(0, n) / p
        edges = [0.0] + [z for z in zeros if z < support] + [support]
        total = sum(integrate_interval(g, x0, x1, spec).value for x0, x1 in zip(edges[:-1], edges[1:]))
        return TWO_PI * total
    zeros = special.jn_zeros(0, max_zeros) / p
    edges = np.concatenate([[0.0], zeros])
    partial = []
    acc = 0.0
    for i, (x0, x1) in enumerate(zip(edges[:-1], edges[1:])):
        acc += integrate_interval(g, x0, x1, spec).value
        partial.append(acc)
        if i >= 20 and i % 10 == 0:
            est_a = _wynn_epsilon(partial[-21:-1])
            est_b = _wynn_epsilon(partial[-20:])
            if abs(est_a - est_b) <= spec.tolerance(est_b):
                return TWO_PI * est_b
    raise NonConvergence("Bessel transform tail did not converge")


@dataclass(frozen=True)
class IdealizedProfile:
    """Scattering data with ``V^w(sqrt(rho0 b) p) / (8 pi b) == 1``.

    This is the small-``b`` replacement profile: ``V^w`` is the constant
    ``8 pi b`` and ``V^`` the constant ``nu b``.  The scattering length is
    fixed by ``b`` and ``rho_ref`` through ``b = 1 / |ln(rho_ref a**2)|``.
    """

    b: float
    nu: float = 8.0 * PI
    rho_ref: float = 1.0
    is_idealized = True
    identity_residual = 0.0

    def __post_init__(self):
        if not 0 < self.b < 1:
            raise ValueError("b must lie in (0, 1)")
        if not (self.nu > 0 and self.rho_ref > 0):
            raise ValueError("nu and rho_ref must be positive")

    @property
    def a(self) -> float:
        return math.exp(-0.5 / self.b) / math.sqrt(self.rho_ref)

    @property
    def epsilon(self) -> float:
        return EPS_PREFACTOR * math.sqrt(self.rho_ref)

    @property
    def vhat0(self) -> float:
        return self.nu * self.b

    @property
    def vwhat0(self) -> float:
        return 8.0 * PI * self.b

    def vhat(self, p):
        return np.full(np.shape(p), self.vhat0)

    def vwhat(self, p):
        return np.full(np.shape(p), self.vwhat0)

    def vhat_minus0(self, p):
        return np.zeros(np.shape(p))

    def vwhat_minus0(self, p):
        return np.zeros(np.shape(p))

    def profile_t(self, k, s):
        return np.ones(np.shape(k))

    def profile_t_minus1(self, k, s):
        return np.zeros(np.shape(k))

    def at_density(self, rho_ref: float) -> "IdealizedProfile":
        return IdealizedProfile(self.b, self.nu, rho_ref)
