"""Adaptive one-dimensional quadrature for radial integrals in two dimensions.

Every momentum integral in the library is of the form ``(2 pi)**-2 * int f(|p|) d^2p``
and is evaluated here as ``(2 pi)**-1 * int f(p) p dp``.  The helpers in this
module cover the shapes that occur:

* finite intervals (:func:`integrate_interval`), with a double-exponential rule
  for integrable endpoint singularities;
* ranges spanning many decades (:func:`integrate_log`), integrated in ``ln p``;
* semi-infinite radial integrals with an algebraic tail
  (:func:`integrate_radial_2d`);
* the angular kernel of a convolution of two radial functions
  (:func:`angular_kernel`);
* a fixed composite Gauss-Legendre grid in ``ln p`` (:class:`RadialGrid`) for
  double integrals that are assembled from separable sums.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .errors import NonConvergence, SingularEndpoint

__all__ = [
    "QuadSpec",
    "QuadResult",
    "RadialFunction",
    "RadialGrid",
    "angular_kernel",
    "integrate_interval",
    "integrate_log",
    "integrate_radial_2d",
    "tanh_sinh",
]


@dataclass(frozen=True)
class QuadSpec:
    """Tolerances and tail handling shared by all adaptive rules.

    Parameters
    ----------
    abs_tol, rel_tol : float
        Requested absolute and relative accuracy.
    max_subdivisions : int
        Subdivision budget per adaptive call.
    tail_cut : float
        Semi-infinite integrals are integrated numerically up to
        ``tail_cut * scale`` and closed with an analytic tail.
    tail_order : int
        The integrand is assumed to decay like ``p**-tail_order`` beyond the cut.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    tail_cut: float = 1e4
    tail_order: int = 4

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be a positive integer")
        if not self.tail_cut > 0:
            raise ValueError("tail_cut must be positive")
        if self.tail_order < 2:
            raise ValueError("tail_order must be >= 2 for a convergent radial tail")

    def replace(self, **changes) -> "QuadSpec":
        return replace(self, **changes)

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_SPEC = QuadSpec()


class QuadResult(NamedTuple):
    value: float
    error: float


@dataclass(frozen=True)
class RadialFunction:
    """A function of the radius ``p >= 0`` with a hint about where it lives.

    Parameters
    ----------
    evaluator : callable
        Vectorised map ``p -> f(p)``.
    scale : float, optional
        Support radius (``compact=True``) or characteristic decay scale.
    compact : bool
        Whether ``f`` vanishes identically beyond ``scale``.
    origin : {'finite', 'log', 'inverse'}
        Declared behaviour as ``p -> 0``.
    """

    evaluator: Callable
    scale: float | None = None
    compact: bool = False
    origin: str = "finite"

    def __call__(self, p):
        return self.evaluator(p)


def _check_finite(value, where):
    if not np.all(np.isfinite(value)):
        raise SingularEndpoint(f"integrand is not finite {where}")


def _quad(f, lo, hi, spec, points=None):
    """scipy QUADPACK call that converts budget exhaustion into NonConvergence."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        kwargs = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions)
        if points is not None and len(points) and np.isfinite(hi):
            kwargs["points"] = [x for x in points if lo < x < hi]
        value, err = integrate.quad(f, lo, hi, **kwargs)
    if not math.isfinite(value):
        raise SingularEndpoint(f"integral over [{lo}, {hi}] is not finite")
    if caught and err > 50.0 * spec.tolerance(value):
        raise NonConvergence(
            f"quadrature on [{lo:.6g}, {hi:.6g}] did not converge: "
            f"estimate {value:.6g} +- {err:.2g} ({caught[0].message})"
        )
    return value, err


def tanh_sinh(f, a: float, b: float, tol: float = 1e-12, max_level: int = 12) -> QuadResult:
    """Double-exponential rule on ``[a, b]`` for integrable endpoint singularities.

    The abscissae are generated from the distance to the nearer endpoint, so
    ``f`` is never evaluated at (or rounded onto) ``a`` or ``b``.  Levels halve
    the step until two successive estimates agree to ``tol``.
    """
    half = 0.5 * (b - a)
    t_max = 3.5

    def nodes(h, odd_only):
        k = np.arange(1, int(t_max / h) + 1)
        if odd_only:
            k = k[k % 2 == 1]
        t = k * h
        u = 0.5 * math.pi * np.sinh(t)
        # 1 - tanh(u) without cancellation
        comp = 2.0 / (np.exp(2.0 * u) + 1.0)
        w = 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
        keep = comp > 0
        return comp[keep], w[keep]

    def side_sum(comp, w):
        left = f(a + half * comp)
        right = f(b - half * comp)
        _check_finite(left, "near the lower endpoint")
        _check_finite(right, "near the upper endpoint")
        return float(np.sum(w * (np.asarray(left) + np.asarray(right))))

    h = 1.0
    mid = f(np.array([0.5 * (a + b)]))[0]
    comp, w = nodes(h, False)
    total = 0.5 * math.pi * mid + side_sum(comp, w)
    estimate = half * h * total
    for _ in range(max_level):
        h *= 0.5
        comp, w = nodes(h, True)
        total += side_sum(comp, w)
        new = half * h * total
        err = abs(new - estimate)
        estimate = new
        if err <= max(tol, tol * abs(new)):
            return QuadResult(float(new), float(err))
    raise NonConvergence("tanh-sinh rule did not converge")


def integrate_interval(
    f,
    lo: float,
    hi: float,
    spec: QuadSpec | None = None,
    *,
    singular: str | None = None,
    points: Sequence[float] | None = None,
) -> QuadResult:
    """Integrate a scalar function over ``[lo, hi]``.

    ``singular`` declares an integrable endpoint singularity (``'lo'``, ``'hi'``
    or ``'both'``, e.g. ``ln r`` at ``r = 0``); such intervals are handled by
    :func:`tanh_sinh`.  Otherwise adaptive Gauss-Kronrod is used.  ``hi`` may
    be ``inf`` only for the Gauss-Kronrod path.
    """
    spec = spec or DEFAULT_SPEC
    if hi == lo:
        return QuadResult(0.0, 0.0)
    if singular is not None:
        if not np.isfinite(hi):
            raise ValueError("singular endpoints require a finite interval")
        if singular not in ("lo", "hi", "both"):
            raise ValueError(f"unknown singular endpoint {singular!r}")
        vf = np.vectorize(f, otypes=[float]) if not _is_vectorised(f) else f
        edges = [lo] + sorted(x for x in (points or ()) if lo < x < hi) + [hi]
        value = err = 0.0
        for x0, x1 in zip(edges[:-1], edges[1:]):
            r = tanh_sinh(vf, x0, x1, tol=spec.abs_tol)
            value += r.value
            err += r.error
        return QuadResult(value, err)
    value, err = _quad(f, lo, hi, spec, points)
    return QuadResult(value, err)


def _is_vectorised(f) -> bool:
    try:
        out = f(np.array([0.25, 0.5]))
    except Exception:
        return False
    return np.shape(out) == (2,)


def integrate_log(f, lo: float, hi: float, spec: QuadSpec | None = None, panel: float = 4.0) -> QuadResult:
    """``int_lo^hi f(p) dp`` for ``0 < lo < hi`` spanning many decades.

    The substitution ``p = exp(x)`` turns scale-free integrands into smooth,
    slowly varying ones; the ``x`` range is cut into panels of width ``panel``.
    """
    spec = spec or DEFAULT_SPEC
    if not (0 < lo <= hi):
        raise ValueError("integrate_log needs 0 < lo <= hi")
    if lo == hi:
        return QuadResult(0.0, 0.0)
    x0, x1 = math.log(lo), math.log(hi)
    n = max(1, int(math.ceil((x1 - x0) / panel)))
    edges = np.linspace(x0, x1, n + 1)

    def g(x):
        p = math.exp(x)
        return f(p) * p

    value = err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = _quad(g, a, b, spec)
        value += v
        err += e
    return QuadResult(value, err)


def _geometric_edges(lo, hi, scale, ratio=4.0):
    """Panel edges ``lo < ... < hi`` clustered geometrically around ``scale``."""
    start = max(lo, scale * 1e-4)
    edges = [lo]
    if start > lo:
        edges.append(start)
    x = start
    while x * ratio < hi:
        x *= ratio
        edges.append(x)
    edges.append(hi)
    return np.unique(np.asarray(edges, dtype=float))


def integrate_radial_2d(
    f,
    lo: float = 0.0,
    hi: float = math.inf,
    spec: QuadSpec | None = None,
    *,
    scale: float | None = None,
    points: Sequence[float] = (),
) -> QuadResult:
    """``(2 pi)**-1 * int_lo^hi f(p) p dp``, the 2D radial momentum integral.

    For ``hi = inf`` the integral is taken numerically up to
    ``Lambda = spec.tail_cut * scale`` and closed with the power-law tail
    ``f(Lambda) Lambda**2 / (k - 2)`` for ``f ~ p**-k``.  The reported error
    includes the change of the tail estimate when ``Lambda`` is halved.
    """
    spec = spec or DEFAULT_SPEC
    if scale is None:
        scale = getattr(f, "scale", None) or 1.0
    if isinstance(f, RadialFunction) and f.compact and f.scale is not None:
        hi = min(hi, f.scale)

    def integrand(p):
        return f(p) * p

    tail = tail_err = 0.0
    upper = hi
    if not np.isfinite(hi):
        upper = spec.tail_cut * scale
        if upper <= lo:
            raise ValueError("tail cut lies below the lower limit")
        k = spec.tail_order
        f_cut = float(f(upper))
        tail = f_cut * upper**2 / (k - 2)
        # consistency of the tail model between Lambda/2 and Lambda
        half = 0.5 * upper
        if half > lo:
            seg, _ = _quad(integrand, half, upper, spec)
            tail_half = float(f(half)) * half**2 / (k - 2)
            tail_err = abs(seg + tail - tail_half)
    edges = _geometric_edges(lo, upper, scale)
    extra = [x for x in points if lo < x < upper]
    if extra:
        edges = np.unique(np.concatenate([edges, extra]))
    value = err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = _quad(integrand, a, b, spec)
        value += v
        err += e
    total = (value + tail) / (2.0 * math.pi)
    return QuadResult(total, (err + tail_err) / (2.0 * math.pi))


def angular_kernel(g, p: float, q: float, spec: QuadSpec | None = None) -> float:
    """``K(p, q) = int_0^{2 pi} g(|p - q|) d theta`` for radial ``g``.

    ``|p - q| = sqrt((p - q)**2 + 4 p q sin(theta / 2)**2)``.  The integrand is
    smooth and periodic in ``theta`` when ``g`` is smooth as a function on the
    plane, so the trapezoidal rule converges geometrically; the node count
    doubles until two levels agree, with adaptive Gauss-Kronrod as a fallback
    for kinked ``g``.  The
    arguments are ordered before evaluation, which makes the result exactly
    symmetric in ``(p, q)``.
    """
    spec = spec or DEFAULT_SPEC
    p, q = sorted((float(p), float(q)))
    if p < 0:
        raise ValueError("radii must be non-negative")
    if p == 0.0:
        return 2.0 * math.pi * float(g(np.array([q]))[0])
    diff2 = (q - p) ** 2
    four_pq = 4.0 * p * q

    def trap(n):
        theta = (np.arange(n) + 0.5) * (math.pi / n)
        r = np.sqrt(diff2 + four_pq * np.sin(0.5 * theta) ** 2)
        vals = np.asarray(g(r), dtype=float)
        _check_finite(vals, "in the angular kernel")
        return 2.0 * math.pi * float(np.mean(vals))

    n = 16
    prev = trap(n)
    while n < 2**12:
        n *= 2
        cur = trap(n)
        if abs(cur - prev) <= spec.tolerance(cur):
            return cur
        prev = cur
    # slow trapezoid convergence means g is not smooth as a 2D function (a kink
    # in |p - q| at theta = 0); adaptive Gauss-Kronrod handles the endpoint
    def h(theta):
        r = math.sqrt(diff2 + four_pq * math.sin(0.5 * theta) ** 2)
        return float(np.asarray(g(np.array([r])), dtype=float)[0])

    try:
        value, _ = _quad(h, 0.0, math.pi, spec)
    except SingularEndpoint as exc:
        raise NonConvergence(f"angular kernel at (p, q) = ({p}, {q}) did not converge") from exc
    return 2.0 * value


class RadialGrid:
    """Composite Gauss-Legendre nodes in ``ln p`` for 2D radial integrals.

    ``grid.integrate2d(values)`` returns ``(2 pi)**-2 * int f d^2p`` for
    ``values = f(grid.p)``.  Panels are uniform in ``ln p`` up to ``p_lin`` and
    uniform in ``p`` (width ``lin_width``) from there to ``p_hi``, which keeps
    oscillating integrands resolved at large momenta.
    """

    def __init__(
        self,
        p_lo: float,
        p_hi: float,
        *,
        breakpoints: Sequence[float] = (),
        log_width: float = 0.5,
        order: int = 12,
        p_lin: float | None = None,
        lin_width: float | None = None,
    ):
        if not 0 < p_lo < p_hi:
            raise ValueError("need 0 < p_lo < p_hi")
        x, w = np.polynomial.legendre.leggauss(order)
        p_lin = p_hi if p_lin is None else min(max(p_lin, p_lo), p_hi)
        n_log = max(1, int(math.ceil(math.log(p_lin / p_lo) / log_width)))
        edges = list(np.exp(np.linspace(math.log(p_lo), math.log(p_lin), n_log + 1)))
        if p_lin < p_hi:
            width = lin_width or (p_hi - p_lin)
            n_lin = max(1, int(math.ceil((p_hi - p_lin) / width)))
            edges += list(np.linspace(p_lin, p_hi, n_lin + 1)[1:])
        edges += [b for b in breakpoints if p_lo < b < p_hi]
        edges = np.unique(np.asarray(edges))
        nodes, weights = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            if b / a > 1.5:
                # log-uniform panel: p = exp(t)
                la, lb = math.log(a), math.log(b)
                t = 0.5 * (lb - la) * x + 0.5 * (lb + la)
                pt = np.exp(t)
                nodes.append(pt)
                weights.append(0.5 * (lb - la) * w * pt)
            else:
                nodes.append(0.5 * (b - a) * x + 0.5 * (b + a))
                weights.append(0.5 * (b - a) * w)
        self.p = np.concatenate(nodes)
        self.dp = np.concatenate(weights)
        #: weights for (2 pi)**-2 int f d^2p = (2 pi)**-1 int f p dp
        self.w2d = self.dp * self.p / (2.0 * math.pi)

    def __len__(self):
        return self.p.size

    def integrate2d(self, values) -> float:
        return float(np.dot(self.w2d, values))
