"""Sequence extrapolation and quadrature utilities.

Real-axis limits in this package are always taken along geometric ladders
(ratio 4 by default), where the error of a Herglotz-type boundary value is a
sum of geometric modes.  Aitken's delta-squared process is exact on a single
geometric mode, and two sweeps (the "order 2" scheme used everywhere here)
kill two modes; that is the Richardson-type accelerator implemented below.

Neville extrapolation to zero is used for the epsilon -> 0 limit of smoothed
spectral-measure integrals, and composite Gauss-Legendre panels provide the
underlying quadrature with a deterministic summation order.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import NoLimitError

_EPS = 2.220446049250313e-16


def _aitken_sweep(v: list[float]) -> list[float]:
    """One Aitken delta-squared pass; noise-guarded against tiny denominators."""
    scale = max(1.0, max(abs(x) for x in v))
    out = []
    for i in range(len(v) - 2):
        d1 = v[i + 1] - v[i]
        d2 = v[i + 2] - v[i + 1]
        den = d2 - d1
        if abs(den) <= 32.0 * _EPS * scale:
            out.append(v[i + 2])
        else:
            out.append(v[i + 2] - d2 * d2 / den)
    return out


def sequence_limit(values: Sequence[float], tol: float, sweeps: int = 2) -> tuple[float, float]:
    """Extrapolated limit of a convergent sequence with an error estimate.

    Returns ``(limit, estimate)``.  Raises :class:`NoLimitError` when the
    tail of the accelerated table still moves by more than ``tol``.
    """
    v = [float(x) for x in values]
    if not v:
        raise NoLimitError("empty sequence")
    if len(v) < 3:
        est = abs(v[-1] - v[0]) if len(v) == 2 else 0.0
        if est > tol:
            raise NoLimitError(f"sequence too short to converge (moved {est:.3g})")
        return v[-1], est

    table = v
    best = table[-1]
    est = abs(table[-1] - table[-2])
    for _ in range(sweeps):
        if len(table) < 3:
            break
        table = _aitken_sweep(table)
        new_best = table[-1]
        new_est = abs(table[-1] - table[-2]) if len(table) >= 2 else abs(new_best - best)
        # keep the sweep only while it actually tightens the tail
        if new_est <= est or abs(new_best - best) <= max(est, tol):
            best, est = new_best, min(est, new_est)
        else:
            break
    if not math.isfinite(best):
        raise NoLimitError("extrapolation produced a non-finite value")
    if est > tol:
        raise NoLimitError(f"no convergence: extrapolation estimate {est:.3g} exceeds tol {tol:.3g}")
    return best, est


def limit_along(
    eval_real: Callable[[float], float],
    ladder: Sequence[float],
    tol: float,
    extension: Sequence[float] = (),
    divergence_threshold: float = 1e12,
) -> float:
    """Limit of ``eval_real`` along a geometric ladder of abscissae.

    Divergence handling: when the tail of the sampled values is monotone with
    increments that do not decay, the ladder is extended point by point from
    ``extension``; monotone growth past ``divergence_threshold`` (or a
    persistent non-decaying pattern once the extension is exhausted) is
    reported as +/-inf.  A sign-changing, non-decaying tail raises
    :class:`NoLimitError` -- a limit is never guessed.
    """
    values = [float(eval_real(x)) for x in ladder]
    ext_iter = iter(extension)

    def tail_state(vals: list[float]) -> str:
        k = min(6, len(vals) - 1)
        if k < 2:
            return "converging"
        diffs = [vals[i + 1] - vals[i] for i in range(len(vals) - k - 1, len(vals) - 1)]
        scale = max(1.0, max(abs(x) for x in vals))
        if all(abs(d) <= 1e3 * _EPS * scale for d in diffs):
            return "converging"
        signs = {math.copysign(1.0, d) for d in diffs if d != 0.0}
        if len(signs) > 1:
            decaying = all(
                abs(diffs[i + 1]) <= 0.95 * abs(diffs[i]) + 1e3 * _EPS * scale
                for i in range(len(diffs) - 1)
            )
            return "converging" if decaying else "oscillating"
        growing = all(
            abs(diffs[i + 1]) >= 0.95 * abs(diffs[i]) - 1e3 * _EPS * scale
            for i in range(len(diffs) - 1)
        )
        return "monotone-nondecaying" if growing else "converging"

    state = tail_state(values)
    while state == "monotone-nondecaying":
        if abs(values[-1]) > divergence_threshold:
            return math.copysign(math.inf, values[-1] - values[0])
        x = next(ext_iter, None)
        if x is None:
            # increments keep their size forever on a geometric ladder: divergent
            return math.copysign(math.inf, values[-1] - values[0])
        values.append(float(eval_real(x)))
        state = tail_state(values)

    if state == "oscillating":
        raise NoLimitError("values oscillate without decay along the ladder")

    limit, _ = sequence_limit(values, tol)
    return limit


def neville_zero(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Polynomial extrapolation of (xs, ys) to x = 0, with error estimate.

    The estimate is the last correction applied on the diagonal of the
    Neville table; xs must be distinct and nonzero.
    """
    n = len(xs)
    if n != len(ys) or n == 0:
        raise ValueError("xs and ys must be equal-length and nonempty")
    t = [float(y) for y in ys]
    x = [float(v) for v in xs]
    best = t[-1]
    corr = 0.0
    for level in range(1, n):
        for i in range(n - level):
            denom = x[i] - x[i + level]
            t[i] = (0.0 - x[i + level]) / denom * t[i] + (x[i] - 0.0) / denom * t[i + 1]
        corr = abs(t[0] - best)
        best = t[0]
    return best, corr


def gauss_panels(
    f: Callable[[float], float],
    edges: Sequence[float],
    n_points: int,
) -> float:
    """Composite Gauss-Legendre quadrature over consecutive panel ``edges``.

    Panels and nodes are traversed in a fixed order and accumulated with
    ``math.fsum`` so the result is independent of any outer parallelism.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_points)
    parts = []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        parts.extend(half * w * f(mid + half * t) for t, w in zip(nodes, weights))
    return math.fsum(parts)


def linear_edges(a: float, b: float, panels: int) -> list[float]:
    return list(np.linspace(a, b, panels + 1))


def geometric_edges(a: float, b: float, panels: int) -> list[float]:
    """Panel edges geometrically spaced on [a, b]; requires 0 < a < b."""
    if not (0.0 < a < b):
        raise ValueError("geometric panels need 0 < a < b")
    return list(np.geomspace(a, b, panels + 1))
