"""Branch conventions and extended-real helpers shared across the package.

The whole library works on the cut plane C \\ [0, +inf) and uses one square
root throughout: the branch with Im sqrt(z) >= 0, whose cut lies along the
positive real axis.  All angle bookkeeping is done in tangents, with
``math.inf`` encoding a right angle, so nothing here ever converts to radians.
"""

from __future__ import annotations

import cmath
import math

INF = math.inf


def sqrt_cut(z: complex) -> complex:
    """Square root with branch cut on [0, +inf) and Im sqrt(z) >= 0.

    Coincides with the principal branch on the closed upper half-plane and
    with its negative on the open lower half-plane.  On the negative real
    axis it returns i*sqrt(|z|).
    """
    w = cmath.sqrt(complex(z))
    if w.imag < 0.0:
        return -w
    if w.imag == 0.0 and w.real < 0.0:
        return -w
    return w


def on_positive_cut(z: complex, tol: float = 0.0) -> bool:
    """True if z lies on the branch cut [0, +inf) (within ``tol`` in Im z)."""
    return abs(z.imag) <= tol and z.real >= 0.0


def close_eq(a: float, b: float, rel: float = 1e-12) -> bool:
    """Equality of extended reals with relative tolerance ``rel``.

    Infinities compare equal only to themselves; the scale floor is 1.0 so
    values near zero are compared absolutely.
    """
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


def fmt_g17(x: float) -> str:
    """Format a float with 17 significant digits ('.' decimal, no locale)."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x), ".17g")


def ext_to_json(x):
    """Map an extended real to a JSON-safe value ('inf'/'-inf' strings).

    NaN is a contract violation everywhere in this package, so it raises
    instead of being serialized.
    """
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        raise ValueError("NaN is never serialized; upstream should have raised")
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def parse_extended(text: str) -> float:
    """Parse a float, accepting 'inf'/'+inf'/'-inf' (case-insensitive)."""
    t = text.strip().lower()
    if t in ("inf", "+inf"):
        return INF
    if t == "-inf":
        return -INF
    return float(text)
