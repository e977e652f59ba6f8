"""Pure-Python numerical kernels.

This module is the fallback twin of the compiled extension ``slsys._core``:
same function names, same semantics, same tolerances.  Three kernels live
here because they dominate runtime:

* ``riccati_backward`` -- backward log-derivative propagation of the Riccati
  variable u = psi'/psi from a far right endpoint down to the left endpoint.
  Each step applies the exact constant-coefficient propagator (a Moebius map
  in u) with midpoint-sampled potential, stepsize-doubling error control and
  local extrapolation.  The map is evaluated in the u chart or the inverse
  chart w = 1/u, switching when |u| crosses 1e6, so Riccati poles are crossed
  without blowups.  Backward propagation contracts onto the decaying-at-
  infinity direction, which is exactly the object being computed.
* ``cauchy_integrate`` -- adaptive embedded Dormand-Prince 5(4) integration
  of y'' = (q - lambda) y for the two canonical initial-condition sets.
* ``hermitian_eigenvalues`` -- cyclic complex Jacobi eigensolver for the
  small dense Hermitian kernels built elsewhere in the package.
"""

from __future__ import annotations

import cmath
import math
from bisect import bisect_right

import numpy as np

from .errors import IntegrationError, InternalConsistencyError, PoleError

BACKEND_NAME = "python"

POT_FREE = 0
POT_CONST = 1
POT_TABLE = 2

_U_SWITCH = 1.0e6      # |u| above this: propagate w = 1/u
_U_SWITCH_BACK = 5.0e5  # leave the w chart once |u| drops below this


def q_eval(kind, c, xs, qs, tail, x):
    """Potential value at x: 0, a constant, or piecewise-linear with flat tail."""
    if kind == POT_FREE:
        return 0.0
    if kind == POT_CONST:
        return c
    n = len(xs)
    if x >= xs[n - 1]:
        return tail
    if x <= xs[0]:
        return float(qs[0])
    i = bisect_right(xs, x) - 1
    t = (x - xs[i]) / (xs[i + 1] - xs[i])
    return float(qs[i] + t * (qs[i + 1] - qs[i]))


def _tau(kappa2: complex, delta: float) -> complex:
    """tanh(sqrt(kappa2)*delta)/sqrt(kappa2); even in the sqrt branch."""
    s = cmath.sqrt(kappa2)
    zs = s * delta
    if abs(zs) < 1e-8:
        z2 = zs * zs
        return delta * (1.0 - z2 / 3.0 + 2.0 * z2 * z2 / 15.0)
    return cmath.tanh(zs) / s


def _prop(chart: int, v: complex, kappa2: complex, delta: float) -> complex:
    """Exact constant-coefficient Riccati step in the u (0) or w (1) chart."""
    t = _tau(kappa2, delta)
    if chart == 0:
        return (v + kappa2 * t) / (1.0 + t * v)
    return (v + t) / (1.0 + t * kappa2 * v)


def _snap_to_node(xs, x, h):
    """Shrink a backward step so it lands on the nearest table node inside it."""
    lo = x + h
    i = bisect_right(xs, x) - 1
    # nodes strictly inside (lo, x); walk left from the node at/below x
    while i >= 0 and xs[i] >= x:
        i -= 1
    if i >= 0 and xs[i] > lo:
        return xs[i] - x
    return h


def riccati_backward(kind, c, xs, qs, tail, lam, a, b, u_b, rel_tol, max_steps=1_000_000):
    """Propagate the Riccati log-derivative from u(b) = ``u_b`` down to x = a.

    Returns u(a).  Raises :class:`IntegrationError` on step underflow or an
    exhausted step budget and :class:`PoleError` if psi(a) = 0 (the returned
    log-derivative would be infinite, i.e. the m-function has a pole).
    """
    lam = complex(lam)
    x = float(b)
    a = float(a)
    if not b > a:
        raise ValueError("need b > a")
    chart = 0
    v = complex(u_b)
    if abs(v) > _U_SWITCH:
        chart, v = 1, 1.0 / v
    span = x - a
    h = -span
    steps = 0
    x_tol = 1e-14 * (abs(a) + abs(b) + 1.0)
    while x - a > x_tol:
        if steps >= max_steps:
            raise IntegrationError(f"step budget exhausted at x={x!r}", x_reached=x)
        if x + h < a:
            h = a - x
        # keep |s*h| below the first tanh pole unless the step is strongly damped
        for _ in range(2):
            kmid = q_eval(kind, c, xs, qs, tail, x + 0.5 * h) - lam
            s = cmath.sqrt(kmid)
            zs = s * h
            if abs(zs) > 1.2 and abs(zs.real) < 2.0:
                h *= 1.2 / abs(zs)
            else:
                break
        if kind == POT_TABLE:
            h = _snap_to_node(xs, x, h)
        if abs(h) < 1e-15 * max(1.0, abs(x)):
            raise IntegrationError(f"step size underflow at x={x!r}", x_reached=x)

        try:
            k_full = q_eval(kind, c, xs, qs, tail, x + 0.5 * h) - lam
            v_full = _prop(chart, v, k_full, h)
            k1 = q_eval(kind, c, xs, qs, tail, x + 0.25 * h) - lam
            k2 = q_eval(kind, c, xs, qs, tail, x + 0.75 * h) - lam
            v_half = _prop(chart, _prop(chart, v, k1, 0.5 * h), k2, 0.5 * h)
            scale = rel_tol * (1.0 + max(abs(v), abs(v_half)))
            err = abs(v_full - v_half) / scale
        except (ZeroDivisionError, OverflowError):
            err = math.inf
        steps += 1
        if not math.isfinite(err):
            # transient blowup in a trial step: retry with a smaller one
            h *= 0.25
            continue
        if err <= 1.0:
            v = v_half + (v_half - v_full) / 3.0
            x += h
            if chart == 0 and abs(v) > _U_SWITCH:
                chart, v = 1, 1.0 / v
            elif chart == 1 and abs(v) * _U_SWITCH_BACK > 1.0:
                chart, v = 0, 1.0 / v
            factor = 4.0 if err == 0.0 else min(4.0, max(0.3, 0.9 * err ** (-1.0 / 3.0)))
            h *= factor
            if x + h < a:
                h = a - x
        else:
            h *= max(0.25, 0.9 * err ** (-1.0 / 3.0))
    if chart == 1:
        if v == 0.0:
            raise PoleError("log-derivative is infinite at the left endpoint (psi(a) = 0)")
        v = 1.0 / v
    return v


# Dormand-Prince 5(4) tableau; the last A row equals the 5th-order weights (FSAL).
_DP_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_DP_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_DP_E = (
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


def cauchy_integrate(kind, c, xs, qs, tail, lam, a, x_max, rel_tol, max_steps=1_000_000):
    """Integrate y'' = (q - lambda) y forward from a to x_max with DP 5(4).

    Both canonical solutions are carried at once: state is
    (phi1, phi1', phi2, phi2') with phi1(a)=0, phi1'(a)=1, phi2(a)=-1,
    phi2'(a)=0.  Returns five numpy arrays (grid, phi1, phi1', phi2, phi2'),
    one entry per accepted step, endpoints included.
    """
    lam = complex(lam)
    a = float(a)
    x_max = float(x_max)
    if not x_max > a:
        raise ValueError("need x_max > a")

    def deriv(x, y):
        w = q_eval(kind, c, xs, qs, tail, x) - lam
        return (y[1], w * y[0], y[3], w * y[2])

    x = a
    y = (0.0 + 0.0j, 1.0 + 0.0j, -1.0 + 0.0j, 0.0 + 0.0j)
    grid = [x]
    rows = [y]
    atol = rel_tol

    f0 = deriv(x, y)
    # Hairer-style initial step guess
    sc = [atol + rel_tol * abs(yi) for yi in y]
    d0 = math.sqrt(sum((abs(yi) / s) ** 2 for yi, s in zip(y, sc)) / 4.0)
    d1 = math.sqrt(sum((abs(fi) / s) ** 2 for fi, s in zip(f0, sc)) / 4.0)
    h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h = min(h, x_max - a)

    k = [f0] + [None] * 6
    fsal_valid = True
    steps = 0
    while x < x_max - 1e-14 * (abs(x_max) + 1.0):
        if steps >= max_steps:
            raise IntegrationError(f"step budget exhausted at x={x!r}", x_reached=x)
        if h < 1e-15 * max(1.0, abs(x)):
            raise IntegrationError(f"step size underflow at x={x!r}", x_reached=x)
        if x + h > x_max:
            h = x_max - x
        if not fsal_valid:
            k[0] = deriv(x, y)
            fsal_valid = True
        for i in range(1, 7):
            acc = [0.0j, 0.0j, 0.0j, 0.0j]
            for j, aij in enumerate(_DP_A[i]):
                if aij != 0.0:
                    kj = k[j]
                    for m in range(4):
                        acc[m] += aij * kj[m]
            yi = tuple(y[m] + h * acc[m] for m in range(4))
            k[i] = deriv(x + _DP_C[i] * h, yi)
        y5 = yi  # the i=6 stage value is the 5th-order solution (FSAL row)
        err2 = 0.0
        for m in range(4):
            e = 0.0j
            for j in range(7):
                if _DP_E[j] != 0.0:
                    e += _DP_E[j] * k[j][m]
            e *= h
            s = atol + rel_tol * max(abs(y[m]), abs(y5[m]))
            err2 += (abs(e) / s) ** 2
        err = math.sqrt(err2 / 4.0)
        steps += 1
        if not math.isfinite(err):
            h *= 0.25
            fsal_valid = False
            continue
        if err <= 1.0:
            x += h
            y = y5
            grid.append(x)
            rows.append(y)
            k[0] = k[6]
            factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            h *= factor
        else:
            h *= max(0.2, 0.9 * err ** -0.2)
            fsal_valid = False

    g = np.array(grid, dtype=float)
    m = np.array(rows, dtype=complex)
    return g, m[:, 0].copy(), m[:, 1].copy(), m[:, 2].copy(), m[:, 3].copy()


def hermitian_eigenvalues(matrix, max_sweeps=60):
    """Eigenvalues (ascending) of a Hermitian matrix via cyclic complex Jacobi.

    Self-contained on purpose: the PSD verdicts in this package must not
    depend on a LAPACK build.  Intended for the small dense kernels (n <= 16)
    produced by the sector tests; cost is O(n^3) per sweep.
    """
    A = np.array(matrix, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("matrix must be square")
    n = A.shape[0]
    if n == 1:
        return np.array([A[0, 0].real])
    scale = max(1.0, float(np.linalg.norm(A)))
    for _ in range(max_sweeps):
        offdiag = A.copy()
        np.fill_diagonal(offdiag, 0.0)
        if float(np.linalg.norm(offdiag)) <= 1e-13 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                phi = apq / abs(apq)
                tau = (aqq - app) / (2.0 * abs(apq))
                if tau == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                cth = 1.0 / math.sqrt(1.0 + t * t)
                sth = t * cth
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = cth * colp - sth * np.conj(phi) * colq
                A[:, q] = sth * colp + cth * np.conj(phi) * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = cth * rowp - sth * phi * rowq
                A[q, :] = sth * rowp + cth * phi * rowq
    else:
        raise InternalConsistencyError("Jacobi sweeps did not converge")
    return np.sort(np.diag(A).real)
