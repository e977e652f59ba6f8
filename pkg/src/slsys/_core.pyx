# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels: twin of ``slsys._kernels_py``.

Same names, same semantics, same tolerances; see the pure-Python module for
the algorithm notes.  Selected automatically by ``slsys.backend`` when built.
"""

import numpy as np

from .errors import IntegrationError, InternalConsistencyError, PoleError

cdef extern from "complex.h" nogil:
    double complex ctanh(double complex)
    double complex csqrt(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)

from libc.math cimport INFINITY, copysign, fabs, fmax, fmin, hypot, isfinite, pow, sqrt

BACKEND_NAME = "compiled"

POT_FREE = 0
POT_CONST = 1
POT_TABLE = 2

cdef double _U_SWITCH = 1.0e6
cdef double _U_SWITCH_BACK = 5.0e5


cdef double _q_eval_c(int kind, double c, const double[::1] xs, const double[::1] qs,
                      double tail, double x) nogil:
    cdef Py_ssize_t n, lo, hi, mid
    cdef double t
    if kind == 0:
        return 0.0
    if kind == 1:
        return c
    n = xs.shape[0]
    if x >= xs[n - 1]:
        return tail
    if x <= xs[0]:
        return qs[0]
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    t = (x - xs[lo]) / (xs[lo + 1] - xs[lo])
    return qs[lo] + t * (qs[lo + 1] - qs[lo])


def q_eval(kind, c, xs, qs, tail, x):
    cdef double[::1] mxs = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] mqs = np.ascontiguousarray(qs, dtype=np.float64)
    return _q_eval_c(kind, c, mxs, mqs, tail, x)


cdef double complex _tau_c(double complex kappa2, double delta) nogil:
    cdef double complex s, zs, z2
    s = csqrt(kappa2)
    zs = s * delta
    if cabs(zs) < 1e-8:
        z2 = zs * zs
        return delta * (1.0 - z2 / 3.0 + 2.0 * z2 * z2 / 15.0)
    return ctanh(zs) / s


cdef double complex _prop_c(int chart, double complex v, double complex kappa2,
                            double delta) nogil:
    cdef double complex t = _tau_c(kappa2, delta)
    if chart == 0:
        return (v + kappa2 * t) / (1.0 + t * v)
    return (v + t) / (1.0 + t * kappa2 * v)


cdef double _snap_to_node_c(const double[::1] xs, double x, double h) nogil:
    cdef Py_ssize_t i = xs.shape[0] - 1
    cdef double lo = x + h
    while i >= 0 and xs[i] >= x:
        i -= 1
    if i >= 0 and xs[i] > lo:
        return xs[i] - x
    return h


def riccati_backward(kind, c, xs, qs, tail, lam, a, b, u_b, rel_tol, max_steps=1_000_000):
    cdef double[::1] mxs = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] mqs = np.ascontiguousarray(qs, dtype=np.float64)
    cdef int ckind = kind
    cdef double cc = c, ctail = tail, ca = a, cb = b, crtol = rel_tol
    cdef double complex clam = lam, v = u_b
    cdef long cmax = max_steps

    cdef double x = cb
    cdef int chart = 0
    cdef double span, h, x_tol, scale, err, factor
    cdef double complex kmid, s, zs, k_full, v_full, v_half, k1, k2
    cdef long steps = 0
    cdef int i

    if not cb > ca:
        raise ValueError("need b > a")
    if cabs(v) > _U_SWITCH:
        chart = 1
        v = 1.0 / v
    span = x - ca
    h = -span
    x_tol = 1e-14 * (fabs(ca) + fabs(cb) + 1.0)

    while x - ca > x_tol:
        if steps >= cmax:
            raise IntegrationError(f"step budget exhausted at x={x!r}", x_reached=x)
        if x + h < ca:
            h = ca - x
        for i in range(2):
            kmid = _q_eval_c(ckind, cc, mxs, mqs, ctail, x + 0.5 * h) - clam
            s = csqrt(kmid)
            zs = s * h
            if cabs(zs) > 1.2 and fabs(creal(zs)) < 2.0:
                h *= 1.2 / cabs(zs)
            else:
                break
        if ckind == 2:
            h = _snap_to_node_c(mxs, x, h)
        if fabs(h) < 1e-15 * fmax(1.0, fabs(x)):
            raise IntegrationError(f"step size underflow at x={x!r}", x_reached=x)

        k_full = _q_eval_c(ckind, cc, mxs, mqs, ctail, x + 0.5 * h) - clam
        v_full = _prop_c(chart, v, k_full, h)
        k1 = _q_eval_c(ckind, cc, mxs, mqs, ctail, x + 0.25 * h) - clam
        k2 = _q_eval_c(ckind, cc, mxs, mqs, ctail, x + 0.75 * h) - clam
        v_half = _prop_c(chart, _prop_c(chart, v, k1, 0.5 * h), k2, 0.5 * h)

        scale = crtol * (1.0 + fmax(cabs(v), cabs(v_half)))
        err = cabs(v_full - v_half) / scale
        steps += 1
        if not isfinite(err):
            # transient overflow in a trial step: retry with a smaller one
            h *= 0.25
            continue
        if err <= 1.0:
            v = v_half + (v_half - v_full) / 3.0
            x += h
            if chart == 0 and cabs(v) > _U_SWITCH:
                chart = 1
                v = 1.0 / v
            elif chart == 1 and cabs(v) * _U_SWITCH_BACK > 1.0:
                chart = 0
                v = 1.0 / v
            if err == 0.0:
                factor = 4.0
            else:
                factor = fmin(4.0, fmax(0.3, 0.9 * pow(err, -1.0 / 3.0)))
            h *= factor
            if x + h < ca:
                h = ca - x
        else:
            h *= fmax(0.25, 0.9 * pow(err, -1.0 / 3.0))

    if chart == 1:
        if v == 0.0:
            raise PoleError("log-derivative is infinite at the left endpoint (psi(a) = 0)")
        v = 1.0 / v
    return complex(v)


# Dormand-Prince 5(4); last A row equals the 5th-order weights (FSAL).
cdef double _DP_C[7]
cdef double _DP_A[7][6]
cdef double _DP_E[7]
_DP_C[0] = 0.0; _DP_C[1] = 1.0 / 5.0; _DP_C[2] = 3.0 / 10.0; _DP_C[3] = 4.0 / 5.0
_DP_C[4] = 8.0 / 9.0; _DP_C[5] = 1.0; _DP_C[6] = 1.0

cdef void _fill_a() nogil:
    cdef int i, j
    for i in range(7):
        for j in range(6):
            _DP_A[i][j] = 0.0
    _DP_A[1][0] = 1.0 / 5.0
    _DP_A[2][0] = 3.0 / 40.0; _DP_A[2][1] = 9.0 / 40.0
    _DP_A[3][0] = 44.0 / 45.0; _DP_A[3][1] = -56.0 / 15.0; _DP_A[3][2] = 32.0 / 9.0
    _DP_A[4][0] = 19372.0 / 6561.0; _DP_A[4][1] = -25360.0 / 2187.0
    _DP_A[4][2] = 64448.0 / 6561.0; _DP_A[4][3] = -212.0 / 729.0
    _DP_A[5][0] = 9017.0 / 3168.0; _DP_A[5][1] = -355.0 / 33.0
    _DP_A[5][2] = 46732.0 / 5247.0; _DP_A[5][3] = 49.0 / 176.0
    _DP_A[5][4] = -5103.0 / 18656.0
    _DP_A[6][0] = 35.0 / 384.0; _DP_A[6][1] = 0.0; _DP_A[6][2] = 500.0 / 1113.0
    _DP_A[6][3] = 125.0 / 192.0; _DP_A[6][4] = -2187.0 / 6784.0; _DP_A[6][5] = 11.0 / 84.0

_fill_a()
_DP_E[0] = 71.0 / 57600.0; _DP_E[1] = 0.0; _DP_E[2] = -71.0 / 16695.0
_DP_E[3] = 71.0 / 1920.0; _DP_E[4] = -17253.0 / 339200.0; _DP_E[5] = 22.0 / 525.0
_DP_E[6] = -1.0 / 40.0


def cauchy_integrate(kind, c, xs, qs, tail, lam, a, x_max, rel_tol, max_steps=1_000_000):
    cdef double[::1] mxs = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[::1] mqs = np.ascontiguousarray(qs, dtype=np.float64)
    cdef int ckind = kind
    cdef double cc = c, ctail = tail, ca = a, cxmax = x_max, rtol = rel_tol
    cdef double complex clam = lam
    cdef long cmax = max_steps

    if not cxmax > ca:
        raise ValueError("need x_max > a")

    cdef double complex y[4]
    cdef double complex y5[4]
    cdef double complex yi[4]
    cdef double complex k[7][4]
    cdef double complex acc, e, w
    cdef double x = ca, atol = rtol, h, err, err2, sc, d0, d1, factor
    cdef long steps = 0
    cdef int i, j, m, fsal_valid

    y[0] = 0.0; y[1] = 1.0; y[2] = -1.0; y[3] = 0.0

    grid = [x]
    rows = [(complex(y[0]), complex(y[1]), complex(y[2]), complex(y[3]))]

    w = _q_eval_c(ckind, cc, mxs, mqs, ctail, x) - clam
    k[0][0] = y[1]; k[0][1] = w * y[0]; k[0][2] = y[3]; k[0][3] = w * y[2]

    d0 = 0.0
    d1 = 0.0
    for m in range(4):
        sc = atol + rtol * cabs(y[m])
        d0 += (cabs(y[m]) / sc) ** 2
        d1 += (cabs(k[0][m]) / sc) ** 2
    d0 = sqrt(d0 / 4.0)
    d1 = sqrt(d1 / 4.0)
    if d0 < 1e-5 or d1 < 1e-5:
        h = 1e-6
    else:
        h = 0.01 * d0 / d1
    h = fmin(h, cxmax - ca)
    fsal_valid = 1

    while x < cxmax - 1e-14 * (fabs(cxmax) + 1.0):
        if steps >= cmax:
            raise IntegrationError(f"step budget exhausted at x={x!r}", x_reached=x)
        if h < 1e-15 * fmax(1.0, fabs(x)):
            raise IntegrationError(f"step size underflow at x={x!r}", x_reached=x)
        if x + h > cxmax:
            h = cxmax - x
        if not fsal_valid:
            w = _q_eval_c(ckind, cc, mxs, mqs, ctail, x) - clam
            k[0][0] = y[1]; k[0][1] = w * y[0]; k[0][2] = y[3]; k[0][3] = w * y[2]
            fsal_valid = 1
        for i in range(1, 7):
            for m in range(4):
                acc = 0.0
                for j in range(i):
                    if _DP_A[i][j] != 0.0:
                        acc = acc + _DP_A[i][j] * k[j][m]
                yi[m] = y[m] + h * acc
            w = _q_eval_c(ckind, cc, mxs, mqs, ctail, x + _DP_C[i] * h) - clam
            k[i][0] = yi[1]; k[i][1] = w * yi[0]; k[i][2] = yi[3]; k[i][3] = w * yi[2]
        for m in range(4):
            y5[m] = yi[m]  # stage 7 value is the 5th-order solution (FSAL row)
        err2 = 0.0
        for m in range(4):
            e = 0.0
            for j in range(7):
                if _DP_E[j] != 0.0:
                    e = e + _DP_E[j] * k[j][m]
            e = e * h
            sc = atol + rtol * fmax(cabs(y[m]), cabs(y5[m]))
            err2 += (cabs(e) / sc) ** 2
        err = sqrt(err2 / 4.0)
        steps += 1
        if not isfinite(err):
            h *= 0.25
            fsal_valid = 0
            continue
        if err <= 1.0:
            x += h
            for m in range(4):
                y[m] = y5[m]
                k[0][m] = k[6][m]
            grid.append(x)
            rows.append((complex(y[0]), complex(y[1]), complex(y[2]), complex(y[3])))
            if err == 0.0:
                factor = 5.0
            else:
                factor = fmin(5.0, fmax(0.2, 0.9 * pow(err, -0.2)))
            h *= factor
        else:
            h *= fmax(0.2, 0.9 * pow(err, -0.2))
            fsal_valid = 0

    g = np.array(grid, dtype=np.float64)
    arr = np.array(rows, dtype=np.complex128)
    return g, arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), arr[:, 3].copy()


def hermitian_eigenvalues(matrix, max_sweeps=60):
    cdef double complex[:, ::1] A = np.array(matrix, dtype=np.complex128, order="C")
    cdef Py_ssize_t n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("matrix must be square")
    if n == 1:
        return np.array([creal(A[0, 0])])

    cdef double scale = 1.0, off, app, aqq, tau, t, cth, sth, aab
    cdef double complex apq, phi, tp, tq
    cdef Py_ssize_t p, q, i, sweep
    cdef int converged = 0

    for p in range(n):
        for q in range(n):
            scale += cabs(A[p, q]) ** 2
    scale = fmax(1.0, sqrt(scale - 1.0))

    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(n):
                if p != q:
                    off += cabs(A[p, q]) ** 2
        if sqrt(off) <= 1e-13 * scale:
            converged = 1
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                aab = cabs(apq)
                if aab <= 1e-18 * scale:
                    continue
                app = creal(A[p, p])
                aqq = creal(A[q, q])
                phi = apq / aab
                tau = (aqq - app) / (2.0 * aab)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = copysign(1.0, tau) / (fabs(tau) + hypot(1.0, tau))
                cth = 1.0 / sqrt(1.0 + t * t)
                sth = t * cth
                for i in range(n):
                    tp = A[i, p]
                    tq = A[i, q]
                    A[i, p] = cth * tp - sth * phi.conjugate() * tq
                    A[i, q] = sth * tp + cth * phi.conjugate() * tq
                for i in range(n):
                    tp = A[p, i]
                    tq = A[q, i]
                    A[p, i] = cth * tp - sth * phi * tq
                    A[q, i] = sth * tp + cth * phi * tq
    if not converged:
        raise InternalConsistencyError("Jacobi sweeps did not converge")
    out = np.empty(n, dtype=np.float64)
    for p in range(n):
        out[p] = creal(A[p, p])
    out.sort()
    return out
