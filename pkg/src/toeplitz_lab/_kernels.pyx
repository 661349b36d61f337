# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernels.

Parameter vectors are ``(theta_1..theta_m, v_1..v_m)``; weights are
``v_j**2 / sum(v**2)``.  Functional codes: 0 = T22, 1 = T31, 2 = FS(lambda).
Must stay in step with ``_kernels_py``.
"""

import numpy as np

from libc.math cimport cos, sin, sqrt, fabs

cdef extern from "complex.h" nogil:
    double cabs(double complex)

NAME = "cython"


cdef double _objective(const double* x, Py_ssize_t m, int k, int code,
                       double complex lam) noexcept nogil:
    cdef Py_ssize_t j
    cdef double s = 0.0, w, t
    cdef double complex q1 = 0.0, q2 = 0.0, a, b, a2
    for j in range(m):
        s += x[m + j] * x[m + j]
    for j in range(m):
        if s > 0.0:
            w = x[m + j] * x[m + j] / s
        else:
            w = 1.0 / m
        t = x[j]
        q1 += w * (cos(t) + 1j * sin(t))
        q2 += w * (cos(2.0 * t) + 1j * sin(2.0 * t))
    q1 = 2.0 * q1
    q2 = 2.0 * q2
    a = q1 / k
    b = (k * q2 + q1 * q1) / (2.0 * k * k)
    a2 = a * a
    if code == 0:
        return cabs(a2 - b * b)
    elif code == 1:
        return cabs(1.0 - b * b - 2.0 * a2 + 2.0 * a2 * b)
    return cabs(b - lam * a2)


def batch_objective(double[:, ::1] params, int k, int code, double complex lam=0.0):
    cdef Py_ssize_t n = params.shape[0], d = params.shape[1], i
    cdef Py_ssize_t m = d // 2
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _objective(&params[i, 0], m, k, code, lam)
    return out


cdef void _sort_simplex(double* xs, double* fs, Py_ssize_t d) noexcept nogil:
    # insertion sort on fs (ascending), stable; simplex rows are d wide
    cdef Py_ssize_t i, j, c
    cdef double fv, tmp
    for i in range(1, d + 1):
        j = i
        while j > 0 and fs[j - 1] > fs[j]:
            fv = fs[j]; fs[j] = fs[j - 1]; fs[j - 1] = fv
            for c in range(d):
                tmp = xs[j * d + c]; xs[j * d + c] = xs[(j - 1) * d + c]; xs[(j - 1) * d + c] = tmp
            j -= 1


cdef int _nelder_mead(double* x, Py_ssize_t d, int k, int code, double complex lam,
                      double tol, int max_iters, double step,
                      double* xs, double* fs, double* cen, double* xr, double* xe,
                      double* fbest, long* nevals) noexcept nogil:
    """Minimise -objective from ``x`` in place. Returns 1 if converged."""
    cdef Py_ssize_t m = d // 2, i, c
    cdef double fr, fe, fc, spread, diam, v
    cdef long ne = 0
    cdef int it, shrink, converged = 0
    cdef double xtol = sqrt(tol)

    for i in range(d + 1):
        for c in range(d):
            xs[i * d + c] = x[c]
        if i > 0:
            xs[i * d + i - 1] += step
        fs[i] = -_objective(&xs[i * d], m, k, code, lam)
        ne += 1
    _sort_simplex(xs, fs, d)

    for it in range(max_iters):
        spread = fabs(fs[d] - fs[0])
        diam = 0.0
        for i in range(1, d + 1):
            for c in range(d):
                v = fabs(xs[i * d + c] - xs[c])
                if v > diam:
                    diam = v
        if spread <= tol * (1.0 + fabs(fs[0])) and diam <= xtol:
            converged = 1
            break

        for c in range(d):
            cen[c] = 0.0
        for i in range(d):
            for c in range(d):
                cen[c] += xs[i * d + c]
        for c in range(d):
            cen[c] = cen[c] / d

        for c in range(d):
            xr[c] = cen[c] + (cen[c] - xs[d * d + c])
        fr = -_objective(xr, m, k, code, lam)
        ne += 1
        shrink = 0
        if fr < fs[0]:
            for c in range(d):
                xe[c] = cen[c] + 2.0 * (xr[c] - cen[c])
            fe = -_objective(xe, m, k, code, lam)
            ne += 1
            if fe < fr:
                for c in range(d):
                    xs[d * d + c] = xe[c]
                fs[d] = fe
            else:
                for c in range(d):
                    xs[d * d + c] = xr[c]
                fs[d] = fr
        elif fr < fs[d - 1]:
            for c in range(d):
                xs[d * d + c] = xr[c]
            fs[d] = fr
        else:
            if fr < fs[d]:
                # outside contraction
                for c in range(d):
                    xe[c] = cen[c] + 0.5 * (xr[c] - cen[c])
                fc = -_objective(xe, m, k, code, lam)
                ne += 1
                if fc <= fr:
                    for c in range(d):
                        xs[d * d + c] = xe[c]
                    fs[d] = fc
                else:
                    shrink = 1
            else:
                # inside contraction
                for c in range(d):
                    xe[c] = cen[c] + 0.5 * (xs[d * d + c] - cen[c])
                fc = -_objective(xe, m, k, code, lam)
                ne += 1
                if fc < fs[d]:
                    for c in range(d):
                        xs[d * d + c] = xe[c]
                    fs[d] = fc
                else:
                    shrink = 1
            if shrink:
                for i in range(1, d + 1):
                    for c in range(d):
                        xs[i * d + c] = xs[c] + 0.5 * (xs[i * d + c] - xs[c])
                    fs[i] = -_objective(&xs[i * d], m, k, code, lam)
                    ne += 1
        _sort_simplex(xs, fs, d)

    for c in range(d):
        x[c] = xs[c]
    fbest[0] = -fs[0]
    nevals[0] += ne
    return converged


def multistart(double[:, ::1] starts, int k, int code, double complex lam=0.0,
               double tol=1e-10, int max_iters=2000, double step=0.25, int restarts=1):
    """Run Nelder-Mead from every row of ``starts``.

    Returns ``(x_best, f_best, evaluations, converged)`` per start.  Each
    start is followed by up to ``restarts`` fresh simplices at its optimum.
    """
    cdef Py_ssize_t n = starts.shape[0], d = starts.shape[1], i, r
    xout = np.array(starts, dtype=np.float64, copy=True, order="C")
    fout = np.empty(n, dtype=np.float64)
    eout = np.zeros(n, dtype=np.int64)
    cout = np.zeros(n, dtype=np.bool_)
    cdef double[:, ::1] X = xout
    cdef double[::1] F = fout
    cdef long[::1] E = eout
    work = np.empty((d + 1) * d + (d + 1) + 3 * d, dtype=np.float64)
    cdef double[::1] W = work
    cdef double* xs = &W[0]
    cdef double* fs = xs + (d + 1) * d
    cdef double* cen = fs + (d + 1)
    cdef double* xr = cen + d
    cdef double* xe = xr + d
    cdef double fb, prev
    cdef long ne
    cdef int conv
    cdef unsigned char[::1] C = cout.view(np.uint8)
    with nogil:
        for i in range(n):
            ne = 0
            conv = _nelder_mead(&X[i, 0], d, k, code, lam, tol, max_iters, step,
                                xs, fs, cen, xr, xe, &fb, &ne)
            for r in range(restarts):
                prev = fb
                conv = _nelder_mead(&X[i, 0], d, k, code, lam, tol, max_iters, step * 0.1,
                                    xs, fs, cen, xr, xe, &fb, &ne)
                if fb - prev <= tol * (1.0 + fabs(prev)):
                    break
            F[i] = fb
            E[i] = ne
            C[i] = conv
    return xout, fout, eout, cout
