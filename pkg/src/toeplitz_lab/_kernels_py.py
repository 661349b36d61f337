"""Pure-Python search kernels; same algorithm and outputs as the ``_kernels`` extension."""

from __future__ import annotations

import math

import numpy as np

NAME = "python"


def _objective(x, m: int, k: int, code: int, lam: complex) -> float:
    s = 0.0
    for j in range(m):
        s += x[m + j] * x[m + j]
    q1 = 0j
    q2 = 0j
    for j in range(m):
        w = x[m + j] * x[m + j] / s if s > 0.0 else 1.0 / m
        t = x[j]
        q1 += w * complex(math.cos(t), math.sin(t))
        q2 += w * complex(math.cos(2.0 * t), math.sin(2.0 * t))
    q1 = 2.0 * q1
    q2 = 2.0 * q2
    a = q1 / k
    b = (k * q2 + q1 * q1) / (2.0 * k * k)
    a2 = a * a
    if code == 0:
        return abs(a2 - b * b)
    if code == 1:
        return abs(1.0 - b * b - 2.0 * a2 + 2.0 * a2 * b)
    return abs(b - lam * a2)


def batch_objective(params, k: int, code: int, lam: complex = 0.0) -> np.ndarray:
    params = np.ascontiguousarray(params, dtype=np.float64)
    m = params.shape[1] // 2
    theta = params[:, :m]
    sq = params[:, m:] ** 2
    s = sq.sum(axis=1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(s > 0.0, sq / s, 1.0 / m)
    q1 = 2.0 * (w * np.exp(1j * theta)).sum(axis=1)
    q2 = 2.0 * (w * np.exp(2j * theta)).sum(axis=1)
    a = q1 / k
    b = (k * q2 + q1 * q1) / (2.0 * k * k)
    a2 = a * a
    if code == 0:
        return np.abs(a2 - b * b)
    if code == 1:
        return np.abs(1.0 - b * b - 2.0 * a2 + 2.0 * a2 * b)
    return np.abs(b - lam * a2)


def _sort_simplex(xs, fs):
    order = sorted(range(len(fs)), key=fs.__getitem__)
    xs[:] = [xs[i] for i in order]
    fs[:] = [fs[i] for i in order]


def _nelder_mead(x, k, code, lam, tol, max_iters, step):
    d = len(x)
    m = d // 2
    xtol = math.sqrt(tol)
    ne = 0

    def f(p):
        return -_objective(p, m, k, code, lam)

    xs = []
    fs = []
    for i in range(d + 1):
        p = list(x)
        if i > 0:
            p[i - 1] += step
        xs.append(p)
        fs.append(f(p))
        ne += 1
    _sort_simplex(xs, fs)

    converged = False
    for _ in range(max_iters):
        spread = abs(fs[d] - fs[0])
        x0 = xs[0]
        diam = max(abs(xs[i][c] - x0[c]) for i in range(1, d + 1) for c in range(d))
        if spread <= tol * (1.0 + abs(fs[0])) and diam <= xtol:
            converged = True
            break

        cen = [0.0] * d
        for i in range(d):
            for c in range(d):
                cen[c] += xs[i][c]
        cen = [v / d for v in cen]
        worst = xs[d]

        xr = [cen[c] + (cen[c] - worst[c]) for c in range(d)]
        fr = f(xr)
        ne += 1
        shrink = False
        if fr < fs[0]:
            xe = [cen[c] + 2.0 * (xr[c] - cen[c]) for c in range(d)]
            fe = f(xe)
            ne += 1
            if fe < fr:
                xs[d], fs[d] = xe, fe
            else:
                xs[d], fs[d] = xr, fr
        elif fr < fs[d - 1]:
            xs[d], fs[d] = xr, fr
        else:
            if fr < fs[d]:
                xc = [cen[c] + 0.5 * (xr[c] - cen[c]) for c in range(d)]
                fc = f(xc)
                ne += 1
                if fc <= fr:
                    xs[d], fs[d] = xc, fc
                else:
                    shrink = True
            else:
                xc = [cen[c] + 0.5 * (worst[c] - cen[c]) for c in range(d)]
                fc = f(xc)
                ne += 1
                if fc < fs[d]:
                    xs[d], fs[d] = xc, fc
                else:
                    shrink = True
            if shrink:
                best = xs[0]
                for i in range(1, d + 1):
                    xs[i] = [best[c] + 0.5 * (xs[i][c] - best[c]) for c in range(d)]
                    fs[i] = f(xs[i])
                    ne += 1
        _sort_simplex(xs, fs)

    return xs[0], -fs[0], ne, converged


def multistart(starts, k: int, code: int, lam: complex = 0.0, tol: float = 1e-10,
               max_iters: int = 2000, step: float = 0.25, restarts: int = 1):
    starts = np.ascontiguousarray(starts, dtype=np.float64)
    n = starts.shape[0]
    xout = starts.copy()
    fout = np.empty(n)
    eout = np.zeros(n, dtype=np.int64)
    cout = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        x, fb, ne, conv = _nelder_mead(starts[i].tolist(), k, code, lam, tol, max_iters, step)
        for _ in range(restarts):
            prev = fb
            x, fb, e, conv = _nelder_mead(x, k, code, lam, tol, max_iters, step * 0.1)
            ne += e
            if fb - prev <= tol * (1.0 + abs(prev)):
                break
        xout[i] = x
        fout[i] = fb
        eout[i] = ne
        cout[i] = conv
    return xout, fout, eout, cout
