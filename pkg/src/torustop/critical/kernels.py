"""Hot loops of the total-degree homotopy: evaluation, linear solves, tracking.

A square polynomial system in ``N`` unknowns is packed as

* ``coeffs``  complex128[T]     term coefficients,
* ``exps``    int64[T, N]       term exponents,
* ``ptr``     int64[N + 1]      terms of equation ``j`` are ``ptr[j]:ptr[j+1]``.

The homotopy is ``H(x, t) = (1 - t) F(x) + t * gamma * G(x)`` with start
system ``G_j = x_j^{d_j} - 1``, tracked from ``t = 1`` to ``t = 0``.

Under numba the loop-style evaluators are compiled; otherwise vectorized
numpy evaluators are bound to the same names and the tracker runs as plain
Python.
"""

import numpy as np

from .._accel import USE_NUMBA, jit

TRACK_OK = 0
TRACK_DIVERGED = 1
TRACK_MIN_STEP = 2
TRACK_MAX_STEPS = 3
TRACK_SINGULAR = 4

STATUS_NAMES = {
    TRACK_OK: "ok",
    TRACK_DIVERGED: "diverged",
    TRACK_MIN_STEP: "min_step",
    TRACK_MAX_STEPS: "max_steps",
    TRACK_SINGULAR: "singular_jacobian",
}


def _ipow(z, e):
    r = 1.0 + 0.0j
    for _ in range(e):
        r = r * z
    return r


def _eval_system_loops(x, coeffs, exps, ptr, F, J):
    n = x.shape[0]
    for j in range(n):
        F[j] = 0.0
        for v in range(n):
            J[j, v] = 0.0
    for eq in range(n):
        for k in range(ptr[eq], ptr[eq + 1]):
            c = coeffs[k]
            m = c
            for v in range(n):
                m = m * _ipow(x[v], exps[k, v])
            F[eq] += m
            for v in range(n):
                e = exps[k, v]
                if e == 0:
                    continue
                d = c * e
                for w in range(n):
                    if w == v:
                        d = d * _ipow(x[w], e - 1)
                    else:
                        d = d * _ipow(x[w], exps[k, w])
                J[eq, v] += d


def _term_scale_loops(x, coeffs, exps, ptr, out):
    n = x.shape[0]
    for eq in range(n):
        s = 0.0
        for k in range(ptr[eq], ptr[eq + 1]):
            m = abs(coeffs[k])
            for v in range(n):
                m = m * abs(x[v]) ** exps[k, v]
            s += m
        out[eq] = s


def _solve_linear_loops(A, b):
    n = b.shape[0]
    M = A.copy()
    y = b.copy()
    scale = 0.0
    for i in range(n):
        for j in range(n):
            if abs(M[i, j]) > scale:
                scale = abs(M[i, j])
    if scale == 0.0:
        return y, False
    for col in range(n):
        piv = col
        best = abs(M[col, col])
        for r in range(col + 1, n):
            if abs(M[r, col]) > best:
                best = abs(M[r, col])
                piv = r
        if best <= 1e-300 or best <= 1e-15 * scale:
            return y, False
        if piv != col:
            for j in range(n):
                tmp = M[col, j]
                M[col, j] = M[piv, j]
                M[piv, j] = tmp
            tmp = y[col]
            y[col] = y[piv]
            y[piv] = tmp
        inv = 1.0 / M[col, col]
        for r in range(col + 1, n):
            f = M[r, col] * inv
            if f != 0:
                for j in range(col, n):
                    M[r, j] -= f * M[col, j]
                y[r] -= f * y[col]
    for i in range(n - 1, -1, -1):
        acc = y[i]
        for j in range(i + 1, n):
            acc -= M[i, j] * y[j]
        y[i] = acc / M[i, i]
    return y, True


def _eval_system_numpy(x, coeffs, exps, ptr, F, J):
    n = x.shape[0]
    eq = np.repeat(np.arange(n), np.diff(ptr))
    powers = x[None, :] ** exps
    F[:] = 0.0
    np.add.at(F, eq, coeffs * powers.prod(axis=1))
    J[:, :] = 0.0
    for v in range(n):
        ev = exps[:, v]
        lowered = exps.copy()
        lowered[:, v] = np.maximum(ev - 1, 0)
        dterms = coeffs * ev * (x[None, :] ** lowered).prod(axis=1)
        np.add.at(J[:, v], eq, dterms)


def _term_scale_numpy(x, coeffs, exps, ptr, out):
    n = x.shape[0]
    eq = np.repeat(np.arange(n), np.diff(ptr))
    out[:] = 0.0
    np.add.at(out, eq, np.abs(coeffs) * (np.abs(x)[None, :] ** exps).prod(axis=1))


def _solve_linear_numpy(A, b):
    scale = np.abs(A).max() if A.size else 0.0
    if scale == 0.0:
        return b.copy(), False
    try:
        y = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        return b.copy(), False
    if not np.all(np.isfinite(y)) or np.linalg.cond(A) > 1e15:
        return b.copy(), False
    return y, True


if USE_NUMBA:
    eval_system = jit(_eval_system_loops)
    term_scale = jit(_term_scale_loops)
    solve_linear = jit(_solve_linear_loops)
    _ipow = jit(_ipow)
else:
    eval_system = _eval_system_numpy
    term_scale = _term_scale_numpy
    solve_linear = _solve_linear_numpy


@jit
def homotopy(x, t, coeffs, exps, ptr, degs, gamma, F, JF, H, Hx, Ht):
    eval_system(x, coeffs, exps, ptr, F, JF)
    n = x.shape[0]
    for j in range(n):
        xd = _ipow(x[j], degs[j] - 1)
        g = xd * x[j] - 1.0
        H[j] = (1.0 - t) * F[j] + t * gamma * g
        Ht[j] = gamma * g - F[j]
        for v in range(n):
            Hx[j, v] = (1.0 - t) * JF[j, v]
        Hx[j, j] += t * gamma * degs[j] * xd


@jit
def _velocity(x, t, coeffs, exps, ptr, degs, gamma, F, JF, H, Hx, Ht):
    homotopy(x, t, coeffs, exps, ptr, degs, gamma, F, JF, H, Hx, Ht)
    v, ok = solve_linear(Hx, -Ht)
    return v, ok


@jit
def _norm(x):
    s = 0.0
    for i in range(x.shape[0]):
        s += x[i].real * x[i].real + x[i].imag * x[i].imag
    return np.sqrt(s)


@jit
def track_path(
    x0, coeffs, exps, ptr, degs, gamma, h_min, h_max, max_steps, corrector_tol, trust, divergence_bound, t_end
):
    """Predictor (RK4) / corrector (Newton) tracking of one path to t = 0.

    A step is rejected unless Newton at the new ``t`` converges with a small
    first update and contracting later ones.  ``h_min`` is a relative floor:
    tracking stops with ``TRACK_MIN_STEP`` once ``h < h_min * t``.

    Below ``t = 0.1`` steps are capped at half the remaining ``t``, so the
    approach to ``t = 0`` is geometric.  Paths often still move by O(1) when
    ``t`` is tiny, and a direct jump to ``t = 0`` can land in the basin of a
    neighbouring root.  Tracking ends at ``t_end``; the caller finishes with
    Newton on the target system.

    Returns ``(x, t, status, steps)``.
    """
    n = x0.shape[0]
    x = x0.copy()
    F = np.zeros(n, dtype=np.complex128)
    H = np.zeros(n, dtype=np.complex128)
    Ht = np.zeros(n, dtype=np.complex128)
    JF = np.zeros((n, n), dtype=np.complex128)
    Hx = np.zeros((n, n), dtype=np.complex128)
    t = 1.0
    h = min(0.05, h_max)
    status = TRACK_OK
    steps = 0
    streak = 0
    while t > t_end:
        if steps >= max_steps:
            status = TRACK_MAX_STEPS
            break
        steps += 1
        dt = min(h, t)
        if t <= 0.1:
            dt = min(dt, 0.5 * t)
        k1, ok1 = _velocity(x, t, coeffs, exps, ptr, degs, gamma, F, JF, H, Hx, Ht)
        k2, ok2 = _velocity(x - 0.5 * dt * k1, t - 0.5 * dt, coeffs, exps, ptr, degs, gamma, F, JF, H, Hx, Ht)
        k3, ok3 = _velocity(x - 0.5 * dt * k2, t - 0.5 * dt, coeffs, exps, ptr, degs, gamma, F, JF, H, Hx, Ht)
        k4, ok4 = _velocity(x - dt * k3, t - dt, coeffs, exps, ptr, degs, gamma, F, JF, H, Hx, Ht)
        ok = ok1 and ok2 and ok3 and ok4
        t_new = t - dt
        if t_new < 0.0:
            t_new = 0.0
        xc = x - (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        converged = False
        if ok:
            prev = 0.0
            for it in range(3):
                homotopy(xc, t_new, coeffs, exps, ptr, degs, gamma, F, JF, H, Hx, Ht)
                dx, okl = solve_linear(Hx, -H)
                if not okl:
                    break
                xc = xc + dx
                nd = _norm(dx)
                scale = 1.0 + _norm(xc)
                if nd <= corrector_tol * scale:
                    converged = True
                    break
                if it == 0 and nd > trust * scale:
                    break
                if it > 0 and nd > 0.25 * prev:
                    break
                prev = nd
        if converged:
            x = xc
            t = t_new
            streak += 1
            if streak >= 3:
                h = min(2.0 * h, h_max)
                streak = 0
            if _norm(x) > divergence_bound:
                status = TRACK_DIVERGED
                break
        else:
            streak = 0
            h = 0.5 * h
            # the floor is relative to the remaining t: near t = 0 the path
            # may still move by O(1) while t shrinks geometrically
            if h < h_min * t:
                status = TRACK_MIN_STEP
                break
    return x, t, status, steps


@jit
def polish(x0, coeffs, exps, ptr, max_iters):
    """Newton on ``F`` alone; returns ``(x, relative residual per equation max)``."""
    n = x0.shape[0]
    x = x0.copy()
    F = np.zeros(n, dtype=np.complex128)
    J = np.zeros((n, n), dtype=np.complex128)
    scale = np.zeros(n)
    for _ in range(max_iters):
        eval_system(x, coeffs, exps, ptr, F, J)
        dx, ok = solve_linear(J, -F)
        if not ok:
            break
        x = x + dx
        if _norm(dx) <= 1e-15 * (1.0 + _norm(x)):
            break
        if _norm(x) > 1e12:
            break
    eval_system(x, coeffs, exps, ptr, F, J)
    term_scale(x, coeffs, exps, ptr, scale)
    res = 0.0
    for j in range(n):
        r = abs(F[j]) / max(1.0, scale[j])
        if r > res:
            res = r
    return x, res
