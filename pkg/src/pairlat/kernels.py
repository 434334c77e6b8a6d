"""Numeric inner loops.

Every function here is compiled by numba when available (see ``_jit``) and
otherwise runs as plain numpy. Kernels never raise on numerical trouble; they
return a status code and the public wrappers in :mod:`pairlat.solvers` turn
that into an exception.
"""

import numpy as np

from ._jit import njit

EPS = 2.220446049250313e-16


# --------------------------------------------------------------------------
# Hamiltonian assembly
# --------------------------------------------------------------------------

@njit
def pair_index(n, m, n_sites):
    """Linear index of the ordered pair (n, m), 1 <= n < m <= n_sites."""
    return (n - 1) * (2 * n_sites - n) // 2 + (m - n - 1)


@njit
def hardcore_entries(n_sites, t1, t2, diag):
    size = n_sites * (n_sites - 1) // 2
    cap = 5 * size
    rows = np.empty(cap, np.int64)
    cols = np.empty(cap, np.int64)
    vals = np.empty(cap, np.float64)
    k = 0
    for n in range(1, n_sites + 1):
        for m in range(n + 1, n_sites + 1):
            i = pair_index(n, m, n_sites)
            rows[k] = i
            cols[k] = i
            vals[k] = diag
            k += 1
            if t1 != 0.0:
                if n > 1:
                    rows[k] = i
                    cols[k] = pair_index(n - 1, m, n_sites)
                    vals[k] = t1
                    k += 1
                if n + 1 < m:
                    rows[k] = i
                    cols[k] = pair_index(n + 1, m, n_sites)
                    vals[k] = t1
                    k += 1
            if t2 != 0.0:
                if m - 1 > n:
                    rows[k] = i
                    cols[k] = pair_index(n, m - 1, n_sites)
                    vals[k] = t2
                    k += 1
                if m < n_sites:
                    rows[k] = i
                    cols[k] = pair_index(n, m + 1, n_sites)
                    vals[k] = t2
                    k += 1
    return rows[:k], cols[:k], vals[:k]


@njit
def finite_u_entries(n_sites, t1, t2, diag, u):
    size = n_sites * n_sites
    cap = 5 * size
    rows = np.empty(cap, np.int64)
    cols = np.empty(cap, np.int64)
    vals = np.empty(cap, np.float64)
    k = 0
    for n in range(n_sites):
        for m in range(n_sites):
            i = n * n_sites + m
            rows[k] = i
            cols[k] = i
            vals[k] = diag + (u if n == m else 0.0)
            k += 1
            for dn in (-1, 1):
                nn = n + dn
                if t1 != 0.0 and 0 <= nn < n_sites:
                    rows[k] = i
                    cols[k] = nn * n_sites + m
                    vals[k] = t1
                    k += 1
                mm = m + dn
                if t2 != 0.0 and 0 <= mm < n_sites:
                    rows[k] = i
                    cols[k] = n * n_sites + mm
                    vals[k] = t2
                    k += 1
    return rows[:k], cols[:k], vals[:k]


# --------------------------------------------------------------------------
# Real symmetric eigenproblem: Householder tridiagonalization + implicit QL
# --------------------------------------------------------------------------

@njit
def tridiagonalize(a):
    """Householder reduction A = Q T Q^T.

    Returns (d, e, reflectors); ``e[i]`` couples i and i+1, ``e[-1] = 0``.
    Row k of ``reflectors`` holds the unit vector of step k in columns k+1:.
    """
    n = a.shape[0]
    A = a.copy()
    vs = np.zeros((n, n))
    for k in range(n - 2):
        x = A[k + 1:, k].copy()
        xn = np.sqrt(np.sum(x * x))
        if xn == 0.0:
            continue
        alpha = -xn if x[0] >= 0.0 else xn
        x[0] -= alpha
        vn = np.sqrt(np.sum(x * x))
        if vn == 0.0:
            continue
        v = x / vn
        sub = np.ascontiguousarray(A[k + 1:, k + 1:])
        p = sub @ v
        w = 2.0 * (p - (v @ p) * v)
        sub -= np.outer(v, w) + np.outer(w, v)
        A[k + 1:, k + 1:] = sub
        A[k + 1:, k] = 0.0
        A[k, k + 1:] = 0.0
        A[k + 1, k] = alpha
        A[k, k + 1] = alpha
        vs[k, k + 1:] = v
    d = np.empty(n)
    e = np.zeros(n)
    for i in range(n):
        d[i] = A[i, i]
        if i + 1 < n:
            e[i] = A[i + 1, i]
    return d, e, vs


@njit
def apply_reflectors(vs, u):
    """Overwrite ``u`` (n x k) with Q u for Q stored by ``tridiagonalize``."""
    n = u.shape[0]
    for k in range(n - 3, -1, -1):
        v = vs[k, k + 1:]
        if not np.any(v):
            continue
        blk = np.ascontiguousarray(u[k + 1:, :])
        y = v @ blk
        blk -= 2.0 * np.outer(v, y)
        u[k + 1:, :] = blk
    return u


@njit
def tql_implicit(d, e, zt, max_iter):
    """Implicit-shift QL on the symmetric tridiagonal (d, e).

    ``d`` and ``e`` are overwritten; ``zt`` holds eigenvectors as *rows*
    (pass the identity, or Q^T). Returns -1 on success, otherwise the index
    whose eigenvalue failed to converge within ``max_iter`` sweeps.
    """
    n = d.shape[0]
    vectors = zt.shape[0] == n
    f = 0.0
    tst1 = 0.0
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n - 1:
            if abs(e[m]) <= EPS * tst1:
                break
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > max_iter:
                    return l
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = np.hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                for i in range(l + 2, n):
                    d[i] -= h
                f += h
                p = d[m]
                c = 1.0
                c2 = c
                c3 = c
                el1 = e[l + 1]
                s = 0.0
                s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = np.hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    if vectors:
                        zi = zt[i].copy()
                        zi1 = zt[i + 1].copy()
                        zt[i + 1] = s * zi + c * zi1
                        zt[i] = c * zi - s * zi1
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if abs(e[l]) <= EPS * tst1:
                    break
        d[l] = d[l] + f
        e[l] = 0.0
    return -1


# --------------------------------------------------------------------------
# Complex non-Hermitian eigenproblem
# --------------------------------------------------------------------------

@njit
def balance(a):
    """Diagonal similarity by powers of two, A_b = D^{-1} A D."""
    n = a.shape[0]
    A = a.copy()
    scale = np.ones(n)
    radix = 2.0
    sqrdx = radix * radix
    for _sweep in range(200):
        done = True
        for i in range(n):
            c = 0.0
            r = 0.0
            for j in range(n):
                if j != i:
                    c += abs(A[j, i])
                    r += abs(A[i, j])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                A[i, :] /= f
                A[:, i] *= f
                scale[i] *= f
        if done:
            break
    return A, scale


@njit
def hessenberg(a):
    """Householder reduction to upper Hessenberg form, H = P^H A P."""
    n = a.shape[0]
    H = a.copy()
    vs = np.zeros((n, n), np.complex128)
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        xn = np.sqrt(np.sum(np.abs(x) ** 2))
        if xn == 0.0:
            continue
        x0 = x[0]
        ph = x0 / abs(x0) if x0 != 0 else 1.0 + 0.0j
        alpha = -ph * xn
        x[0] -= alpha
        vn = np.sqrt(np.sum(np.abs(x) ** 2))
        if vn == 0.0:
            continue
        v = x / vn
        blk = np.ascontiguousarray(H[k + 1:, k:])
        y = np.conj(v) @ blk
        blk -= 2.0 * np.outer(v, y)
        H[k + 1:, k:] = blk
        blk2 = np.ascontiguousarray(H[:, k + 1:])
        y2 = blk2 @ v
        blk2 -= 2.0 * np.outer(y2, np.conj(v))
        H[:, k + 1:] = blk2
        H[k + 2:, k] = 0.0
        vs[k, k + 1:] = v
    return H, vs


@njit
def _abs1(z):
    return abs(z.real) + abs(z.imag)


@njit
def hessenberg_eigvals(h, max_iter):
    """Single-shift complex QR on an upper Hessenberg matrix.

    Returns (eigenvalues, status, sweeps); status is -1 on success or the
    index of the eigenvalue that did not converge.
    """
    n = h.shape[0]
    H = h.copy()
    w = np.zeros(n, np.complex128)
    norm = 0.0
    for i in range(n):
        for j in range(n):
            norm += _abs1(H[i, j])
    cs = np.zeros(n, np.complex128)
    sn = np.zeros(n, np.complex128)
    hi = n - 1
    its = 0
    sweeps = 0
    while hi >= 0:
        l = hi
        while l > 0:
            s = _abs1(H[l - 1, l - 1]) + _abs1(H[l, l])
            if s == 0.0:
                s = norm
            if _abs1(H[l, l - 1]) <= EPS * s:
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            w[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        its += 1
        sweeps += 1
        if its > max_iter:
            return w, hi, sweeps
        if its % 11 == 0:
            mu = H[hi, hi] + 0.75 * _abs1(H[hi, hi - 1])
        else:
            a = H[hi - 1, hi - 1]
            b = H[hi - 1, hi]
            c = H[hi, hi - 1]
            d = H[hi, hi]
            half = 0.5 * (a - d)
            disc = np.sqrt(half * half + b * c)
            mu1 = 0.5 * (a + d) + disc
            mu2 = 0.5 * (a + d) - disc
            mu = mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2
        for i in range(l, hi + 1):
            H[i, i] -= mu
        for k in range(l, hi):
            x = H[k, k]
            y = H[k + 1, k]
            r = np.sqrt(abs(x) ** 2 + abs(y) ** 2)
            if r == 0.0:
                c = 1.0 + 0.0j
                s = 0.0 + 0.0j
            else:
                c = x / r
                s = y / r
            cs[k] = c
            sn[k] = s
            rk = H[k, k:hi + 1].copy()
            rk1 = H[k + 1, k:hi + 1].copy()
            H[k, k:hi + 1] = np.conj(c) * rk + np.conj(s) * rk1
            H[k + 1, k:hi + 1] = -s * rk + c * rk1
        for k in range(l, hi):
            c = cs[k]
            s = sn[k]
            ck = H[l:k + 2, k].copy()
            ck1 = H[l:k + 2, k + 1].copy()
            H[l:k + 2, k] = c * ck + s * ck1
            H[l:k + 2, k + 1] = -np.conj(s) * ck + np.conj(c) * ck1
        for i in range(l, hi + 1):
            H[i, i] += mu
    return w, -1, sweeps


@njit
def _hess_solve(h, lam, rhs, tiny):
    """Solve (H - lam I) x = rhs for upper Hessenberg H by pivoted LU."""
    n = h.shape[0]
    U = h.copy()
    for i in range(n):
        U[i, i] -= lam
    x = rhs.copy()
    for k in range(n - 1):
        if abs(U[k + 1, k]) > abs(U[k, k]):
            tmp = U[k, k:].copy()
            U[k, k:] = U[k + 1, k:]
            U[k + 1, k:] = tmp
            t = x[k]
            x[k] = x[k + 1]
            x[k + 1] = t
        piv = U[k, k]
        if abs(piv) < tiny:
            piv = tiny + 0.0j
            U[k, k] = piv
        mult = U[k + 1, k] / piv
        U[k + 1, k:] -= mult * U[k, k:]
        x[k + 1] -= mult * x[k]
    if abs(U[n - 1, n - 1]) < tiny:
        U[n - 1, n - 1] = tiny
    for i in range(n - 1, -1, -1):
        acc = x[i]
        for j in range(i + 1, n):
            acc -= U[i, j] * x[j]
        x[i] = acc / U[i, i]
        if abs(x[i]) > 1e100:
            x /= abs(x[i])
    return x


@njit
def inverse_iteration(h, vs, w, cluster_tol, n_iter):
    """Right eigenvectors of H (Hessenberg basis), mapped back through P.

    Vectors of eigenvalues closer than ``cluster_tol`` are orthogonalized
    against each other so a degenerate eigenspace yields independent vectors.
    """
    n = h.shape[0]
    norm = 0.0
    for i in range(n):
        for j in range(n):
            norm += abs(h[i, j])
    if norm == 0.0:
        norm = 1.0
    tiny = EPS * norm
    Yt = np.zeros((n, n), np.complex128)
    for i in range(n):
        x = np.empty(n, np.complex128)
        for j in range(n):
            x[j] = 1.0 + 0.5 * np.sin(0.7 * (j + 1) * (i + 1)) + 0.0j
        for _ in range(n_iter):
            x = _hess_solve(h, w[i], x, tiny)
            for j in range(i):
                if abs(w[j] - w[i]) <= cluster_tol:
                    x -= (np.conj(Yt[j]) @ x) * Yt[j]
            nx = np.sqrt(np.sum(np.abs(x) ** 2))
            if nx == 0.0:
                x = np.zeros(n, np.complex128)
                x[i % n] = 1.0
                nx = 1.0
            x /= nx
        Yt[i] = x
    Y = np.ascontiguousarray(Yt.T)
    for k in range(n - 3, -1, -1):
        v = vs[k, k + 1:]
        if not np.any(v != 0):
            continue
        blk = np.ascontiguousarray(Y[k + 1:, :])
        y = np.conj(v) @ blk
        blk -= 2.0 * np.outer(v, y)
        Y[k + 1:, :] = blk
    return Y


# --------------------------------------------------------------------------
# Bessel functions of the first kind, integer order
# --------------------------------------------------------------------------

@njit
def _bessel_series(nmax, x):
    out = np.zeros(nmax + 1)
    hx = 0.5 * x
    q = -hx * hx
    lead = 1.0
    for n in range(nmax + 1):
        if n > 0:
            lead *= hx / n
        if lead == 0.0:
            break
        term = lead
        acc = term
        k = 1
        while True:
            term *= q / (k * (n + k))
            acc += term
            if abs(term) <= 1e-17 * abs(acc):
                break
            k += 1
        out[n] = acc
    return out


@njit
def bessel_j_table(nmax, x):
    """J_0(x) ... J_nmax(x) for real x by downward (Miller) recurrence.

    The recurrence is normalized with J_0 + 2 sum_k J_2k = 1. For |x| < 1 the
    power series is used instead.
    """
    ax = abs(x)
    if ax == 0.0:
        out = np.zeros(nmax + 1)
        out[0] = 1.0
        return out
    if ax < 1.0:
        out = _bessel_series(nmax, ax)
    else:
        top = max(nmax, int(ax))
        start = top + 30 + int(np.sqrt(80.0 * top))
        start += start % 2
        out = np.zeros(nmax + 1)
        big = 1e250
        jp1 = 0.0
        j = 1e-300
        norm = 0.0
        for k in range(start, 0, -1):
            jm1 = 2.0 * k / ax * j - jp1
            jp1 = j
            j = jm1
            if abs(j) > big:
                j /= big
                jp1 /= big
                norm /= big
                for i in range(nmax + 1):
                    out[i] /= big
            if k - 1 <= nmax:
                out[k - 1] = j
            if (k - 1) % 2 == 0 and k - 1 > 0:
                norm += 2.0 * j
        norm += j
        out /= norm
    if x < 0.0:
        for i in range(1, nmax + 1, 2):
            out[i] = -out[i]
    return out
