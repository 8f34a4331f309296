"""Compiled inner loops for the symmetric band / tridiagonal eigensolvers.

Band storage throughout is lower form with one extra row for the bulge:
``w[d, j] = A[j + d, j]`` for ``d = 0 .. b + 1``.
"""

import numpy as np
from numba import njit

# QL status codes returned alongside the eigenvalues
QL_OK = -1


@njit(cache=True)
def _get(w, i, j):
    if i < j:
        i, j = j, i
    d = i - j
    if d >= w.shape[0]:
        return 0.0
    return w[d, j]


@njit(cache=True)
def _set(w, i, j, value):
    if i < j:
        i, j = j, i
    w[i - j, j] = value


@njit(cache=True)
def _rotate(w, p, c, s, b, n):
    """Similarity with the Givens rotation G = [[c, s], [-s, c]] on rows/cols p, p+1."""
    q = p + 1
    lo = max(0, p - b - 1)
    hi = min(n, q + b + 2)
    for x in range(lo, hi):
        if x == p or x == q:
            continue
        dp = abs(p - x)
        dq = abs(q - x)
        if dp > b + 1 and dq > b + 1:
            continue
        apx = _get(w, p, x)
        aqx = _get(w, q, x)
        npx = c * apx + s * aqx
        nqx = -s * apx + c * aqx
        if dp <= b + 1:
            _set(w, p, x, npx)
        if dq <= b + 1:
            _set(w, q, x, nqx)
    app = w[0, p]
    aqq = w[0, q]
    apq = w[1, p]
    w[0, p] = c * c * app + 2.0 * c * s * apq + s * s * aqq
    w[0, q] = s * s * app - 2.0 * c * s * apq + c * c * aqq
    w[1, p] = (c * c - s * s) * apq + c * s * (aqq - app)


@njit(cache=True)
def _givens(f, g):
    """c, s with -s*f + c*g == 0 and c*f + s*g == r."""
    if g == 0.0:
        return 1.0, 0.0
    r = np.hypot(f, g)
    return f / r, g / r


@njit(cache=True)
def band_to_tridiagonal(w, b, rot_p, rot_c, rot_s):
    """Reduce the band matrix in ``w`` (modified in place) to tridiagonal form.

    Rotations are recorded in application order into the rot_* arrays; the
    number recorded is returned (-1 if the buffers were too small).
    """
    n = w.shape[1]
    nrot = 0
    cap = rot_p.shape[0]
    for k in range(n - 2):
        top = min(b, n - 1 - k)
        for r in range(top, 1, -1):
            i = k + r
            c, s = _givens(_get(w, i - 1, k), _get(w, i, k))
            if s == 0.0:
                continue
            _rotate(w, i - 1, c, s, b, n)
            _set(w, i, k, 0.0)
            if nrot >= cap:
                return -1
            rot_p[nrot] = i - 1
            rot_c[nrot] = c
            rot_s[nrot] = s
            nrot += 1
            # chase the bulge created at (i + b, i - 1)
            j = i + b
            while j < n:
                col = j - b - 1
                c, s = _givens(_get(w, j - 1, col), _get(w, j, col))
                if s == 0.0:
                    break
                _rotate(w, j - 1, c, s, b, n)
                _set(w, j, col, 0.0)
                if nrot >= cap:
                    return -1
                rot_p[nrot] = j - 1
                rot_c[nrot] = c
                rot_s[nrot] = s
                nrot += 1
                j += b
    return nrot


@njit(cache=True)
def apply_rotations(z, rot_p, rot_c, rot_s, nrot, transpose):
    """Left-multiply rows of ``z`` by the recorded rotation product Q (or Q^T).

    Q = G_nrot ... G_1, so T = Q A Q^T.
    """
    m = z.shape[1]
    if not transpose:
        for t in range(nrot):
            p = rot_p[t]
            c = rot_c[t]
            s = rot_s[t]
            for col in range(m):
                zp = z[p, col]
                zq = z[p + 1, col]
                z[p, col] = c * zp + s * zq
                z[p + 1, col] = -s * zp + c * zq
    else:
        for t in range(nrot - 1, -1, -1):
            p = rot_p[t]
            c = rot_c[t]
            s = rot_s[t]
            for col in range(m):
                zp = z[p, col]
                zq = z[p + 1, col]
                z[p, col] = c * zp - s * zq
                z[p + 1, col] = s * zp + c * zq


@njit(cache=True)
def tql(d, e, z, want_vectors, max_sweeps):
    """Implicit-shift QL on a symmetric tridiagonal matrix (EISPACK tql1/tql2).

    ``d`` (diagonal) and ``e`` (subdiagonal, length n with e[n-1] ignored) are
    overwritten; eigenvalues end up unsorted in ``d``. With ``want_vectors``
    the rotations are accumulated into the columns of ``z``.
    Returns QL_OK or the index of the eigenvalue that failed to converge.
    """
    n = d.shape[0]
    if n == 0:
        return QL_OK
    e[n - 1] = 0.0
    eps = np.finfo(np.float64).eps
    f = 0.0
    tst1 = 0.0
    for l in range(n):
        sweeps = 0
        h = abs(d[l]) + abs(e[l])
        if tst1 < h:
            tst1 = h
        m = l
        while m < n - 1:
            if abs(e[m]) <= eps * tst1:
                break
            m += 1
        if m > l:
            while True:
                sweeps += 1
                if sweeps > max_sweeps:
                    return l
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = np.hypot(p, 1.0)
                if p < 0.0:
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
                el1 = e[l + 1]
                s = 0.0
                s2 = 0.0
                c3 = 0.0
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
                    if want_vectors:
                        for k in range(n):
                            h = z[k, i + 1]
                            z[k, i + 1] = s * z[k, i] + c * h
                            z[k, i] = c * z[k, i] - s * h
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if abs(e[l]) <= eps * tst1:
                    break
        d[l] = d[l] + f
        e[l] = 0.0
    return QL_OK


@njit(cache=True)
def sturm_count(d, e, x):
    """Number of eigenvalues of T(d, e) strictly below x (LDL^T inertia)."""
    n = d.shape[0]
    tiny = np.finfo(np.float64).tiny ** 0.5
    count = 0
    q = d[0] - x
    if q == 0.0:
        q = -tiny
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if q == 0.0:
            q = -tiny
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def gershgorin(d, e):
    n = d.shape[0]
    lo = np.inf
    hi = -np.inf
    for i in range(n):
        r = 0.0
        if i > 0:
            r += abs(e[i - 1])
        if i < n - 1:
            r += abs(e[i])
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)
    return lo, hi


@njit(cache=True)
def bisect_lowest(d, e, k, tol):
    """Lowest k eigenvalues by Sturm bisection, each to absolute width tol."""
    lo0, hi0 = gershgorin(d, e)
    span = max(abs(lo0), abs(hi0), 1.0)
    lo0 -= 2.0 * np.finfo(np.float64).eps * span
    hi0 += 2.0 * np.finfo(np.float64).eps * span
    out = np.empty(k)
    lower = lo0
    for j in range(k):
        # j-th eigenvalue: smallest x with count(x) > j
        a = lower
        bnd = hi0
        while bnd - a > tol:
            mid = 0.5 * (a + bnd)
            if mid <= a or mid >= bnd:
                break
            if sturm_count(d, e, mid) > j:
                bnd = mid
            else:
                a = mid
        out[j] = 0.5 * (a + bnd)
        lower = a
    return out


@njit(cache=True)
def _tridiag_lu_solve(d, e, shift, rhs, pert):
    """Solve (T - shift) x = rhs by Gaussian elimination with partial pivoting."""
    n = d.shape[0]
    # band of U: u0 (diag), u1, u2 ; multipliers ml ; row swaps piv
    u0 = np.empty(n)
    u1 = np.zeros(n)
    u2 = np.zeros(n)
    ml = np.zeros(n)
    piv = np.zeros(n, dtype=np.bool_)
    a = d[0] - shift
    bb = e[0] if n > 1 else 0.0
    for i in range(n - 1):
        c = e[i]
        dnext = d[i + 1] - shift
        enext = e[i + 1] if i + 1 < n - 1 else 0.0
        if abs(a) >= abs(c):
            if a == 0.0:
                a = pert
            m = c / a
            ml[i] = m
            u0[i] = a
            u1[i] = bb
            u2[i] = 0.0
            a = dnext - m * bb
            bb = enext
        else:
            piv[i] = True
            m = a / c
            ml[i] = m
            u0[i] = c
            u1[i] = dnext
            u2[i] = enext
            a = bb - m * dnext
            bb = -m * enext
    if a == 0.0:
        a = pert
    u0[n - 1] = a
    x = rhs.copy()
    for i in range(n - 1):
        if piv[i]:
            t = x[i]
            x[i] = x[i + 1]
            x[i + 1] = t - ml[i] * x[i]
        else:
            x[i + 1] -= ml[i] * x[i]
    for i in range(n - 1, -1, -1):
        s = x[i]
        if i + 1 < n:
            s -= u1[i] * x[i + 1]
        if i + 2 < n:
            s -= u2[i] * x[i + 2]
        u = u0[i]
        if u == 0.0:
            u = pert
        x[i] = s / u
    return x


@njit(cache=True)
def inverse_iteration(d, e, lam, seed, cluster_tol):
    """Eigenvectors of T(d, e) for the ascending eigenvalues ``lam``.

    Vectors belonging to eigenvalues closer than ``cluster_tol`` are
    orthogonalised against each other on every iteration.
    """
    n = d.shape[0]
    k = lam.shape[0]
    zt = np.zeros((k, n))
    np.random.seed(seed)
    tnorm = 0.0
    for i in range(n):
        r = abs(d[i])
        if i > 0:
            r += abs(e[i - 1])
        if i < n - 1:
            r += abs(e[i])
        tnorm = max(tnorm, r)
    eps = np.finfo(np.float64).eps
    pert = eps * max(tnorm, 1.0)
    first = 0
    for j in range(k):
        if j > 0 and lam[j] - lam[j - 1] > cluster_tol:
            first = j
        shift = lam[j]
        # separate exactly repeated shifts so the solves differ
        if j > first and shift <= lam[j - 1]:
            shift = lam[j - 1] + 10.0 * pert
        x = np.random.uniform(-1.0, 1.0, n)
        for _ in range(4):
            x = x / np.sqrt(np.sum(x * x))
            x = _tridiag_lu_solve(d, e, shift, x, pert)
            for jj in range(first, j):
                x -= np.dot(zt[jj], x) * zt[jj]
            x = x / np.sqrt(np.sum(x * x))
        zt[j] = x
    return zt.T.copy()
