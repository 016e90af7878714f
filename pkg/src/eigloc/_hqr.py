"""Compiled kernels for the dense nonsymmetric eigenvalue solver.

balance -> Householder reduction to upper Hessenberg -> Francis
double-shift QR on the Hessenberg matrix (eigenvalues only).
"""

import numpy as np
from numba import njit

EPS = np.finfo(np.float64).eps
# below this (or above its inverse) the matrix is rescaled before iterating
SMALL = np.sqrt(np.finfo(np.float64).tiny) / EPS


@njit(cache=True)
def balance(a):
    """In-place radix-2 balancing; returns the diagonal similarity applied."""
    n = a.shape[0]
    scale = np.ones(n)
    radix = 2.0
    sqrdx = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            r = 0.0
            c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j, i])
                    r += abs(a[i, j])
            if c != 0.0 and r != 0.0:
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
                    g = 1.0 / f
                    scale[i] *= f
                    for j in range(n):
                        a[i, j] *= g
                    for j in range(n):
                        a[j, i] *= f
    return scale


@njit(cache=True)
def hessenberg(a):
    """In-place similarity reduction to upper Hessenberg form."""
    n = a.shape[0]
    v = np.empty(n)
    for k in range(n - 2):
        m = n - k - 1
        sc = 0.0
        for i in range(m):
            sc += abs(a[k + 1 + i, k])
        if sc == 0.0:
            continue
        alpha = 0.0
        for i in range(m):
            v[i] = a[k + 1 + i, k] / sc
            alpha += v[i] * v[i]
        alpha = np.sqrt(alpha)
        if v[0] >= 0.0:
            v[0] += alpha
        else:
            v[0] -= alpha
        vn = 0.0
        for i in range(m):
            vn += v[i] * v[i]
        if vn == 0.0:
            continue
        beta = 2.0 / vn
        # left: rows k+1..n-1, columns k..n-1
        for j in range(k, n):
            s = 0.0
            for i in range(m):
                s += v[i] * a[k + 1 + i, j]
            s *= beta
            for i in range(m):
                a[k + 1 + i, j] -= s * v[i]
        # right: all rows, columns k+1..n-1
        for i in range(n):
            s = 0.0
            for j in range(m):
                s += a[i, k + 1 + j] * v[j]
            s *= beta
            for j in range(m):
                a[i, k + 1 + j] -= s * v[j]
        for i in range(k + 2, n):
            a[i, k] = 0.0


@njit(cache=True)
def _reflect3(h, x, y, z, row, c0, c1, r0, r1):
    """Apply the Householder reflector mapping (x, y, z) to a multiple of e1.

    Left multiplication acts on rows row..row+2, columns c0..c1; right
    multiplication on rows r0..r1, columns row..row+2.
    """
    sc = abs(x) + abs(y) + abs(z)
    if sc == 0.0:
        return
    x /= sc
    y /= sc
    z /= sc
    nrm = np.sqrt(x * x + y * y + z * z)
    if x < 0.0:
        nrm = -nrm
    v0 = x + nrm
    v1 = y
    v2 = z
    vn = v0 * v0 + v1 * v1 + v2 * v2
    beta = 2.0 / vn
    for j in range(c0, c1 + 1):
        s = beta * (v0 * h[row, j] + v1 * h[row + 1, j] + v2 * h[row + 2, j])
        h[row, j] -= s * v0
        h[row + 1, j] -= s * v1
        h[row + 2, j] -= s * v2
    for i in range(r0, r1 + 1):
        s = beta * (h[i, row] * v0 + h[i, row + 1] * v1 + h[i, row + 2] * v2)
        h[i, row] -= s * v0
        h[i, row + 1] -= s * v1
        h[i, row + 2] -= s * v2


@njit(cache=True)
def _reflect2(h, x, y, row, c0, c1, r0, r1):
    sc = abs(x) + abs(y)
    if sc == 0.0:
        return
    x /= sc
    y /= sc
    nrm = np.sqrt(x * x + y * y)
    if x < 0.0:
        nrm = -nrm
    v0 = x + nrm
    v1 = y
    beta = 2.0 / (v0 * v0 + v1 * v1)
    for j in range(c0, c1 + 1):
        s = beta * (v0 * h[row, j] + v1 * h[row + 1, j])
        h[row, j] -= s * v0
        h[row + 1, j] -= s * v1
    for i in range(r0, r1 + 1):
        s = beta * (h[i, row] * v0 + h[i, row + 1] * v1)
        h[i, row] -= s * v0
        h[i, row + 1] -= s * v1


@njit(cache=True)
def _block2(a, b, c, d):
    """Eigenvalues (re1, im1, re2, im2) of [[a, b], [c, d]]."""
    p = 0.5 * (a - d)
    w = b * c
    q = p * p + w
    if q >= 0.0:
        # z is formed without cancellation; the second root follows from
        # (l1 - d)(l2 - d) = -w
        z = p + np.sqrt(q) if p >= 0.0 else p - np.sqrt(q)
        if z == 0.0:
            return d, 0.0, d, 0.0
        return d + z, 0.0, d - w / z, 0.0
    im = np.sqrt(-q)
    mean = 0.5 * (a + d)
    return mean, im, mean, -im


@njit(cache=True)
def hqr(h, max_sweeps):
    """Eigenvalues of an upper Hessenberg matrix (destroys ``h``).

    Returns ``(wr, wi, status)``.  ``status`` is -1 on success; otherwise it
    is the index of the last unconverged row and only entries above it are
    valid.
    """
    n = h.shape[0]
    wr = np.zeros(n)
    wi = np.zeros(n)
    anorm = 0.0
    for i in range(n):
        for j in range(max(i - 1, 0), n):
            anorm += abs(h[i, j])
    hi = n - 1
    its = 0
    while hi >= 0:
        l = hi
        while l > 0:
            s = abs(h[l - 1, l - 1]) + abs(h[l, l])
            if s == 0.0:
                s = anorm
            if abs(h[l, l - 1]) <= EPS * s:
                h[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            wr[hi] = h[hi, hi]
            wi[hi] = 0.0
            hi -= 1
            its = 0
            continue
        if l == hi - 1:
            e1, i1, e2, i2 = _block2(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
            wr[hi - 1] = e1
            wi[hi - 1] = i1
            wr[hi] = e2
            wi[hi] = i2
            hi -= 2
            its = 0
            continue
        if its >= max_sweeps:
            return wr, wi, hi
        its += 1
        # the shift polynomial is formed in units of a local scale so that
        # its quadratic terms neither underflow nor overflow
        sc = abs(h[hi, hi]) + abs(h[hi - 1, hi - 1]) + abs(h[hi, hi - 1]) + abs(h[hi - 1, hi])
        sc += abs(h[l, l]) + abs(h[l + 1, l]) + abs(h[l, l + 1]) + abs(h[l + 1, l + 1])
        if sc == 0.0:
            sc = 1.0
        if its % 10 == 0:
            # exceptional shift to break cycles
            s = (abs(h[hi, hi - 1]) + abs(h[hi - 1, hi - 2])) / sc
            h11 = 0.75 * s + h[hi, hi] / sc
            tr = 2.0 * h11
            det = h11 * h11 + 0.4375 * s * s
        else:
            a11 = h[hi - 1, hi - 1] / sc
            a22 = h[hi, hi] / sc
            tr = a11 + a22
            det = a11 * a22 - (h[hi - 1, hi] / sc) * (h[hi, hi - 1] / sc)
        h00 = h[l, l] / sc
        h10 = h[l + 1, l] / sc
        x = h00 * h00 + (h[l, l + 1] / sc) * h10 - tr * h00 + det
        y = h10 * (h00 + h[l + 1, l + 1] / sc - tr)
        z = h10 * (h[l + 2, l + 1] / sc)
        for k in range(l, hi - 1):
            c0 = max(l, k - 1)
            r1 = min(k + 3, hi)
            _reflect3(h, x, y, z, k, c0, hi, l, r1)
            x = h[k + 1, k]
            y = h[k + 2, k]
            if k < hi - 2:
                z = h[k + 3, k]
        _reflect2(h, x, y, hi - 1, hi - 2, hi, l, hi)
    return wr, wi, -1


@njit(cache=True)
def eigvals_dense(a, max_sweeps):
    """Full pipeline on a copy of ``a``.

    Matrices whose largest entry is far from 1 are first scaled by a power
    of two (exact), since squared shifts would otherwise under/overflow.
    """
    h = a.copy()
    amax = np.abs(h).max() if h.size else 0.0
    scale = 1.0
    if amax > 0.0 and (amax < SMALL or amax > 1.0 / SMALL):
        scale = 2.0 ** np.round(np.log2(amax))
        h /= scale
    balance(h)
    hessenberg(h)
    wr, wi, status = hqr(h, max_sweeps)
    return wr * scale, wi * scale, status
