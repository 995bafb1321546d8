"""Compiled pair-sum kernels.

All sums run over node pairs i < j in lexicographic order and accumulate with
Neumaier compensation, so results do not depend on anything but the inputs.
Energies count ordered pairs, i.e. twice the i < j sum.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _powabs(d, p):
    a = abs(d)
    if p == 2.0:
        return a * a
    if a == 0.0:
        return 0.0
    return a ** p


@njit(cache=True)
def _jp(d, p):
    # J_p(d) = |d|^{p-2} d, with the subgradient selection 0 at d = 0
    if d == 0.0:
        return 0.0
    if p == 2.0:
        return d
    return abs(d) ** (p - 1.0) * (1.0 if d > 0.0 else -1.0)


@njit(cache=True)
def toeplitz_energy(u, w, p):
    n = u.shape[0]
    s = 0.0
    c = 0.0
    for i in range(n):
        ui = u[i]
        for j in range(i + 1, n):
            x = w[j - i] * _powabs(ui - u[j], p)
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
    return 2.0 * (s + c)


@njit(cache=True)
def dense_energy(u, W, p):
    n = u.shape[0]
    s = 0.0
    c = 0.0
    for i in range(n):
        ui = u[i]
        for j in range(i + 1, n):
            wij = W[i, j]
            if wij == 0.0:
                continue
            x = wij * _powabs(ui - u[j], p)
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
    return 2.0 * (s + c)


@njit(cache=True)
def dense_energy_grad(u, W, p):
    n = u.shape[0]
    g = np.zeros(n)
    gc = np.zeros(n)
    s = 0.0
    c = 0.0
    for i in range(n):
        ui = u[i]
        for j in range(i + 1, n):
            wij = W[i, j]
            if wij == 0.0:
                continue
            d = ui - u[j]
            x = wij * _powabs(d, p)
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
            q = 2.0 * p * wij * _jp(d, p)
            # compensated per-node accumulation of +q at i and -q at j
            t = g[i] + q
            if abs(g[i]) >= abs(q):
                gc[i] += (g[i] - t) + q
            else:
                gc[i] += (q - t) + g[i]
            g[i] = t
            t = g[j] - q
            if abs(g[j]) >= abs(q):
                gc[j] += (g[j] - t) - q
            else:
                gc[j] += (-q - t) + g[j]
            g[j] = t
    return 2.0 * (s + c), g + gc


@njit(cache=True)
def dense_hessian(u, W, p, delta):
    """Hessian of the ordered-pair energy.

    For p != 2 and delta > 0 the factor |d|^{p-2} is replaced by
    (d^2 + delta^2)^{(p-2)/2}, which keeps the matrix definite where
    differences vanish (p > 2) or bounded there (p < 2).
    """
    n = u.shape[0]
    H = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            wij = W[i, j]
            if wij == 0.0:
                continue
            d = u[i] - u[j]
            if p == 2.0:
                k = 1.0
            elif delta == 0.0:
                k = abs(d) ** (p - 2.0)
            else:
                k = (d * d + delta * delta) ** (0.5 * (p - 2.0))
            hij = 2.0 * p * (p - 1.0) * wij * k
            H[i, j] = -hij
            H[j, i] = -hij
            H[i, i] += hij
            H[j, j] += hij
    return H


@njit(cache=True)
def lattice_energy_2d(ix, iy, vals, table, n, p):
    """Pair sum over active nodes of a 2-D lattice.

    ``table[dx + n - 1, dy + n - 1]`` holds the weight of offset (dx, dy).
    Returns the ordered-pair energy and, per active node, the row sum of the
    weights to the other active nodes.
    """
    m = ix.shape[0]
    rows = np.zeros(m)
    s = 0.0
    c = 0.0
    for a in range(m):
        xa = ix[a]
        ya = iy[a]
        va = vals[a]
        for b in range(a + 1, m):
            wab = table[ix[b] - xa + n - 1, iy[b] - ya + n - 1]
            if wab == 0.0:
                continue
            rows[a] += wab
            rows[b] += wab
            x = wab * _powabs(va - vals[b], p)
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
    return 2.0 * (s + c), rows


@njit(cache=True)
def holder_max(coords, u, alpha):
    """Max over pairs i < j of |u_i - u_j| / |x_i - x_j|^alpha.

    ``coords`` has shape (n, d).  Strict improvement only, so among exact ties
    the lexicographically smallest pair wins.  Returns (value, i, j) with
    (-1, -1) when every difference vanishes.
    """
    n = u.shape[0]
    d = coords.shape[1]
    best = 0.0
    bi = -1
    bj = -1
    for i in range(n):
        for j in range(i + 1, n):
            du = abs(u[i] - u[j])
            if du == 0.0:
                continue
            r2 = 0.0
            for k in range(d):
                t = coords[i, k] - coords[j, k]
                r2 += t * t
            q = du / r2 ** (0.5 * alpha)
            if q > best:
                best = q
                bi = i
                bj = j
    return best, bi, bj


@njit(cache=True)
def cross_holder_max(xa, ua, xb, ub, alpha):
    """Max of |ua_i - ub_j| / |xa_i - xb_j|^alpha over distinct 1-D points."""
    best = 0.0
    for i in range(xa.shape[0]):
        for j in range(xb.shape[0]):
            r = abs(xa[i] - xb[j])
            if r == 0.0:
                continue
            q = abs(ua[i] - ub[j]) / r ** alpha
            if q > best:
                best = q
    return best
