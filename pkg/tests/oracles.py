"""Independent brute-force references used by the tests.

These avoid the package's field arithmetic: terms are scaled to integer
vectors in the power basis of theta and iterated with plain int matrices.
"""

from __future__ import annotations

from math import lcm


def _mult_matrix(num, mod):
    """Integer matrix of multiplication by sum num[k] theta^k."""
    D = len(mod) - 1
    cols = []
    col = [0] * D
    col[0] = 1
    for _ in range(D):
        prod = [0] * D
        # num * col, reduced mod the monic polynomial
        full = [0] * (2 * D)
        for i, a in enumerate(num):
            if a:
                for j, b in enumerate(col):
                    full[i + j] += a * b
        for k in range(2 * D - 1, D - 1, -1):
            c = full[k]
            if c:
                for j in range(D):
                    full[k - D + j] -= c * mod[j]
                full[k] = 0
        prod = full[:D]
        cols.append(prod)
        # next basis vector: col * theta
        nxt = [0] + col[:-1]
        top = col[-1]
        if top:
            nxt = [x - top * mod[j] for j, x in enumerate(nxt)]
        col = nxt
    return [[cols[j][i] for j in range(D)] for i in range(D)]


def _vec(x, D, scale):
    v = [c * scale // x.den for c in x.num] + [0] * D
    return v[:D]


def integer_terms(lrs):
    """Yield (n, w_n) with w_n = c * q^n * u_n an integer vector, c and q
    positive integers independent of n."""
    lrs = lrs
    K = lrs.field
    D = K.D
    mod = list(K.mod)
    for n, x in enumerate(lrs.prefix):
        yield n, _vec(x, D, x.den)
    base = lrs.shift
    d = lrs.order
    if d == 0:
        n = base
        while True:
            yield n, [0] * D
            n += 1
    q = lcm(*(a.den for a in lrs.coeffs))
    c = lcm(*(u.den for u in lrs.initial))
    mats = []
    for j, a in enumerate(lrs.coeffs):
        s = q ** (d - j)
        mats.append(_mult_matrix(_vec(a, D, s), mod))
    w = [_vec(u, D, c * q ** k) for k, u in enumerate(lrs.initial)]
    for k in range(d):
        yield base + k, w[k]
    n = base + d
    while True:
        acc = [0] * D
        for M, v in zip(mats, w):
            if any(v):
                for i in range(D):
                    row = M[i]
                    acc[i] += sum(r * x for r, x in zip(row, v) if r)
        w = w[1:] + [acc]
        yield n, acc
        n += 1


def brute_zeros(lrs, limit):
    out = []
    for n, v in integer_terms(lrs):
        if n > limit:
            break
        if not any(v):
            out.append(n)
    return out


def field_power_is_one(x, k):
    """x^k == 1 by repeated multiplication in the field."""
    acc = x
    for _ in range(k - 1):
        acc = acc * x
    return acc == x.field.one
