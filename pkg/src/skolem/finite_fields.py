"""Finite fields as towers F_p ⊂ F_p[x]/(f1) ⊂ (...)[y]/(f2) ⊂ ... and
polynomial factorization over them (squarefree, distinct-degree and
Cantor-Zassenhaus equal-degree splitting).

These are the residue fields met while building p-adic types; their degrees
stay small, so elements are plain tuples and everything is recursive.
"""

from __future__ import annotations

import random
from typing import Sequence


class PrimeField:
    def __init__(self, p: int):
        self.p = p
        self.abs_degree = 1
        self.q = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n: int):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def pow(self, a, e: int):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def __repr__(self):
        return f"F_{self.p}"


class ExtField:
    """base[y]/(modulus) for a monic irreducible modulus over ``base``."""

    def __init__(self, base, modulus: Sequence):
        self.base = base
        self.modulus = tuple(modulus)
        self.k = len(self.modulus) - 1
        assert self.k >= 1
        self.p = base.p
        self.abs_degree = base.abs_degree * self.k
        self.q = self.p ** self.abs_degree

    def zero(self):
        return tuple(self.base.zero() for _ in range(self.k))

    def one(self):
        return self.embed(self.base.one())

    def embed(self, b):
        return (b,) + tuple(self.base.zero() for _ in range(self.k - 1))

    def from_int(self, n: int):
        return self.embed(self.base.from_int(n))

    def gen(self):
        """Class of y."""
        if self.k == 1:
            return (self.base.neg(self.modulus[0]),)
        z = [self.base.zero()] * self.k
        z[1] = self.base.one()
        return tuple(z)

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        B = self.base
        return tuple(B.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        k = self.k
        prod = [B.zero()] * (2 * k - 1)
        for i, x in enumerate(a):
            if B.is_zero(x):
                continue
            for j, y in enumerate(b):
                if B.is_zero(y):
                    continue
                prod[i + j] = B.add(prod[i + j], B.mul(x, y))
        m = self.modulus
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if B.is_zero(c):
                continue
            for j in range(k):
                prod[d - k + j] = B.sub(prod[d - k + j], B.mul(c, m[j]))
            prod[d] = B.zero()
        return tuple(prod[:k])

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(x) for x in a)

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero in extension field")
        return self.pow(a, self.q - 2)

    def random(self, rng: random.Random):
        return tuple(self.base.random(rng) for _ in range(self.k))

    def __repr__(self):
        return f"Ext({self.base!r}, deg {self.k})"


# ---------------------------------------------------------------------------
# polynomials over a finite field (coefficient tuples, constant term first)


def fstrip(F, a) -> tuple:
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return tuple(a)


def fadd(F, a, b):
    n = max(len(a), len(b))
    z = F.zero()
    return fstrip(F, [F.add(a[i] if i < len(a) else z, b[i] if i < len(b) else z) for i in range(n)])


def fsub(F, a, b):
    n = max(len(a), len(b))
    z = F.zero()
    return fstrip(F, [F.sub(a[i] if i < len(a) else z, b[i] if i < len(b) else z) for i in range(n)])


def fmul(F, a, b):
    if not a or not b:
        return ()
    out = [F.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return fstrip(F, out)


def fscale(F, a, c):
    return fstrip(F, [F.mul(x, c) for x in a])


def fdivmod(F, a, b):
    b = fstrip(F, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(fstrip(F, a))
    db = len(b) - 1
    if len(r) - 1 < db:
        return (), tuple(r)
    inv_lc = F.inv(b[-1])
    q = [F.zero()] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db]
        if F.is_zero(c):
            continue
        c = F.mul(c, inv_lc)
        q[k] = c
        for j in range(db + 1):
            r[k + j] = F.sub(r[k + j], F.mul(c, b[j]))
    return fstrip(F, q), fstrip(F, r[:db])


def fmod(F, a, b):
    return fdivmod(F, a, b)[1]


def fmonic(F, a):
    a = fstrip(F, a)
    if not a:
        return a
    return fscale(F, a, F.inv(a[-1]))


def fgcd(F, a, b):
    a, b = fstrip(F, a), fstrip(F, b)
    while b:
        a, b = b, fmod(F, a, b)
    return fmonic(F, a)


def fderiv(F, a):
    return fstrip(F, [F.mul(F.from_int(i), a[i]) for i in range(1, len(a))])


def fpowmod(F, a, e: int, m):
    result = (F.one(),)
    base = fmod(F, a, m)
    while e:
        if e & 1:
            result = fmod(F, fmul(F, result, base), m)
        e >>= 1
        if e:
            base = fmod(F, fmul(F, base, base), m)
    return result


def _pth_root_poly(F, a):
    p = F.p
    root_exp = F.q // p
    return fstrip(F, [F.pow(a[i], root_exp) for i in range(0, len(a), p)])


def fsqf(F, f) -> list[tuple[tuple, int]]:
    """Squarefree decomposition of a monic polynomial."""
    f = fmonic(F, f)
    if len(f) <= 1:
        return []
    out: list[tuple[tuple, int]] = []
    fd = fderiv(F, f)
    if not fd:
        for g, m in fsqf(F, _pth_root_poly(F, f)):
            out.append((g, m * F.p))
        return out
    c = fgcd(F, f, fd)
    w = fdivmod(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = fgcd(F, w, c)
        z = fdivmod(F, w, y)[0]
        if len(z) > 1:
            out.append((fmonic(F, z), i))
        i += 1
        w = y
        c = fdivmod(F, c, y)[0]
    if len(c) > 1:
        for g, m in fsqf(F, _pth_root_poly(F, c)):
            out.append((g, m * F.p))
    return out


def fddf(F, f) -> list[tuple[tuple, int]]:
    """Distinct-degree factorization of a monic squarefree polynomial."""
    out = []
    x = (F.zero(), F.one())
    h = x
    d = 0
    f = fmonic(F, f)
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = fpowmod(F, h, F.q, f)
        g = fgcd(F, f, fsub(F, h, x))
        if len(g) > 1:
            out.append((g, d))
            f = fdivmod(F, f, g)[0]
            h = fmod(F, h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def fedf(F, g, d: int, rng: random.Random) -> list[tuple]:
    """Split a product of distinct irreducibles of degree d."""
    n = len(g) - 1
    if n == d:
        return [g]
    while True:
        a = fstrip(F, [F.random(rng) for _ in range(n)])
        if len(a) <= 1:
            continue
        if F.p == 2:
            # trace map to F_2
            t = a
            acc = a
            for _ in range(F.abs_degree * d - 1):
                t = fmod(F, fmul(F, t, t), g)
                acc = fadd(F, acc, t)
            b = acc
        else:
            b = fsub(F, fpowmod(F, a, (F.q ** d - 1) // 2, g), (F.one(),))
        h = fgcd(F, g, b)
        if 1 < len(h) < len(g):
            return fedf(F, h, d, rng) + fedf(F, fdivmod(F, g, h)[0], d, rng)


def ffactor(F, f, seed: int = 12345) -> list[tuple[tuple, int]]:
    """Monic irreducible factors with multiplicities, in a deterministic order."""
    rng = random.Random(seed)
    out = []
    for g, m in fsqf(F, f):
        for h, d in fddf(F, g):
            for irr in fedf(F, h, d, rng):
                out.append((fmonic(F, irr), m))
    out.sort(key=lambda t: (len(t[0]), repr(t[0]), t[1]))
    return out
