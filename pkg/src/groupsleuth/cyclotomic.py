"""Exact arithmetic in cyclotomic fields.

An element of Q(zeta_N) is stored as its residue modulo the N-th cyclotomic
polynomial: a tuple of deg(Phi_N) = phi(N) rationals in the power basis
1, z, z^2, ... with z = exp(2 pi i / N).  Each value carries its own
conductor; binary operations lift both operands to the lcm of the two
conductors first, so rational values stay cheap.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple[int, ...]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    r = n
    for p in factorize(n):
        r = r // p * (p - 1)
    return r


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + dd] // den[dd]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _poly_divexact(num, cyclotomic_polynomial(d))
    return tuple(num)


@lru_cache(maxsize=None)
def _monomials(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Sparse reductions of x^e mod Phi_n for 0 <= e < n."""
    phi = euler_phi(n)
    poly = cyclotomic_polynomial(n)
    out = []
    cur = [0] * phi
    cur[0] = 1
    for e in range(n):
        out.append(tuple((i, c) for i, c in enumerate(cur) if c))
        # multiply by x and reduce the overflow term with the monic Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(phi):
                cur[i] -= top * poly[i]
    return tuple(out)


def _reduce(n: int, dense: Sequence) -> tuple:
    """Reduce a coefficient vector indexed by exponents mod n."""
    phi = euler_phi(n)
    out = [Fraction(0)] * phi
    mono = _monomials(n)
    for e, c in enumerate(dense):
        if not c:
            continue
        if e < phi:
            out[e] += c
        else:
            for i, k in mono[e]:
                out[i] += k * c
    return tuple(out)


@lru_cache(maxsize=None)
def _embedding(d: int, n: int):
    """Pivot rows and inverse block for the embedding Q(zeta_d) -> Q(zeta_n).

    Returns ``(columns, pivots, inverse)`` where ``columns[j]`` is the image of
    zeta_d^j, and ``inverse`` solves for the Q(zeta_d)-coordinates from the
    pivot coordinates of an element of the image.
    """
    m = n // d
    phd, phn = euler_phi(d), euler_phi(n)
    mono = _monomials(n)
    cols = []
    for j in range(phd):
        v = [Fraction(0)] * phn
        for i, k in mono[(j * m) % n]:
            v[i] += k
        cols.append(v)
    # row-reduce the phn x phd matrix to find phd independent rows
    rows = [[cols[j][i] for j in range(phd)] for i in range(phn)]
    pivots = []
    basis: list[list[Fraction]] = []
    for i, r in enumerate(rows):
        v = list(r)
        for b, lead in basis:
            if v[lead]:
                f = v[lead]
                v = [x - f * y for x, y in zip(v, b)]
        nz = next((j for j, x in enumerate(v) if x), None)
        if nz is not None:
            f = v[nz]
            basis.append(([x / f for x in v], nz))
            pivots.append(i)
            if len(pivots) == phd:
                break
    sub = [rows[i] for i in pivots]
    inverse = _invert([list(r) for r in sub])
    return cols, tuple(pivots), inverse


def _invert(a: list[list[Fraction]]) -> list[list[Fraction]]:
    k = len(a)
    aug = [row + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(a)]
    for col in range(k):
        piv = next(r for r in range(col, k) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        f = aug[col][col]
        aug[col] = [x / f for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col]:
                g = aug[r][col]
                aug[r] = [x - g * y for x, y in zip(aug[r], aug[col])]
    return [row[k:] for row in aug]


class Cyclotomic:
    """An element of Q(zeta_n), immutable.

    >>> z = Cyclotomic.zeta(5)
    >>> (z + z**4).conjugate() == z + z**4
    True
    """

    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, coeffs: Iterable):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if n < 1:
            raise ValueError("conductor must be positive")
        if len(coeffs) != euler_phi(n):
            raise ValueError(f"expected {euler_phi(n)} coefficients for conductor {n}, got {len(coeffs)}")
        self.n = n
        self.coeffs = coeffs
        self._hash = None

    # construction

    @classmethod
    def rational(cls, q) -> "Cyclotomic":
        return cls(1, (Fraction(q),))

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "Cyclotomic":
        """zeta_n^k."""
        dense = [0] * n
        dense[k % n] = 1
        return cls(n, _reduce(n, dense))

    @classmethod
    def from_exponents(cls, n: int, exps: Iterable[int], weights: Iterable | None = None) -> "Cyclotomic":
        """Sum of w * zeta_n^e over the given exponents."""
        dense = [Fraction(0)] * n
        exps = list(exps)
        ws = [1] * len(exps) if weights is None else list(weights)
        for e, w in zip(exps, ws):
            dense[e % n] += w
        return cls(n, _reduce(n, dense))

    @classmethod
    def sqrt(cls, d: int) -> "Cyclotomic":
        """The square root of ``d`` with positive real or imaginary part."""
        if d == 0:
            return cls.rational(0)
        sign = 1 if d > 0 else -1
        a = abs(d)
        if a == 1:
            return cls.rational(1) if sign > 0 else cls.zeta(4)
        # sqrt(p*) = sum_k legendre(k,p) zeta_p^k with p* = (-1)^((p-1)/2) p
        out = cls.rational(1)
        star_sign = 1
        for p, e in factorize(a).items():
            if e % 2:
                if p == 2:
                    # sqrt(2) = zeta_8 + zeta_8^7
                    g = cls.zeta(8) + cls.zeta(8, 7)
                else:
                    g = cls.from_exponents(p, range(1, p), [_legendre(k, p) for k in range(1, p)])
                    if p % 4 == 3:
                        star_sign = -star_sign
                out = out * g
            out = out * (p ** (e // 2))
        # out^2 = star_sign * a
        if star_sign != sign:
            out = out * cls.zeta(4)
        v = complex(out)
        if (v.real if d > 0 else v.imag) < 0:
            out = -out
        return out

    # coercion helpers

    @staticmethod
    def coerce(x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Rational)):
            return Cyclotomic(1, (Fraction(x),))
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")

    def lift(self, m: int) -> "Cyclotomic":
        """The same number written in Q(zeta_m); ``self.n`` must divide ``m``."""
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"conductor {self.n} does not divide {m}")
        if self.n == 1:
            dense = [self.coeffs[0]]
            return Cyclotomic(m, _reduce(m, dense))
        step = m // self.n
        dense = [Fraction(0)] * m
        for i, c in enumerate(self.coeffs):
            if c:
                dense[i * step] = c
        return Cyclotomic(m, _reduce(m, dense))

    def descend(self, d: int) -> "Cyclotomic | None":
        """The same number in Q(zeta_d) if it lies there, else None."""
        if self.n % d:
            raise ValueError(f"{d} does not divide conductor {self.n}")
        if d == self.n:
            return self
        if d == 1:
            if any(self.coeffs[1:]):
                return None
            return Cyclotomic(1, self.coeffs[:1])
        cols, pivots, inverse = _embedding(d, self.n)
        rhs = [self.coeffs[i] for i in pivots]
        y = [sum((a * b for a, b in zip(row, rhs)), Fraction(0)) for row in inverse]
        for i, c in enumerate(self.coeffs):
            if sum((y[j] * cols[j][i] for j in range(len(y))), Fraction(0)) != c:
                return None
        return Cyclotomic(d, y)

    def minimal(self) -> "Cyclotomic":
        """Representation over the smallest conductor containing the value."""
        if self.n == 1:
            return self
        if not any(self.coeffs[1:]):
            return Cyclotomic(1, self.coeffs[:1])
        for d in divisors(self.n):
            if d % 4 == 2 or d == self.n:
                continue
            y = self.descend(d)
            if y is not None:
                return y
        return self

    def _pair(self, other) -> tuple["Cyclotomic", "Cyclotomic"]:
        other = Cyclotomic.coerce(other)
        if self.n == other.n:
            return self, other
        m = lcm(self.n, other.n)
        return self.lift(m), other.lift(m)

    # arithmetic

    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.coeffs])

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return Cyclotomic(a.n, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return Cyclotomic(self.n, [x * other for x in self.coeffs])
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        if a.n == 1:
            return Cyclotomic(1, (a.coeffs[0] * b.coeffs[0],))
        n = a.n
        dense = [Fraction(0)] * n
        bc = [(j, y) for j, y in enumerate(b.coeffs) if y]
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in bc:
                    dense[(i + j) % n] += x * y
        return Cyclotomic(n, _reduce(n, dense))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cyclotomic):
            if not other.is_rational():
                return self * other.inverse()
            other = other.to_fraction()
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            f = Fraction(other)
            return Cyclotomic(self.n, [x / f for x in self.coeffs])
        return NotImplemented

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = Cyclotomic.rational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def galois(self, k: int) -> "Cyclotomic":
        """Image under zeta_n -> zeta_n^k (k coprime to n)."""
        if gcd(k, self.n) != 1:
            raise ValueError(f"{k} is not a unit modulo {self.n}")
        if self.n == 1:
            return self
        dense = [Fraction(0)] * self.n
        for i, c in enumerate(self.coeffs):
            if c:
                dense[(i * k) % self.n] += c
        return Cyclotomic(self.n, _reduce(self.n, dense))

    def conjugate(self) -> "Cyclotomic":
        return self.galois(-1)

    def norm(self) -> Fraction:
        """Field norm from Q(zeta_n) to Q."""
        out = Cyclotomic.rational(1)
        for k in range(1, self.n + 1):
            if gcd(k, self.n) == 1:
                out = out * self.galois(k)
        return out.to_fraction()

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.n == 1:
            return Cyclotomic(1, (1 / self.coeffs[0],))
        # x^-1 = (product of the other conjugates) / norm
        rest = Cyclotomic.rational(1)
        for k in range(2, self.n + 1):
            if gcd(k, self.n) == 1:
                rest = rest * self.galois(k)
        return rest / (rest * self).to_fraction()

    # predicates and conversion

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum((float(c) * z**i for i, c in enumerate(self.coeffs) if c), 0j)

    def __eq__(self, other) -> bool:
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            m = self.minimal()
            if m.n == 1:
                self._hash = hash(m.coeffs[0])
            else:
                self._hash = hash((m.n, m.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"Cyclotomic({self})"

    def __str__(self) -> str:
        m = self.minimal()
        if m.n == 1:
            return str(m.coeffs[0])
        terms = []
        for i, c in enumerate(m.coeffs):
            if not c:
                continue
            mon = "1" if i == 0 else (f"z{m.n}" if i == 1 else f"z{m.n}^{i}")
            if i == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(mon)
            elif c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{c}*{mon}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"

    # serialization

    def to_json(self, conductor: int | None = None):
        """Decimal-string rational, or ``{"coeffs": [...]}`` over ``conductor``.

        Without an explicit conductor irrational values are written with
        their own minimal conductor as ``{"conductor": m, "coeffs": [...]}``.
        """
        if self.is_rational():
            return str(self.coeffs[0])
        if conductor is not None:
            v = self.lift(conductor) if conductor % self.n == 0 else self.minimal().lift(conductor)
            return {"coeffs": [str(c) for c in v.coeffs]}
        m = self.minimal()
        return {"conductor": m.n, "coeffs": [str(c) for c in m.coeffs]}

    @classmethod
    def from_json(cls, obj, conductor: int | None = None) -> "Cyclotomic":
        if isinstance(obj, (str, int)):
            return cls.rational(Fraction(obj))
        if isinstance(obj, dict) and "coeffs" in obj:
            n = obj.get("conductor", conductor)
            if n is None:
                raise ValueError("cyclotomic value without a conductor")
            return cls(int(n), [Fraction(c) for c in obj["coeffs"]])
        raise ValueError(f"unrecognized cyclotomic value {obj!r}")


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def as_cyclotomic(x) -> Cyclotomic:
    return Cyclotomic.coerce(x)
