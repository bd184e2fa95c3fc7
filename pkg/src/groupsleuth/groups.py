"""Concrete permutation groups used as fixtures and stand-ins.

All constructions act on 0-based points.  Projective lines over GF(q) use
points ``0..q-1`` for the field elements and ``q`` for infinity.
"""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from .blackbox import BitMatrix, GeneratedGroup, Permutation, enumerate_elements
from .cyclotomic import factorize


def symmetric_group(n: int) -> GeneratedGroup:
    if n < 2:
        return GeneratedGroup([Permutation(range(max(n, 1)))], name=f"S{n}")
    gens = [Permutation.from_cycles(n, (0, 1)), Permutation.from_cycles(n, tuple(range(n)))]
    return GeneratedGroup(gens, name=f"S{n}")


def alternating_group(n: int) -> GeneratedGroup:
    if n < 3:
        return GeneratedGroup([Permutation(range(max(n, 1)))], name=f"A{n}")
    gens = [Permutation.from_cycles(n, (i, i + 1, i + 2)) for i in range(n - 2)]
    if n > 3:
        # two generators: (0 1 2) and an (n-1)- or n-cycle of the right parity
        cyc = tuple(range(n)) if n % 2 else tuple(range(1, n))
        gens = [Permutation.from_cycles(n, (0, 1, 2)), Permutation.from_cycles(n, cyc)]
    return GeneratedGroup(gens, name=f"A{n}")


def cyclic_group(n: int) -> GeneratedGroup:
    return GeneratedGroup([Permutation([(i + 1) % n for i in range(n)])], name=f"C{n}")


def dihedral_group(n: int) -> GeneratedGroup:
    """Dihedral group of order 2n acting on the n vertices of a polygon."""
    r = Permutation([(i + 1) % n for i in range(n)])
    s = Permutation([(-i) % n for i in range(n)])
    return GeneratedGroup([r, s], name=f"D{2 * n}")


def _primitive_root(p: int) -> int:
    fac = factorize(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            return g
    return 1


def affine_map(p: int, a: int, b: int, degree: int | None = None) -> Permutation:
    """x -> a x + b on GF(p) (fixing the extra point ``p`` when ``degree = p + 1``)."""
    n = p if degree is None else degree
    return Permutation([(a * x + b) % p if x < p else x for x in range(n)])


def frobenius_group(p: int, m: int, degree: int | None = None) -> GeneratedGroup:
    """C_p : C_m as affine maps of GF(p)."""
    if (p - 1) % m:
        raise ValueError("m must divide p - 1")
    w = pow(_primitive_root(p), (p - 1) // m, p)
    gens = [affine_map(p, 1, 1, degree), affine_map(p, w, 0, degree)]
    return GeneratedGroup(gens, name=f"{p}:{m}")


def mobius(q: int, a: int, b: int, c: int, d: int) -> Permutation:
    """z -> (a z + b) / (c z + d) on the projective line over the prime field GF(q)."""
    if (a * d - b * c) % q == 0:
        raise ValueError("singular matrix")
    inf = q
    images = []
    for z in range(q + 1):
        if z == inf:
            num, den = a % q, c % q
        else:
            num, den = (a * z + b) % q, (c * z + d) % q
        images.append(inf if den == 0 else num * pow(den, -1, q) % q)
    return Permutation(images)


def pgl2(q: int) -> GeneratedGroup:
    g = _primitive_root(q)
    gens = [mobius(q, 1, 1, 0, 1), mobius(q, g, 0, 0, 1), mobius(q, 0, -1, 1, 0)]
    return GeneratedGroup(gens, name=f"PGL2({q})")


def psl2(q: int) -> GeneratedGroup:
    g = _primitive_root(q)
    gens = [mobius(q, 1, 1, 0, 1), mobius(q, g * g % q, 0, 0, 1), mobius(q, 0, -1, 1, 0)]
    return GeneratedGroup(gens, name=f"L2({q})")


# GF(2^k) arithmetic on ints

_CONWAY = {2: 0b111, 3: 0b1011, 4: 0b10011, 5: 0b100101, 6: 0b1000011, 8: 0b100011101}


def gf2k_mul(a: int, b: int, k: int) -> int:
    poly = _CONWAY[k]
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> k:
            a ^= poly
    return r


def gf2k_pow(a: int, e: int, k: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = gf2k_mul(r, a, k)
        a = gf2k_mul(a, a, k)
        e >>= 1
    return r


def gf2k_inv(a: int, k: int) -> int:
    if a == 0:
        raise ZeroDivisionError("inverse of zero in GF(2^k)")
    return gf2k_pow(a, (1 << k) - 2, k)


def psl2_even(k: int) -> GeneratedGroup:
    """SL2(2^k) = PSL2(2^k) on the 2^k + 1 points of the projective line."""
    q = 1 << k
    inf = q

    def mob(a, b, c, d):
        out = []
        for z in range(q + 1):
            if z == inf:
                num, den = a, c
            else:
                num = gf2k_mul(a, z, k) ^ b
                den = gf2k_mul(c, z, k) ^ d
            out.append(inf if den == 0 else gf2k_mul(num, gf2k_inv(den, k), k))
        return Permutation(out)

    # x = 2 is a primitive element for the fixed polynomials
    gens = [mob(1, 1, 0, 1), mob(2, 0, 0, gf2k_inv(2, k)), mob(0, 1, 1, 0)]
    return GeneratedGroup(gens, name=f"L2({q})")


def _projective_points(field_size: int, dim: int, normalize) -> list[tuple]:
    pts = []
    for v in itertools.product(range(field_size), repeat=dim):
        if any(v) and normalize(v) == v:
            pts.append(v)
    return pts


def psl3_3() -> GeneratedGroup:
    """PSL3(3) = SL3(3) on the 13 points of the projective plane over GF(3)."""
    def norm(v):
        lead = next(x for x in v if x)
        inv = 1 if lead == 1 else 2
        return tuple((x * inv) % 3 for x in v)

    pts = _projective_points(3, 3, norm)
    where = {p: i for i, p in enumerate(pts)}

    def act(m):
        out = []
        for p in pts:
            w = tuple(sum(p[i] * m[i][j] for i in range(3)) % 3 for j in range(3))
            out.append(where[norm(w)])
        return Permutation(out)

    t = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    c = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    return GeneratedGroup([act(t), act(c)], name="L3(3)")


def _unitary_points(k: int = 4):
    """Isotropic points of the Hermitian form x1 y3^q + x2 y2^q + x3 y1^q over GF(q^2), q^2 = 2^k."""
    q = 1 << (k // 2)

    def bar(x):
        return gf2k_pow(x, q, k)

    def norm(v):
        lead = next(x for x in v if x)
        inv = gf2k_inv(lead, k)
        return tuple(gf2k_mul(x, inv, k) for x in v)

    def form(u, v):
        return gf2k_mul(u[0], bar(v[2]), k) ^ gf2k_mul(u[1], bar(v[1]), k) ^ gf2k_mul(u[2], bar(v[0]), k)

    pts = [p for p in _projective_points(1 << k, 3, norm) if form(p, p) == 0]
    return pts, norm, bar


def _matrix_action(pts, norm, k):
    where = {p: i for i, p in enumerate(pts)}

    def act(m):
        out = []
        for p in pts:
            w = [0, 0, 0]
            for j in range(3):
                acc = 0
                for i in range(3):
                    acc ^= gf2k_mul(p[i], m[i][j], k)
                w[j] = acc
            out.append(where[norm(tuple(w))])
        return Permutation(out)

    return act


def psu3_4_matrix_generators() -> tuple[list, list]:
    """Unipotent and Weyl generators of SU3(4), as 3x3 matrices over GF(16)."""
    k = 4
    q = 4
    pts, norm, bar = _unitary_points(k)
    gens = []
    # u(a, b) = [[1, a, b], [0, 1, a^q], [0, 0, 1]] with b + b^q = a^(q+1)
    for a in (1, 2):
        target = gf2k_pow(a, q + 1, k)
        b = next(b for b in range(16) if b ^ bar(b) == target)
        gens.append([[1, a, b], [0, 1, bar(a)], [0, 0, 1]])
    gens.append([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
    return gens, pts


def psu3_4() -> GeneratedGroup:
    """PSU3(4) = SU3(4) on its 65 isotropic points."""
    mats, pts = psu3_4_matrix_generators()
    _, norm, _ = _unitary_points(4)
    act = _matrix_action(pts, norm, 4)
    return GeneratedGroup([act(m) for m in mats], name="U3(4)")


def a12_standard() -> GeneratedGroup:
    """A12 from x3 = (0,1,2) and x10 = (0,2)(1,3,4,...,11)."""
    x3 = Permutation.from_cycles(12, (0, 1, 2))
    x10 = Permutation.from_cycles(12, (0, 2), tuple([1] + list(range(3, 12))))
    return GeneratedGroup([x3, x10], name="A12")


def companion_matrix(coeffs: Sequence[int]) -> BitMatrix:
    """Companion matrix over GF(2) of x^n + c_{n-1} x^{n-1} + ... + c_0 (coefficients c_0..c_{n-1}).

    Row i is e_{i+1} for i < n - 1 and the last row holds the coefficients,
    so that v -> v * C is multiplication by x on GF(2)[x]/(f).
    """
    n = len(coeffs)
    rows = [1 << (i + 1) for i in range(n - 1)]
    rows.append(sum(c << j for j, c in enumerate(coeffs)))
    return BitMatrix(rows, n)


def find_generating_pair(group: GeneratedGroup, order: int, rng: random.Random,
                         pred=None, tries: int = 1000) -> tuple:
    """Two random elements (optionally satisfying ``pred``) generating a group of ``order``."""
    for _ in range(tries):
        a, b = group.random_element(), group.random_element()
        if pred is not None and not pred(a, b):
            continue
        try:
            if len(enumerate_elements([a, b], cap=order)) == order:
                return a, b
        except Exception:
            continue
    raise RuntimeError("no generating pair found")


def sl2_3_extension():
    """SL2(3) on the 8 nonzero vectors of GF(3)^2 as a central extension of PSL2(3) = A4.

    Returns ``(domain_gens, image_gens, minus_one, project)`` where ``project``
    sends a domain permutation to its action on the 4 projective points and
    ``minus_one`` generates the kernel.
    """
    vecs = [v for v in itertools.product(range(3), repeat=2) if v != (0, 0)]
    lines = [(0, 1), (1, 0), (1, 1), (1, 2)]

    def line(v):
        x, y = v
        if x == 0:
            return (0, 1)
        return (1, y * x % 3)  # 1/x = x in GF(3)

    def act(m):
        (a, b), (c, d) = m
        return Permutation([vecs.index(((x * a + y * c) % 3, (x * b + y * d) % 3)) for x, y in vecs])

    def project(p):
        return Permutation([lines.index(line(vecs[p.images[vecs.index(l)]])) for l in lines])

    gens = [act(((1, 1), (0, 1))), act(((0, 1), (2, 0)))]
    return gens, [project(g) for g in gens], act(((2, 0), (0, 2))), project
