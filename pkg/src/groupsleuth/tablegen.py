"""Building character tables for the fixture groups.

Two routes are offered.  The combinatorial builders (symmetric, alternating,
dihedral, Frobenius p:m, PSL2(q), PGL2(q)) write classes, power maps and
irreducibles down from their classical parametrizations and never look at
group elements.  :func:`table_from_group` instead takes an enumerable group,
computes its classes and power maps by brute force and evaluates supplied
class functions on representatives.  Either way the result goes through the
full validation of :class:`CharacterTable`, and :func:`class_matchings`
lines up a table with brute-force class data so that structure constants can
be compared against direct pair counts.
"""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Callable, Iterator, Sequence

from .blackbox import GeneratedGroup, conjugacy_classes
from .chartab import CharacterTable, ClassInfo
from .cyclotomic import Cyclotomic, factorize, lcm

Z = Cyclotomic


def _name_classes(keys: list[tuple[int, int, tuple]]) -> list[str]:
    """Names like ``1a, 2a, 2b`` from (order, size, tiebreak) triples.

    Within one element order, letters follow increasing class size.
    """
    names = [""] * len(keys)
    by_order: dict[int, list[int]] = {}
    for i, (o, _, _) in enumerate(keys):
        by_order.setdefault(o, []).append(i)
    for o, idx in by_order.items():
        idx.sort(key=lambda i: (keys[i][1], keys[i][2]))
        for r, i in enumerate(idx):
            names[i] = f"{o}{_letters(r)}"
    return names


def _letters(r: int) -> str:
    s = ""
    r += 1
    while r:
        r, m = divmod(r - 1, 26)
        s = string.ascii_lowercase[m] + s
    return s


def _assemble(name: str, order: int, params: list, size_of, order_of, power_of,
              chars: list[Callable]) -> CharacterTable:
    """Common tail of the combinatorial builders.

    ``params`` lists one hashable parameter per class (identity first);
    ``power_of(param, p)`` returns the parameter of the p-th power class.
    """
    keys = [(order_of(x), size_of(x), _sort_key(x)) for x in params]
    ident = params[0]
    rest = sorted(range(1, len(params)), key=lambda i: keys[i])
    perm = [0] + rest
    params = [params[i] for i in perm]
    keys = [keys[i] for i in perm]
    names = _name_classes(keys)
    # re-sort by (order, name) for a conventional column order
    cols = sorted(range(len(params)), key=lambda i: (keys[i][0], len(names[i]), names[i]))
    params = [params[i] for i in cols]
    names = [names[i] for i in cols]
    assert params[0] == ident
    where = {x: i for i, x in enumerate(params)}
    primes = sorted(factorize(order))
    classes = []
    for x, nm in zip(params, names):
        pm = {p: where[power_of(x, p)] for p in primes}
        classes.append(ClassInfo(nm, size_of(x), order_of(x), pm))
    rows = [[Z.coerce(f(x)) for x in params] for f in chars]
    rows.sort(key=_row_key)
    return CharacterTable(name, order, classes, rows)


def _row_key(row):
    # by degree; among equal degrees the trivial character (all ones) first
    return (row[0].to_fraction(), [(-round(complex(v).real, 9), -round(complex(v).imag, 9)) for v in row])


def _sort_key(x):
    return repr(x)


# symmetric and alternating groups


def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return out


def centralizer_size(mu: Sequence[int]) -> int:
    """z_mu = prod i^{m_i} m_i!."""
    z = 1
    for i, m in Counter(mu).items():
        z *= i**m * factorial(m)
    return z


def conjugate_partition(lam: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(1 for x in lam if x > i) for i in range(lam[0])) if lam else ()


def diagonal_hooks(lam: Sequence[int]) -> tuple[int, ...]:
    conj = conjugate_partition(lam)
    return tuple(lam[i] - i + conj[i] - i - 1 for i in range(len(lam)) if lam[i] > i)


@lru_cache(maxsize=None)
def _mn(beta: frozenset, mu: tuple[int, ...]) -> int:
    """Murnaghan-Nakayama on a beta-set (bead positions)."""
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    total = 0
    for b in beta:
        t = b - r
        if t >= 0 and t not in beta:
            between = sum(1 for x in beta if t < x < b)
            new = (beta - {b}) | {t}
            total += (-1) ** between * _mn(frozenset(new), rest)
    return total


def symmetric_character(lam: Sequence[int], mu: Sequence[int]) -> int:
    k = len(lam)
    beta = frozenset(lam[i] + (k - 1 - i) for i in range(k))
    return _mn(beta, tuple(sorted(mu, reverse=True)))


def _cycle_power(mu: tuple[int, ...], p: int) -> tuple[int, ...]:
    out = []
    for l in mu:
        g = gcd(l, p)
        out.extend([l // g] * g)
    return tuple(sorted(out, reverse=True))


def _lcm_all(xs) -> int:
    o = 1
    for x in xs:
        o = lcm(o, x)
    return o


def symmetric_table(n: int) -> CharacterTable:
    params = partitions(n)[::-1]  # (1^n) first
    order = factorial(n)
    chars = [(lambda lam: (lambda mu: symmetric_character(lam, mu)))(lam) for lam in partitions(n)]
    return _assemble(f"S{n}", order, params,
                     lambda mu: order // centralizer_size(mu),
                     lambda mu: _lcm_all(mu),
                     _cycle_power, chars)


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _is_split(mu: tuple[int, ...]) -> bool:
    return len(set(mu)) == len(mu) and all(x % 2 for x in mu)


def alternating_table(n: int) -> CharacterTable:
    """Table of A_n from the symmetric characters by Clifford theory.

    Cycle types with distinct odd parts split into classes ``(mu, +1)`` and
    ``(mu, -1)``; for a self-conjugate partition with diagonal hooks ``h``
    the two constituents take ``(e +- sqrt(e * prod h)) / 2`` on the split
    classes of type ``h`` where ``e = (-1)^((n - len(h)) / 2)``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    params = []
    for mu in partitions(n)[::-1]:
        if sum(x - 1 for x in mu) % 2:
            continue
        if _is_split(mu):
            params += [(mu, 1), (mu, -1)]
        else:
            params.append((mu, 0))
    order = factorial(n) // 2

    def size_of(x):
        mu, s = x
        full = factorial(n) // centralizer_size(mu)
        return full // 2 if s else full

    def power_of(x, p):
        mu, s = x
        nu = _cycle_power(mu, p)
        if s and _is_split(nu):
            # only when p is prime to every part, so nu == mu; the conjugating
            # permutation from g to g^p has sign prod (p / h)
            sign = 1
            for h in mu:
                sign *= _jacobi(p, h)
            return (nu, s * sign)
        return (nu, 0)

    chars = []
    seen = set()
    for lam in partitions(n):
        lc = conjugate_partition(lam)
        if lam in seen:
            continue
        seen.add(lam)
        seen.add(lc)
        if lam != lc:
            chars.append((lambda lam: (lambda x: symmetric_character(lam, x[0])))(lam))
            continue
        h = tuple(sorted(diagonal_hooks(lam), reverse=True))
        e = (-1) ** ((n - len(h)) // 2)
        prod_h = 1
        for x in h:
            prod_h *= x
        root = Z.sqrt(e * prod_h)
        for sgn in (1, -1):
            def f(x, lam=lam, h=h, e=e, root=root, sgn=sgn):
                mu, s = x
                if s and mu == h:
                    return (Z.rational(e) + root * (sgn * s)) / 2
                return Fraction(symmetric_character(lam, mu), 2)
            chars.append(f)
    return _assemble(f"A{n}", order, params, size_of,
                     lambda x: _lcm_all(x[0]), power_of, chars)


# small families


def cyclic_table(n: int) -> CharacterTable:
    params = list(range(n))
    chars = [(lambda j: (lambda k: Z.zeta(n, j * k)))(j) for j in range(n)]
    return _assemble(f"C{n}", n, params, lambda k: 1, lambda k: n // gcd(k, n),
                     lambda k, p: (k * p) % n, chars)


def dihedral_table(n: int) -> CharacterTable:
    """Dihedral group of order 2n; classes are ('r', k) with k ~ -k and reflection classes."""
    params: list = [("r", k) for k in range(n // 2 + 1)]
    if n % 2:
        params.append(("s", 0))
    else:
        params += [("s", 0), ("s", 1)]
    order = 2 * n

    def size_of(x):
        t, k = x
        if t == "r":
            return 1 if k == 0 or 2 * k == n else 2
        return n if n % 2 else n // 2

    def order_of(x):
        t, k = x
        return n // gcd(k, n) if t == "r" else 2

    def power_of(x, p):
        t, k = x
        if t == "r":
            m = (k * p) % n
            return ("r", min(m, n - m))
        return x if p % 2 else ("r", 0)

    chars = [lambda x: 1, lambda x: 1 if x[0] == "r" else -1]
    if n % 2 == 0:
        chars.append(lambda x: (-1) ** x[1] if x[0] == "r" else (1 if x[1] == 0 else -1))
        chars.append(lambda x: (-1) ** x[1] if x[0] == "r" else (-1 if x[1] == 0 else 1))
    for j in range(1, (n + 1) // 2):
        chars.append((lambda j: (lambda x: Z.zeta(n, j * x[1]) + Z.zeta(n, -j * x[1]) if x[0] == "r" else 0))(j))
    return _assemble(f"D{order}", order, params, size_of, order_of, power_of, chars)


def _primitive_root(p: int) -> int:
    fac = factorize(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            return g
    return 1


def frobenius_table(p: int, m: int) -> CharacterTable:
    """The Frobenius group C_p : C_m (affine maps x -> a x + b, a of order dividing m)."""
    if (p - 1) % m:
        raise ValueError("m must divide p - 1")
    g = _primitive_root(p)
    w = pow(g, (p - 1) // m, p)  # generator of the complement
    sub = [pow(w, i, p) for i in range(m)]
    cosets = []
    seen = set()
    for x in range(1, p):
        if x not in seen:
            orb = sorted({(x * s) % p for s in sub})
            seen.update(orb)
            cosets.append(orb[0])
    params: list = [("1", 0)] + [("t", c) for c in cosets] + [("a", i) for i in range(1, m)]
    order = p * m

    def size_of(x):
        t, v = x
        return 1 if t == "1" else (m if t == "t" else p)

    def order_of(x):
        t, v = x
        return 1 if t == "1" else (p if t == "t" else m // gcd(v, m))

    def coset_of(y):
        return min((y * s) % p for s in sub)

    def power_of(x, q):
        t, v = x
        if t == "1":
            return x
        if t == "t":
            y = (v * q) % p
            return ("1", 0) if y == 0 else ("t", coset_of(y))
        i = (v * q) % m
        return ("1", 0) if i == 0 else ("a", i)

    chars = []
    for j in range(m):
        chars.append((lambda j: (lambda x: Z.zeta(m, j * x[1]) if x[0] == "a" else 1))(j))
    for c in cosets:
        def f(x, c=c):
            t, v = x
            if t == "1":
                return m
            if t == "a":
                return 0
            return Z.from_exponents(p, [(v * c * s) % p for s in sub])
        chars.append(f)
    return _assemble(f"{p}:{m}", order, params, size_of, order_of, power_of, chars)


def _check_odd_prime(q: int) -> None:
    if q < 3 or q % 2 == 0 or factorize(q) != {q: 1}:
        raise ValueError("q must be an odd prime")


def pgl2_table(q: int) -> CharacterTable:
    """PGL2(q) for an odd prime q.

    Classes: identity, unipotent, split torus exponents i ~ -i in Z/(q-1),
    non-split torus exponents j ~ -j in Z/(q+1).
    """
    _check_odd_prime(q)
    a, b = q - 1, q + 1
    params: list = [("1", 0), ("u", 0)]
    params += [("s", i) for i in range(1, a // 2 + 1)]
    params += [("n", j) for j in range(1, b // 2 + 1)]
    order = q * (q * q - 1)

    def size_of(x):
        t, v = x
        if t == "1":
            return 1
        if t == "u":
            return q * q - 1
        if t == "s":
            return q * (q + 1) // (2 if 2 * v == a else 1)
        return q * (q - 1) // (2 if 2 * v == b else 1)

    def order_of(x):
        t, v = x
        return {"1": 1, "u": q, "s": a // gcd(v, a) if t == "s" else 0,
                "n": b // gcd(v, b) if t == "n" else 0}[t]

    def power_of(x, p):
        t, v = x
        if t == "1":
            return x
        if t == "u":
            return ("1", 0) if p == q else x
        mod = a if t == "s" else b
        w = (v * p) % mod
        w = min(w, mod - w)
        return ("1", 0) if w == 0 else (t, w)

    chars = _pgl_char_functions(q)
    return _assemble(f"PGL2({q})", order, params, size_of, order_of, power_of, chars)


def psl2_table(q: int) -> CharacterTable:
    """PSL2(q) for an odd prime q, by restriction from PGL2(q)."""
    _check_odd_prime(q)
    a, b = q - 1, q + 1
    params: list = [("1", 0), ("u", 1), ("u", -1)]
    params += [("s", i) for i in range(2, a // 2 + 1, 2)]
    params += [("n", j) for j in range(2, b // 2 + 1, 2)]
    order = q * (q * q - 1) // 2
    eps = (-1) ** ((q - 1) // 2)
    root = Z.sqrt(eps * q)

    def size_of(x):
        t, v = x
        if t == "u":
            return (q * q - 1) // 2
        return {"1": 1}.get(t) or (q * (q + 1) // (2 if 2 * v == a else 1) if t == "s"
                                   else q * (q - 1) // (2 if 2 * v == b else 1))

    def order_of(x):
        t, v = x
        if t == "1":
            return 1
        if t == "u":
            return q
        return a // gcd(v, a) if t == "s" else b // gcd(v, b)

    def legendre(k):
        return 1 if pow(k % q, (q - 1) // 2, q) == 1 else -1

    def power_of(x, p):
        t, v = x
        if t == "1":
            return x
        if t == "u":
            return ("1", 0) if p == q else ("u", v * legendre(p))
        mod = a if t == "s" else b
        w = (v * p) % mod
        w = min(w, mod - w)
        return ("1", 0) if w == 0 else (t, w)

    pgl_chars = _pgl_char_functions(q)

    def restricted(f):
        return lambda x: f(("u", 0) if x[0] == "u" else x)

    seen = set()
    chars = []
    for f in pgl_chars:
        r = restricted(f)
        vals = tuple(Z.coerce(r(x)) for x in params)
        if vals in seen:
            continue
        seen.add(vals)
        norm = sum((Z.coerce(v) * v.conjugate() * size_of(x) for v, x in zip(vals, params)),
                   Z.rational(0)).to_fraction() / order
        if norm == 1:
            chars.append(r)
        elif norm == 2:
            for sgn in (1, -1):
                def h(x, r=r, sgn=sgn):
                    t, v = x
                    base = Z.coerce(r(x))
                    if t == "u":
                        return (base + root * (sgn * v)) / 2
                    return base / 2
                chars.append(h)
        else:
            raise AssertionError(f"unexpected restriction norm {norm}")
    return _assemble(f"L2({q})", order, params, size_of, order_of, power_of, chars)


def _pgl_char_functions(q: int) -> list[Callable]:
    a, b = q - 1, q + 1

    def sgn(x):
        t, v = x
        return (-1) ** v if t in "sn" else 1

    out = [lambda x: 1, sgn,
           lambda x: {"1": q, "u": 0, "s": 1, "n": -1}[x[0]],
           lambda x: {"1": q, "u": 0, "s": 1, "n": -1}[x[0]] * sgn(x)]
    for s in range(1, a // 2):
        out.append((lambda s: (lambda x: q + 1 if x[0] == "1" else 1 if x[0] == "u" else
                               Z.zeta(a, s * x[1]) + Z.zeta(a, -s * x[1]) if x[0] == "s" else 0))(s))
    for s in range(1, b // 2):
        out.append((lambda s: (lambda x: q - 1 if x[0] == "1" else -1 if x[0] == "u" else
                               -(Z.zeta(b, s * x[1]) + Z.zeta(b, -s * x[1])) if x[0] == "n" else 0))(s))
    return out


def trivial_table() -> CharacterTable:
    return CharacterTable("1", 1, [ClassInfo("1a", 1, 1, {})], [[1]])


# brute force from an enumerated group


@dataclass
class ClassData:
    """Brute-force conjugacy class data of an enumerated group."""

    order: int
    reps: list
    sizes: list[int]
    orders: list[int]
    powermaps: list[dict[int, int]]
    class_of: dict

    def __len__(self) -> int:
        return len(self.reps)


def brute_class_data(group: GeneratedGroup, cap: int = 10**6) -> ClassData:
    classes = conjugacy_classes(group, cap)
    class_of = {}
    for i, cl in enumerate(classes):
        for x in cl:
            class_of[x] = i
    n = sum(len(c) for c in classes)
    primes = sorted(factorize(n)) if n > 1 else []
    reps = [c[0] for c in classes]
    pms = []
    for r in reps:
        pm = {}
        for p in primes:
            pm[p] = class_of[r**p]
        pms.append(pm)
    return ClassData(n, reps, [len(c) for c in classes], [r.order() for r in reps], pms, class_of)


def table_from_group(name: str, group: GeneratedGroup, characters: Sequence[Callable],
                     cap: int = 10**6) -> CharacterTable:
    """Classes and power maps by brute force, values from class functions on representatives."""
    data = brute_class_data(group, cap)
    keys = [(o, s, (i,)) for i, (o, s) in enumerate(zip(data.orders, data.sizes))]
    names = _name_classes(keys)
    classes = [ClassInfo(names[i], data.sizes[i], data.orders[i], data.powermaps[i]) for i in range(len(data))]
    rows = [[Z.coerce(f(r)) for r in data.reps] for f in characters]
    rows.sort(key=_row_key)
    return CharacterTable(name, data.order, classes, rows)


def class_matchings(table: CharacterTable, data: ClassData, limit: int | None = None) -> Iterator[list[int]]:
    """Bijections table class -> brute-force class preserving size, order and power maps.

    Distinct matchings differ by a permutation of classes the invariants
    cannot separate (typically algebraically conjugate classes).
    """
    k = len(table)
    if k != len(data) or table.order != data.order:
        return
    cand = []
    for i, c in enumerate(table.classes):
        cand.append([j for j in range(k) if data.sizes[j] == c.size and data.orders[j] == c.order])
    # assign classes with the fewest candidates first
    order = sorted(range(k), key=lambda i: (len(cand[i]), -table.classes[i].order))
    assign = [-1] * k
    used = [False] * k
    count = 0

    def consistent(i: int) -> bool:
        for p, ti in table.classes[i].powermap.items():
            if assign[ti] != -1 and data.powermaps[assign[i]].get(p) != assign[ti]:
                return False
        for j in range(k):
            if assign[j] != -1:
                tj = table.classes[j].powermap
                for p, t in tj.items():
                    if t == i and data.powermaps[assign[j]].get(p) != assign[i]:
                        return False
        return True

    def rec(pos: int):
        nonlocal count
        if pos == k:
            count += 1
            yield list(assign)
            return
        i = order[pos]
        for j in cand[i]:
            if used[j]:
                continue
            assign[i] = j
            used[j] = True
            if consistent(i):
                yield from rec(pos + 1)
                if limit is not None and count >= limit:
                    used[j] = False
                    assign[i] = -1
                    return
            used[j] = False
            assign[i] = -1

    yield from rec(0)


def brute_structure_constants(group: GeneratedGroup, data: ClassData | None = None, cap: int = 10**6):
    """``N[a][b][c]`` = #{(x, y) in A x B : x y = z_c} for the class representatives z_c."""
    if data is None:
        data = brute_class_data(group, cap)
    k = len(data)
    members: list[list] = [[] for _ in range(k)]
    for x, i in data.class_of.items():
        members[i].append(x)
    out = [[[0] * k for _ in range(k)] for _ in range(k)]
    for c, z in enumerate(data.reps):
        for a in range(k):
            row = out[a]
            for x in members[a]:
                y = x.inverse() * z
                row[data.class_of[y]][c] += 1
    return out


def class_representatives(table: CharacterTable, group: GeneratedGroup, cap: int = 10**6) -> list:
    """One element of ``group`` for each class of ``table``, via the first class matching."""
    data = brute_class_data(group, cap)
    m = next(class_matchings(table, data), None)
    if m is None:
        raise ValueError(f"{table.name} does not match the classes of the group")
    return [data.reps[m[i]] for i in range(len(table))]
