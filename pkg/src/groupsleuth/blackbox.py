"""Black-box group elements and the randomized workhorses built on them.

Two concrete backends are provided: :class:`Permutation` (images on the
points ``0..n-1``) and :class:`BitMatrix` (square matrices over GF(2),
one machine word per row).  Everything else in the package only uses the
shared element protocol: ``*``, ``inverse()``, ``identity()``, ``order()``,
``key()``, equality and hashing.

Products act from the left to the right, so for permutations
``x^(a*b) = (x^a)^b`` and for matrices row vectors are multiplied on the
right.  Conjugation is ``a^x = x^-1 * a * x``.
"""

from __future__ import annotations

import json
import logging
import math
import random
from collections import Counter, deque
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

MAX_DEGREE = 1 << 16
MAX_DIMENSION = 64
DEFAULT_ORDER_CAP = 1 << 20


class GroupError(Exception):
    """Base class for errors raised by group computations."""


class BackendMismatch(GroupError, TypeError):
    """Elements from different backends (or degrees) were combined."""


class OrderOverflow(GroupError, ArithmeticError):
    """A matrix order search exceeded its cap."""


class Overflow(GroupError):
    """Enumeration found more elements than the caller allowed."""

    def __init__(self, cap: int, found: int):
        super().__init__(f"group has more than {cap} elements (found {found} before aborting)")
        self.cap = cap
        self.found = found


class Permutation:
    """A permutation of ``{0, ..., n-1}`` stored as a tuple of images."""

    __slots__ = ("images",)
    backend = "perm"

    def __init__(self, images: Iterable[int], check: bool = True):
        images = tuple(int(i) for i in images)
        if check:
            n = len(images)
            if n > MAX_DEGREE:
                raise ValueError(f"degree {n} exceeds {MAX_DEGREE}")
            if sorted(images) != list(range(n)):
                raise ValueError("images do not form a bijection")
        self.images = images

    @classmethod
    def from_cycles(cls, n: int, *cycles: Sequence[int]) -> "Permutation":
        images = list(range(n))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def _check(self, other) -> None:
        if not isinstance(other, Permutation):
            raise BackendMismatch(f"cannot combine permutation with {type(other).__name__}")
        if len(other.images) != len(self.images):
            raise BackendMismatch(f"degree mismatch: {len(self.images)} vs {len(other.images)}")

    def __mul__(self, other: "Permutation") -> "Permutation":
        self._check(other)
        return Permutation(map(other.images.__getitem__, self.images), check=False)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv, check=False)

    def identity(self) -> "Permutation":
        return Permutation(range(len(self.images)), check=False)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __pow__(self, e: int) -> "Permutation":
        return power(self, e)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        lengths = [len(c) for c in self.cycles()]
        lengths += [1] * (len(self.images) - sum(lengths))
        return tuple(sorted(lengths, reverse=True))

    def order(self, cap: int | None = None) -> int:
        return math.lcm(1, *(len(c) for c in self.cycles()))

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def key(self) -> bytes:
        """Canonical payload bytes (two bytes per point)."""
        return b"".join(i.to_bytes(2, "little") for i in self.images)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        self._check(other)
        return self.images < other.images

    def __repr__(self) -> str:
        cyc = "".join("(" + ",".join(map(str, c)) + ")" for c in self.cycles())
        return f"Permutation<{self.degree}>{cyc or '()'}"


class BitMatrix:
    """An ``n x n`` matrix over GF(2); bit ``j`` of ``rows[i]`` is entry ``(i, j)``."""

    __slots__ = ("n", "rows")
    backend = "gf2"

    def __init__(self, rows: Iterable[int], n: int | None = None):
        rows = tuple(int(r) for r in rows)
        if n is None:
            n = len(rows)
        if n > MAX_DIMENSION:
            raise ValueError(f"dimension {n} exceeds {MAX_DIMENSION}")
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        mask = (1 << n) - 1
        if any(r & ~mask or r < 0 for r in rows):
            raise ValueError("row has bits beyond the matrix dimension")
        self.n = n
        self.rows = rows

    @classmethod
    def identity_matrix(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def zero(cls, n: int) -> "BitMatrix":
        return cls([0] * n, n)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        rows = [sum((int(x) & 1) << j for j, x in enumerate(row)) for row in entries]
        return cls(rows, len(entries))

    @classmethod
    def from_hex(cls, hexrows: Sequence[str], n: int | None = None) -> "BitMatrix":
        return cls([int(h, 16) for h in hexrows], n if n is not None else len(hexrows))

    def to_hex(self) -> list[str]:
        width = max(1, (self.n + 3) // 4)
        return [format(r, f"0{width}x") for r in self.rows]

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    @property
    def degree(self) -> int:
        return self.n

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def _check(self, other) -> None:
        if not isinstance(other, BitMatrix):
            raise BackendMismatch(f"cannot combine GF(2) matrix with {type(other).__name__}")
        if other.n != self.n:
            raise BackendMismatch(f"dimension mismatch: {self.n} vs {other.n}")

    def apply(self, v: int) -> int:
        """Row vector times matrix."""
        out = 0
        rows = self.rows
        i = 0
        while v:
            if v & 1:
                out ^= rows[i]
            v >>= 1
            i += 1
        return out

    def __mul__(self, other: "BitMatrix") -> "BitMatrix":
        self._check(other)
        return BitMatrix([other.apply(r) for r in self.rows], self.n)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        self._check(other)
        return BitMatrix([a ^ b for a, b in zip(self.rows, other.rows)], self.n)

    def transpose(self) -> "BitMatrix":
        n = self.n
        cols = [0] * n
        for i, r in enumerate(self.rows):
            j = 0
            while r:
                if r & 1:
                    cols[j] |= 1 << i
                r >>= 1
                j += 1
        return BitMatrix(cols, n)

    def inverse(self) -> "BitMatrix":
        n = self.n
        work = list(self.rows)
        inv = [1 << i for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if (work[r] >> col) & 1), None)
            if pivot is None:
                raise ZeroDivisionError("matrix is singular over GF(2)")
            work[col], work[pivot] = work[pivot], work[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
            for r in range(n):
                if r != col and (work[r] >> col) & 1:
                    work[r] ^= work[col]
                    inv[r] ^= inv[col]
        return BitMatrix(inv, n)

    def identity(self) -> "BitMatrix":
        return BitMatrix.identity_matrix(self.n)

    def is_identity(self) -> bool:
        return all(r == 1 << i for i, r in enumerate(self.rows))

    def __pow__(self, e: int) -> "BitMatrix":
        return power(self, e)

    def order(self, cap: int | None = DEFAULT_ORDER_CAP) -> int:
        cap = DEFAULT_ORDER_CAP if cap is None else cap
        x = self
        k = 1
        while not x.is_identity():
            k += 1
            if k > cap:
                raise OrderOverflow(f"matrix order exceeds cap {cap}")
            x = x * self
        return k

    def key(self) -> bytes:
        return b"".join(r.to_bytes(8, "little") for r in self.rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, BitMatrix) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __lt__(self, other: "BitMatrix") -> bool:
        self._check(other)
        return self.rows < other.rows

    def __repr__(self) -> str:
        return f"BitMatrix<{self.n}>[{' '.join(self.to_hex())}]"


def mul(a, b):
    return a * b


def inv(a):
    return a.inverse()


def identity(like):
    return like.identity()


def power(g, e: int):
    """``g**e`` by repeated squaring; negative exponents invert first."""
    if e < 0:
        g = g.inverse()
        e = -e
    result = g.identity()
    base = g
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    return result


def commutator(a, b):
    """``[a, b] = a^-1 b^-1 a b``."""
    return a.inverse() * b.inverse() * a * b


def conjugate(a, x):
    """``a^x = x^-1 a x``."""
    return x.inverse() * a * x


def element_order(g, cap: int = DEFAULT_ORDER_CAP) -> int:
    return g.order(cap)


def commutes(a, b) -> bool:
    return a * b == b * a


def _same_backend(elements: Sequence) -> None:
    first = elements[0]
    for g in elements[1:]:
        if type(g) is not type(first) or g.degree != first.degree:
            raise BackendMismatch("generators must share backend and degree")


class GeneratedGroup:
    """A group given by generators, with a seeded product-replacement stream.

    The random stream uses the "rattle" variant: a slot vector of
    ``max(10, 2 * len(generators))`` entries plus an accumulator that is
    multiplied by the freshly replaced slot on every draw.
    """

    def __init__(self, generators: Sequence, seed: int = 0, name: str | None = None,
                 scramble: int = 60):
        generators = list(generators)
        if not generators:
            raise ValueError("need at least one generator")
        _same_backend(generators)
        self.generators = generators
        self.name = name
        self.generator_names: list[str] | None = None
        self.cached_elements: frozenset | None = None
        self._seed = seed
        self._scramble = scramble
        self._init_prng(seed)

    @property
    def degree(self) -> int:
        return self.generators[0].degree

    @property
    def backend(self) -> str:
        return self.generators[0].backend

    def identity(self):
        return self.generators[0].identity()

    def _init_prng(self, seed: int) -> None:
        self.rng = random.Random(seed)
        r = max(10, 2 * len(self.generators))
        self._slots = [self.generators[i % len(self.generators)] for i in range(r)]
        self._acc = self.identity()
        for _ in range(self._scramble):
            self._step()

    def reseed(self, seed: int) -> None:
        self._seed = seed
        self._init_prng(seed)

    def _step(self):
        slots = self._slots
        rng = self.rng
        i, j = rng.sample(range(len(slots)), 2)
        other = slots[j] if rng.random() < 0.5 else slots[j].inverse()
        if rng.random() < 0.5:
            slots[i] = slots[i] * other
        else:
            slots[i] = other * slots[i]
        self._acc = self._acc * slots[i]
        return self._acc

    def random_element(self):
        return self._step()

    def random_elements(self, count: int) -> list:
        return [self._step() for _ in range(count)]

    def enumerate(self, cap: int = 10**6) -> frozenset:
        """All elements of the group, or :class:`Overflow` once more than ``cap`` are found."""
        if self.cached_elements is not None:
            if len(self.cached_elements) > cap:
                raise Overflow(cap, len(self.cached_elements))
            return self.cached_elements
        self.cached_elements = enumerate_elements(self.generators, cap)
        return self.cached_elements

    def order(self, cap: int = 10**6) -> int:
        return len(self.enumerate(cap))

    def __contains__(self, g) -> bool:
        if self.cached_elements is None:
            raise GroupError("membership needs an enumerated group")
        return g in self.cached_elements

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<GeneratedGroup {label}: {len(self.generators)} {self.backend} generators of degree {self.degree}>"


def enumerate_elements(generators: Sequence, cap: int = 10**6) -> frozenset:
    """Orbit of the identity under right multiplication by the generators."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    _same_backend(list(generators))
    one = generators[0].identity()
    seen = {one}
    queue = deque([one])
    while queue:
        s = queue.popleft()
        for x in generators:
            t = s * x
            if t not in seen:
                seen.add(t)
                if len(seen) > cap:
                    raise Overflow(cap, len(seen))
                queue.append(t)
    return frozenset(seen)


def order_spectrum(group: GeneratedGroup, cap: int = 10**6) -> Counter:
    """Exact multiset ``{element order: count}`` over all elements."""
    return Counter(g.order() for g in group.enumerate(cap))


def sampled_spectrum(group: GeneratedGroup, samples: int) -> set[int]:
    """Element orders seen among ``samples`` random draws (presence only)."""
    return {group.random_element().order() for _ in range(samples)}


def bray_centralizer_elements(t, src: GeneratedGroup, count: int, max_tries: int | None = None) -> list:
    """Elements of the centralizer of the involution ``t`` via Bray's trick.

    For a random ``g`` put ``c = [t, g]``.  If ``|c| = 2k + 1`` then
    ``g * c^k`` commutes with ``t``; if ``|c| = 2k`` then both ``c^k`` and
    ``[t, g^-1]^k`` do.
    """
    if t.is_identity() or not (t * t).is_identity():
        raise ValueError("t must be an involution")
    out: list = []
    tries = 0
    while len(out) < count:
        tries += 1
        if max_tries is not None and tries > max_tries:
            break
        g = src.random_element()
        c = commutator(t, g)
        m = c.order()
        if m % 2 == 1:
            x = g * power(c, m // 2)
            out.append(x)
        else:
            out.append(power(c, m // 2))
            if len(out) < count:
                out.append(power(commutator(t, g.inverse()), m // 2))
    for x in out:
        assert x * t == t * x, "Bray output does not commute with t"
    return out


def centralizer_bruteforce(elements: Iterable, s: Sequence) -> frozenset:
    """Members of ``elements`` commuting with every element of ``s``."""
    s = list(s)
    return frozenset(x for x in elements if all(x * y == y * x for y in s))


def is_conjugate_bruteforce(a, b, ambient: Iterable):
    """Return ``(True, x)`` with ``a^x == b`` for some ``x`` in ``ambient``, else ``(False, None)``."""
    if a == b:
        return True, a.identity()
    if a.order() != b.order():
        return False, None
    for x in ambient:
        if a * x == x * b:
            return True, x
    return False, None


def conjugacy_classes(group: GeneratedGroup, cap: int = 10**6) -> list[list]:
    """Conjugacy classes of an enumerable group.

    Each class is the orbit of a representative under conjugation by the
    generators; classes are sorted by element order, then size, then
    representative.
    """
    elements = group.enumerate(cap)
    gens = group.generators
    gens_inv = [g.inverse() for g in gens]
    unassigned = set(elements)
    classes = []
    for x in sorted(elements):
        if x not in unassigned:
            continue
        orbit = [x]
        unassigned.discard(x)
        i = 0
        while i < len(orbit):
            y = orbit[i]
            for g, gi in zip(gens, gens_inv):
                z = gi * y * g
                if z in unassigned:
                    unassigned.discard(z)
                    orbit.append(z)
            i += 1
        classes.append(sorted(orbit))
    classes.sort(key=lambda c: (c[0].order(), len(c), c[0]))
    return classes


def orbits(generators: Sequence, n: int | None = None) -> list[list[int]]:
    """Orbits of a permutation group on its points, each sorted."""
    for g in generators:
        if not isinstance(g, Permutation):
            raise BackendMismatch("orbits need permutation generators")
    if n is None:
        n = generators[0].degree
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        orb = [start]
        i = 0
        while i < len(orb):
            p = orb[i]
            for g in generators:
                q = g.images[p]
                if not seen[q]:
                    seen[q] = True
                    orb.append(q)
            i += 1
        out.append(sorted(orb))
    return out


def orbit_lengths(group, n: int | None = None) -> list[int]:
    """Sorted (descending) orbit lengths of a permutation group."""
    gens = group.generators if isinstance(group, GeneratedGroup) else list(group)
    return sorted((len(o) for o in orbits(gens, n)), reverse=True)


def symmetric_centralizer(generators: Sequence, n: int | None = None, even_only: bool = False,
                          cap: int = 10**6) -> list:
    """All permutations of the points commuting with every generator.

    A commuting permutation is fixed by where it sends one point of each
    orbit, so the search backtracks over orbit representatives and
    propagates along the generators.  ``even_only`` restricts to the
    alternating group.
    """
    gens = list(generators)
    if n is None:
        n = gens[0].degree
    orbs = orbits(gens, n)
    reps = [o[0] for o in orbs]
    found: list = []

    def extend(mapping: list, rep: int, target: int) -> list | None:
        m = list(mapping)
        if m[rep] != -1:
            return m if m[rep] == target else None
        used = set(v for v in m if v != -1)
        if target in used:
            return None
        m[rep] = target
        used.add(target)
        stack = [rep]
        while stack:
            p = stack.pop()
            for g in gens:
                q = g.images[p]
                img = g.images[m[p]]
                if m[q] == -1:
                    if img in used:
                        return None
                    m[q] = img
                    used.add(img)
                    stack.append(q)
                elif m[q] != img:
                    return None
        return m

    def search(k: int, mapping: list) -> None:
        if k == len(reps):
            c = Permutation(mapping)
            if even_only and not c.is_even():
                return
            found.append(c)
            if len(found) > cap:
                raise Overflow(cap, len(found))
            return
        for target in range(n):
            m = extend(mapping, reps[k], target)
            if m is not None:
                search(k + 1, m)

    search(0, [-1] * n)
    return found


def random_word(generators: Sequence, length: int, rng: random.Random):
    """A random product of ``length`` generators or their inverses.

    Returns ``(element, letters)`` where ``letters`` lists ``(index, sign)``.
    """
    g = generators[0].identity()
    letters = []
    for _ in range(length):
        i = rng.randrange(len(generators))
        s = rng.choice((1, -1))
        g = g * (generators[i] if s == 1 else generators[i].inverse())
        letters.append((i, s))
    return g, letters


# group files


class GroupFileError(GroupError, ValueError):
    pass


def group_to_dict(group: GeneratedGroup) -> dict:
    gens = group.generators
    if group.backend == "perm":
        out = {"backend": "perm", "degree": group.degree, "generators": [list(g.images) for g in gens]}
    else:
        out = {"backend": "gf2", "degree": group.degree, "generators": [g.to_hex() for g in gens]}
    names = group.generator_names
    if names:
        out["names"] = list(names)
    if group.name:
        out["name"] = group.name
    return out


def group_from_dict(obj: dict, seed: int = 0) -> GeneratedGroup:
    """Build a group from the file format; an optional ``names`` list labels the generators."""
    try:
        backend = obj["backend"]
        n = int(obj["degree"])
        raw = obj["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupFileError(f"malformed group file: {exc}") from None
    if not raw:
        raise GroupFileError("group file lists no generators")
    try:
        if backend == "perm":
            gens = [Permutation(g) for g in raw]
        elif backend == "gf2":
            gens = [BitMatrix.from_hex(g, n) for g in raw]
        else:
            raise GroupFileError(f"unknown backend {backend!r}")
    except ValueError as exc:
        raise GroupFileError(str(exc)) from None
    if any(g.degree != n for g in gens):
        raise GroupFileError("generator degree disagrees with the declared degree")
    group = GeneratedGroup(gens, seed=seed, name=obj.get("name"))
    names = obj.get("names")
    if names is not None:
        if len(names) != len(gens):
            raise GroupFileError("names and generators differ in length")
        group.generator_names = list(names)
    return group


def load_group(path: str | Path, seed: int = 0) -> GeneratedGroup:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GroupFileError(f"{path}: {exc}") from None
    return group_from_dict(obj, seed)


def dump_group(group: GeneratedGroup) -> str:
    return json.dumps(group_to_dict(group))
