"""Character tables with exact cyclotomic entries.

Tables are read from JSON of the form::

    {"name": "A5", "order": "60",
     "classes": [{"name": "1a", "size": "1", "order": 1, "powermap": {"2": 0, "3": 0, "5": 0}}, ...],
     "conductor": 5,
     "irreducibles": [["1", "1", ...], ["3", "-1", {"coeffs": [...]}, ...], ...]}

A value is a decimal-string rational or ``{"coeffs": [...]}`` giving the
residue modulo Phi_conductor.  A value may also carry its own
``"conductor"`` key, which keeps large tables small on disk.

Every invariant (class sizes, power maps, both orthogonality relations) is
checked when a table is loaded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from pathlib import Path
from typing import Iterable, Sequence

from .cyclotomic import Cyclotomic, factorize, lcm


class TableError(ValueError):
    """A table failed to parse or violates a character-table invariant."""


class TableParseError(TableError):
    pass


class OrthogonalityError(TableError):
    pass


class IntegralityError(ArithmeticError):
    """A structure constant came out negative or non-integral."""


class PowerMapError(LookupError):
    """A power map needed for a query is not stored in the table."""


@dataclass
class ClassInfo:
    name: str
    size: int
    order: int
    powermap: dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ClassId:
    table: "CharacterTable"
    index: int

    def __post_init__(self):
        if not 0 <= self.index < len(self.table.classes):
            raise IndexError(f"class index {self.index} out of range")

    @property
    def name(self) -> str:
        return self.table.classes[self.index].name

    @property
    def order(self) -> int:
        return self.table.classes[self.index].order

    def __repr__(self) -> str:
        return f"ClassId({self.table.name}:{self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ClassId) and other.table is self.table and other.index == self.index

    def __hash__(self) -> int:
        return hash((id(self.table), self.index))


class CharacterTable:
    def __init__(self, name: str, order: int, classes: Sequence[ClassInfo],
                 irreducibles: Sequence[Sequence], validate: bool = True):
        self.name = name
        self.order = int(order)
        self.classes = list(classes)
        self.irreducibles = [[Cyclotomic.coerce(v) for v in row] for row in irreducibles]
        self._by_name = {}
        for i, c in enumerate(self.classes):
            key = c.name.lower()
            if key in self._by_name:
                raise TableError(f"duplicate class name {c.name!r}")
            self._by_name[key] = i
        self._rational = [all(row[j].is_rational() for row in self.irreducibles)
                          for j in range(len(self.classes))]
        # integer-or-Fraction copies of rational columns for the fast paths
        self._qcols: dict[int, list[Fraction]] = {
            j: [row[j].to_fraction() for row in self.irreducibles]
            for j in range(len(self.classes)) if self._rational[j]
        }
        # plain-int columns, weighted by D / chi(1) with D the lcm of the degrees
        self._icols = {j: [int(x) for x in col] for j, col in self._qcols.items()
                       if all(x.denominator == 1 for x in col)}
        degs = [row[0].to_fraction() if row and row[0].is_rational() else None for row in self.irreducibles]
        if all(d is not None and d.denominator == 1 and d > 0 for d in degs):
            self._deg_lcm = 1
            for d in degs:
                self._deg_lcm = lcm(self._deg_lcm, int(d))
            self._weights = [self._deg_lcm // int(d) for d in degs]
        else:
            self._icols = {}
            self._weights = None
        if validate:
            self.validate()

    # lookup

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def class_names(self) -> list[str]:
        return [c.name for c in self.classes]

    @property
    def conductor(self) -> int:
        """lcm of the element orders (every value lies in this field)."""
        return reduce(lcm, (c.order for c in self.classes), 1)

    def index(self, c) -> int:
        if isinstance(c, ClassId):
            if c.table is not self:
                raise ValueError("class belongs to a different table")
            return c.index
        if isinstance(c, int):
            if not 0 <= c < len(self.classes):
                raise IndexError(f"class index {c} out of range")
            return c
        try:
            return self._by_name[str(c).lower()]
        except KeyError:
            raise KeyError(f"no class named {c!r} in {self.name}") from None

    def cls(self, c) -> ClassId:
        return ClassId(self, self.index(c))

    def value(self, row: int, c) -> Cyclotomic:
        return self.irreducibles[row][self.index(c)]

    def degrees(self) -> list[int]:
        return [int(row[0].to_fraction()) for row in self.irreducibles]

    # invariants

    def validate(self) -> None:
        k = len(self.classes)
        if k == 0:
            raise TableError("table has no classes")
        if len(self.irreducibles) != k:
            raise TableError(f"{len(self.irreducibles)} irreducibles for {k} classes")
        for i, row in enumerate(self.irreducibles):
            if len(row) != k:
                raise TableError(f"row {i} has {len(row)} entries, expected {k}")
        first = self.classes[0]
        if first.size != 1 or first.order != 1:
            raise TableError("first class must be the identity class")
        if sum(c.size for c in self.classes) != self.order:
            raise TableError("class sizes do not sum to the group order")
        for c in self.classes:
            if c.size < 1 or self.order % c.size:
                raise TableError(f"class {c.name}: size does not divide the group order")
            if c.order < 1 or self.order % c.order:
                raise TableError(f"class {c.name}: element order does not divide the group order")
        primes = sorted(factorize(self.order))
        for c in self.classes:
            for p in primes:
                if p not in c.powermap:
                    raise TableError(f"class {c.name}: missing {p}-power map")
                j = c.powermap[p]
                if not 0 <= j < k:
                    raise TableError(f"class {c.name}: {p}-power map out of range")
                if self.classes[j].order != c.order // gcd(c.order, p):
                    raise TableError(f"class {c.name}: {p}-power map has wrong element order")
        for i, row in enumerate(self.irreducibles):
            d = row[0]
            if not d.is_rational() or d.to_fraction().denominator != 1 or d.to_fraction() <= 0:
                raise TableError(f"row {i}: degree is not a positive integer")
        self._check_rows()
        self._check_columns()

    def _check_rows(self) -> None:
        k = len(self.classes)
        sizes = [c.size for c in self.classes]
        qcols = self._qcols
        irr_cols = [j for j in range(k) if not self._rational[j]]
        conj = {j: [row[j].conjugate() for row in self.irreducibles] for j in irr_cols}
        for a in range(k):
            ra = self.irreducibles[a]
            for b in range(a, k):
                total: Fraction | Cyclotomic = sum(
                    (sizes[j] * col[a] * col[b] for j, col in qcols.items()), Fraction(0))
                if irr_cols:
                    extra = Cyclotomic.rational(0)
                    for j in irr_cols:
                        extra = extra + ra[j] * conj[j][b] * sizes[j]
                    if not extra.is_rational():
                        raise OrthogonalityError(f"rows {a},{b}: inner product is not rational")
                    total += extra.to_fraction()
                want = self.order if a == b else 0
                if total != want:
                    raise OrthogonalityError(
                        f"row orthogonality fails for rows {a},{b}: {total} != {want}")

    def _check_columns(self) -> None:
        k = len(self.classes)
        rows = self.irreducibles
        for c in range(k):
            cc = [row[c].conjugate() for row in rows] if not self._rational[c] else None
            for d in range(c, k):
                if cc is None and self._rational[d]:
                    total = sum((x * y for x, y in zip(self._qcols[c], self._qcols[d])), Fraction(0))
                else:
                    s = Cyclotomic.rational(0)
                    for i, row in enumerate(rows):
                        left = cc[i] if cc is not None else row[c]
                        s = s + left * row[d]
                    if not s.is_rational():
                        raise OrthogonalityError(f"columns {c},{d}: sum is not rational")
                    total = s.to_fraction()
                want = self.centralizer_order(c) if c == d else 0
                if total != want:
                    raise OrthogonalityError(
                        f"column orthogonality fails for classes "
                        f"{self.classes[c].name},{self.classes[d].name}: {total} != {want}")

    # queries

    def centralizer_order(self, c) -> int:
        return self.order // self.classes[self.index(c)].size

    def class_mult_coefficient(self, a, b, c) -> int:
        """Number of pairs (x, y) in A x B with x*y equal to a fixed z in C."""
        ia, ib, ic = self.index(a), self.index(b), self.index(c)
        sa, sb = self.classes[ia].size, self.classes[ib].size
        rows = self.irreducibles
        if ia in self._icols and ib in self._icols and ic in self._icols:
            qa, qb, qc = self._icols[ia], self._icols[ib], self._icols[ic]
            num = sum(x * y * z * w for x, y, z, w in zip(qa, qb, qc, self._weights))
            s = Fraction(num, self._deg_lcm)
        elif self._rational[ia] and self._rational[ib] and self._rational[ic]:
            qa, qb, qc = self._qcols[ia], self._qcols[ib], self._qcols[ic]
            s = Fraction(0)
            for i, row in enumerate(rows):
                x = qa[i] * qb[i] * qc[i]
                if x:
                    s += x / row[0].coeffs[0]
        elif self._weights is not None:
            # integer terms as ints, only the irrational entries as cyclotomics
            num = 0
            acc = Cyclotomic.rational(0)
            for row, w in zip(rows, self._weights):
                x, y, z = row[ia], row[ib], row[ic]
                if x.n == 1 and y.n == 1 and z.n == 1:
                    num += x.coeffs[0] * y.coeffs[0] * z.coeffs[0] * w
                elif not (x.is_zero() or y.is_zero() or z.is_zero()):
                    acc = acc + x * y * z.conjugate() * w
            if not acc.is_rational():
                raise IntegralityError(f"structure constant ({a},{b},{c}) is not rational")
            s = (acc.to_fraction() + num) / self._deg_lcm
        else:
            acc = Cyclotomic.rational(0)
            for row in rows:
                acc = acc + row[ia] * row[ib] * row[ic].conjugate() / row[0].coeffs[0]
            if not acc.is_rational():
                raise IntegralityError(f"structure constant ({a},{b},{c}) is not rational")
            s = acc.to_fraction()
        val = s * sa * sb / self.order
        if val.denominator != 1 or val < 0:
            raise IntegralityError(
                f"structure constant ({a},{b},{c}) = {val} is not a non-negative integer")
        return int(val)

    def is_rational_class(self, c) -> bool:
        return self._rational[self.index(c)]

    def is_real_class(self, c) -> bool:
        """Whether the class is closed under inversion, i.e. every value on it is real."""
        i = self.index(c)
        return all(row[i] == row[i].conjugate() for row in self.irreducibles)

    def _galois_class(self, i: int, p: int) -> int:
        # for p prime to |G|, g^p lies in the class whose column is the p-th
        # Galois conjugate of the column of g
        key = (i, p)
        cache = self.__dict__.setdefault("_galois_cache", {})
        if key not in cache:
            col = [row[i].galois(p) for row in self.irreducibles]
            o = self.classes[i].order
            hits = [j for j, cl in enumerate(self.classes)
                    if cl.order == o and all(row[j] == v for row, v in zip(self.irreducibles, col))]
            if len(hits) != 1:
                raise PowerMapError(f"no unique class for the {p}-th power of {self.classes[i].name}")
            cache[key] = hits[0]
        return cache[key]

    def identify_class(self, candidates: Iterable, probes: Sequence[tuple[int, object]]) -> list[ClassId]:
        probes = [(r, Cyclotomic.coerce(v)) for r, v in probes]
        for r, _ in probes:
            if not 0 <= r < len(self.irreducibles):
                raise IndexError(f"no irreducible with index {r}")
        out = []
        for c in candidates:
            i = self.index(c)
            if all(self.irreducibles[r][i] == v for r, v in probes):
                out.append(ClassId(self, i))
        return out

    def power_class(self, c, k: int) -> int:
        """Index of the class of g^k for g in class ``c``."""
        i = self.index(c)
        o = self.classes[i].order
        k %= o
        if k == 0:
            return 0
        stored = set.intersection(*(set(cl.powermap) for cl in self.classes))
        # choose a representative k + t*o whose prime factors all have maps,
        # or are prime to |G| and act as Galois automorphisms
        for t in range(0, 64 * o):
            kk = k + t * o
            fac = factorize(kk)
            if all(p in stored or self.order % p for p in fac):
                for p, e in fac.items():
                    for _ in range(e):
                        i = self.classes[i].powermap[p] if p in stored else self._galois_class(i, p)
                return i
        raise PowerMapError(f"cannot compose a {k}-th power map for class {self.classes[i].name}")

    def classes_of_order(self, n: int) -> list[int]:
        return [i for i, c in enumerate(self.classes) if c.order == n]

    def galois_orbit(self, c) -> list[int]:
        i = self.index(c)
        o = self.classes[i].order
        return sorted({self.power_class(i, k) for k in range(1, o + 1) if gcd(k, o) == 1})

    # serialization

    def to_dict(self, per_value_conductor: bool = False) -> dict:
        n = self.conductor
        rows = []
        for row in self.irreducibles:
            if per_value_conductor:
                rows.append([v.to_json() for v in row])
            else:
                rows.append([v.to_json(n) for v in row])
        return {
            "name": self.name,
            "order": str(self.order),
            "classes": [
                {"name": c.name, "size": str(c.size), "order": c.order,
                 "powermap": {str(p): j for p, j in sorted(c.powermap.items())}}
                for c in self.classes
            ],
            "conductor": n,
            "irreducibles": rows,
        }

    def dumps(self, per_value_conductor: bool = False) -> str:
        return json.dumps(self.to_dict(per_value_conductor), indent=1)

    def __repr__(self) -> str:
        return f"<CharacterTable {self.name}: order {self.order}, {len(self.classes)} classes>"


def table_from_dict(obj: dict, validate: bool = True) -> CharacterTable:
    try:
        name = str(obj["name"])
        order = int(obj["order"])
        conductor = obj.get("conductor")
        classes = [
            ClassInfo(str(c["name"]), int(c["size"]), int(c["order"]),
                      {int(p): int(j) for p, j in c.get("powermap", {}).items()})
            for c in obj["classes"]
        ]
        rows = [[Cyclotomic.from_json(v, conductor) for v in row] for row in obj["irreducibles"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise TableParseError(f"malformed table: {exc}") from exc
    # store each value over the field generated by its class's element order
    for row in rows:
        for j, v in enumerate(row):
            if not v.is_rational() and v.n % classes[j].order == 0 and v.n != classes[j].order:
                w = v.descend(classes[j].order)
                if w is None:
                    raise TableError(
                        f"value in class {classes[j].name} does not lie in Q(zeta_{classes[j].order})")
                row[j] = w
    return CharacterTable(name, order, classes, rows, validate=validate)


def load_table(data: bytes | str, validate: bool = True) -> CharacterTable:
    """Parse table JSON and check every invariant."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise TableParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise TableParseError("table JSON must be an object")
    return table_from_dict(obj, validate=validate)


def load_table_file(path: str | Path, validate: bool = True) -> CharacterTable:
    return load_table(Path(path).read_bytes(), validate=validate)


# ClassId-level wrappers

def centralizer_order(c: ClassId) -> int:
    return c.table.centralizer_order(c.index)


def class_mult_coefficient(a: ClassId, b: ClassId, c: ClassId) -> int:
    if not (a.table is b.table is c.table):
        raise ValueError("classes come from different tables")
    return a.table.class_mult_coefficient(a.index, b.index, c.index)


def is_rational_class(c: ClassId) -> bool:
    return c.table.is_rational_class(c.index)


def identify_class(candidates: Sequence[ClassId], probes: Sequence[tuple[int, object]]) -> list[ClassId]:
    if not candidates:
        return []
    return candidates[0].table.identify_class(candidates, probes)


def power_class(c: ClassId, k: int) -> ClassId:
    return ClassId(c.table, c.table.power_class(c.index, k))


def pair_count_defect(table: CharacterTable) -> list[tuple[int, int]]:
    """Pairs (A, B) where sum_C CMC(A,B,C)*|C| differs from |A|*|B|."""
    bad = []
    k = len(table)
    for a in range(k):
        for b in range(k):
            total = sum(table.class_mult_coefficient(a, b, c) * table.classes[c].size for c in range(k))
            if total != table.classes[a].size * table.classes[b].size:
                bad.append((a, b))
    return bad
