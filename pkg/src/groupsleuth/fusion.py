"""Class fusion between a subgroup's character table and an overgroup's.

A fusion map sends each class of the subgroup to the overgroup class
containing it.  Candidates are checked against table-level necessary
conditions: identity to identity, element orders, power maps, centralizer
divisibility, and that every restricted irreducible decomposes with
non-negative integer multiplicities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

from .blackbox import GeneratedGroup, is_conjugate_bruteforce
from .chartab import CharacterTable
from .cyclotomic import Cyclotomic


@dataclass
class FusionMap:
    source: CharacterTable
    target: CharacterTable
    map: list[int]

    def __post_init__(self):
        self.map = [int(x) for x in self.map]

    def names(self) -> list[tuple[str, str]]:
        return [(self.source.classes[i].name, self.target.classes[j].name) for i, j in enumerate(self.map)]

    def to_dict(self) -> dict:
        return {"source": self.source.name, "target": self.target.name, "map": list(self.map)}

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    def __eq__(self, other) -> bool:
        return (isinstance(other, FusionMap) and other.source is self.source
                and other.target is self.target and other.map == self.map)


def load_fusion(data: str | bytes, tables: dict[str, CharacterTable]) -> FusionMap:
    obj = json.loads(data)
    try:
        src, tgt = tables[obj["source"]], tables[obj["target"]]
    except KeyError as exc:
        raise ValueError(f"fusion refers to an unknown table {exc}") from None
    return FusionMap(src, tgt, obj["map"])


@dataclass
class FusionReport:
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set[str]:
        return {c for c, _ in self.violations}

    def add(self, condition: str, detail: str) -> None:
        self.violations.append((condition, detail))

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"{c}: {d}" for c, d in self.violations)


def restriction_multiplicities(src: CharacterTable, tgt: CharacterTable, fmap: Sequence[int]):
    """Matrix of <chi o f, psi> over target rows chi and source rows psi."""
    sizes = [c.size for c in src.classes]
    conj_src = [[v.conjugate() for v in row] for row in src.irreducibles]
    out = []
    for chi in tgt.irreducibles:
        res = [chi[j] for j in fmap]
        mults = []
        for psi_bar in conj_src:
            acc = Cyclotomic.rational(0)
            for c, (x, y) in enumerate(zip(res, psi_bar)):
                if x.is_rational() and y.is_rational():
                    acc = acc + Cyclotomic.rational(x.coeffs[0] * y.coeffs[0] * sizes[c])
                else:
                    acc = acc + x * y * sizes[c]
            if acc.is_rational():
                mults.append(acc.to_fraction() / src.order)
            else:
                mults.append(None)
        out.append(mults)
    return out


def _restriction_ok(src, tgt, fmap) -> str | None:
    for i, row in enumerate(restriction_multiplicities(src, tgt, fmap)):
        for j, m in enumerate(row):
            if m is None or m.denominator != 1 or m < 0:
                return f"target irreducible {i} has multiplicity {m} on source irreducible {j}"
    return None


def verify_fusion(f: FusionMap) -> FusionReport:
    src, tgt, fmap = f.source, f.target, f.map
    rep = FusionReport()
    if len(fmap) != len(src.classes):
        rep.add("shape", f"map has {len(fmap)} entries for {len(src.classes)} classes")
        return rep
    if any(not 0 <= j < len(tgt.classes) for j in fmap):
        rep.add("shape", "map entry out of range")
        return rep
    if fmap[0] != 0:
        rep.add("identity", "identity class is not mapped to the identity class")
    for i, j in enumerate(fmap):
        cs, ct = src.classes[i], tgt.classes[j]
        if i != 0 and j == 0:
            rep.add("identity", f"non-identity class {cs.name} mapped to the identity class")
        if cs.order != ct.order:
            rep.add("order preservation", f"{cs.name} (order {cs.order}) -> {ct.name} (order {ct.order})")
        if tgt.centralizer_order(j) % src.centralizer_order(i):
            rep.add("centralizer divisibility",
                    f"|C({cs.name})| = {src.centralizer_order(i)} does not divide |C({ct.name})| = {tgt.centralizer_order(j)}")
        for p, pi in cs.powermap.items():
            if p in ct.powermap and fmap[pi] != ct.powermap[p]:
                rep.add("power maps", f"{cs.name}^{p} = {src.classes[pi].name} but "
                        f"{ct.name}^{p} = {tgt.classes[ct.powermap[p]].name}, not {tgt.classes[fmap[pi]].name}")
    msg = _restriction_ok(src, tgt, fmap)
    if msg:
        rep.add("restriction", msg)
    return rep


def enumerate_possible_fusions(src: CharacterTable, tgt: CharacterTable,
                               partial: dict | None = None) -> list[FusionMap]:
    """Every map satisfying the table-level fusion conditions.

    ``partial`` fixes some assignments (class names or indices on both
    sides).  Classes are visited in decreasing element order.
    """
    k = len(src.classes)
    fixed: dict[int, int] = {}
    for a, b in (partial or {}).items():
        fixed[src.index(a)] = tgt.index(b)
    cand = []
    for i, cs in enumerate(src.classes):
        if i in fixed:
            opts = [fixed[i]]
        else:
            opts = [j for j, ct in enumerate(tgt.classes)
                    if ct.order == cs.order and tgt.centralizer_order(j) % src.centralizer_order(i) == 0]
        if i == 0:
            opts = [j for j in opts if j == 0]
        cand.append(opts)
    visit = sorted(range(k), key=lambda i: (-src.classes[i].order, len(cand[i]), i))
    assign = [-1] * k
    out: list[FusionMap] = []

    def powers_ok(i: int) -> bool:
        ci = src.classes[i]
        ti = tgt.classes[assign[i]]
        for p, pi in ci.powermap.items():
            if assign[pi] != -1 and p in ti.powermap and assign[pi] != ti.powermap[p]:
                return False
        # classes already assigned whose p-th power is i
        for j in range(k):
            if assign[j] == -1 or j == i:
                continue
            for p, pj in src.classes[j].powermap.items():
                if pj == i and p in tgt.classes[assign[j]].powermap:
                    if tgt.classes[assign[j]].powermap[p] != assign[i]:
                        return False
        return True

    def rec(pos: int) -> None:
        if pos == k:
            if _restriction_ok(src, tgt, assign) is None:
                out.append(FusionMap(src, tgt, list(assign)))
            return
        i = visit[pos]
        for j in cand[i]:
            assign[i] = j
            if powers_ok(i):
                rec(pos + 1)
            assign[i] = -1

    rec(0)
    return out


def fusion_from_embedding(sub: GeneratedGroup, amb: GeneratedGroup, src: CharacterTable,
                          tgt: CharacterTable, sub_reps: Sequence, amb_reps: Sequence,
                          cap: int = 10**6) -> FusionMap:
    """True fusion of an embedded subgroup, found by brute-force conjugacy tests.

    ``sub_reps[i]`` represents source class ``i``; ``amb_reps[j]`` target class ``j``.
    """
    elements = amb.enumerate(cap)
    sub_elements = sub.enumerate(cap)
    for r in sub_reps:
        if r not in sub_elements:
            raise ValueError("class representative is not in the subgroup")
        if r not in elements:
            raise ValueError("subgroup element is not in the ambient group")
    fmap = []
    for i, r in enumerate(sub_reps):
        hit = None
        for j, s in enumerate(amb_reps):
            if tgt.classes[j].order != r.order():
                continue
            ok, _ = is_conjugate_bruteforce(r, s, elements)
            if ok:
                hit = j
                break
        if hit is None:
            raise ValueError(f"no ambient class contains representative of {src.classes[i].name}")
        fmap.append(hit)
    return FusionMap(src, tgt, fmap)
