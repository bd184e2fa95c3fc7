"""Certified subgroup search inside a black-box ambient group.

The pipeline fixes some seed elements, collects the involutions that invert
one of them (so that each one extends the seed to a dihedral group), throws
away candidates cheaply with sampled element orders and probe multisets,
certifies the survivors, measures their centralizers and finally sorts the
resulting subgroups into ambient conjugacy classes.

Every element the search produces is kept together with a straight-line
program over the ambient generators, so a witness can be replayed in any
copy of the ambient group.
"""

from __future__ import annotations

import json
import logging
import math
import re
import time
import warnings
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .blackbox import (
    GeneratedGroup,
    Overflow,
    centralizer_bruteforce,
    conjugate,
    enumerate_elements,
    load_group,
    orbit_lengths,
    power,
    symmetric_centralizer,
)
from .chartab import CharacterTable, load_table_file
from .slp import Slp, SlpError, compose, evaluate, extract, format_slp, parse_slp

logger = logging.getLogger(__name__)

DEFAULT_DRAW_BUDGET = 10**7
DEFAULT_SAMPLES = 100
DEFAULT_ENUMERATE_CAP = 10**6


class SearchError(Exception):
    """A pipeline failure, tagged with the stage that raised it."""

    def __init__(self, message: str, stage: str | None = None):
        super().__init__(message)
        self.stage = stage

    def __str__(self) -> str:
        msg = super().__str__()
        return f"[{self.stage}] {msg}" if self.stage else msg


class RelatorFailure(SearchError):
    def __init__(self, relator: str, detail: str = ""):
        super().__init__(f"relator {relator} does not hold{': ' + detail if detail else ''}", "certify")
        self.relator = relator


class CertificationFailure(SearchError):
    pass


class PartialCensusWarning(UserWarning):
    pass


# words


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokens(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group(1) is not None:
            out.append(("int", m.group(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2)))
        elif m.group(3).strip():
            out.append(("op", m.group(3)))
    return out


class _Builder:
    def __init__(self):
        self.ins: list[tuple] = []
        self.gen_reg: dict[int, int] = {}

    def _new(self, *body) -> int:
        r = len(self.ins)
        self.ins.append((body[0], r) + body[1:])
        return r

    def gen(self, i: int) -> int:
        if i not in self.gen_reg:
            self.gen_reg[i] = self._new("gen", i)
        return self.gen_reg[i]

    def mul(self, a: int, b: int) -> int:
        return self._new("mul", a, b)

    def inv(self, a: int) -> int:
        return self._new("inv", a)

    def pow(self, a: int, e: int) -> int:
        return self._new("pow", a, e)


def parse_word(text: str, names: Sequence[str]) -> Slp:
    """Compile a group word into a program over ``names``.

    Words use ``*`` for products, ``^n`` (``n`` possibly negative) for powers,
    parentheses, and ``[a, b]`` for the commutator ``a^-1 b^-1 a b``.
    """
    index = {n: i for i, n in enumerate(names)}
    toks = _tokens(text)
    b = _Builder()
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else ("end", "")

    def take(kind=None, value=None):
        nonlocal pos
        t = peek()
        if (kind and t[0] != kind) or (value and t[1] != value):
            raise SlpError(f"bad word {text!r}: expected {value or kind}, found {t[1] or 'end'}")
        pos += 1
        return t

    def word() -> int:
        r = factor()
        while peek() == ("op", "*"):
            take()
            r = b.mul(r, factor())
        return r

    def factor() -> int:
        r = atom()
        while peek() == ("op", "^"):
            take()
            sign = 1
            if peek() == ("op", "-"):
                take()
                sign = -1
            e = sign * int(take("int")[1])
            r = b.inv(r) if e == -1 else b.pow(r, e)
        return r

    def atom() -> int:
        t = peek()
        if t[0] == "name":
            take()
            if t[1] not in index:
                raise SlpError(f"bad word {text!r}: unknown generator {t[1]!r}")
            return b.gen(index[t[1]])
        if t == ("op", "("):
            take()
            r = word()
            take("op", ")")
            return r
        if t == ("op", "["):
            take()
            x = word()
            take("op", ",")
            y = word()
            take("op", "]")
            return b.mul(b.mul(b.inv(x), b.inv(y)), b.mul(x, y))
        raise SlpError(f"bad word {text!r}: unexpected {t[1] or 'end'}")

    r = word()
    if pos != len(toks):
        raise SlpError(f"bad word {text!r}: trailing {toks[pos][1]!r}")
    return Slp(b.ins, r)


# profiles


@dataclass(frozen=True)
class Probe:
    """Orders of ``t * gens[base]`` over the reflections ``t = r^i s`` of the
    dihedral group generated by ``r = gens[rotation]`` and ``s = gens[reflection]``."""

    base: int
    rotation: int
    reflection: int
    multiset: tuple[int, ...]

    def values(self, gens: Sequence) -> list[int]:
        r, s, x = gens[self.rotation], gens[self.reflection], gens[self.base]
        n = r.order()
        out = []
        t = s
        for _ in range(n):
            out.append((t * x).order())
            t = r * t
        return sorted(out)

    def check(self, gens: Sequence) -> bool:
        return self.values(gens) == sorted(self.multiset)

    def to_dict(self) -> dict:
        return {"base": self.base, "rotation": self.rotation, "reflection": self.reflection,
                "multiset": list(self.multiset)}


@dataclass(frozen=True)
class TargetProfile:
    name: str
    order: int
    spectrum: frozenset
    generators: tuple[str, ...]
    relators: tuple[tuple[str, str], ...]
    probes: tuple[Probe, ...] = ()
    spectrum_characterised: bool = False
    simple: bool = False
    # "presentation", "spectrum" or "order"
    certify: str = "order"

    def __post_init__(self):
        if not self.relators:
            raise ValueError("a profile needs at least one relator")
        if 1 not in self.spectrum:
            raise ValueError("spectrum must contain 1")
        if self.certify not in ("presentation", "spectrum", "order"):
            raise ValueError(f"unknown certification mode {self.certify!r}")

    @property
    def arity(self) -> int:
        return len(self.generators)

    def relator_programs(self) -> list[tuple[str, Slp]]:
        return [(label, parse_word(w, self.generators)) for label, w in self.relators]

    def to_dict(self) -> dict:
        return {
            "name": self.name, "order": str(self.order), "spectrum": sorted(self.spectrum),
            "generators": list(self.generators),
            "relators": [[label, w] for label, w in self.relators],
            "probes": [p.to_dict() for p in self.probes],
            "spectrum_characterised": self.spectrum_characterised,
            "simple": self.simple, "certify": self.certify,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "TargetProfile":
        return cls(
            name=obj["name"], order=int(obj["order"]), spectrum=frozenset(obj["spectrum"]),
            generators=tuple(obj["generators"]),
            relators=tuple((r[0], r[1]) if isinstance(r, list) else (r, r) for r in obj["relators"]),
            probes=tuple(Probe(p["base"], p["rotation"], p["reflection"], tuple(p["multiset"]))
                         for p in obj.get("probes", [])),
            spectrum_characterised=bool(obj.get("spectrum_characterised", False)),
            simple=bool(obj.get("simple", False)),
            certify=obj.get("certify", "order"),
        )


def _power_relators(names: Sequence[str], exps: Sequence[int]) -> list[tuple[str, str]]:
    return [(f"{n}^{e}", f"{n}^{e}") for n, e in zip(names, exps)]


def _rel(*words: str) -> tuple[tuple[str, str], ...]:
    return tuple((w, w) for w in words)


def alternating_spectrum(n: int) -> frozenset:
    """Element orders of A_n, from cycle types with an even number of even parts."""
    from .tablegen import partitions

    out = set()
    for mu in partitions(n):
        if sum(1 for p in mu if p % 2 == 0) % 2 == 0:
            out.add(math.lcm(*mu))
    return frozenset(out)


PROFILES: dict[str, TargetProfile] = {
    # The pipeline candidate is (g13, g6, j) with g13 of order 13, g6 of order 6
    # normalising it, and j inverting g6.  Only relations of the seeded 13:6
    # and dihedral 12 are listed; the certificate is the enumerated order.
    "L2(13)": TargetProfile(
        "L2(13)", 1092, frozenset({1, 2, 3, 6, 7, 13}), ("g13", "g6", "j"),
        _rel("g13^13", "g6^6", "j^2", "(g6*j)^2"),
        probes=(Probe(0, 1, 2, (3, 6, 7, 7, 7, 13)),),
        certify="order",
    ),
    "L2(13):2": TargetProfile(
        "L2(13):2", 2184, frozenset({1, 2, 3, 4, 6, 7, 12, 13, 14}), ("u", "v"),
        _rel("u^2", "v^13", "(u*v^2)^4", "(u*v*u*v^4)^2"),
        certify="presentation",
    ),
    "L2(16)": TargetProfile(
        "L2(16)", 4080, frozenset({1, 2, 3, 5, 15, 17}), ("a", "b"),
        _rel("a^2", "b^3"),
        spectrum_characterised=True, simple=True, certify="spectrum",
    ),
    "L2(8)": TargetProfile(
        "L2(8)", 504, frozenset({1, 2, 3, 7, 9}), ("g7", "g3", "j"),
        _rel("g7^7", "g3^3", "j^2", "(g3*j)^2"),
        simple=True, certify="order",
    ),
    "U3(4)": TargetProfile(
        "U3(4)", 62400, frozenset({1, 2, 3, 4, 5, 10, 13, 15}), ("j", "g"),
        _rel("j^2", "g^3", "(j*g^-1*j*g)^5", "(j*g)^15", "((j*g)^3*(j*g^-1)^3)^3", "(j*g^-1*(j*g)^5)^4"),
        spectrum_characterised=True, simple=True, certify="presentation",
    ),
    "A5": TargetProfile(
        "A5", 60, frozenset({1, 2, 3, 5}), ("a", "b"),
        _rel("a^2", "b^3", "(a*b)^5"),
        simple=True, certify="presentation",
    ),
    "A12": TargetProfile(
        "A12", math.factorial(12) // 2, alternating_spectrum(12), ("x3", "x10"),
        _rel("x3^3", "x10^10", "(x3*x10)^11", "[x3,x10]^2", "(x3*x10^-2*x3*x10^2)^2",
             "[x3,x10^3]^2", "(x3*x10^-4*x3*x10^4)^2", "[x3,x10^5]^2"),
        simple=True, certify="presentation",
    ),
}


def get_profile(spec) -> TargetProfile:
    if isinstance(spec, TargetProfile):
        return spec
    if isinstance(spec, dict):
        return TargetProfile.from_dict(spec)
    try:
        return PROFILES[spec]
    except KeyError:
        raise SearchError(f"unknown profile {spec!r}", "load") from None


# random elements with their programs


class TrackedStream:
    """Product replacement that records a program for every element it returns.

    The rattle walk is the same as :class:`~groupsleuth.blackbox.GeneratedGroup`'s,
    draw for draw, so for a given seed both yield the same elements.  All
    programs live in one shared instruction list; :meth:`slp` cuts out the
    part needed for a single register.
    """

    def __init__(self, generators: Sequence, seed: int = 0, scramble: int = 60):
        self.generators = list(generators)
        self._group = GeneratedGroup(self.generators, seed=seed, scramble=0)
        self.rng = self._group.rng
        self.instructions: list[tuple] = []
        regs = [self._emit("gen", i) for i in range(len(self.generators))]
        one = self._emit("mul", regs[0], self._emit("inv", regs[0]))
        r = max(10, 2 * len(self.generators))
        k = len(self.generators)
        self._slots = [(self.generators[i % k], regs[i % k]) for i in range(r)]
        self._acc = (self.generators[0].identity(), one)
        self.last_register = one
        self.draws = 0
        for _ in range(scramble):
            self._step()

    def _emit(self, op: str, *args) -> int:
        r = len(self.instructions)
        self.instructions.append((op, r) + args)
        return r

    def _step(self):
        slots = self._slots
        rng = self.rng
        i, j = rng.sample(range(len(slots)), 2)
        other, oreg = slots[j]
        if rng.random() >= 0.5:
            other, oreg = other.inverse(), self._emit("inv", oreg)
        cur, creg = slots[i]
        if rng.random() < 0.5:
            slots[i] = (cur * other, self._emit("mul", creg, oreg))
        else:
            slots[i] = (other * cur, self._emit("mul", oreg, creg))
        acc, areg = self._acc
        self._acc = (acc * slots[i][0], self._emit("mul", areg, slots[i][1]))
        self.last_register = self._acc[1]
        return self._acc[0]

    def random_element(self):
        self.draws += 1
        return self._step()

    def power_of_last(self, e: int) -> int:
        """Register holding the last drawn element raised to ``e``."""
        return self._emit("pow", self.last_register, e)

    def slp(self, register: int | None = None) -> Slp:
        return extract(self.instructions, self.last_register if register is None else register)


# inverting involutions


@dataclass
class InverterCensus:
    found: list
    programs: list
    draws: int
    expected: int | None
    complete: bool

    def __len__(self) -> int:
        return len(self.found)


def _inverter_census(source, g, expected, filt, budget) -> InverterCensus:
    if g.is_identity():
        raise SearchError("cannot invert the identity", "inverters")
    tracked = isinstance(source, TrackedStream)
    ginv = g.inverse()
    found: dict[bytes, tuple] = {}
    draws = 0
    while draws < budget:
        if expected is not None and len(found) >= expected:
            break
        x = source.random_element()
        draws += 1
        o = x.order()
        if o % 2:
            continue
        t = power(x, o // 2)
        k = t.key()
        if k in found:
            continue
        if t * g * t != ginv:
            continue
        if filt is not None and not filt(t):
            continue
        prog = source.slp(source.power_of_last(o // 2)) if tracked else None
        found[k] = (t, prog)
    complete = expected is not None and len(found) == expected
    if expected is not None and len(found) < expected:
        warnings.warn(f"draw budget {budget} exhausted with {len(found)} of {expected} inverting involutions",
                      PartialCensusWarning, stacklevel=3)
    if expected is not None and len(found) > expected:
        raise SearchError(f"found {len(found)} inverting involutions, more than the expected {expected}",
                          "inverters")
    items = list(found.values())
    return InverterCensus([t for t, _ in items], [p for _, p in items], draws, expected, complete)


def find_inverting_involutions(y, g, expected: int | None = None,
                               filter: Callable | None = None,
                               budget: int = DEFAULT_DRAW_BUDGET) -> list:
    """Involutions ``j`` drawn from ``y`` with ``g^j = g^-1`` and ``filter(j)``.

    Draws random elements of ``y`` and powers each one of even order down to
    an involution.  Stops once ``expected`` distinct involutions are known or
    after ``budget`` draws; falling short of ``expected`` gives a
    :class:`PartialCensusWarning`.  ``y`` may be a
    :class:`~groupsleuth.blackbox.GeneratedGroup` or a :class:`TrackedStream`.
    """
    return _inverter_census(y, g, expected, filter, budget).found


def _class_list(tbl: CharacterTable, classes) -> list[int]:
    if isinstance(classes, (str, int)) or hasattr(classes, "index") and hasattr(classes, "table"):
        classes = [classes]
    out = []
    for c in classes:
        out.append(c.index if hasattr(c, "table") else tbl.index(c))
    return out


def expected_inverter_count(tbl: CharacterTable, invol_class, target_class) -> int:
    """Number of involutions inverting a fixed element of ``target_class``.

    ``j`` inverts ``g`` exactly when ``j`` and ``jg`` are involutions with
    product ``g``, so the count is a sum of class multiplication
    coefficients over the allowed involution classes (one class or several).
    """
    t = _class_list(tbl, target_class)
    if len(t) != 1:
        raise ValueError("exactly one target class")
    t = t[0]
    if not tbl.is_real_class(t):
        raise SearchError(f"class {tbl.classes[t].name} is not real: "
                          "the correspondence requires conjugate-to-inverse", "inverters")
    invs = _class_list(tbl, invol_class)
    for i in invs:
        if tbl.classes[i].order != 2:
            raise ValueError(f"class {tbl.classes[i].name} is not an involution class")
    return sum(tbl.class_mult_coefficient(a, b, t) for a in invs for b in invs)


# checks on candidates


@dataclass
class QuickResult:
    passed: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.passed


def quick_reject(candidate_gens: Sequence, profile: TargetProfile, samples: int = DEFAULT_SAMPLES,
                 seed: int = 0) -> QuickResult:
    """Cheap necessary conditions; passing is not a certificate."""
    profile = get_profile(profile)
    gens = list(candidate_gens)
    for p in profile.probes:
        vals = p.values(gens)
        if vals != sorted(p.multiset):
            return QuickResult(False, f"probe multiset {vals} != {sorted(p.multiset)}")
    for i, g in enumerate(gens):
        o = g.order()
        if o not in profile.spectrum:
            return QuickResult(False, f"generator {i} has order {o} outside the spectrum")
    grp = GeneratedGroup(gens, seed=seed)
    for _ in range(samples):
        o = grp.random_element().order()
        if o not in profile.spectrum:
            return QuickResult(False, f"sampled element of order {o} outside the spectrum")
    return QuickResult(True)


def certify_presentation(gens: Sequence, profile: TargetProfile,
                         cap: int = DEFAULT_ENUMERATE_CAP) -> dict:
    """Check every relator on ``gens``; raise :class:`RelatorFailure` naming the first one that fails.

    Holding relators make ``<gens>`` an image of the presented group.  The
    certificate also records what upgrades that to an isomorphism: the
    enumerated order when it fits under ``cap``, or, for a simple target, a
    non-identity generator.
    """
    profile = get_profile(profile)
    gens = list(gens)
    if len(gens) != profile.arity:
        raise SearchError(f"{profile.name} needs {profile.arity} generators, got {len(gens)}", "certify")
    checks = {}
    for label, prog in profile.relator_programs():
        val = evaluate(prog, gens)
        if not val.is_identity():
            raise RelatorFailure(label, f"value has order {val.order()}")
        checks[label] = True
    cert: dict = {
        "profile": profile.name,
        "relators": checks,
        "generator_orders": [g.order() for g in gens],
        "enumerated_order": None,
        "isomorphic": None,
    }
    if profile.order <= cap:
        try:
            n = len(enumerate_elements(gens, cap))
            cert["enumerated_order"] = n
            cert["isomorphic"] = n == profile.order
        except Overflow:
            cert["isomorphic"] = False
    elif profile.simple:
        cert["isomorphic"] = any(not g.is_identity() for g in gens)
        cert["basis"] = "simple target and a non-identity generator"
    return cert


def certify_by_order_spectrum(g, profile: TargetProfile, cap: int = DEFAULT_ENUMERATE_CAP) -> dict:
    """Enumerate ``g`` and compare order and set of element orders with the profile."""
    profile = get_profile(profile)
    if not profile.spectrum_characterised:
        raise CertificationFailure(f"{profile.name} is not marked as determined by order and spectrum",
                                   "certify")
    return _order_certificate(g, profile, cap)


def _order_certificate(g, profile: TargetProfile, cap: int) -> dict:
    gens = g.generators if isinstance(g, GeneratedGroup) else list(g)
    elements = enumerate_elements(gens, cap)
    spectrum = sorted({x.order() for x in elements})
    if len(elements) != profile.order:
        raise CertificationFailure(f"order {len(elements)} != {profile.order}", "certify")
    if set(spectrum) != set(profile.spectrum):
        raise CertificationFailure(f"spectrum {spectrum} != {sorted(profile.spectrum)}", "certify")
    return {"profile": profile.name, "order": len(elements), "spectrum": spectrum}


def certify(gens: Sequence, profile: TargetProfile, cap: int = DEFAULT_ENUMERATE_CAP) -> dict:
    """Certificate using the profile's own mode."""
    profile = get_profile(profile)
    if profile.certify == "presentation":
        cert = certify_presentation(gens, profile, cap)
        if cert["isomorphic"] is False:
            raise CertificationFailure("relators hold but the image is a proper quotient", "certify")
        return {"presentation": cert}
    if profile.certify == "spectrum":
        return {"spectrum": certify_by_order_spectrum(list(gens), profile, cap)}
    # plain order: relators are necessary conditions, the order decides
    for label, prog in profile.relator_programs():
        if not evaluate(prog, list(gens)).is_identity():
            raise RelatorFailure(label)
    return {"order": _order_certificate(list(gens), profile, cap)}


# witnesses


@dataclass
class SubgroupWitness:
    """Generators of a found subgroup as programs over the ambient generators."""

    profile: str
    slps: list[Slp]
    generator_names: list[str] = field(default_factory=list)
    certificates: dict = field(default_factory=dict)

    def elements(self, ambient_gens: Sequence) -> list:
        return [evaluate(p, ambient_gens) for p in self.slps]

    def to_dict(self) -> dict:
        return {
            "profile": self.profile,
            "generator_names": list(self.generator_names),
            "slps": [format_slp(p) for p in self.slps],
            "certificates": self.certificates,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, obj: dict) -> "SubgroupWitness":
        return cls(obj["profile"], [parse_slp(t) for t in obj["slps"]],
                   list(obj.get("generator_names", [])), obj.get("certificates", {}))


def load_witness(path: str | Path) -> SubgroupWitness:
    return SubgroupWitness.from_dict(json.loads(Path(path).read_text()))


def witness_certificates(gens: Sequence, profile: TargetProfile, ambient_elements=None,
                         cap: int = DEFAULT_ENUMERATE_CAP, a5_domain: int | None = None) -> dict:
    """All certificates for a subgroup generated by ``gens``."""
    profile = get_profile(profile)
    cert = certify(gens, profile, cap)
    if ambient_elements is not None:
        cert["centralizer_order"] = len(centralizer_bruteforce(ambient_elements, gens))
    if a5_domain is not None:
        cert["classification"] = classify_a5_embedding(gens, a5_domain)
    return _jsonable(cert)


def verify_witness(w: SubgroupWitness, ambient_gens: Sequence, ambient_elements=None,
                   cap: int = DEFAULT_ENUMERATE_CAP) -> tuple[bool, dict]:
    """Re-evaluate the programs, recompute the certificates and compare with the stored ones."""
    gens = w.elements(ambient_gens)
    a5_domain = None
    if "classification" in w.certificates:
        a5_domain = w.certificates["classification"]["degree"]
    fresh = witness_certificates(gens, w.profile, ambient_elements if "centralizer_order" in w.certificates else None,
                                 cap, a5_domain)
    return fresh == _jsonable(w.certificates), fresh


def _jsonable(obj):
    return json.loads(json.dumps(obj, sort_keys=True))


# A5 embeddings


def classify_a5_embedding(a5gens: Sequence, n: int | None = None) -> dict:
    """Orbit lengths of an A5 on ``n`` points and the order of its centralizer in A_n.

    The generators must satisfy ``a^2 = b^3 = (ab)^5 = 1``; since A5 is
    simple a non-trivial pair satisfying these generates A5 itself.
    """
    gens = list(a5gens)
    cert = certify_presentation(gens, PROFILES["A5"])
    if not cert["isomorphic"]:
        raise CertificationFailure("generators do not give A5", "classify")
    if n is None:
        n = gens[0].degree
    cent = symmetric_centralizer(gens, n, even_only=True)
    return {"degree": n, "profile": orbit_lengths(gens, n), "centralizer_order": len(cent)}


def search_a5_subgroups(stream: TrackedStream, profiles: Iterable[Sequence[int]], n: int,
                        budget: int = 10**5) -> dict[tuple, tuple[list, list[Slp]]]:
    """Random (2, 3, 5)-pairs from ``stream``, kept when their orbit profile is wanted.

    ``a`` is an involution and ``b`` an element of order 3, both obtained by
    powering random elements; if ``ab`` has order 5 the pair generates A5
    (the (2, 3, 5) triangle group is A5 itself).
    """
    wanted = {tuple(sorted(p, reverse=True)) for p in profiles}
    found: dict[tuple, tuple[list, list[Slp]]] = {}
    a = None
    draws = 0
    while wanted - set(found) and draws < budget:
        x = stream.random_element()
        draws += 1
        o = x.order()
        if a is None:
            if o % 2 == 0:
                a = power(x, o // 2)
                areg = stream.power_of_last(o // 2)
            continue
        if o % 3:
            continue
        b = power(x, o // 3)
        breg = stream.power_of_last(o // 3)
        ab = a * b
        if ab.is_identity() or not power(ab, 5).is_identity():
            # fresh involution after a miss keeps both classes mixing
            if stream.rng.random() < 0.05:
                a = None
            continue
        prof = tuple(orbit_lengths([a, b], n))
        if prof in wanted and prof not in found:
            found[prof] = ([a, b], [stream.slp(areg), stream.slp(breg)])
        a = None
    return found


# dedup


@dataclass
class WitnessClass:
    members: list[int]
    conjugators: dict[int, list] = field(default_factory=dict)
    invariants: dict = field(default_factory=dict)
    resolved: bool = True

    def to_dict(self) -> dict:
        return {"members": self.members,
                "conjugators": {str(k): v for k, v in self.conjugators.items()},
                "invariants": self.invariants, "resolved": self.resolved}


def _subgroup_conjugator(s1_gens, s2: frozenset, ambient: Iterable):
    for x in ambient:
        if all(conjugate(g, x) in s2 for g in s1_gens):
            return x
    return None


def dedup_subgroups(witnesses: Sequence[Sequence], ambient_elements=None,
                    invariants: Sequence[dict] | None = None,
                    cap: int = DEFAULT_ENUMERATE_CAP) -> list[WitnessClass]:
    """Partition subgroups (given by generator lists) into ambient-conjugacy classes.

    With ``ambient_elements`` every merge comes with an explicit conjugating
    element (brute force).  Without it the subgroups are split by the supplied
    ``invariants``; subgroups sharing all invariants stay unmerged and their
    class is marked unresolved.
    """
    k = len(witnesses)
    if ambient_elements is not None:
        ambient = sorted(ambient_elements)
        subs = [enumerate_elements(list(w), cap) for w in witnesses]
        classes: list[WitnessClass] = []
        for i in range(k):
            placed = False
            for c in classes:
                head = c.members[0]
                if len(subs[head]) != len(subs[i]):
                    continue
                x = _subgroup_conjugator(witnesses[i], subs[head], ambient)
                if x is not None:
                    c.members.append(i)
                    c.conjugators[i] = _element_payload(x)
                    placed = True
                    break
            if not placed:
                inv = dict(invariants[i]) if invariants else {}
                inv.setdefault("order", len(subs[i]))
                classes.append(WitnessClass([i], invariants=inv))
        return classes
    if invariants is None:
        raise ValueError("invariant mode needs invariants")
    blocks: dict[str, list[int]] = {}
    for i in range(k):
        blocks.setdefault(json.dumps(invariants[i], sort_keys=True), []).append(i)
    out = []
    for key, members in blocks.items():
        for i in members:
            out.append(WitnessClass([i], invariants=json.loads(key), resolved=len(members) == 1))
    out.sort(key=lambda c: c.members[0])
    return out


def _element_payload(x):
    if hasattr(x, "images"):
        return list(x.images)
    return x.to_hex()


# pipeline


@dataclass
class SearchReport:
    config: dict
    stages: list[str] = field(default_factory=list)
    expected_inverters: int | None = None
    inverters_found: int = 0
    census_complete: bool = False
    flagged: list[str] = field(default_factory=list)
    draws: int = 0
    candidates: int = 0
    rejected: dict = field(default_factory=dict)
    certified: int = 0
    witnesses: int = 0
    classes: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "config": self.config, "stages": self.stages,
            "expected_inverters": self.expected_inverters, "inverters_found": self.inverters_found,
            "census_complete": self.census_complete, "flagged": self.flagged, "draws": self.draws,
            "candidates": self.candidates, "rejected": self.rejected, "certified": self.certified,
            "witnesses": self.witnesses, "classes": self.classes, "notes": self.notes,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def text(self) -> str:
        lines = [f"profile: {self.config.get('profile')}  seed: {self.config.get('seed')}"]
        if self.expected_inverters is not None or self.inverters_found:
            lines.append(f"inverting involutions: {self.inverters_found} found, "
                         f"{self.expected_inverters} expected, census "
                         f"{'complete' if self.census_complete else 'incomplete'} after {self.draws} draws")
        lines.append(f"candidate subgroups: {self.candidates}, certified {self.certified}")
        for reason, n in sorted(self.rejected.items()):
            lines.append(f"  rejected {n}: {reason}")
        lines.append(f"witnesses: {self.witnesses} in {len(self.classes)} class(es)")
        for i, c in enumerate(self.classes):
            lines.append(f"  class {i}: members {c['members']} {c['invariants']}")
        lines.extend(f"flag: {f}" for f in self.flagged)
        lines.extend(f"note: {n}" for n in self.notes)
        lines.append(f"wall time: {self.wall_time:.2f}s")
        return "\n".join(lines)


def _read_slp(obj, names: Sequence[str] | None) -> Slp:
    if isinstance(obj, Slp):
        return obj
    if isinstance(obj, dict) and "word" in obj:
        if not names:
            raise SearchError("word seeds need named ambient generators", "seed")
        return parse_word(obj["word"], names)
    return parse_slp(obj)


def _resolve(path, base: Path | None) -> Path:
    p = Path(path)
    if not p.is_absolute() and base is not None and not p.exists():
        p = base / p
    return p


def class_filter(tbl: CharacterTable, ambient_elements, classes) -> Callable:
    """Membership test for table classes via element order and brute-force centralizer order.

    Fails when some class cannot be told apart from another class of the
    same element order this way.
    """
    idx = _class_list(tbl, classes)
    sig = {}
    for i in idx:
        c = tbl.classes[i]
        key = (c.order, tbl.centralizer_order(i))
        clash = [d.name for j, d in enumerate(tbl.classes)
                 if j != i and (d.order, tbl.centralizer_order(j)) == key]
        if clash:
            raise SearchError(f"class {c.name} is not determined by order and centralizer order "
                              f"(also {', '.join(clash)})", "load")
        sig[key] = c.name
    elems = list(ambient_elements)

    def test(x) -> bool:
        o = x.order()
        if not any(k[0] == o for k in sig):
            return False
        return (o, len(centralizer_bruteforce(elems, [x]))) in sig

    return test


def _test_candidate(args):
    gens, profile, samples, seed, cap = args
    q = quick_reject(gens, profile, samples, seed)
    if not q:
        return ("reject", q.reason, None)
    try:
        return ("ok", "", certify(gens, profile, cap))
    except SearchError as exc:
        return ("reject", str(exc), None)
    except Overflow:
        return ("reject", "enumeration overflow", None)


@dataclass
class PipelineResult:
    report: SearchReport
    witnesses: list[SubgroupWitness]


def run_pipeline(config: dict, base_dir: str | Path | None = None, jobs: int = 1,
                 ambient: GeneratedGroup | None = None) -> PipelineResult:
    """Run the search described by ``config`` (see the README for the keys).

    Stages: ``load``, ``seed``, ``conjugate-seed-by-witness``, ``inverters``,
    ``quick-reject``, ``certify``, ``centralizer``, ``dedup``.  Any failure is
    raised as :class:`SearchError` tagged with its stage.  With ``jobs = 1``
    the run is a pure function of the config.
    """
    t0 = time.perf_counter()
    base = Path(base_dir) if base_dir is not None else None
    seed = int(config.get("seed", 0))
    budgets = config.get("budgets", {})
    draw_budget = int(budgets.get("draws", DEFAULT_DRAW_BUDGET))
    samples = int(budgets.get("samples", DEFAULT_SAMPLES))
    cap = int(budgets.get("enumerate_cap", DEFAULT_ENUMERATE_CAP))
    report = SearchReport(config=_jsonable(_echo(config)))

    stage = "load"
    try:
        if ambient is None:
            ambient = load_group(_resolve(config["ambient"], base), seed=seed)
        profile = get_profile(config["profile"])
        tbl = None
        if config.get("table"):
            t = config["table"]
            tbl = t if isinstance(t, CharacterTable) else load_table_file(_resolve(t, base))
        names = ambient.generator_names
        ambient_elements = None
        if config.get("enumerate_ambient", True):
            try:
                ambient_elements = ambient.enumerate(cap)
            except Overflow:
                report.notes.append(f"ambient exceeds {cap} elements; dedup by invariants")
        report.stages.append(stage)

        if config.get("mode") == "a5-types":
            return _run_a5_types(config, ambient, report, seed, draw_budget, t0)

        stage = "seed"
        seed_progs = [_read_slp(s, names) for s in config["seed_slps"]]
        seeds = [evaluate(p, ambient.generators) for p in seed_progs]
        report.stages.append(stage)

        if config.get("conjugator_slp"):
            stage = "conjugate-seed-by-witness"
            cprog = _read_slp(config["conjugator_slp"], names)
            x = evaluate(cprog, ambient.generators)
            seeds = [conjugate(s, x) for s in seeds]
            seed_progs = [_conjugated_program(p, cprog) for p in seed_progs]
            report.stages.append(stage)

        stage = "inverters"
        inv_index = int(config.get("invert", len(seeds) - 1))
        g = seeds[inv_index]
        space = config.get("search_space_slps")
        if space:
            space_progs = [_read_slp(s, names) for s in space]
            space_gens = [evaluate(p, ambient.generators) for p in space_progs]
        else:
            space_progs = None
            space_gens = ambient.generators
        stream = TrackedStream(space_gens, seed=seed)
        classes = config.get("classes", {})
        filt: Callable | None = None
        if tbl is not None and classes.get("involution"):
            report.expected_inverters = expected_inverter_count(tbl, classes["involution"], classes["target"])
            if ambient_elements is None:
                raise SearchError("class filtering needs an enumerable ambient", stage)
            in_class = class_filter(tbl, ambient_elements, classes["involution"])
            if not class_filter(tbl, ambient_elements, classes["target"])(g):
                raise SearchError(f"seed element is not in class {classes['target']}", stage)

            def both_in_class(j, g=g, in_class=in_class):
                return in_class(j) and in_class(j * g)
            filt = both_in_class
        elif "expected" in classes:
            report.expected_inverters = int(classes["expected"])
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", PartialCensusWarning)
            census = _inverter_census(stream, g, report.expected_inverters, filt, draw_budget)
        for w in caught:
            report.flagged.append(str(w.message))
        report.inverters_found = len(census)
        report.census_complete = census.complete
        report.draws = census.draws
        report.stages.append(stage)

        # every reflection of <g, j> gives the same candidate, so test each dihedral group once
        stage = "quick-reject"
        groups: dict[bytes, list[int]] = {}
        rotations = [power(g, i) for i in range(g.order())]
        for idx, j in enumerate(census.found):
            key = min((r * j).key() for r in rotations)
            groups.setdefault(key, []).append(idx)
        reps = [members[0] for _, members in sorted(groups.items())]
        report.candidates = len(reps)
        jobs_args = [(seeds + [census.found[i]], profile, samples, seed + n, cap) for n, i in enumerate(reps)]
        if jobs > 1 and len(jobs_args) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                outcomes = list(ex.map(_test_candidate, jobs_args))
        else:
            outcomes = [_test_candidate(a) for a in jobs_args]
        report.stages.extend(["quick-reject", "certify"])
        stage = "certify"
        rejected: Counter = Counter()
        passing = []
        for i, (status, reason, cert) in zip(reps, outcomes):
            if status == "ok":
                passing.append((i, cert))
            else:
                rejected[reason] += 1
        report.rejected = dict(rejected)
        report.certified = len(passing)

        stage = "centralizer"
        witnesses = []
        gen_lists = []
        invs = []
        for i, cert in passing:
            gens = seeds + [census.found[i]]
            jprog = census.programs[i]
            if space_progs is not None:
                jprog = compose(jprog, space_progs)
            cert = dict(cert)
            if ambient_elements is not None:
                cert["centralizer_order"] = len(centralizer_bruteforce(ambient_elements, gens))
            w = SubgroupWitness(profile.name, seed_progs + [jprog], list(profile.generators), _jsonable(cert))
            witnesses.append(w)
            gen_lists.append(gens)
            invs.append({"centralizer_order": cert.get("centralizer_order")})
        report.stages.append(stage)

        stage = "dedup"
        # distinct subgroups first, then conjugacy
        unique: list[int] = []
        seen_sets: list[frozenset] = []
        for k, gens in enumerate(gen_lists):
            s = enumerate_elements(gens, cap)
            if s not in seen_sets:
                seen_sets.append(s)
                unique.append(k)
        witnesses = [witnesses[k] for k in unique]
        gen_lists = [gen_lists[k] for k in unique]
        invs = [invs[k] for k in unique]
        if witnesses:
            classes_out = dedup_subgroups(gen_lists, ambient_elements, invs, cap)
        else:
            classes_out = []
        report.classes = [c.to_dict() for c in classes_out]
        report.witnesses = len(witnesses)
        if not witnesses:
            report.notes.append("no candidate survived" + (
                "; inverter census complete" if report.census_complete else "; inverter census incomplete"))
        report.stages.append(stage)
    except SearchError as exc:
        if exc.stage is None:
            exc.stage = stage
        raise
    except (KeyError, ValueError, OSError, Overflow, SlpError) as exc:
        raise SearchError(f"{type(exc).__name__}: {exc}", stage) from exc
    report.wall_time = time.perf_counter() - t0
    return PipelineResult(report, witnesses)


def _echo(config: dict) -> dict:
    out = {}
    for k, v in config.items():
        if isinstance(v, CharacterTable):
            v = v.name
        elif isinstance(v, GeneratedGroup):
            v = v.name or "group"
        elif isinstance(v, TargetProfile):
            v = v.to_dict()
        elif isinstance(v, list):
            v = [format_slp(x) if isinstance(x, Slp) else x for x in v]
        elif isinstance(v, Slp):
            v = format_slp(v)
        out[k] = v
    return out


def _conjugated_program(p: Slp, c: Slp) -> Slp:
    # x^-1 p x with slot 0 = p, slot 1 = x
    shape = Slp([("gen", 0, 0), ("gen", 1, 1), ("inv", 2, 1), ("mul", 3, 2, 0), ("mul", 4, 3, 1)], 4)
    return compose(shape, [p, c])


def _run_a5_types(config, ambient, report, seed, budget, t0) -> PipelineResult:
    stage = "a5-types"
    targets = [tuple(p) for p in config.get("orbit_profiles", [[12], [6, 6], [6, 5, 1]])]
    n = ambient.degree
    stream = TrackedStream(ambient.generators, seed=seed)
    found = search_a5_subgroups(stream, targets, n, budget)
    report.draws = stream.draws
    witnesses = []
    for prof in sorted(found, key=lambda p: targets.index(p)):
        gens, progs = found[prof]
        cert = witness_certificates(gens, "A5", a5_domain=n)
        witnesses.append(SubgroupWitness("A5", progs, ["a", "b"], cert))
        report.classes.append({"members": [len(witnesses) - 1], "invariants": cert["classification"],
                               "conjugators": {}, "resolved": True})
    missing = [list(p) for p in targets if p not in found]
    if missing:
        report.flagged.append(f"orbit profiles not realised within the budget: {missing}")
    report.witnesses = report.certified = len(witnesses)
    report.stages.append(stage)
    report.wall_time = time.perf_counter() - t0
    return PipelineResult(report, witnesses)


# brute-force oracle


def brute_force_subgroup_scan(ambient: GeneratedGroup, profile: TargetProfile,
                              cap: int = DEFAULT_ENUMERATE_CAP) -> list[dict]:
    """Conjugacy classes of subgroups matching the profile's order and spectrum.

    Every such subgroup is assumed to be generated by an element of the
    largest order in the spectrum and one more element; the scan fixes one
    representative ``a`` of each ambient class of that order and tries
    ``<a, b>`` for every ambient ``b``.
    """
    profile = get_profile(profile)
    elements = ambient.enumerate(cap)
    top = max(profile.spectrum)
    ordered = sorted(elements)
    reps = []
    for x in ordered:
        if x.order() == top and not any(_conj(x, r, ordered) for r in reps):
            reps.append(x)
    found: list[frozenset] = []
    for a in reps:
        for b in ordered:
            if any(b in s and a in s for s in found):
                continue
            try:
                s = enumerate_elements([a, b], profile.order)
            except Overflow:
                continue
            if len(s) != profile.order or s in found:
                continue
            if {x.order() for x in s} != set(profile.spectrum):
                continue
            found.append(s)
    classes: list[list[frozenset]] = []
    for s in found:
        for c in classes:
            if _subgroup_conjugator(_generators_of(s), c[0], ordered) is not None:
                c.append(s)
                break
        else:
            classes.append([s])
    out = []
    for c in classes:
        s = c[0]
        gens = _generators_of(s)
        out.append({"order": len(s), "class_size_found": len(c),
                    "centralizer_order": len(centralizer_bruteforce(elements, gens))})
    return out


def _conj(x, y, elements) -> bool:
    return any(conjugate(x, z) == y for z in elements)


def _generators_of(s: frozenset) -> list:
    """A small generating set of the enumerated subgroup ``s``."""
    gens: list = []
    span = frozenset()
    for x in sorted(s, key=lambda e: (-e.order(), e)):
        if x not in span:
            gens.append(x)
            span = enumerate_elements(gens, len(s))
            if len(span) == len(s):
                break
    return gens
