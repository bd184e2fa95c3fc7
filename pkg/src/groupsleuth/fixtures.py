"""Build the shipped data files (groups, tables, witnesses, configs).

Run ``python3 -m groupsleuth.fixtures [outdir]`` to regenerate everything
under ``src/groupsleuth/data``.  Every randomized step is seeded, so the
output is the same on every run.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

from . import groups, tablegen
from .blackbox import GeneratedGroup, Permutation, dump_group, power
from .search import PROFILES, run_pipeline
from .slp import evaluate

DATA_DIR = Path(__file__).with_name("data")

TABLE_FILES = {
    "A5": "a5.json", "S5": "s5.json", "A6": "a6.json", "D12": "d12.json", "13:6": "frob13_6.json",
    "L2(13)": "psl2_13.json", "PGL2(13)": "pgl2_13.json", "PGL2(7)": "pgl2_7.json", "A12": "a12.json",
}

# tables too large to build here; dropped into the tables directory by hand
EXTERNAL_TABLES = {"M": "monster.json", "2^1+24.Co1": "2co1.json"}


def data_dir() -> Path:
    """``$GROUPSLEUTH_DATA`` when set, else the packaged data directory."""
    env = os.environ.get("GROUPSLEUTH_DATA")
    return Path(env) if env else DATA_DIR


def external_table_path(name: str) -> Path | None:
    p = data_dir() / "tables" / EXTERNAL_TABLES[name]
    return p if p.exists() else None


def build_tables() -> dict:
    return {
        "A5": tablegen.alternating_table(5),
        "S5": tablegen.symmetric_table(5),
        "A6": tablegen.alternating_table(6),
        "D12": tablegen.dihedral_table(6),
        "13:6": tablegen.frobenius_table(13, 6),
        "L2(13)": tablegen.psl2_table(13),
        "PGL2(13)": tablegen.pgl2_table(13),
        "PGL2(7)": tablegen.pgl2_table(7),
        "A12": tablegen.alternating_table(12),
    }


def _named(group: GeneratedGroup, names, name=None) -> GeneratedGroup:
    group.generator_names = list(names)
    if name:
        group.name = name
    return group


def build_groups() -> dict[str, GeneratedGroup]:
    out = {
        "a5": _named(groups.alternating_group(5), ["x", "y"]),
        "s5": _named(groups.symmetric_group(5), ["t", "c"]),
        "a6": _named(groups.alternating_group(6), ["x", "y"]),
        "d12": _named(groups.dihedral_group(6), ["r", "s"]),
        "frob13_6": _named(groups.frobenius_group(13, 6), ["t", "m"]),
        "psl2_13": _named(groups.psl2(13), ["t", "m", "w"]),
        "pgl2_13": _named(groups.pgl2(13), ["t", "m", "w"]),
        "pgl2_7": _named(groups.pgl2(7), ["t", "m", "w"]),
        "psl3_3": _named(groups.psl3_3(), ["t", "c"]),
        "psl2_16": _named(groups.psl2_even(4), ["t", "d", "w"]),
        "psu3_4": _named(groups.psu3_4(), ["u1", "u2", "w"]),
        "a12": _named(groups.a12_standard(), ["x3", "x10"]),
        "c4080": _named(groups.cyclic_group(4080), ["z"]),
    }
    out.update(presentation_generators())
    return out


def _random_of_order(stream: GeneratedGroup, k: int):
    while True:
        x = stream.random_element()
        o = x.order()
        if o % k == 0:
            return power(x, o // k)


def find_presentation_pair(ambient: GeneratedGroup, profile: str, orders: tuple[int, int],
                           seed: int = 0, tries: int = 10**5) -> list:
    """Random ``(a, b)`` of the given orders satisfying every relator of ``profile``."""
    progs = [p for _, p in PROFILES[profile].relator_programs()]
    stream = GeneratedGroup(ambient.generators, seed=seed)
    a = _random_of_order(stream, orders[0])
    for i in range(tries):
        # a fresh first generator now and then, in case a sits in a useless class
        if i % 300 == 299:
            a = _random_of_order(stream, orders[0])
        b = _random_of_order(stream, orders[1])
        if all(evaluate(p, [a, b]).is_identity() for p in progs):
            return [a, b]
    raise RuntimeError(f"no generators for {profile} found")


def presentation_generators() -> dict[str, GeneratedGroup]:
    out = {}
    u, v = find_presentation_pair(groups.pgl2(13), "L2(13):2", (2, 13))
    out["pres_l2_13_2"] = _named(GeneratedGroup([u, v]), ["u", "v"], "L2(13):2")
    j, g = find_presentation_pair(groups.psu3_4(), "U3(4)", (2, 3))
    out["pres_u3_4"] = _named(GeneratedGroup([j, g]), ["j", "g"], "U3(4)")
    a, b = find_presentation_pair(groups.alternating_group(5), "A5", (2, 3))
    out["pres_a5"] = _named(GeneratedGroup([a, b]), ["a", "b"], "A5")
    return out


def pipeline_configs() -> dict[str, dict]:
    return {
        "pipeline_pgl2_13": {
            "ambient": "../groups/pgl2_13.json",
            "profile": "L2(13)",
            "table": "../tables/pgl2_13.json",
            "seed_slps": [{"word": "t"}, {"word": "m^2"}],
            "invert": 1,
            "classes": {"involution": ["2a", "2b"], "target": "6a"},
            "seed": 0,
            "budgets": {"draws": 100000, "samples": 100},
        },
        "pipeline_negative": {
            "ambient": "../groups/pgl2_7.json",
            "profile": "L2(8)",
            "table": "../tables/pgl2_7.json",
            "seed_slps": [{"word": "t"}, {"word": "m^2"}],
            "invert": 1,
            "classes": {"involution": ["2a", "2b"], "target": "3a"},
            "seed": 0,
            "budgets": {"draws": 100000, "samples": 100},
        },
        "pipeline_a12_a5": {
            "mode": "a5-types",
            "ambient": "../groups/a12.json",
            "profile": "A5",
            "orbit_profiles": [[12], [6, 6], [6, 5, 1]],
            "enumerate_ambient": False,
            "seed": 0,
            "budgets": {"draws": 200000},
        },
        "invert_d12": {
            "ambient": "../groups/d12.json",
            "element": {"word": "r"},
            "seed": 0,
            "budgets": {"draws": 10000},
            "expected": 6,
        },
    }


def a5_witnesses(seed: int = 0):
    cfg = dict(pipeline_configs()["pipeline_a12_a5"], seed=seed)
    res = run_pipeline(cfg, ambient=build_groups()["a12"])
    return res.witnesses


def write_all(outdir: str | Path | None = None) -> list[Path]:
    root = Path(outdir) if outdir else DATA_DIR
    written = []
    for sub in ("groups", "tables", "witnesses", "configs"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    for name, g in build_groups().items():
        p = root / "groups" / f"{name}.json"
        p.write_text(dump_group(g) + "\n")
        written.append(p)
    for name, t in build_tables().items():
        p = root / "tables" / TABLE_FILES[name]
        # large conductors are stored value by value
        p.write_text(t.dumps(per_value_conductor=t.conductor > 1000) + "\n")
        written.append(p)
    labels = {(12,): "a5_12", (6, 6): "a5_6_6", (6, 5, 1): "a5_6_5_1"}
    for w in a5_witnesses():
        prof = tuple(w.certificates["classification"]["profile"])
        p = root / "witnesses" / f"{labels[prof]}.json"
        p.write_text(w.dumps() + "\n")
        written.append(p)
    for name, cfg in pipeline_configs().items():
        p = root / "configs" / f"{name}.json"
        p.write_text(json.dumps(cfg, indent=1) + "\n")
        written.append(p)
    return written


def natural_a5_in_a12() -> list[Permutation]:
    """A5 on the first five of twelve points."""
    return [Permutation.from_cycles(12, (0, 1), (2, 3)), Permutation.from_cycles(12, (0, 2, 4))]


if __name__ == "__main__":
    for path in write_all(sys.argv[1] if len(sys.argv) > 1 else None):
        print(path)
