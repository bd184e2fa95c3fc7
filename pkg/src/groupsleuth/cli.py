"""Command-line entry point.

Exit codes: 0 success, 1 query or search error, 2 invalid input data,
3 overflow or exhausted budget.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import re
import sys
from pathlib import Path

from . import __version__
from .blackbox import (
    GroupError,
    GroupFileError,
    Overflow,
    centralizer_bruteforce,
    load_group,
    orbit_lengths,
    order_spectrum,
)
from .chartab import IntegralityError, PowerMapError, TableError, load_table_file, pair_count_defect
from .cyclotomic import Cyclotomic
from .fixtures import TABLE_FILES, data_dir
from .slp import SlpError, evaluate
from .search import (
    SearchError,
    _inverter_census,
    _read_slp,
    _resolve,
    classify_a5_embedding,
    load_witness,
    run_pipeline,
    verify_witness,
    TrackedStream,
)

log = logging.getLogger("groupsleuth")

EXIT_OK, EXIT_QUERY, EXIT_INVALID, EXIT_OVERFLOW = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_QUERY):
        super().__init__(message)
        self.code = code


def _find(path: str, sub: str) -> Path:
    """An existing path, else a file of that name (or a known table name) in the data directory."""
    p = Path(path)
    if p.exists():
        return p
    d = data_dir() / sub
    for cand in (d / path, d / f"{path}.json", d / TABLE_FILES.get(path, path)):
        if cand.exists():
            return cand
    # loose match: psu34.json finds psu3_4.json, A5 finds a5.json
    want = _loose(Path(path).name)
    if d.is_dir():
        for cand in sorted(d.iterdir()):
            if _loose(cand.name) == want:
                return cand
    raise CliError(f"no such file: {path}", EXIT_INVALID)


def _loose(name: str) -> str:
    name = name.lower().removesuffix(".json")
    return re.sub(r"[^a-z0-9]", "", name)


def _table(path: str):
    try:
        return load_table_file(_find(path, "tables"))
    except TableError as exc:
        raise CliError(f"invalid table: {exc}", EXIT_INVALID) from None


def _group(path: str, seed: int = 0):
    try:
        return load_group(_find(path, "groups"), seed=seed)
    except GroupFileError as exc:
        raise CliError(f"invalid group file: {exc}", EXIT_INVALID) from None


def _emit(args, value, text: str | None = None) -> None:
    if args.json:
        print(json.dumps(value, sort_keys=True))
    else:
        print(text if text is not None else value)


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# ctab


def cmd_ctab_cmc(args) -> int:
    t = _table(args.table)
    try:
        v = t.class_mult_coefficient(args.a, args.b, args.c)
    except IntegralityError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    _emit(args, {"cmc": v}, str(v))
    return EXIT_OK


def _parse_probe(text: str) -> tuple[int, Cyclotomic]:
    row, _, val = text.partition("=")
    if not val:
        raise CliError(f"probe {text!r} is not ROW=VALUE")
    val = val.strip()
    obj = json.loads(val) if val.startswith("{") else val
    return int(row), Cyclotomic.from_json(obj)


def cmd_ctab_identify(args) -> int:
    t = _table(args.table)
    if args.candidates:
        cands = [c.strip() for c in args.candidates.split(",") if c.strip()]
    elif args.order is not None:
        cands = t.classes_of_order(args.order)
    else:
        cands = list(range(len(t)))
    probes = [_parse_probe(p) for p in args.probe]
    hits = [c.name for c in t.identify_class(cands, probes)]
    _emit(args, {"classes": hits}, " ".join(hits))
    return EXIT_OK


def cmd_ctab_power(args) -> int:
    t = _table(args.table)
    name = t.classes[t.power_class(args.cls, args.k)].name
    _emit(args, {"class": name}, name)
    return EXIT_OK


def cmd_ctab_validate(args) -> int:
    t = _table(args.table)
    bad = pair_count_defect(t)
    if bad:
        raise CliError(f"pair-count identity fails for {len(bad)} class pairs", EXIT_INVALID)
    info = {"name": t.name, "order": t.order, "classes": len(t)}
    _emit(args, info, f"{t.name}: order {t.order}, {len(t)} classes, valid")
    return EXIT_OK


# group


def cmd_group_enumerate(args) -> int:
    g = _group(args.group)
    n = g.order(args.cap)
    _emit(args, {"order": n}, str(n))
    return EXIT_OK


def cmd_group_spectrum(args) -> int:
    g = _group(args.group)
    spec = order_spectrum(g, args.cap)
    if args.counts:
        text = "\n".join(f"{k} {spec[k]}" for k in sorted(spec))
    else:
        text = " ".join(str(k) for k in sorted(spec))
    _emit(args, {"spectrum": {str(k): spec[k] for k in sorted(spec)}}, text)
    return EXIT_OK


def cmd_group_orbits(args) -> int:
    g = _group(args.group)
    if g.backend == "perm":
        lengths = orbit_lengths(g)
    else:
        from .gf2 import DimensionError, orbits_on_vectors

        try:
            lengths = orbits_on_vectors(g.generators)
        except DimensionError as exc:
            raise CliError(str(exc)) from None
    _emit(args, {"orbit_lengths": lengths}, " ".join(map(str, lengths)))
    return EXIT_OK


def cmd_group_centralizer(args) -> int:
    g = _group(args.group)
    names = g.generator_names
    elems = g.enumerate(args.cap)
    if args.element:
        try:
            s = [evaluate(_read_slp({"word": w} if "=" not in w else w, names), g.generators)
                 for w in args.element]
        except SlpError as exc:
            raise CliError(str(exc)) from None
    else:
        s = g.generators
    n = len(centralizer_bruteforce(elems, s))
    _emit(args, {"centralizer_order": n}, str(n))
    return EXIT_OK


# search


def _load_config(path: str) -> tuple[dict, Path]:
    p = _find(path, "configs")
    try:
        return json.loads(p.read_text()), p
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid config: {exc}", EXIT_INVALID) from None


def _inputs(cfg: dict, cfg_path: Path) -> dict:
    out = {str(cfg_path): _digest(cfg_path)}
    for key in ("ambient", "table"):
        if isinstance(cfg.get(key), str):
            p = _resolve(cfg[key], cfg_path.parent)
            if p.exists():
                out[str(p)] = _digest(p)
    return out


def _write_outputs(outdir: Path, sub: str, cfg_path: Path, seed: int, inputs: dict,
                   files: dict[str, str]) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    outputs = {}
    for name, text in files.items():
        p = outdir / name
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
        outputs[name] = _digest(p)
    manifest = {
        "subcommand": sub, "config": str(cfg_path), "seed": seed, "version": __version__,
        "inputs": inputs, "outputs": outputs,
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def cmd_search_invert(args) -> int:
    cfg, cfg_path = _load_config(args.config)
    g = _group(_resolve(cfg["ambient"], cfg_path.parent).as_posix(), seed=args.seed)
    el = evaluate(_read_slp(cfg["element"], g.generator_names), g.generators)
    budget = int(cfg.get("budgets", {}).get("draws", 10**7))
    stream = TrackedStream(g.generators, seed=args.seed)
    census = _inverter_census(stream, el, cfg.get("expected"), None, budget)
    report = {
        "config": cfg, "seed": args.seed, "found": len(census), "expected": census.expected,
        "complete": census.complete, "draws": census.draws,
        "involutions": sorted(list(j.images) if hasattr(j, "images") else j.to_hex() for j in census.found),
    }
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    if args.out:
        _write_outputs(Path(args.out), "search invert", cfg_path, args.seed, _inputs(cfg, cfg_path),
                       {"report.json": text})
    _emit(args, report, f"{len(census)} inverting involutions"
          + (f" of {census.expected} expected" if census.expected is not None else "")
          + f" after {census.draws} draws")
    if census.expected is not None and not census.complete:
        return EXIT_OVERFLOW
    return EXIT_OK


def cmd_search_pipeline(args) -> int:
    cfg, cfg_path = _load_config(args.config)
    cfg = dict(cfg, seed=args.seed)
    res = run_pipeline(cfg, base_dir=cfg_path.parent, jobs=args.jobs)
    rep = res.report
    files = {"report.json": rep.dumps() + "\n"}
    for i, w in enumerate(res.witnesses):
        files[f"witnesses/witness_{i}.json"] = w.dumps() + "\n"
    if args.out:
        _write_outputs(Path(args.out), "search pipeline", cfg_path, args.seed, _inputs(cfg, cfg_path), files)
    _emit(args, rep.to_dict(timing=True), rep.text())
    if rep.expected_inverters is not None and not rep.census_complete:
        return EXIT_OVERFLOW
    return EXIT_OK


def cmd_search_classify_a5(args) -> int:
    g = _group(args.ambient)
    out = []
    for path in args.witness:
        w = load_witness(_find(path, "witnesses"))
        gens = w.elements(g.generators)
        out.append({"witness": path, **classify_a5_embedding(gens, g.degree)})
    text = "\n".join(f"{o['witness']}: orbits {o['profile']}, centralizer {o['centralizer_order']}" for o in out)
    _emit(args, out, text)
    return EXIT_OK


def cmd_search_verify(args) -> int:
    g = _group(args.ambient)
    w = load_witness(_find(args.witness, "witnesses"))
    elems = None
    if "centralizer_order" in w.certificates:
        elems = g.enumerate(args.cap)
    ok, fresh = verify_witness(w, g.generators, elems, args.cap)
    _emit(args, {"ok": ok, "certificates": fresh},
          ("re-certified: " if ok else "MISMATCH: ") + json.dumps(fresh, sort_keys=True))
    return EXIT_OK if ok else EXIT_INVALID


# fusion and gf2 helpers


def cmd_fusion_verify(args) -> int:
    from .fusion import FusionMap, verify_fusion

    src, tgt = _table(args.source), _table(args.target)
    fmap = [tgt.index(x) if not x.isdigit() else int(x) for x in args.map.split(",")]
    rep = verify_fusion(FusionMap(src, tgt, fmap))
    _emit(args, {"ok": rep.ok, "violations": rep.violations}, str(rep))
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_fusion_enumerate(args) -> int:
    from .fusion import enumerate_possible_fusions

    src, tgt = _table(args.source), _table(args.target)
    partial = dict(p.split("=") for p in args.fix)
    maps = enumerate_possible_fusions(src, tgt, partial)
    _emit(args, [m.map for m in maps], "\n".join(" ".join(b for _, b in m.names()) for m in maps))
    return EXIT_OK


def cmd_gf2_form_type(args) -> int:
    from .gf2 import DegenerateFormError, QuadraticFormGF2, quadratic_form_type

    obj = json.loads(Path(args.form).read_text())
    try:
        q = QuadraticFormGF2.from_dict(obj)
        kind = quadratic_form_type(q)
    except (DegenerateFormError, ValueError) as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    _emit(args, {"type": kind, "singular": q.singular_count()}, f"{kind} ({q.singular_count()} singular vectors)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="groupsleuth", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--json", action="store_true", help="print JSON instead of text")
    ap.add_argument("-v", "--verbose", action="store_true")
    top = ap.add_subparsers(dest="cmd", required=True)

    ct = top.add_parser("ctab", help="character table queries").add_subparsers(dest="sub", required=True)
    p = ct.add_parser("cmc", help="class multiplication coefficient")
    p.add_argument("table"), p.add_argument("a"), p.add_argument("b"), p.add_argument("c")
    p.set_defaults(func=cmd_ctab_cmc)
    p = ct.add_parser("identify", help="classes matching character values")
    p.add_argument("table")
    p.add_argument("--candidates", help="comma-separated class names")
    p.add_argument("--order", type=int, help="candidates = classes of this element order")
    p.add_argument("--probe", action="append", default=[], help="ROW=VALUE, VALUE rational or cyclotomic JSON")
    p.set_defaults(func=cmd_ctab_identify)
    p = ct.add_parser("power", help="class of the k-th power")
    p.add_argument("table"), p.add_argument("cls"), p.add_argument("k", type=int)
    p.set_defaults(func=cmd_ctab_power)
    p = ct.add_parser("validate", help="load a table and check every invariant")
    p.add_argument("table")
    p.set_defaults(func=cmd_ctab_validate)

    gr = top.add_parser("group", help="group file queries").add_subparsers(dest="sub", required=True)
    for name, func, helptext in (("enumerate", cmd_group_enumerate, "group order by enumeration"),
                                 ("spectrum", cmd_group_spectrum, "element orders"),
                                 ("orbits", cmd_group_orbits, "orbit lengths on points or vectors"),
                                 ("centralizer", cmd_group_centralizer, "brute-force centralizer order")):
        p = gr.add_parser(name, help=helptext)
        p.add_argument("group")
        p.add_argument("--cap", type=int, default=10**6)
        p.set_defaults(func=func)
        if name == "spectrum":
            p.add_argument("--counts", action="store_true")
        if name == "centralizer":
            p.add_argument("--element", action="append", help="word or program over the named generators")

    se = top.add_parser("search", help="subgroup search").add_subparsers(dest="sub", required=True)
    p = se.add_parser("invert", help="census of involutions inverting an element")
    p.add_argument("config"), p.add_argument("--seed", type=int, required=True), p.add_argument("--out")
    p.set_defaults(func=cmd_search_invert)
    p = se.add_parser("pipeline", help="run a search pipeline")
    p.add_argument("config"), p.add_argument("--seed", type=int, required=True), p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_search_pipeline)
    p = se.add_parser("classify-a5", help="orbit profile and centralizer of A5 witnesses")
    p.add_argument("witness", nargs="+"), p.add_argument("--ambient", default="a12")
    p.set_defaults(func=cmd_search_classify_a5)
    p = se.add_parser("verify", help="replay a witness file and re-certify it")
    p.add_argument("witness"), p.add_argument("--ambient", required=True)
    p.add_argument("--cap", type=int, default=10**6)
    p.set_defaults(func=cmd_search_verify)

    fu = top.add_parser("fusion", help="class fusion").add_subparsers(dest="sub", required=True)
    p = fu.add_parser("verify")
    p.add_argument("source"), p.add_argument("target"), p.add_argument("map", help="comma-separated target classes")
    p.set_defaults(func=cmd_fusion_verify)
    p = fu.add_parser("enumerate")
    p.add_argument("source"), p.add_argument("target")
    p.add_argument("--fix", action="append", default=[], help="SRC=TGT class assignment")
    p.set_defaults(func=cmd_fusion_enumerate)

    g2 = top.add_parser("gf2", help="GF(2) forms").add_subparsers(dest="sub", required=True)
    p = g2.add_parser("form-type")
    p.add_argument("form")
    p.set_defaults(func=cmd_gf2_form_type)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except Overflow as exc:
        print(f"overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except SearchError as exc:
        if isinstance(exc.__cause__, Overflow):
            print(f"overflow: {exc}", file=sys.stderr)
            return EXIT_OVERFLOW
        print(f"search error: {exc}", file=sys.stderr)
        return EXIT_QUERY
    except (KeyError, IndexError, PowerMapError, SlpError, ValueError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUERY


if __name__ == "__main__":
    sys.exit(main())
