import dataclasses
import random
import warnings

import pytest
from hypothesis import given, settings, strategies as st

from groupsleuth import groups
from groupsleuth.blackbox import GeneratedGroup, Permutation, enumerate_elements
from groupsleuth.fixtures import data_dir, natural_a5_in_a12, pipeline_configs
from groupsleuth.search import (
    PROFILES,
    CertificationFailure,
    PartialCensusWarning,
    RelatorFailure,
    SearchError,
    SubgroupWitness,
    TargetProfile,
    TrackedStream,
    certify,
    certify_by_order_spectrum,
    certify_presentation,
    classify_a5_embedding,
    dedup_subgroups,
    expected_inverter_count,
    find_inverting_involutions,
    get_profile,
    load_witness,
    parse_word,
    quick_reject,
    run_pipeline,
    verify_witness,
)
from groupsleuth.slp import evaluate

from conftest import shipped_group, shipped_table

S5 = groups.symmetric_group(5).generators


def test_parse_word():
    a, b = S5
    assert evaluate(parse_word("a*b^-2", ["a", "b"]), S5) == a * b.inverse() ** 2
    assert evaluate(parse_word("[a,b]", ["a", "b"]), S5) == a.inverse() * b.inverse() * a * b
    assert evaluate(parse_word("(a*b)^3*a", ["a", "b"]), S5) == (a * b) ** 3 * a
    assert evaluate(parse_word("b^0", ["a", "b"]), S5).is_identity()
    with pytest.raises(Exception):
        parse_word("a*c", ["a", "b"])
    with pytest.raises(Exception):
        parse_word("(a*b", ["a", "b"])


@settings(max_examples=40)
@given(st.lists(st.tuples(st.sampled_from("ab"), st.integers(-4, 4)), min_size=1, max_size=8))
def test_parse_word_matches_product(letters):
    text = "*".join(f"{x}^{e}" for x, e in letters)
    want = S5[0].identity()
    for x, e in letters:
        want = want * S5["ab".index(x)] ** e
    assert evaluate(parse_word(text, ["a", "b"]), S5) == want


def test_tracked_stream_matches_plain_stream():
    gens = groups.alternating_group(7).generators
    plain = GeneratedGroup(gens, seed=5)
    tracked = TrackedStream(gens, seed=5)
    for _ in range(100):
        x = tracked.random_element()
        assert x == plain.random_element()
        assert evaluate(tracked.slp(), gens) == x
    r = tracked.power_of_last(3)
    assert evaluate(tracked.slp(r), gens) == x**3


def test_involution_inverts_itself():
    g = Permutation.from_cycles(4, (0, 1))
    assert find_inverting_involutions(GeneratedGroup([g]), g, expected=1) == [g]


def test_d12_inverters():
    d12 = shipped_group("d12")
    r = d12.generators[0]
    found = find_inverting_involutions(d12, r, expected=6)
    assert len(found) == 6
    for j in found:
        assert j.order() == 2 and j * r * j == r.inverse()


def test_partial_census_warns():
    d12 = shipped_group("d12")
    with pytest.warns(PartialCensusWarning):
        find_inverting_involutions(d12, d12.generators[0], expected=6, budget=2)


def test_expected_inverter_count():
    t = shipped_table("PGL2(13)")
    assert expected_inverter_count(t, ["2a", "2b"], "6a") == 12
    d = shipped_table("D12")
    invols = [c.name for c in d.classes if c.order == 2]
    assert expected_inverter_count(d, invols, d.classes_of_order(6)[0]) == 6
    f = shipped_table("13:6")
    with pytest.raises(SearchError):
        expected_inverter_count(f, "2a", f.classes_of_order(6)[0])
    with pytest.raises(ValueError):
        expected_inverter_count(t, "3a", "6a")


def test_expected_count_matches_census():
    t = shipped_table("PGL2(13)")
    g = shipped_group("pgl2_13")
    elems = g.enumerate()
    x = next(e for e in sorted(elems) if e.order() == 6)
    brute = [j for j in elems if j.order() == 2 and j * x * j == x.inverse()]
    assert len(brute) == expected_inverter_count(t, ["2a", "2b"], "6a")


def test_quick_reject():
    l28 = PROFILES["L2(8)"]
    res = quick_reject([Permutation.from_cycles(8, (0, 1, 2, 3))] * 3, l28)
    assert not res and "4" in res.reason
    assert quick_reject(shipped_group("psl2_16").generators[:2], PROFILES["L2(16)"], samples=100)


def test_probe_on_true_extension():
    res = run_pipeline(dict(pipeline_configs()["pipeline_pgl2_13"]), base_dir=data_dir() / "configs")
    gens = res.witnesses[0].elements(shipped_group("pgl2_13").generators)
    probe = PROFILES["L2(13)"].probes[0]
    assert probe.values(gens) == [3, 6, 7, 7, 7, 13]
    assert quick_reject(gens, PROFILES["L2(13)"])


def test_presentation_certificates():
    cert = certify_presentation(shipped_group("pres_l2_13_2").generators, PROFILES["L2(13):2"])
    assert cert["isomorphic"] and cert["enumerated_order"] == 2184
    cert = certify_presentation(shipped_group("a12").generators, PROFILES["A12"])
    assert cert["isomorphic"] and all(cert["relators"].values())
    cert = certify_presentation(shipped_group("pres_a5").generators, PROFILES["A5"])
    assert cert["enumerated_order"] == 60


def test_relator_failure_names_relator():
    prof = PROFILES["A5"]
    bad = dataclasses.replace(prof, relators=prof.relators[:2] + (("(a*b)^6", "(a*b)^6"),))
    with pytest.raises(RelatorFailure) as exc:
        certify_presentation(shipped_group("pres_a5").generators, bad)
    assert exc.value.relator == "(a*b)^6"
    assert "(a*b)^6" in str(exc.value)


def test_proper_quotient_is_not_certified():
    # a^2 = b^3 = 1 holds in Z6 = <x^3, x^2>, which is not L2(16)
    z = groups.cyclic_group(6).generators[0]
    with pytest.raises(CertificationFailure):
        certify([z**3, z**2], PROFILES["L2(16)"])


def test_order_spectrum_certificates():
    cert = certify_by_order_spectrum(shipped_group("psl2_16"), PROFILES["L2(16)"])
    assert cert["order"] == 4080
    with pytest.raises(CertificationFailure):
        certify_by_order_spectrum(shipped_group("c4080"), PROFILES["L2(16)"])
    with pytest.raises(CertificationFailure):
        certify_by_order_spectrum(shipped_group("a5"), PROFILES["A5"])


def test_profile_round_trip():
    for p in PROFILES.values():
        assert TargetProfile.from_dict(p.to_dict()) == p
    assert get_profile("A5") is PROFILES["A5"]
    with pytest.raises(Exception):
        get_profile("M24")


def test_classify_natural_and_shipped():
    out = classify_a5_embedding(natural_a5_in_a12(), 12)
    assert out["profile"] == [5, 1, 1, 1, 1, 1, 1, 1]
    a12 = shipped_group("a12").generators
    for name, prof in [("a5_12", [12]), ("a5_6_6", [6, 6]), ("a5_6_5_1", [6, 5, 1])]:
        w = load_witness(data_dir() / "witnesses" / f"{name}.json")
        assert classify_a5_embedding(w.elements(a12), 12)["profile"] == prof


def test_classify_rejects_non_a5():
    with pytest.raises(Exception):
        classify_a5_embedding([Permutation.from_cycles(12, (0, 1)), Permutation.from_cycles(12, (2, 3, 4))])


def test_witness_round_trip(tmp_path):
    a12 = shipped_group("a12").generators
    w = load_witness(data_dir() / "witnesses" / "a5_6_6.json")
    p = tmp_path / "w.json"
    p.write_text(w.dumps())
    again = load_witness(p)
    assert again.slps == w.slps
    ok, fresh = verify_witness(again, a12)
    assert ok and fresh == w.certificates


def test_tampered_witness_fails():
    a12 = shipped_group("a12").generators
    w = load_witness(data_dir() / "witnesses" / "a5_12.json")
    w2 = SubgroupWitness(w.profile, w.slps, w.generator_names,
                         dict(w.certificates, classification=dict(w.certificates["classification"], profile=[6, 6])))
    assert not verify_witness(w2, a12)[0]


def test_dedup_single_and_conjugate():
    s5 = groups.symmetric_group(5).enumerate()
    d12 = [Permutation.from_cycles(5, (0, 1, 2)), Permutation.from_cycles(5, (0, 1)), Permutation.from_cycles(5, (3, 4))]
    assert len(dedup_subgroups([d12], s5)) == 1
    x = Permutation.from_cycles(5, (0, 3), (1, 4))
    other = [x.inverse() * g * x for g in d12]
    classes = dedup_subgroups([d12, other], s5)
    assert len(classes) == 1 and classes[0].members == [0, 1]
    c = Permutation(classes[0].conjugators[1])
    sub = enumerate_elements(d12)
    assert {c.inverse() * g * c for g in other} <= sub or {c * g * c.inverse() for g in other} <= sub


def test_dedup_by_invariants():
    dummy = [[Permutation([0])]] * 3
    out = dedup_subgroups(dummy, invariants=[{"centralizer_order": 3}, {"centralizer_order": 1},
                                             {"centralizer_order": 3}])
    assert len(out) == 3
    assert [c.resolved for c in out] == [False, True, False]


def test_pipeline_deterministic():
    cfg = dict(pipeline_configs()["pipeline_pgl2_13"])
    base = data_dir() / "configs"
    a = run_pipeline(cfg, base_dir=base)
    b = run_pipeline(cfg, base_dir=base)
    assert a.report.to_dict() == b.report.to_dict()
    assert [w.to_dict() for w in a.witnesses] == [w.to_dict() for w in b.witnesses]
    assert len(a.report.classes) == 1
    assert a.report.census_complete and a.report.inverters_found == 12


def test_pipeline_parallel_matches_serial():
    cfg = dict(pipeline_configs()["pipeline_pgl2_13"])
    base = data_dir() / "configs"
    a = run_pipeline(cfg, base_dir=base)
    b = run_pipeline(cfg, base_dir=base, jobs=2)
    assert a.report.to_dict() == b.report.to_dict()


def test_negative_pipeline():
    res = run_pipeline(dict(pipeline_configs()["pipeline_negative"]), base_dir=data_dir() / "configs")
    assert res.witnesses == []
    assert res.report.census_complete
    assert res.report.inverters_found == res.report.expected_inverters


def test_pipeline_errors_are_stage_tagged():
    cfg = dict(pipeline_configs()["pipeline_pgl2_13"], ambient="../groups/missing.json")
    with pytest.raises(SearchError) as exc:
        run_pipeline(cfg, base_dir=data_dir() / "configs")
    assert exc.value.stage == "load"
    cfg = dict(pipeline_configs()["pipeline_pgl2_13"], seed_slps=[{"word": "q"}])
    with pytest.raises(SearchError) as exc:
        run_pipeline(cfg, base_dir=data_dir() / "configs")
    assert exc.value.stage == "seed"


def test_a5_type_search_seeds():
    for seed in (0, 1):
        cfg = dict(pipeline_configs()["pipeline_a12_a5"], seed=seed)
        res = run_pipeline(cfg, base_dir=data_dir() / "configs")
        profs = sorted(tuple(w.certificates["classification"]["profile"]) for w in res.witnesses)
        assert profs == [(6, 5, 1), (6, 6), (12,)]


def test_random_seed_inverters_agree():
    # any seed finds the same involution set once the census completes
    d12 = shipped_group("d12")
    r = d12.generators[0]
    sets = []
    for seed in random.Random(0).sample(range(1000), 3):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            sets.append(set(find_inverting_involutions(GeneratedGroup(d12.generators, seed=seed), r, 6)))
    assert sets[0] == sets[1] == sets[2]
