"""Finding L2(13) inside PGL2(13) from a seeded 13:6.

The pipeline fixes g13 of order 13 and g6 of order 6 normalising it, lists
every involution j inverting g6, and tests the candidate <g13, g6, j> for
each.  A probe on reflection products throws out the wrong candidate; the
survivor is certified by enumeration.  A brute-force scan over the whole
ambient group confirms that nothing was missed.
"""

import time

from groupsleuth.blackbox import load_group
from groupsleuth.fixtures import data_dir, pipeline_configs
from groupsleuth.search import PROFILES, brute_force_subgroup_scan, run_pipeline, verify_witness

config = dict(pipeline_configs()["pipeline_pgl2_13"], seed=0)
result = run_pipeline(config, base_dir=data_dir() / "configs")
print(result.report.text())

ambient = load_group(data_dir() / "groups" / "pgl2_13.json")
for w in result.witnesses:
    ok, fresh = verify_witness(w, ambient.generators, ambient.enumerate())
    print(f"witness replays and re-certifies: {ok}")
    print(f"  programs have {[len(p) for p in w.slps]} instructions")

t0 = time.perf_counter()
scan = brute_force_subgroup_scan(ambient, PROFILES["L2(13)"])
print(f"brute-force scan ({time.perf_counter() - t0:.1f}s): {scan}")

# same search in a group where the target cannot exist
negative = run_pipeline(dict(pipeline_configs()["pipeline_negative"], seed=0), base_dir=data_dir() / "configs")
print("\nnegative control:")
print(negative.report.text())
