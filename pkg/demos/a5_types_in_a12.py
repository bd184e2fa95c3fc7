"""Three kinds of A5 inside A12, told apart by orbit lengths.

Random pairs (a, b) with a^2 = b^3 = (ab)^5 = 1 generate A5.  Sorting such
pairs by the orbit lengths of <a, b> on the 12 points gives the types; for
each we print the centralizer in A12 and re-check the presentation.
"""

from groupsleuth.blackbox import load_group
from groupsleuth.fixtures import data_dir, natural_a5_in_a12, pipeline_configs
from groupsleuth.search import PROFILES, certify_presentation, classify_a5_embedding, run_pipeline

a12 = load_group(data_dir() / "groups" / "a12.json")
print("A12 generators satisfy its presentation:",
      certify_presentation(a12.generators, PROFILES["A12"])["isomorphic"])

print("natural A5 on five points:", classify_a5_embedding(natural_a5_in_a12(), 12))

res = run_pipeline(dict(pipeline_configs()["pipeline_a12_a5"], seed=0), base_dir=data_dir() / "configs")
for w in res.witnesses:
    gens = w.elements(a12.generators)
    info = classify_a5_embedding(gens, 12)
    cert = certify_presentation(gens, PROFILES["A5"])
    print(f"orbits {info['profile']}: centralizer order {info['centralizer_order']}, "
          f"enumerated order {cert['enumerated_order']}")
print(f"draws used: {res.report.draws}")
