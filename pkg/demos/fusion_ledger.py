"""Class fusions from tables alone, then from an explicit embedding.

The table-level conditions (orders, centralizers, power maps, integral
restrictions) leave a short list of candidate fusions; conjugacy tests in
the enumerated ambient group pick the true one.
"""

from groupsleuth import groups, tablegen
from groupsleuth.chartab import load_table_file
from groupsleuth.fixtures import TABLE_FILES, data_dir
from groupsleuth.fusion import FusionMap, enumerate_possible_fusions, fusion_from_embedding, verify_fusion


def table(name):
    return load_table_file(data_dir() / "tables" / TABLE_FILES[name])


for src_name, sub in (("L2(13)", groups.psl2(13)), ("13:6", groups.frobenius_group(13, 6, degree=14))):
    src, tgt = table(src_name), table("PGL2(13)")
    maps = enumerate_possible_fusions(src, tgt)
    print(f"{src_name} -> PGL2(13): {len(maps)} table-level candidate(s)")
    amb = groups.pgl2(13)
    f = fusion_from_embedding(sub, amb, src, tgt, tablegen.class_representatives(src, sub),
                              tablegen.class_representatives(tgt, amb))
    print("  true fusion: " + ", ".join(f"{a}->{b}" for a, b in f.names()))
    print(f"  verified: {verify_fusion(f).ok}, among candidates: {f in maps}")

src, tgt = table("A5"), table("S5")
bad = enumerate_possible_fusions(src, tgt)[0]
wrong = list(bad.map)
wrong[1] = 0
print("\nmisrouted A5 -> S5 map:")
print(verify_fusion(FusionMap(src, tgt, wrong)))
