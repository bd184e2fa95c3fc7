"""Counting with a character table, then checking the count by hand.

We ask how many involutions invert a fixed element of order 6 in PGL2(13).
The table answers through class multiplication coefficients; a brute-force
pass over all 2184 group elements answers again.
"""

from groupsleuth import groups
from groupsleuth.chartab import load_table_file
from groupsleuth.fixtures import TABLE_FILES, data_dir
from groupsleuth.search import expected_inverter_count

table = load_table_file(data_dir() / "tables" / TABLE_FILES["PGL2(13)"])
print(f"{table.name}: order {table.order}, classes {' '.join(table.class_names)}")

invols = [c.name for c in table.classes if c.order == 2]
print(f"involution classes: {invols}")
for a in invols:
    for b in invols:
        print(f"  CMC({a}, {b}, 6a) = {table.class_mult_coefficient(a, b, '6a')}")

predicted = expected_inverter_count(table, invols, "6a")
print(f"table prediction: {predicted} involutions invert a fixed 6a element")

g = groups.pgl2(13)
elements = g.enumerate()
x = next(e for e in sorted(elements) if e.order() == 6)
counted = sum(1 for j in elements if j.order() == 2 and j * x * j == x.inverse())
print(f"brute force over {len(elements)} elements: {counted}")
assert counted == predicted

# the same table also locates power classes
for name in ("12a", "12b", "14a"):
    print(f"  {name}^2 lies in {table.classes[table.power_class(name, 2)].name}")
