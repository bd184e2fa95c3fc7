"""Quadratic forms and orbit sweeps over GF(2).

A nondegenerate form in dimension 2m has either (2^(m-1)+1)(2^m-1) or
(2^(m-1)-1)(2^m+1) singular nonzero vectors, and this count does not move
under a change of basis.  The second half sweeps all 2^24 vectors under a
matrix of order 7.
"""

import random
import time

from groupsleuth.blackbox import BitMatrix
from groupsleuth.gf2 import (
    block_diagonal,
    elliptic_form,
    fixed_space_dimension,
    hyperbolic_form,
    minus_type_count,
    orbits_on_vectors,
    plus_type_count,
    quadratic_form_type,
    random_invertible,
)
from groupsleuth.groups import companion_matrix

rng = random.Random(1)
for m in range(1, 6):
    for q in (hyperbolic_form(m), elliptic_form(m)):
        q2 = q.transform(random_invertible(2 * m, rng))
        print(f"2m = {2 * m:2d}: {quadratic_form_type(q2):5s} singular {q2.singular_count():4d} "
              f"(plus {plus_type_count(m)}, minus {minus_type_count(m)})")

c7 = companion_matrix([1, 1, 0])
print("\nSinger cycle on GF(2)^3:", orbits_on_vectors([c7]))
g = block_diagonal(*[c7] * 7, BitMatrix.identity_matrix(3))
p = random_invertible(24, rng)
g = p.inverse() * g * p
print(f"order {g.order()}, fixed space dimension {fixed_space_dimension(g)}")
t0 = time.perf_counter()
sizes = orbits_on_vectors([g])
print(f"{len(sizes)} orbits on 2^24 - 1 vectors in {time.perf_counter() - t0:.1f}s: "
      f"{sizes.count(7)} of size 7, {sizes.count(1)} fixed")
