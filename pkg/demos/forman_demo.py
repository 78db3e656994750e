"""
From Forman functions to descending links
=========================================

A random valid Forman function on a random complex, its matching, and the
descending links of its values read as (h, -dim).
"""

import random

from vrmorse.forman import (
    classify_simplices,
    random_complex,
    random_forman_function,
    recast_bb,
    verify_descending_types,
    weak_morse_inequalities,
)
from vrmorse.homology import betti_numbers

rng = random.Random(3)
cx = random_complex(rng, 6, 4)
h = random_forman_function(cx, rng)
print("f-vector", cx.f_vector())

cl = classify_simplices(cx, h)
print("critical counts", cl.critical_counts)
print("reduced Betti  ", betti_numbers(cx, cx.dim).reduced)
print("weak Morse inequalities hold:", weak_morse_inequalities(cx, cl))

for redundant, collapsible in sorted(cl.matching.items()):
    print(f"  {redundant} -> {collapsible}")

bb = recast_bb(cx, h)
print("ties broken by dimension:", bb.needs_dim_tiebreak())
rep = verify_descending_types(cx, h, cl)
print("descending links have the predicted type:", rep.passed)
