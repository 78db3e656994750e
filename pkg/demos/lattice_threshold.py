"""
The lattice threshold in Z^2
============================

Pairs at distance t in the plane have lenses inside a ball of radius
(sqrt 3 / 2) t about their midpoint.  A lattice point is never farther than
sqrt(2)/2 from that midpoint, so past sqrt(2)/(2 - sqrt 3) the nearest lattice
point is a witness.  Distances on the box are stored squared.
"""

import math

import numpy as np

from vrmorse.criteria import strong_link_criterion_at_scale
from vrmorse.euclid import (
    lattice_covering_radius,
    lattice_interior,
    lattice_threshold,
    midpoint_pinch_check,
    random_pair,
    sample_lens,
)
from vrmorse.metric import diameter_spectrum, lattice_box

# First the continuous bound, sampled
rng = np.random.default_rng(0)
x, y = random_pair(rng, 3, 1.0)
w = sample_lens(x, y, 5000, rng)
print("largest midpoint distance in a unit lens:",
      np.linalg.norm(w - (x + y) / 2, axis=1).max(), "<=", math.sqrt(3) / 2)

# Then the lattice itself
box = lattice_box(2, 15)
thr = lattice_threshold(2)
print(f"threshold {thr:.4f}, squared {thr ** 2:.2f}")
rho = lattice_covering_radius(2)
for s in diameter_spectrum(box):
    if s > 42:
        break
    inside = lattice_interior(box, s)
    strong = strong_link_criterion_at_scale(box, s, inside).status.value
    pinch = midpoint_pinch_check(box, s, rho, inside).status.value
    print(f"t^2={s:>3}  t={math.sqrt(s):5.2f}  strong {strong:<10} midpoint-pinched {pinch}")
