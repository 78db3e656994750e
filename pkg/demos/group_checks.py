"""
Word metrics: free groups, free abelian groups and a cycle
==========================================================

A ball of radius R in the Cayley graph, strong checks at a scale t made
boundary-safe by translation, and the prefix combing of the free group.
"""

from vrmorse.groups import (
    EXPLICIT,
    FREE_ABELIAN,
    FREE_GROUP,
    GroupSpec,
    boundary_safe_strong_check,
    cayley_ball,
    good_combing_check,
    prefix_combing,
)

f2 = cayley_ball(GroupSpec(FREE_GROUP, 2), 8)
print("F_2 ball of radius 8:", len(f2), "elements")
for t in (2, 3):
    print("  t =", t, boundary_safe_strong_check(f2, t).status.value)
print("  prefix combing:", good_combing_check(f2, prefix_combing, 2).to_json())

# Z^2: the lens of (0,0) and (2,0) includes (1,1) and (1,-1), which are 2 apart
z2 = cayley_ball(GroupSpec(FREE_ABELIAN, 2), 8)
for t in (2, 3, 4):
    print("Z^2 t =", t, boundary_safe_strong_check(z2, t).status.value)

# Eight-cycle: every candidate witness is blocked by its antipode
edges = tuple((i, (i + 1) % 8, "a") for i in range(8))
c8 = cayley_ball(GroupSpec(EXPLICIT, edges=edges, identity=0), 4)
v = boundary_safe_strong_check(c8, 4)
print("C_8 t = 4", v.status.value, v.coverage)
f = v.verdict.failures[0]
print("  blockers:", {c8.elements[z]: c8.elements[w] for z, w in f.blockers.items()})
