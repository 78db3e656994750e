"""
Certified persistence on a circle
=================================

Twelve equally spaced points on a circle of circumference 1.  We scan every
distance in the spectrum with the Link Criterion and read off the scales where
the Vietoris-Rips complex provably does not change homotopy type.
"""

from vrmorse.criteria import criterion_range_scan, link_criterion
from vrmorse.metric import circle, diameter_spectrum
from vrmorse.persistence import cross_validate, persistence_intervals

c = circle(12)
print("spectrum:", [str(s) for s in diameter_spectrum(c)])

# Three subsets, one for each outcome of the Link Criterion
for subset in ([0, 2, 10], [2, 11], [0, 4, 8]):
    v = link_criterion(c, subset)
    print(subset, v.status.value, "witness", v.witness)

# Scale by scale; 1/3 is refuted by the inscribed triangle
for v in criterion_range_scan(c, diameter_spectrum(c)):
    print(f"{str(v.value):>5}  {v.status.value:<10} {v.refuting_subset or ''}")

# The certified run and its homology shadow
report = persistence_intervals(c, betti_dim=2)
for iv in report.intervals:
    print("interval", iv.to_json(c))
print(cross_validate(report).message())
