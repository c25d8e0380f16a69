"""
A motherbody on a level curve of a rational germ.

For f = 1/z the set log|z| = v is a circle of radius e**v carrying mass 1;
outside it the transform is f, inside it vanishes. The point mass at 0
is the other motherbody of the same germ.
"""
import numpy as np

from motherbody.measure import atomic_measure
from motherbody.polyalg import UniPoly
from motherbody.verify import RationalGerm, cauchy_quadrature, compare_branch, level_curve_measure

germ = (UniPoly([1]), UniPoly([0, 1]))
for v in (0.0, 1.0, 2.0):
    mu = level_curve_measure(germ, v)
    z = mu.arcs[0].z_of(np.linspace(*mu.arcs[0].t_span, 7))
    print(f"v={v}: radius {np.abs(z).mean():.6f}, mass {mu.total_mass:.12f}")
    print("   inside:", abs(cauchy_quadrature(mu, 0.1 + 0.2j)),
          " outside:", abs(cauchy_quadrature(mu, 12.0) - 1 / 12))

print("point mass vs germ:", compare_branch(atomic_measure([(0, 1.0)]), germ, samples=100).max_abs_error)

two = RationalGerm(UniPoly([0, 2]), UniPoly([-1, 0, 1]))
mu = level_curve_measure(two, 3.0)
print("two poles: mass", mu.total_mass, "transform at 6 vs germ", cauchy_quadrature(mu, 6.0), two(6.0))
