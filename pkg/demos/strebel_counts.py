"""
Q = 0: the equation P C**2 + R = 0 and its 2**(d-1) measures.

With P = (z**2 - 1)(z**2 - 4) and R = -z**2 the critical graph has two
segments and two loops based at 0, each enclosing one segment, so d = 3
regions. A sign per bounded region gives one measure each; the positivity
test picks the one whose support avoids the loops.
"""
from motherbody import gallery, mother
from motherbody.quaddiff import build_theta, strebel_surrogate
from motherbody.verify import cauchy_quadrature

for name, triple in (("arcsine", gallery.arcsine_triple()),
                     ("two intervals", gallery.two_interval_triple())):
    qd = build_theta(*triple)
    res = strebel_surrogate(qd)
    print(name, res.status, "d =", res.graph.d)
    for c in mother.q_zero_enumerate(qd, res.graph):
        print("  signs", c.signs, "support", c.subgraph, "mass", round(c.measure.total_mass, 10),
              "positive" if c.positive else "signed")
    print("  criterion:", mother.positivity_criterion(res.graph))

print("transform of the arcsine law at 2:",
      cauchy_quadrature(mother.q_zero_enumerate(build_theta(*gallery.arcsine_triple()))[0].measure, 2.0))

for make in (gallery.circle_chain, gallery.cut_cycle):
    crit = mother.positivity_criterion(make())
    print(make.__name__, "admits" if crit["admits"] else "refuses", crit["support"], crit["offending"])
