"""
Attack probability on a BDD
===========================

Build the reduced ordered BDD of a structure function and fold a value
through it from the terminals up.
"""

import numpy as np

from atcalc import term
from atcalc.bdd import bdd_bu_values, build_robdd, order_from_sequence, tap_plugin

tree = term("AND(a1, OR(a2, a3))")
bdd = build_robdd(tree)
print(bdd.to_dot(tree.bas_names))

g, z0, z1 = tap_plugin()
p = [0.7, 0.5, 0.3]
values = bdd_bu_values(bdd, g, z0, z1, p)
for u in range(2, len(bdd.nodes)):
    var = bdd.nodes[u][0]
    print(f"node {u} tests {tree.bas_names[var]}: {values[u]:.12g}")

# any variable order gives the same value, though not the same BDD size
tree = term("OR(AND(x1, y1), AND(x2, y2), AND(x3, y3))")
p = np.linspace(0.2, 0.7, tree.n)
for seq in ([0, 1, 2, 3, 4, 5], [0, 2, 4, 1, 3, 5]):
    b = build_robdd(tree, order_from_sequence(seq))
    v = bdd_bu_values(b, g, z0, z1, p)[b.root]
    print([tree.bas_names[i] for i in seq], "size", b.size, "value", round(float(v), 12))
