"""
Which metrics the BDD algorithm computes
========================================

A metric extends to all monotone Boolean functions.  The BDD fold is
right for it when the extension sends the constants to the terminal
values and respects Shannon composition and irrelevant arguments.  These
can be checked exhaustively on small functions.
"""

from atcalc.bdd import check_psi_conditions, monotone_functions, psi_semiring, psi_tap, semiring_plugin, tap_plugin
from atcalc.metrics import MAXDAMAGE, MINCOST

print("monotone functions of 0..3 variables:", [len(monotone_functions(n)) for n in range(4)])

close = lambda a, b: abs(a - b) <= 1e-12
g, z0, z1 = tap_plugin()
r = check_psi_conditions(psi_tap, g, z0, z1, close=close)
print("attack probability:", r.checked, "checks,", len(r.violations), "violations")

g, z0, z1 = semiring_plugin(MINCOST)
r = check_psi_conditions(psi_semiring(MINCOST), g, z0, z1, sample=MINCOST.sample)
print("min cost:", r.checked, "checks,", len(r.violations), "violations")

# a wrong terminal value is caught immediately
g, z0, _ = tap_plugin()
r = check_psi_conditions(psi_tap, g, z0, 0.5, close=close)
print("broken terminal:", r.violations[0])

# max damage lacks absorption, and the conditions fail
nab, tri = MAXDAMAGE.nabla, MAXDAMAGE.triangle
r = check_psi_conditions(psi_semiring(MAXDAMAGE), lambda x, y, z: nab(y, tri(x, z)), 0, 0, sample=MAXDAMAGE.sample)
print("max damage:", r.violations[0])
