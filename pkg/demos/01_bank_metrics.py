"""
Metrics on a small attack tree
==============================

A bank can be robbed by force, or by breaking in with lockpicks.
"""

from atcalc import get_metric, minimal_attacks, term
from atcalc.bu import bu_trace

# the anchoring follows first appearance: f, b, l
bank = term("OR(f, AND(b, l))")
print("BASs:", bank.bas_names)

# minimal attacks as 0/1 vectors over (f, b, l)
print("minimal attacks:", sorted(minimal_attacks(bank)))

# min cost over minimal attacks
costs = [100, 60, 30]
mincost = get_metric("mincost")
print("min cost:", mincost(bank, costs))

# the same number bottom-up, one operation per edge
trace = bu_trace(bank, mincost, costs)
for v in trace.order:
    print(f"  {bank.name(v):>3}  {trace.values[v]}")
print("operations:", trace.op_count)

# other metrics on the same tree
print("min skill:", get_metric("minskill")(bank, [7, 3, 5]))
print("attack probability:", get_metric("tap")(bank, [0.1, 0.5, 0.9]))
