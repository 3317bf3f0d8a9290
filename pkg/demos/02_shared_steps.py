"""
When bottom-up goes wrong
=========================

Sharing a step between two gates makes a tree a DAG.  The bottom-up
algorithm then counts that step twice.
"""

from atcalc import bu, get_metric, term
from atcalc.bdd import bdd_metric, semiring_plugin
from atcalc.bu import check_scoperad_morphism, check_treelike_theorem
from atcalc.generators import random_surjection, random_treelike
from atcalc.metrics import MINCOST
import random

shared = term("AND(OR(a1, a2), OR(a2, a3))")
x = [3, 5, 4]
mincost = get_metric("mincost")

# a2 is paid once by the cheapest attack but twice by bottom-up
print("bottom-up:", bu(shared, mincost, x))
print("over minimal attacks:", mincost(shared, x))

# the BDD algorithm does not care about sharing
print("on the BDD:", bdd_metric(shared, *semiring_plugin(MINCOST), x))

# on trees without sharing the two always agree
rng = random.Random(0)
samples = []
for _ in range(200):
    t = random_treelike(rng, rng.randint(3, 8))
    samples.append((t, [rng.randint(0, 100) for _ in range(t.n)]))
print(check_treelike_theorem(mincost, samples).summary())

# merging BASs is the operation that creates sharing; min skill does not mind it
def merges(metric, count=200):
    out = []
    for _ in range(count):
        t = random_treelike(rng, rng.randint(2, 6))
        s = random_surjection(rng, t.n)
        out.append((t, s, [metric.sample_value(rng) for _ in range(s.m)]))
    return out

for name in ("minskill", "mincost", "bu-mincost"):
    m = get_metric(name)
    print(check_scoperad_morphism(m, merges(m)).summary())
