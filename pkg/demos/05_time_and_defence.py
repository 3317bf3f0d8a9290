"""
Sequences and defences
======================

Sequential AND gates and min time; counter gates and min cost against a
defender.
"""

import math

from atcalc import ADT_MINCOST, MINTIME, adt_bottom_up, dat_bottom_up, parse, term

# a and b run in parallel, c afterwards
seq = term("SAND(AND(a, b), c)")
print("min time:", dat_bottom_up(seq, MINTIME, [3, 5, 2]))

# one step done twice in a row takes twice as long
print("twice:", dat_bottom_up(term("SAND(a, a)"), MINTIME, [4]))

# attacker a is stopped by defence b, which attacker c defeats; d is unstoppable
doc = parse("""
adt counter {
  root@p = OR(ca, d)
  ca@p = C(a, cb)
  cb@o = C(b, c)
  a@p: bas
  b@o: bas
  c@p: bas
  d@p: bas
}
""")
# the defender's step has no cost for the attacker: it defaults to infinity
print("cost against any defence:", adt_bottom_up(doc.tree, ADT_MINCOST, [5, None, 2, 8]))
print("once d gets cheap:", adt_bottom_up(doc.tree, ADT_MINCOST, [5, math.inf, 2, 3]))
