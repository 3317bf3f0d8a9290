"""
Building trees from parts
=========================

Substitution, BAS merging, canonical forms and prime decomposition.
"""

from atcalc import canonical_form, prime, star, substitute, tau, term
from atcalc.operad import Surjection, eval_decomposition, format_decomposition, prime_decompose
from atcalc.dsl import format_tree

bank = term("OR(f, l)")
lockpicks = term("OR(buy, AND(p1, p2))")

# replace the BAS l by a whole tree; its BASs take l's anchor slot
bigger = substitute(bank, bank.anchors[1], lockpicks)
print(format_tree(bigger, name="bank"))

# simultaneous substitution into every BAS of a gate
print(format_tree(star(prime("AND", 2), [bank, lockpicks]), name="both"))

# merge BASs 2 and 3: the OR now has two edges into one node
merged = tau(Surjection((0, 1, 1)), term("AND(OR(a1, a2), a3)"))
print(format_tree(merged, name="merged"))

# canonical forms ignore names and node numbering
print(canonical_form(term("OR(x, AND(y, z))")) == canonical_form(term("OR(f, AND(b, l))")))

# every tree is a combination of single-gate trees
shared = term("AND(OR(a1, a2), OR(a2, a3))")
d = prime_decompose(shared)
print(format_decomposition(d))
print(canonical_form(eval_decomposition(d)) == canonical_form(shared))
