"""Complete suborders, reductions, and quotient forcing.

P sits completely inside Q when maximal antichains of P stay maximal in Q.
An equivalent route works through reductions.  Both are checked here on a
passing and a failing inclusion, then the quotient name of one atom is
materialized.
"""

from forcelab import (
    Poset,
    is_complete_suborder,
    is_complete_suborder_via_reductions,
    poset_inclusion,
    quotient_at_atom,
    quotient_name,
    quotient_forces,
    reductions,
)

chain2 = Poset.chain(2)
chain3 = Poset.chain(3)
inc = poset_inclusion(chain2, chain3, {0: 0, 1: 1})
print("chain2 inside chain3, antichain route:", is_complete_suborder(inc))
print("chain2 inside chain3, reduction route:",
      is_complete_suborder_via_reductions(inc))

# a flat pair mapped onto a pair that gains a bound is NOT complete:
# {x, y} is a maximal antichain downstairs but not upstairs
flat2 = Poset.flat(("x", "y"))
join2 = Poset.from_covers(
    ("bot", "x", "y", "z"),
    (("bot", "x"), ("bot", "y"), ("x", "z"), ("y", "z")),
)
bad = poset_inclusion(flat2, join2, {"bot": "bot", "x": "x", "y": "y"})
print("flat pair into a join, antichain route:", is_complete_suborder(bad))
print("flat pair into a join, reduction route:",
      is_complete_suborder_via_reductions(bad))

# the reduction of a large condition: its strongest trace on the small side
q = chain3.index(2)
mask = reductions(inc, q)
print("reductions of p2 down to chain2:",
      [chain2.labels[i] for i in range(len(chain2)) if mask >> i & 1])

print("bottom forces q1 into the quotient:", quotient_forces(inc, 0, 2))

# the quotient forcing as an atom-indexed name over BA(small)
name = quotient_name(inc)
print("quotient at the unique atom has",
      len(name.fiber(0)), "conditions in its fiber")
print("same poset directly:", len(quotient_at_atom(inc, 0)))
