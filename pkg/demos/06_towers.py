"""Hechler steps, two-step composition, and towers under the tower order.

A tower pairs a nested sequence of level sets with a sweetness model per
level.  Towers compare level-wise: models must extend and quotient forcing
must be preserved along a witness set of levels.
"""

from importlib import resources

from forcelab import (
    HechlerParams,
    compose_hechler,
    dsl,
    hechler_poset,
    tower_chain_merge,
    tower_hechler,
    tower_leq,
    two_step_equivalence,
)

h = hechler_poset(HechlerParams(2, 1))
print("Hechler(2,1) conditions:", len(h))
print("bottom:", h.labels[h.bottom])
print("(0,(0,0)) <= (1,(0,1)):", h.leq_labels((0, (0, 0)), (1, (0, 1))))

text = resources.files("forcelab.fixtures").joinpath("towers.fl").read_text()
env = dsl.resolve(dsl.parse(text))
t_chain = env["T_chain"]
print("fixture tower levels:", [sorted(lv) for lv in t_chain.levels])

print("reflexive:", tower_leq(t_chain, t_chain, range(2)).holds)

bad = tower_leq(env["T_neg1"], env["T_neg2"], range(2),
                mapping=env["neg_map"].get)
print("negative pair fails:", [f.clause for f in bad.failures])

merged = tower_chain_merge([t_chain, t_chain], [[0, 1]])
print("constant chain merges to itself:", merged == t_chain)

# composing every level with the same Hechler step keeps the tower order
lifted = tower_hechler(t_chain, HechlerParams(1, 1))
print("level sizes after the Hechler step:",
      [len(lifted.level_poset(i)) for i in range(len(lifted))])

# the two-step over a quotient reproduces the big forcing
ts = compose_hechler(t_chain.top, HechlerParams(1, 1))
print("two-step decomposition matches:", two_step_equivalence(ts.inclusion).holds)
