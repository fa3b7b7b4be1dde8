"""Sweetness models: layered equivalence relations over a dense set.

A model is sweet when each class is directed, classes refine along levels,
and every class reachable below a condition can be entered compatibly.  The
validator reports the first failing clause with a witness.
"""

from forcelab import (
    Poset,
    SweetModel,
    centered_cover,
    chain_limit,
    validate_extends,
    validate_sweet,
)

# two branches, each continuing one step: bot < a < aa and bot < b < ba
tree = Poset.from_covers(
    ("bot", "a", "aa", "b", "ba"),
    (("bot", "a"), ("a", "aa"), ("bot", "b"), ("b", "ba")),
)

fine = SweetModel(
    poset=tree,
    dense=frozenset(tree.labels),
    partitions=((tuple(frozenset({x}) for x in tree.labels)),),
)
print("singleton classes validate:", validate_sweet(fine).holds)

# one class holding an incompatible pair breaks directedness
broken = SweetModel(
    poset=tree,
    dense=frozenset(tree.labels),
    partitions=(
        (frozenset({"aa", "ba"}), frozenset({"a", "b", "bot"})),
    ),
)
report = validate_sweet(broken)
print("incompatible pair in one class:",
      report.failures[0].clause, report.failures[0].witness)

# branch classes: each class is a chain inside one branch, so directed
branchy = SweetModel(
    poset=tree,
    dense=frozenset({"a", "aa", "b", "ba"}),
    partitions=((frozenset({"a", "aa"}), frozenset({"b", "ba"})),),
)
print("branch model validates:", validate_sweet(branchy).holds)
print("centered cover blocks:", sorted(map(sorted, centered_cover(branchy))))

chain = [branchy, branchy]
limit = chain_limit(chain)
print("constant chain limit is the model itself:", limit == branchy)
print("limit extends the first link:", validate_extends(chain[0], limit).holds)
