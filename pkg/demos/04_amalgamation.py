"""Amalgamating two forcings over a shared complete subforcing.

The amalgam's conditions are pairs whose coordinates are linked through a
common base atom.  Over a trivial base the construction degenerates to the
full product; embedding one factor by the other's unit gives the canonical
injections.  A partial isomorphism of the base extends step by step to an
automorphism of a larger amalgam.
"""

from forcelab import (
    PartialIso,
    Poset,
    Subalgebra,
    amalgamate,
    back_and_forth_tower,
    base_embedding_from_inclusion,
    check_identification,
    identity_amalgam,
    member_by_definition,
    poset_inclusion,
    regular_open_completion,
)

point = Poset.chain(1)
fork = Poset.from_covers(("bot", "a", "b"), (("bot", "a"), ("bot", "b")))
inc = poset_inclusion(point, fork, {0: "bot"})
f = base_embedding_from_inclusion(inc)
base = regular_open_completion(point)
factor = regular_open_completion(fork)
inst = amalgamate(base, factor, factor, f, f)

print("trivial base, fork + fork amalgam size:", len(inst.amalgam))
print("completion atoms:", inst.completion.atom_count)
print("identification holds:", check_identification(inst))

# membership the slow way: search for a base witness
b1 = inst.left.value_of_label("a")
b2 = inst.right.value_of_label("b")
print("(a, b) is a condition:", member_by_definition(inst, b1, b2))

# identity amalgam: both factors are the base itself, pairs collapse
alg = regular_open_completion(fork)
ident = identity_amalgam(alg)
print("identity amalgam atoms == base atoms:",
      ident.completion.atom_count == alg.atom_count)

# back-and-forth: extend the atom swap a <-> b over the whole algebra
iso = PartialIso.build(alg, Subalgebra.whole(alg.atom_count),
                       {0: 0, 1: 2, 2: 1, 3: 3})
stages = back_and_forth_tower(fork, iso, steps=2)
print("stages grown:", len(stages))
last = stages[-1]
print("final stage domain size:", len(last.iso.pairs))
