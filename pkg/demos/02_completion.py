"""Boolean completions: the regular-open algebra of a finite poset.

A finite poset completes to the powerset of its maximal elements.  Each
condition gets a Boolean value: the set of maximal elements above it.
"""

from forcelab import (
    Poset,
    Subalgebra,
    generated_subalgebra,
    intersect_subalgebras,
    regular_open_completion,
)

join2 = Poset.from_covers(
    ("bot", "x", "y", "z"),
    (("bot", "x"), ("bot", "y"), ("x", "z"), ("y", "z")),
)
alg = regular_open_completion(join2)

print("atoms:", alg.atoms)
for lbl in join2.labels:
    print(f"value({lbl}) = {alg.value_of_label(lbl):0{alg.atom_count}b}")

# x and y merge in the completion: both sit below the single atom z
print("x and y get the same value:",
      alg.value_of_label("x") == alg.value_of_label("y"))

fork = Poset.flat(("a", "b", "c"))
alg3 = regular_open_completion(fork)
print("flat poset on 3 tips has", 1 << alg3.atom_count, "regular opens")

sub = generated_subalgebra(alg3.atom_count, [0b011])
print("subalgebra generated by {a,b}:", sorted(sub.members))
meet = intersect_subalgebras(sub, Subalgebra.whole(alg3.atom_count))
print("meet with the whole algebra gives it back:", meet == sub)

# completing the atom order of a completion changes nothing
again = regular_open_completion(alg3.atom_order())
print("completion is idempotent:", again.atom_count == alg3.atom_count)
