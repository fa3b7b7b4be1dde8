"""Finite posets as forcing notions: order, compatibility, antichains.

Every structure in this package sits on a Poset: a finite order with a
weakest element, where p <= q reads "q is stronger than p".
"""

from forcelab import Poset

fork = Poset.from_covers(("bot", "a", "b"), (("bot", "a"), ("bot", "b")))
print("fork labels:", fork.labels)
print("bottom:", fork.labels[fork.bottom])

a, b = fork.index("a"), fork.index("b")
print("a <= b:", fork.leq(a, b))
print("a compatible with b:", fork.compatible(a, b))

# maximal antichains come back as bitmasks over element indices
for mask in fork.maximal_antichains():
    members = [fork.labels[i] for i in range(len(fork)) if mask >> i & 1]
    print("maximal antichain:", members)

chain = Poset.chain(3)
print("chain of 3, all pairs compatible:",
      all(chain.compatible(i, j) for i in range(3) for j in range(3)))

prod = Poset.product(fork, chain)
print("fork x chain3 has", len(prod), "elements")
dense_mask = 0
for lbl in ((("a", 2)), (("b", 2)), (("bot", 0))):
    dense_mask |= 1 << prod.index(lbl)
print("a dense subset must meet every maximal element:",
      prod.is_dense(dense_mask))
