"""Brute-force oracles, written independently of the library internals.

Everything here recomputes a quantity straight from its definition, over all
subsets or all pairs, so the library's cleverer routes have something honest
to disagree with.
"""

from itertools import combinations

from forcelab import Poset


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def brute_compatible(poset: Poset, i: int, j: int) -> bool:
    """Common-upper-bound search over every element."""
    return any(poset.leq(i, r) and poset.leq(j, r) for r in range(len(poset)))


def brute_maximal_antichains(poset: Poset) -> list[int]:
    """All subset masks that are pairwise incompatible and unextendable."""
    n = len(poset)
    found = []
    for mask in range(1, 1 << n):
        members = bits(mask)
        if any(
            brute_compatible(poset, a, b) for a, b in combinations(members, 2)
        ):
            continue
        if any(
            r not in members
            and all(not brute_compatible(poset, r, a) for a in members)
            for r in range(n)
        ):
            continue
        found.append(mask)
    found.sort(key=bits)
    return found


def brute_is_dense(poset: Poset, mask: int) -> bool:
    members = bits(mask)
    return all(
        any(poset.leq(p, s) for s in members) for p in range(len(poset))
    )


def brute_regular_opens(poset: Poset) -> list[int]:
    """Regular open sets from the definition: U = interior(closure(U)).

    Open means up-closed under strengthening; closure and interior are
    complements of each other's duals, spelled out pointwise.
    """
    n = len(poset)
    universe = (1 << n) - 1

    def is_open(mask):
        return all(
            (mask >> j) & 1
            for i in bits(mask)
            for j in range(n)
            if poset.leq(i, j)
        )

    def closure(mask):
        return sum(
            1 << p
            for p in range(n)
            if any(poset.leq(p, q) and (mask >> q) & 1 for q in range(n))
        )

    def interior(mask):
        return sum(
            1 << p
            for p in range(n)
            if all(not poset.leq(p, q) or (mask >> q) & 1 for q in range(n))
        )

    return sorted(
        mask
        for mask in range(universe + 1)
        if is_open(mask) and interior(closure(mask)) == mask
    )


def brute_maximal_elements(poset: Poset) -> list[int]:
    n = len(poset)
    return [
        i
        for i in range(n)
        if all(j == i or not poset.leq(i, j) for j in range(n))
    ]


def brute_complete_suborder(small: Poset, large: Poset, injection) -> bool:
    """Every maximal antichain of small stays maximal in large."""
    for mask in brute_maximal_antichains(small):
        image = [injection[i] for i in bits(mask)]
        if any(
            large.compatible(a, b) for a, b in combinations(image, 2)
        ):
            return False
        if any(
            all(not large.compatible(q, a) for a in image)
            for q in range(len(large))
        ):
            return False
    return True


def brute_quotient_forces(small: Poset, large: Poset, injection, p: int, q: int) -> bool:
    """p forces q into the quotient: every extension of p meets q in large."""
    return all(
        large.compatible(injection[p2], q)
        for p2 in range(len(small))
        if small.leq(p, p2)
    )


def atom_member(inst, b1: int, b2: int) -> bool:
    """Atom criterion for amalgam membership, recomputed from the embeddings."""
    return any(
        inst.f1.value(1 << k) & b1 and inst.f2.value(1 << k) & b2
        for k in range(inst.base.atom_count)
    )


def pairwise_bounded(poset: Poset, labels, within) -> bool:
    """Every pair from labels has an upper bound among within (centering)."""
    idx = [poset.index(x) for x in labels]
    pool = [poset.index(x) for x in within]
    return all(
        any(poset.leq(a, r) and poset.leq(b, r) for r in pool)
        for a, b in combinations(idx, 2)
    )
