"""Complete-suborder criteria, reductions, and quotient forcing."""

import pytest
from hypothesis import given, strategies as st

from forcelab import (
    InputError,
    Poset,
    PreconditionError,
    atom_projection,
    complete_embedding_from_inclusion,
    is_complete_suborder,
    is_complete_suborder_via_reductions,
    poset_inclusion,
    preserves_incompatibility,
    quotient_at_atom,
    quotient_forces,
    quotient_name,
    reductions,
    regular_open_completion,
    validate_complete_embedding,
)
from forcelab.lemmalab import _sub_inclusions, all_posets
from forcelab.posets import _bit_indices

from helpers import brute_complete_suborder, brute_quotient_forces

FLAT2 = Poset.flat(("x", "y"))
JOIN2 = Poset.from_covers(
    ("bot", "x", "y", "z"),
    (("bot", "x"), ("bot", "y"), ("x", "z"), ("y", "z")),
)
FLAT3 = Poset.flat(("x", "y", "z"))
TREE1 = Poset.flat(("a", "b"))
TREE2 = Poset.from_covers(
    ("bot", "a", "b", "aa", "ab", "ba", "bb"),
    (
        ("bot", "a"),
        ("bot", "b"),
        ("a", "aa"),
        ("a", "ab"),
        ("b", "ba"),
        ("b", "bb"),
    ),
)


def inclusions_upto(n: int):
    for poset in all_posets(n):
        for sub in _sub_inclusions(poset):
            yield poset_inclusion(poset.induced(sub), poset)


def test_identity_inclusion_is_complete():
    for poset in (FLAT2, JOIN2, TREE2):
        inc = poset_inclusion(poset, poset)
        assert is_complete_suborder(inc)
        assert is_complete_suborder_via_reductions(inc)


def test_antichain_gains_a_bound():
    inc = poset_inclusion(FLAT2, JOIN2, {"bot": "bot", "x": "x", "y": "y"})
    assert not is_complete_suborder(inc)
    assert not is_complete_suborder_via_reductions(inc)


def test_fresh_incompatible_point():
    inc = poset_inclusion(FLAT2, FLAT3, {"bot": "bot", "x": "x", "y": "y"})
    assert not is_complete_suborder(inc)
    assert not is_complete_suborder_via_reductions(inc)
    assert reductions(inc, FLAT3.index("z")) == 0


def test_tree_into_deeper_tree():
    inc = poset_inclusion(TREE1, TREE2)
    assert is_complete_suborder(inc)
    assert is_complete_suborder_via_reductions(inc)


def test_reductions_of_bottom_and_image():
    inc = poset_inclusion(TREE1, TREE2)
    assert reductions(inc, TREE2.bottom) == TREE1.full_mask
    for label in TREE1.labels:
        p = TREE1.index(label)
        q = TREE2.index(label)
        assert reductions(inc, q) >> p & 1
    with pytest.raises(InputError):
        reductions(inc, len(TREE2.labels))


@pytest.mark.parametrize("n", [3, 4])
def test_criteria_agree_and_match_brute_force(n):
    seen = 0
    for inc in inclusions_upto(n):
        expected = brute_complete_suborder(
            inc.small, inc.large, inc.injection
        )
        assert is_complete_suborder(inc) == expected
        assert is_complete_suborder_via_reductions(inc) == expected
        if expected:
            assert preserves_incompatibility(inc)
        seen += 1
    assert seen > 0


def test_quotient_forces_bottom_and_monotone():
    inc = poset_inclusion(TREE1, TREE2)
    for p in TREE1.labels:
        assert quotient_forces(inc, p, "bot")
    for q in TREE2.labels:
        for p in TREE1.labels:
            if quotient_forces(inc, p, q):
                for p2 in TREE1.extensions(TREE1.index(p)):
                    assert quotient_forces(inc, TREE1.labels[p2], q)


def test_quotient_forces_requires_complete_suborder():
    inc = poset_inclusion(FLAT2, FLAT3, {"bot": "bot", "x": "x", "y": "y"})
    with pytest.raises(PreconditionError):
        quotient_forces(inc, "bot", "z")


def test_quotient_forces_on_product():
    chain2 = Poset.chain(2)
    prod = Poset.product(chain2, chain2)
    inc = poset_inclusion(chain2, prod, lambda p: (p, 0))
    assert is_complete_suborder(inc)
    for p in range(2):
        for q_label in prod.labels:
            got = quotient_forces(inc, p, q_label)
            p_part = chain2.index(q_label[0])
            expected = all(
                chain2.compatible(p2, p_part)
                for p2 in chain2.extensions(p)
            )
            assert got == expected


@given(st.sampled_from([inc for inc in inclusions_upto(4) if is_complete_suborder(inc)]))
def test_quotient_forces_matches_brute_force(inc):
    for q in range(len(inc.large)):
        for p in range(len(inc.small)):
            got = quotient_forces(
                inc, inc.small.labels[p], inc.large.labels[q]
            )
            assert got == brute_quotient_forces(
                inc.small, inc.large, inc.injection, p, q
            )


def test_quotient_at_atom_identity():
    # identity case: table(a) = conditions whose value contains the atom
    inc = poset_inclusion(TREE2, TREE2)
    alg = regular_open_completion(TREE2)
    for a in range(alg.atom_count):
        sub = quotient_at_atom(inc, a)
        assert sub.labels[sub.bottom] == "bot"
        got = set(sub.labels)
        expected = {
            TREE2.labels[i]
            for i in range(len(TREE2))
            if alg.dense_map[i] >> a & 1
        }
        assert got == expected


def test_quotient_at_atom_product_contains_factor():
    flat_p = Poset.flat(("a", "b"))
    flat_r = Poset.flat(("x", "y"))
    prod = Poset.product(flat_p, flat_r)
    inc = poset_inclusion(flat_p, prod, lambda p: (p, "bot"))
    alg = regular_open_completion(flat_p)
    for a in range(alg.atom_count):
        sub = quotient_at_atom(inc, a)
        tip = alg.atoms[a]
        # a full copy of R rides along the atom's tip
        for r_label in flat_r.labels:
            assert (tip, r_label) in sub.labels
        # the incompatible tip is excluded
        other = "b" if tip == "a" else "a"
        assert not any(lbl[0] == other for lbl in sub.labels)


def test_quotient_at_atom_trivial_base():
    point = Poset.chain(1)
    inc = poset_inclusion(point, TREE2, {0: "bot"})
    sub = quotient_at_atom(inc, 0)
    assert set(sub.labels) == set(TREE2.labels)
    with pytest.raises(InputError):
        quotient_at_atom(inc, 5)


def test_atom_projection_and_embedding_validation():
    from forcelab import induced_algebra_embedding

    inc = poset_inclusion(TREE1, TREE2)
    proj = atom_projection(inc)
    small_max = [i for i in range(len(TREE1)) if TREE1.maximal_mask() >> i & 1]
    large_alg = regular_open_completion(TREE2)
    assert len(proj) == large_alg.atom_count
    assert set(proj) == set(small_max)
    # each large atom projects to the small tip sitting below it
    for k, u_label in enumerate(large_alg.atoms):
        assert u_label[0] == TREE1.labels[proj[k]]
    emb = complete_embedding_from_inclusion(inc)
    assert validate_complete_embedding(emb) == induced_algebra_embedding(inc).atom_map


def test_validate_complete_embedding_rejects_noncomplete():
    inc = poset_inclusion(FLAT2, FLAT3, {"bot": "bot", "x": "x", "y": "y"})
    with pytest.raises((InputError, PreconditionError)):
        complete_embedding_from_inclusion(inc)
