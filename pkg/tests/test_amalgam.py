"""Amalgamation over a common base: membership oracle, identification,
canonical injections, and the back-and-forth iso extension."""

import pytest

from forcelab import (
    InputError,
    PartialIso,
    Poset,
    Subalgebra,
    back_and_forth_tower,
    check_identification,
    extension_embedding,
    identity_amalgam,
    is_complete_suborder,
    iso_extension_step,
    member_by_definition,
    regular_open_completion,
    validate_complete_embedding,
)
from forcelab.lemmalab import _amalgam_instance

from helpers import atom_member, bits

FORK = Poset.flat(("a", "b"))
FORK_ALG = regular_open_completion(FORK)


def all_pairs(inst):
    for b1 in range(1, inst.left.full + 1):
        for b2 in range(1, inst.right.full + 1):
            yield b1, b2


def test_trivial_base_is_full_product():
    inst = _amalgam_instance(1, (0, 0), (0, 0))
    assert len(inst.amalgam) == 9
    assert set(inst.amalgam.labels) == {
        (b1, b2) for b1 in (1, 2, 3) for b2 in (1, 2, 3)
    }
    bot = inst.amalgam.labels[inst.amalgam.bottom]
    assert bot == (3, 3)


def test_identity_amalgam_membership_is_intersection():
    inst = identity_amalgam(FORK_ALG)
    got = set(inst.amalgam.labels)
    expected = {(b1, b2) for b1, b2 in all_pairs(inst) if b1 & b2}
    assert got == expected


def test_identity_amalgam_completion_collapses_to_base():
    inst = identity_amalgam(FORK_ALG)
    assert inst.completion.atom_count == FORK_ALG.atom_count
    # atom k of the base reappears as the value of the diagonal pair
    atom_values = [
        inst.value(1 << k, 1 << k) for k in range(FORK_ALG.atom_count)
    ]
    assert sorted(atom_values) == [
        1 << i for i in range(inst.completion.atom_count)
    ]
    for b1, b2 in all_pairs(inst):
        if (b1, b2) in set(inst.amalgam.labels):
            expected = 0
            for k in bits(b1 & b2):
                expected |= atom_values[k]
            assert inst.value(b1, b2) == expected


@pytest.mark.parametrize(
    "base_atoms,s1,s2",
    [
        (1, (0, 0), (0, 0)),
        (2, (0, 1), (0, 1)),
        (2, (0, 0, 1), (0, 1, 1)),
        (2, (0, 0, 1, 1), (0, 1, 0, 1)),
        (2, (0, 1, 1, 0), (1, 1, 0, 0)),
    ],
)
def test_membership_routes_agree(base_atoms, s1, s2):
    inst = _amalgam_instance(base_atoms, s1, s2)
    members = set(inst.amalgam.labels)
    for b1, b2 in all_pairs(inst):
        by_definition = member_by_definition(inst, b1, b2)
        by_atoms = atom_member(inst, b1, b2)
        assert by_definition == by_atoms == ((b1, b2) in members)


def test_member_by_definition_checks_elements():
    inst = identity_amalgam(FORK_ALG)
    with pytest.raises(InputError):
        member_by_definition(inst, 5, 1)
    assert member_by_definition(inst, 0, 1) is False


def test_identification_on_identity_and_distinct_embeddings():
    assert check_identification(identity_amalgam(FORK_ALG))
    inst = _amalgam_instance(2, (0, 0, 1), (0, 1, 1))
    assert check_identification(inst)
    # b = full: both copies are the bottom condition
    assert inst.left_value(inst.f1.value(inst.base.full)) == inst.completion.full


def test_canonical_injections_are_complete():
    for inst in (
        identity_amalgam(FORK_ALG),
        _amalgam_instance(1, (0, 0), (0, 0)),
        _amalgam_instance(2, (0, 0, 1), (0, 1, 1)),
    ):
        assert is_complete_suborder(inst.inj_left)
        assert is_complete_suborder(inst.inj_right)


def test_extension_embedding_laws():
    inst = _amalgam_instance(1, (0, 0), (0, 0))
    emb = extension_embedding(inst)
    assert emb.value(inst.left.full) == inst.completion.full
    validate_complete_embedding(emb)
    # trivial base: the left factor rides the first product coordinate
    for k in range(inst.left.atom_count):
        expected = 0
        for i, lbl in enumerate(inst.completion.atoms):
            if lbl[0] == 1 << k:
                expected |= 1 << i
        assert emb.value(1 << k) == expected


def test_extension_embedding_respects_identity_collapse():
    inst = identity_amalgam(FORK_ALG)
    emb = extension_embedding(inst)
    atom_values = [
        inst.value(1 << k, 1 << k) for k in range(FORK_ALG.atom_count)
    ]
    for b in range(1, FORK_ALG.full + 1):
        expected = 0
        for k in bits(b):
            expected |= atom_values[k]
        assert emb.value(b) == expected
        # the left copy agrees with the right copy of the same element
        assert inst.left_value(b) == inst.right_value(b)


def test_iso_extension_identity_on_trivial_subalgebra():
    iso = PartialIso.identity(FORK_ALG, Subalgebra.trivial(2))
    step = iso_extension_step(FORK, iso)
    # trivial dom: amalgam over a one-atom base is the full product
    assert len(step.instance.amalgam) == 9
    assert step.iso.apply(step.embed.apply(0)) == 0
    for b in range(1, FORK_ALG.full + 1):
        left_copy = step.embed.apply(b)
        right_copy = step.iso.apply(left_copy)
        assert right_copy == step.instance.right_value(b)


def test_iso_extension_identity_everywhere_collapses():
    iso = PartialIso.identity(FORK_ALG, Subalgebra.whole(2))
    step = iso_extension_step(FORK, iso)
    assert step.instance.completion.atom_count == FORK_ALG.atom_count
    for b in range(FORK_ALG.full + 1):
        assert step.iso.apply(step.embed.apply(b)) == step.embed.apply(b)


def test_iso_extension_atom_swap():
    swap = {0: 0, 1: 2, 2: 1, 3: 3}
    iso = PartialIso.build(FORK_ALG, Subalgebra.whole(2), swap)
    step = iso_extension_step(FORK, iso)
    emb = step.embed
    for b, fb in swap.items():
        assert step.iso.apply(emb.apply(b)) == emb.apply(fb)
    # a genuine isomorphism of the left copy onto the right copy
    dom = step.iso.dom.members
    for x in dom:
        for y in dom:
            assert step.iso.apply(x & y) == step.iso.apply(x) & step.iso.apply(y)


def test_back_and_forth_tower_stages():
    swap = {0: 0, 1: 2, 2: 1, 3: 3}
    iso = PartialIso.build(FORK_ALG, Subalgebra.whole(2), swap)
    stages = back_and_forth_tower(FORK, iso, 2)
    assert len(stages) == 3
    assert stages[0].iso is iso
    one = back_and_forth_tower(FORK, iso, 1)[1]
    assert one.iso.pairs == stages[1].iso.pairs
    # odd stage: iso total on the carried copy; even stage: onto it
    carried1 = stages[1].embed.image_subalgebra().members
    assert carried1 <= stages[1].iso.dom.members
    carried2 = stages[2].embed.image_subalgebra().members
    assert carried2 <= stages[2].iso.rng.members


def test_back_and_forth_identity_stays_identity():
    iso = PartialIso.identity(FORK_ALG, Subalgebra.whole(2))
    stages = back_and_forth_tower(FORK, iso, 2)
    for stage in stages[1:]:
        prev_members = stage.embed.source.full + 1
        for b in range(prev_members):
            assert stage.iso.apply(stage.embed.apply(b)) == stage.embed.apply(b)


def test_partial_iso_validation():
    with pytest.raises(InputError):
        PartialIso.build(FORK_ALG, Subalgebra.whole(2), {0: 0, 1: 1, 2: 2, 3: 0})
    with pytest.raises(InputError):
        PartialIso.build(FORK_ALG, Subalgebra.trivial(2), {0: 3, 3: 0})
    with pytest.raises(InputError):
        iso_extension_step(
            Poset.chain(2),
            PartialIso.identity(FORK_ALG, Subalgebra.trivial(2)),
        )
