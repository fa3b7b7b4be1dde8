"""Amalgamation of two completions over a shared base.

Conditions of the amalgam are pairs (b1, b2) of nonzero elements, one from
each factor, such that some atom of the base forces both coordinates into
the respective quotients; concretely, some base atom has its image meeting
b1 on the left and b2 on the right.  ``member_by_definition`` evaluates the
original existential-witness membership test over all base conditions and is
kept as an independent oracle.

The iso-extension step amalgamates a poset's completion with itself over the
domain of a partial isomorphism, producing a larger algebra in which the iso
extends to a copy of the whole original algebra.  Iterating it with inverses
gives the back-and-forth tower used to extend partial isos everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

from .completion import CompleteAlgebra, Subalgebra, regular_open_completion
from .embed import (
    BooleanEmbedding,
    CompleteEmbedding,
    PosetInclusion,
    induced_algebra_embedding,
    poset_inclusion,
    validate_complete_embedding,
)
from .errors import ConstructionError, InputError
from .posets import Poset, _bit_indices


def _require_base_embedding(emb: CompleteEmbedding, base: CompleteAlgebra, side: str) -> tuple:
    expected = tuple(sorted(range(1, base.full + 1)))
    if emb.source.labels != expected:
        raise InputError(f"{side} embedding must be defined on the base algebra's conditions")
    atom_map = validate_complete_embedding(emb)
    preimages = [0] * base.atom_count
    for x, a in enumerate(atom_map):
        preimages[a] |= 1 << x
    return tuple(preimages)


@dataclass(frozen=True)
class AmalgamInstance:
    base: CompleteAlgebra
    left: CompleteAlgebra
    right: CompleteAlgebra
    f1: CompleteEmbedding
    f2: CompleteEmbedding
    amalgam: Poset
    completion: CompleteAlgebra
    inj_left: PosetInclusion
    inj_right: PosetInclusion

    def value(self, b1: int, b2: int) -> int:
        """Boolean value of the pair condition (b1, b2) in the amalgam's completion."""
        return self.completion.dense_map[self.amalgam.index((b1, b2))]

    def left_value(self, b1: int) -> int:
        return self.value(b1, self.right.full)

    def right_value(self, b2: int) -> int:
        return self.value(self.left.full, b2)


def amalgamate(
    base: CompleteAlgebra,
    left: CompleteAlgebra,
    right: CompleteAlgebra,
    f1: CompleteEmbedding,
    f2: CompleteEmbedding,
) -> AmalgamInstance:
    """Amalgamate two completions over embeddings of a common base algebra."""
    if f1.target != left:
        raise InputError("left embedding must land in the left algebra")
    if f2.target != right:
        raise InputError("right embedding must land in the right algebra")
    pre1 = _require_base_embedding(f1, base, "left")
    pre2 = _require_base_embedding(f2, base, "right")

    labels = []
    for b1 in range(1, left.full + 1):
        for b2 in range(1, right.full + 1):
            if any(
                pre1[a] & b1 and pre2[a] & b2 for a in range(base.atom_count)
            ):
                labels.append((b1, b2))
    labels.sort()

    def leq(p, q):
        return q[0] & ~p[0] == 0 and q[1] & ~p[1] == 0

    amalgam = Poset.from_relation(tuple(labels), leq)
    completion = regular_open_completion(amalgam)
    inj_left = poset_inclusion(
        left.nonzero_poset(), amalgam, lambda b: (b, right.full)
    )
    inj_right = poset_inclusion(
        right.nonzero_poset(), amalgam, lambda b: (left.full, b)
    )
    return AmalgamInstance(
        base=base,
        left=left,
        right=right,
        f1=f1,
        f2=f2,
        amalgam=amalgam,
        completion=completion,
        inj_left=inj_left,
        inj_right=inj_right,
    )


def identity_embedding(alg: CompleteAlgebra) -> CompleteEmbedding:
    poset = alg.nonzero_poset()
    return CompleteEmbedding(source=poset, target=alg, mapping=poset.labels)


def base_embedding_from_inclusion(inc) -> CompleteEmbedding:
    """Turn a complete suborder of posets into an amalgam-ready embedding.

    The result maps the nonzero elements of the small completion into the
    large completion along the dual of the atom projection, in the shape
    ``amalgamate`` expects for its f1/f2 arguments.
    """
    from .embed import induced_algebra_embedding

    be = induced_algebra_embedding(inc)
    nz = be.source.nonzero_poset()
    return CompleteEmbedding(
        source=nz,
        target=be.target,
        mapping=tuple(be.apply(b) for b in nz.labels),
    )


def identity_amalgam(alg: CompleteAlgebra) -> AmalgamInstance:
    e = identity_embedding(alg)
    return amalgamate(alg, alg, alg, e, e)


def member_by_definition(inst: AmalgamInstance, b1: int, b2: int) -> bool:
    """Existential-witness membership: some base condition forces both
    coordinates into the quotients.

    Brute force over all nonzero base elements and all their extensions,
    through the raw embedding tables; the oracle route for the amalgam's
    atom-based membership rule.
    """
    inst.left.check_element(b1)
    inst.right.check_element(b2)
    if b1 == 0 or b2 == 0:
        return False
    for p in range(1, inst.base.full + 1):
        ok = True
        for p2 in range(1, inst.base.full + 1):
            if p2 & ~p:
                continue
            if not (inst.f1.value(p2) & b1) or not (inst.f2.value(p2) & b2):
                ok = False
                break
        if ok:
            return True
    return False


def check_identification(inst: AmalgamInstance) -> bool:
    """Do both copies of each base element share one Boolean value?

    Compares the completion values of (f1(b), 1) and (1, f2(b)) for every
    nonzero base element b.
    """
    for b in range(1, inst.base.full + 1):
        if inst.left_value(inst.f1.value(b)) != inst.right_value(inst.f2.value(b)):
            return False
    return True


def extension_embedding(inst: AmalgamInstance) -> CompleteEmbedding:
    """The left factor embedded into the amalgam's completion, b |-> value(b, 1).

    On the image of f1 this agrees with the right copy of the matching base
    element, so it extends the correspondence f2 after f1-inverse.
    """
    poset = inst.left.nonzero_poset()
    return CompleteEmbedding(
        source=poset,
        target=inst.completion,
        mapping=tuple(inst.left_value(b) for b in poset.labels),
    )


@dataclass(frozen=True)
class PartialIso:
    """An isomorphism between two subalgebras of one ambient algebra.

    ``pairs`` lists (element of dom, element of rng), sorted by first
    coordinate, total and bijective.
    """

    ambient: CompleteAlgebra
    dom: Subalgebra
    rng: Subalgebra
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.dom.atom_count != self.ambient.atom_count:
            raise InputError("domain lives in a different ambient algebra")
        if self.rng.atom_count != self.ambient.atom_count:
            raise InputError("range lives in a different ambient algebra")
        table = dict(self.pairs)
        if len(table) != len(self.pairs) or set(table) != set(self.dom.members):
            raise InputError("iso must be defined exactly on the domain subalgebra")
        if set(table.values()) != set(self.rng.members) or len(set(table.values())) != len(table):
            raise InputError("iso must be onto the range subalgebra, one to one")
        full = self.ambient.full
        if table[0] != 0 or table[full] != full:
            raise InputError("iso must fix zero and the unit")
        for b, fb in self.pairs:
            if table[full & ~b] != full & ~fb:
                raise InputError("iso must preserve complement")
            for c, fc in self.pairs:
                if table[b & c] != fb & fc:
                    raise InputError("iso must preserve meet")
        if self.pairs != tuple(sorted(self.pairs)):
            raise InputError("pairs must be sorted by domain element")

    def apply(self, b: int) -> int:
        for d, r in self.pairs:
            if d == b:
                return r
        raise InputError(f"iso undefined at {b!r}")

    def inverse(self) -> "PartialIso":
        return PartialIso(
            ambient=self.ambient,
            dom=self.rng,
            rng=self.dom,
            pairs=tuple(sorted((r, d) for d, r in self.pairs)),
        )

    @staticmethod
    def build(ambient: CompleteAlgebra, dom: Subalgebra, mapping: dict) -> "PartialIso":
        rng = Subalgebra(ambient.atom_count, frozenset(mapping.values()))
        return PartialIso(
            ambient=ambient,
            dom=dom,
            rng=rng,
            pairs=tuple(sorted(mapping.items())),
        )

    @staticmethod
    def identity(ambient: CompleteAlgebra, sub: Subalgebra) -> "PartialIso":
        return PartialIso(
            ambient=ambient,
            dom=sub,
            rng=sub,
            pairs=tuple(sorted((b, b) for b in sub.members)),
        )


@dataclass(frozen=True)
class IsoExtensionStep:
    """One amalgamation step extending a partial iso.

    ``embed`` carries the original algebra into the new completion (the left
    copy); ``iso`` maps that whole copy onto the right copy and agrees with
    the input iso on the embedded domain.
    """

    instance: AmalgamInstance
    embed: BooleanEmbedding
    iso: PartialIso


def _copy_embedding(inst: AmalgamInstance, side: str) -> BooleanEmbedding:
    inc = inst.inj_left if side == "left" else inst.inj_right
    be = induced_algebra_embedding(inc)
    return BooleanEmbedding(
        source=inst.left if side == "left" else inst.right,
        target=inst.completion,
        atom_map=be.atom_map,
    )


def iso_extension_step(poset: Poset, iso: PartialIso) -> IsoExtensionStep:
    """Amalgamate the completion of ``poset`` with itself over ``iso``.

    The left factor receives the iso side, the right factor the plain
    inclusion; the returned iso sends the left copy of each element to its
    right copy, which extends the input iso once the original algebra is
    identified with its left copy.
    """
    alg = regular_open_completion(poset)
    if iso.ambient != alg:
        raise InputError("iso must live over the completion of the given poset")
    if alg.atom_count > 10:
        raise InputError("algebra too large for an extension step")
    blocks = iso.dom.blocks()
    k = len(blocks)
    base = regular_open_completion(Poset.flat(tuple(range(k))))

    def union_of(block_mask: int) -> int:
        out = 0
        for j in _bit_indices(block_mask):
            out |= blocks[j]
        return out

    source = base.nonzero_poset()
    f1 = CompleteEmbedding(
        source=source,
        target=alg,
        mapping=tuple(iso.apply(union_of(m)) for m in source.labels),
    )
    f2 = CompleteEmbedding(
        source=source,
        target=alg,
        mapping=tuple(union_of(m) for m in source.labels),
    )
    inst = amalgamate(base, alg, alg, f1, f2)

    left_be = _copy_embedding(inst, "left")
    right_be = _copy_embedding(inst, "right")
    new_iso = PartialIso(
        ambient=inst.completion,
        dom=left_be.image_subalgebra(),
        rng=right_be.image_subalgebra(),
        pairs=tuple(sorted((left_be.apply(c), right_be.apply(c)) for c in range(alg.full + 1))),
    )
    for d in iso.dom.members:
        if new_iso.apply(left_be.apply(d)) != left_be.apply(iso.apply(d)):
            raise ConstructionError(
                "extension step does not extend the iso",
                certificate={"element": d},
            )
    return IsoExtensionStep(instance=inst, embed=left_be, iso=new_iso)


@dataclass(frozen=True)
class BackAndForthStage:
    algebra: CompleteAlgebra
    iso: PartialIso
    embed: BooleanEmbedding | None
    instance: AmalgamInstance | None


def back_and_forth_tower(poset: Poset, iso: PartialIso, steps: int) -> list[BackAndForthStage]:
    """Alternately extend the iso and its inverse by amalgamation.

    Stage 0 is the input; after an odd stage the iso is total on the carried
    copy of the previous algebra, after an even stage it is onto it.  Each
    stage is checked to extend the previous one along the carrying embedding.
    """
    if steps < 0:
        raise InputError("steps must be nonnegative")
    stages = [BackAndForthStage(
        algebra=regular_open_completion(poset), iso=iso, embed=None, instance=None
    )]
    cur_poset = poset
    for m in range(1, steps + 1):
        prev = stages[-1]
        if m % 2 == 1:
            step = iso_extension_step(cur_poset, prev.iso)
            new_iso = step.iso
        else:
            step = iso_extension_step(cur_poset, prev.iso.inverse())
            new_iso = step.iso.inverse()
        for d, r in prev.iso.pairs:
            if new_iso.apply(step.embed.apply(d)) != step.embed.apply(r):
                raise ConstructionError(
                    "stage does not extend the previous iso",
                    certificate={"stage": m, "element": d},
                )
        carried = step.embed.image_subalgebra().members
        covered = new_iso.dom.members if m % 2 == 1 else new_iso.rng.members
        if not carried <= covered:
            raise ConstructionError(
                "stage does not cover the carried copy",
                certificate={"stage": m},
            )
        stages.append(BackAndForthStage(
            algebra=step.instance.completion,
            iso=new_iso,
            embed=step.embed,
            instance=step.instance,
        ))
        cur_poset = step.instance.amalgam
    return stages
