"""Suborders, complete embeddings, and quotient names.

A ``PosetInclusion`` is an order-embedding of one finite poset into another
taking bottom to bottom.  Being a *complete* suborder means every maximal
antichain of the small poset stays maximal in the large one; that is the
definitional route.  The second route goes through reductions, and the two
are proved equivalent by the test suite rather than assumed.

For a complete suborder, each atom of the large completion projects to a
unique atom of the small completion; the dual of that projection embeds the
small completion into the large one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .completion import CompleteAlgebra, Subalgebra, regular_open_completion
from .errors import ConstructionError, InputError, PreconditionError
from .posets import Poset, _bit_indices


@dataclass(frozen=True)
class PosetInclusion:
    """An order-embedding small -> large with bottom mapped to bottom.

    ``injection[i]`` is the large index of small element i.
    """

    small: Poset
    large: Poset
    injection: tuple[int, ...]

    def __post_init__(self):
        if len(self.injection) != len(self.small.labels):
            raise InputError("injection must be total on the small poset")
        if len(set(self.injection)) != len(self.injection):
            raise InputError("injection must be one to one")
        for j in self.injection:
            if not 0 <= j < len(self.large.labels):
                raise InputError(f"injection hits no element: {j!r}")
        n = len(self.small.labels)
        for i in range(n):
            for j in range(n):
                small_leq = self.small.leq(i, j)
                large_leq = self.large.leq(self.injection[i], self.injection[j])
                if small_leq != large_leq:
                    raise InputError(
                        "not an order-embedding at "
                        f"({self.small.labels[i]!r}, {self.small.labels[j]!r})"
                    )
        if self.injection[self.small.bottom] != self.large.bottom:
            raise InputError("bottom must map to bottom")

    def image_mask(self) -> int:
        m = 0
        for j in self.injection:
            m |= 1 << j
        return m


def poset_inclusion(small: Poset, large: Poset, mapping=None) -> PosetInclusion:
    """Build an inclusion from a label mapping (identity on labels by default)."""
    if mapping is None:
        injection = tuple(large.index(lbl) for lbl in small.labels)
    elif callable(mapping):
        injection = tuple(large.index(mapping(lbl)) for lbl in small.labels)
    else:
        mapping = dict(mapping)
        missing = [lbl for lbl in small.labels if lbl not in mapping]
        if missing:
            raise InputError(f"mapping undefined at {missing[0]!r}")
        injection = tuple(large.index(mapping[lbl]) for lbl in small.labels)
    return PosetInclusion(small, large, injection)


def preserves_incompatibility(inc: PosetInclusion) -> bool:
    n = len(inc.small.labels)
    for i in range(n):
        for j in range(i + 1, n):
            if not inc.small.compatible(i, j) and inc.large.compatible(
                inc.injection[i], inc.injection[j]
            ):
                return False
    return True


def complete_suborder_failure(inc: PosetInclusion):
    """A maximal antichain of the small poset that fails in the large one.

    Returns None when the inclusion is a complete suborder.
    """
    for mask in inc.small.maximal_antichains():
        image = 0
        for i in _bit_indices(mask):
            image |= 1 << inc.injection[i]
        if not inc.large.is_maximal_antichain(image):
            return frozenset(inc.small.labels[i] for i in _bit_indices(mask))
    return None


def is_complete_suborder(inc: PosetInclusion) -> bool:
    """Definitional route: every maximal antichain stays maximal."""
    return complete_suborder_failure(inc) is None


def reductions(inc: PosetInclusion, q: int) -> int:
    """Small elements p such that every small extension of p is compatible with q.

    Returned as a bitmask over small indices; q is a large index.
    """
    if not 0 <= q < len(inc.large.labels):
        raise InputError(f"no large element with index {q!r}")
    out = 0
    for p in range(len(inc.small.labels)):
        if all(
            inc.large.compatible(inc.injection[p2], q)
            for p2 in _bit_indices(inc.small.up[p])
        ):
            out |= 1 << p
    return out


def is_complete_suborder_via_reductions(inc: PosetInclusion) -> bool:
    """Second route: incompatibility is preserved and every large element reduces.

    Nonempty reductions alone are strictly weaker; the incompatibility clause
    is part of this criterion.
    """
    if not preserves_incompatibility(inc):
        return False
    return all(reductions(inc, q) for q in range(len(inc.large.labels)))


def _require_complete(inc: PosetInclusion) -> None:
    if not is_complete_suborder(inc):
        raise PreconditionError("inclusion is not a complete suborder")


def quotient_forces(inc: PosetInclusion, p, q, *, _checked: bool = False) -> bool:
    """Does small condition p force large condition q into the quotient?

    Holds exactly when every small extension of p is compatible with q.
    Arguments are labels.
    """
    if not _checked:
        _require_complete(inc)
    pi = inc.small.index(p)
    qi = inc.large.index(q)
    return bool(reductions(inc, qi) >> pi & 1)


def atom_projection(inc: PosetInclusion) -> tuple[int, ...]:
    """For each maximal element of the large poset, the unique maximal element
    of the small poset whose image lies below it.

    Entry k is a small index; positions follow the atom order of the large
    completion (maximal elements by index).  Requires a complete suborder.
    """
    _require_complete(inc)
    small_max = _bit_indices(inc.small.maximal_mask())
    out = []
    for u in _bit_indices(inc.large.maximal_mask()):
        hits = [t for t in small_max if inc.large.leq(inc.injection[t], u)]
        if len(hits) != 1:
            raise ConstructionError(
                f"atom projection not unique at {inc.large.labels[u]!r}",
                certificate={"atom": inc.large.labels[u], "hits": len(hits)},
            )
        out.append(hits[0])
    return tuple(out)


@dataclass(frozen=True)
class BooleanEmbedding:
    """Embedding of one finite atom algebra into another, dual to an atom map.

    ``atom_map[x]`` is the source atom that target atom x projects to;
    the embedding sends a source element to the union of its preimage.
    """

    source: CompleteAlgebra
    target: CompleteAlgebra
    atom_map: tuple[int, ...]

    def __post_init__(self):
        if len(self.atom_map) != self.target.atom_count:
            raise InputError("atom map must be total on target atoms")
        hit = set(self.atom_map)
        if not hit <= set(range(self.source.atom_count)):
            raise InputError("atom map hits no source atom")
        if hit != set(range(self.source.atom_count)):
            raise InputError("atom map must be onto the source atoms")

    def apply(self, mask: int) -> int:
        self.source.check_element(mask)
        out = 0
        for x, a in enumerate(self.atom_map):
            if mask >> a & 1:
                out |= 1 << x
        return out

    def image_subalgebra(self) -> Subalgebra:
        return Subalgebra(
            self.target.atom_count,
            frozenset(self.apply(m) for m in range(self.source.full + 1)),
        )


def induced_algebra_embedding(inc: PosetInclusion) -> BooleanEmbedding:
    """The completion embedding dual to the atom projection of a complete suborder."""
    proj = atom_projection(inc)
    small_alg = regular_open_completion(inc.small)
    large_alg = regular_open_completion(inc.large)
    small_max = _bit_indices(inc.small.maximal_mask())
    atom_of_small_index = {t: k for k, t in enumerate(small_max)}
    return BooleanEmbedding(
        source=small_alg,
        target=large_alg,
        atom_map=tuple(atom_of_small_index[t] for t in proj),
    )


def saturated_subalgebra(inc: PosetInclusion) -> Subalgebra:
    """Image of the small completion inside the large one, as a subalgebra."""
    return induced_algebra_embedding(inc).image_subalgebra()


@dataclass(frozen=True)
class CompleteEmbedding:
    """A map from poset conditions to nonzero elements of an atom algebra.

    ``mapping[i]`` is the target element assigned to source element i.
    Validation shows every such embedding is the dual of a surjection from
    target atoms onto the atoms of the source completion.
    """

    source: Poset
    target: CompleteAlgebra
    mapping: tuple[int, ...]

    def value(self, label) -> int:
        return self.mapping[self.source.index(label)]


def validate_complete_embedding(emb: CompleteEmbedding) -> tuple[int, ...]:
    """Check the embedding laws; return the witnessing atom surjection.

    The returned tuple sends each target atom to the atom of the source
    completion (a maximal source element, in completion atom order) whose
    image contains it.  Raises on any violated law.
    """
    src, alg = emb.source, emb.target
    n = len(src.labels)
    if len(emb.mapping) != n:
        raise InputError("embedding must be total on the source poset")
    for b in emb.mapping:
        alg.check_element(b)
        if b == 0:
            raise InputError("embedding must avoid zero")
    if len(set(emb.mapping)) != n:
        raise InputError("embedding must be one to one")
    if emb.mapping[src.bottom] != alg.full:
        raise InputError("weakest condition must map to the unit")
    for i in range(n):
        for j in range(n):
            if src.leq(i, j) and emb.mapping[j] & ~emb.mapping[i]:
                raise InputError(
                    f"order not preserved at ({src.labels[i]!r}, {src.labels[j]!r})"
                )
            if j > i and not src.compatible(i, j) and emb.mapping[i] & emb.mapping[j]:
                raise InputError(
                    "incompatibility not preserved at "
                    f"({src.labels[i]!r}, {src.labels[j]!r})"
                )
    whole = alg.nonzero_poset()
    image_poset = alg.nonzero_poset(members=set(emb.mapping))
    if not is_complete_suborder(poset_inclusion(image_poset, whole)):
        raise InputError("image is not a complete suborder of the target")

    src_alg = regular_open_completion(src)
    top_indices = _bit_indices(src.maximal_mask())
    atom_map = []
    for x in range(alg.atom_count):
        hits = [k for k, t in enumerate(top_indices) if emb.mapping[t] >> x & 1]
        if len(hits) != 1:
            raise ConstructionError(
                "embedding image of the maximal antichain does not partition atoms",
                certificate={"atom": x, "hits": len(hits)},
            )
        atom_map.append(hits[0])
    for i in range(n):
        expected = 0
        for x, a in enumerate(atom_map):
            if src_alg.dense_map[i] >> a & 1:
                expected |= 1 << x
        if expected != emb.mapping[i]:
            raise ConstructionError(
                "embedding does not factor through the source completion",
                certificate={"element": src.labels[i]},
            )
    return tuple(atom_map)


def complete_embedding_from_inclusion(inc: PosetInclusion) -> CompleteEmbedding:
    """Package a complete suborder as an embedding of the small poset into
    the large completion."""
    be = induced_algebra_embedding(inc)
    return CompleteEmbedding(
        source=inc.small,
        target=be.target,
        mapping=tuple(be.apply(be.source.dense_map[i]) for i in range(len(inc.small.labels))),
    )


@dataclass(frozen=True)
class QuotientName:
    """The quotient of a complete suborder, tabulated atom by atom.

    ``table[a]`` is the bitmask of large elements forced into the quotient
    by atom a of the small completion (equivalently: compatible with every
    small condition in the filter that atom generates).
    """

    inclusion: PosetInclusion
    algebra: CompleteAlgebra
    table: tuple[int, ...]

    def fiber(self, atom: int) -> Poset:
        """The quotient poset at one atom: large conditions from the table,
        under the induced order."""
        if not 0 <= atom < len(self.table):
            raise InputError(f"no completion atom with index {atom!r}")
        labels = [self.inclusion.large.labels[q] for q in _bit_indices(self.table[atom])]
        return self.inclusion.large.induced(labels)


def quotient_name(inc: PosetInclusion) -> QuotientName:
    _require_complete(inc)
    algebra = regular_open_completion(inc.small)
    table = []
    for a in range(algebra.atom_count):
        filt = [p for p in range(len(inc.small.labels)) if algebra.dense_map[p] >> a & 1]
        mask = 0
        for q in range(len(inc.large.labels)):
            if all(inc.large.compatible(inc.injection[p], q) for p in filt):
                mask |= 1 << q
        table.append(mask)
    return QuotientName(inclusion=inc, algebra=algebra, table=tuple(table))


def quotient_at_atom(inc: PosetInclusion, atom: int) -> Poset:
    return quotient_name(inc).fiber(atom)
