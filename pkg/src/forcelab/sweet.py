"""Sweetness models over finite posets.

A model is a poset with a dense set D and finitely many partitions of D
(levels E_0, ..., E_{N-1}).  ``validate_sweet`` checks the defining clauses
one by one and reports the first counterexample per clause:

- density: D is dense in the poset;
- class-count: every level partitions D into finitely many classes (this
  holds by construction here and is retained for clause parity);
- directedness: each class is upward directed, with bounds inside the class;
- fusion: given p* in D and representatives p_i of its class at each level,
  every level n has a member of [p*]_n bounding all p_i with i >= n;
- continuity: for p <= q in D and a level n there is a level k such that
  every member of [p]_k lies below some member of [q]_n.

``validate_extends`` checks the extension relation between two models along
an order-embedding of the posets: complete suborder, D preserved, partitions
restricting, classes of old points captured inside the old dense set, and no
new point sitting below an old one.

Predicates here return reports; malformed inputs raise instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .amalgam import AmalgamInstance
from .completion import regular_open_completion
from .errors import ConstructionError, InputError
from .posets import Poset
from .embed import PosetInclusion, complete_suborder_failure, poset_inclusion


@dataclass(frozen=True)
class Failure:
    clause: str
    witness: tuple


@dataclass(frozen=True)
class CheckReport:
    holds: bool
    failures: tuple[Failure, ...]

    @staticmethod
    def from_failures(failures) -> "CheckReport":
        failures = tuple(failures)
        return CheckReport(holds=not failures, failures=failures)


@dataclass(frozen=True)
class SweetModel:
    """A dense set with layered partitions over a finite poset.

    ``partitions[n]`` lists the classes of level n as frozensets of labels,
    in canonical order (by least poset index).
    """

    poset: Poset
    dense: frozenset
    partitions: tuple[tuple[frozenset, ...], ...]

    def __post_init__(self):
        for d in self.dense:
            self.poset.index(d)
        if not self.partitions:
            raise InputError("a model needs at least one partition level")
        canon = []
        for level in self.partitions:
            seen: set = set()
            for block in level:
                if not block:
                    raise InputError("partition classes must be nonempty")
                if not block <= self.dense:
                    raise InputError("partition classes must consist of dense elements")
                if block & seen:
                    raise InputError("partition classes must be disjoint")
                seen |= block
            if seen != set(self.dense):
                raise InputError("partition classes must cover the dense set")
            canon.append(tuple(sorted(
                (frozenset(b) for b in level),
                key=lambda b: min(self.poset.index(x) for x in b),
            )))
        object.__setattr__(self, "partitions", tuple(canon))
        object.__setattr__(self, "dense", frozenset(self.dense))

    @property
    def levels(self) -> int:
        return len(self.partitions)

    def dense_mask(self) -> int:
        return self.poset.mask_of(self.dense)

    def class_of(self, n: int, label) -> frozenset:
        for block in self.partitions[n]:
            if label in block:
                return block
        raise InputError(f"{label!r} is not in the dense set")


def _sorted_labels(poset: Poset, labels) -> list:
    return sorted(labels, key=poset.index)


def validate_sweet(model: SweetModel) -> CheckReport:
    poset = model.poset
    failures: list[Failure] = []

    if not poset.is_dense(model.dense_mask()):
        dense_mask = model.dense_mask()
        bad = next(
            i for i in range(len(poset.labels))
            if not poset.up[i] & dense_mask
        )
        failures.append(Failure("density", (poset.labels[bad],)))

    # class-count: levels are finite partitions by construction.

    for n, level in enumerate(model.partitions):
        hit = False
        for block in level:
            members = _sorted_labels(poset, block)
            for p, q in itertools.combinations(members, 2):
                if not any(
                    poset.leq_labels(p, r) and poset.leq_labels(q, r) for r in members
                ):
                    failures.append(Failure("directedness", (n, p, q)))
                    hit = True
                    break
            if hit:
                break
        if hit:
            break

    failures.extend(_fusion_failure(model))
    failures.extend(_continuity_failure(model))
    return CheckReport.from_failures(failures)


def _fusion_failure(model: SweetModel):
    poset = model.poset
    n_levels = model.levels
    for p_star in _sorted_labels(poset, model.dense):
        classes = [
            _sorted_labels(poset, model.class_of(i, p_star)) for i in range(n_levels)
        ]
        total = 1
        for c in classes:
            total *= len(c)
            if total > 500_000:
                raise InputError("model too large for fusion enumeration")
        for picks in itertools.product(*classes):
            for n in range(n_levels):
                if not any(
                    all(poset.leq_labels(picks[i], q) for i in range(n, n_levels))
                    for q in classes[n]
                ):
                    return [Failure("fusion", (p_star, tuple(picks), n))]
    return []


def _continuity_failure(model: SweetModel):
    poset = model.poset
    dense = _sorted_labels(poset, model.dense)
    for p in dense:
        for q in dense:
            if not poset.leq_labels(p, q):
                continue
            for n in range(model.levels):
                target = model.class_of(n, q)
                ok = any(
                    all(
                        any(poset.leq_labels(p2, q2) for q2 in target)
                        for p2 in model.class_of(k, p)
                    )
                    for k in range(model.levels)
                )
                if not ok:
                    return [Failure("continuity", (p, q, n))]
    return []


def centered_cover(model: SweetModel) -> tuple[frozenset, ...]:
    """The level-0 classes: a finite cover of the dense set by directed,
    hence centered, sets.  Requires a valid model."""
    report = validate_sweet(model)
    if not report.holds:
        raise InputError(f"not a sweetness model: {report.failures[0].clause}")
    return model.partitions[0]


def _resolve_inclusion(m1: SweetModel, m2: SweetModel, inclusion) -> PosetInclusion:
    if inclusion is None:
        return poset_inclusion(m1.poset, m2.poset)
    return poset_inclusion(m1.poset, m2.poset, inclusion)


def validate_extends(m1: SweetModel, m2: SweetModel, inclusion=None) -> CheckReport:
    """Check that m2 extends m1 along the given label mapping.

    Clauses reported: "suborder" (complete suborder), "dense-subset"
    (image of D1 inside D2), "restriction" (old partitions are the new ones
    restricted), "class-capture" (classes of old points contain no new
    points), "downward" (new dense points below old ones are old).
    Mismatched level counts are an input error, not a failure.
    """
    if m1.levels != m2.levels:
        raise InputError("models have different numbers of partition levels")
    inc = _resolve_inclusion(m1, m2, inclusion)
    image = {m1.poset.labels[i]: m2.poset.labels[inc.injection[i]]
             for i in range(len(m1.poset.labels))}
    failures: list[Failure] = []

    bad = complete_suborder_failure(inc)
    if bad is not None:
        failures.append(Failure("suborder", (tuple(_sorted_labels(m1.poset, bad)),)))

    dense1 = _sorted_labels(m1.poset, m1.dense)
    for d in dense1:
        if image[d] not in m2.dense:
            failures.append(Failure("dense-subset", (d,)))
            break

    mapped_dense = {d for d in dense1 if image[d] in m2.dense}
    image_set = {image[d] for d in mapped_dense}

    done = False
    for n in range(m1.levels):
        for d in _sorted_labels(m1.poset, mapped_dense):
            for e in _sorted_labels(m1.poset, mapped_dense):
                same1 = e in m1.class_of(n, d)
                same2 = image[e] in m2.class_of(n, image[d])
                if same1 != same2:
                    failures.append(Failure("restriction", (n, d, e)))
                    done = True
                    break
            if done:
                break
        if done:
            break

    done = False
    for n in range(m1.levels):
        for d in _sorted_labels(m1.poset, mapped_dense):
            extra = [
                x for x in _sorted_labels(m2.poset, m2.class_of(n, image[d]))
                if x not in image_set
            ]
            if extra:
                failures.append(Failure("class-capture", (n, d, extra[0])))
                done = True
                break
        if done:
            break

    done = False
    for p in _sorted_labels(m2.poset, m2.dense):
        if p in image_set:
            continue
        for d in _sorted_labels(m1.poset, mapped_dense):
            if m2.poset.leq_labels(p, image[d]):
                failures.append(Failure("downward", (p, d)))
                done = True
                break
        if done:
            break

    return CheckReport.from_failures(failures)


def chain_limit(models) -> SweetModel:
    """Componentwise union of a label-identity chain of models.

    Requires each consecutive pair to satisfy validate_extends; the limit is
    then checked to validate and to extend every element of the chain.
    """
    models = list(models)
    if not models:
        raise InputError("chain must be nonempty")
    for j in range(len(models) - 1):
        rep = validate_extends(models[j], models[j + 1])
        if not rep.holds:
            raise InputError(
                f"chain link {j} does not extend: {rep.failures[0].clause}"
            )
    last = models[-1]
    dense = frozenset().union(*(m.dense for m in models))
    partitions = []
    for n in range(last.levels):
        parent: dict = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        for m in models:
            for block in m.partitions[n]:
                items = sorted(block, key=last.poset.index)
                for other in items[1:]:
                    ra, rb = find(items[0]), find(other)
                    if ra != rb:
                        parent[rb] = ra
        groups: dict = {}
        for d in dense:
            groups.setdefault(find(d), set()).add(d)
        partitions.append(tuple(frozenset(g) for g in groups.values()))
    limit = SweetModel(poset=last.poset, dense=dense, partitions=tuple(partitions))

    rep = validate_sweet(limit)
    if not rep.holds:
        raise ConstructionError(
            "chain limit does not validate",
            certificate={"clause": rep.failures[0].clause},
        )
    for j, m in enumerate(models):
        rep = validate_extends(m, limit)
        if not rep.holds:
            raise ConstructionError(
                "chain limit does not extend a chain member",
                certificate={"index": j, "clause": rep.failures[0].clause},
            )
    return limit


@dataclass(frozen=True)
class AmalgamSweetResult:
    model: SweetModel
    validation: CheckReport
    extends_left: CheckReport
    extends_right: CheckReport


def _image_model(model: SweetModel, algebra) -> SweetModel:
    """Transport a model to the nonzero elements of its poset's completion.

    Requires every partition level to factor through the Boolean value map;
    otherwise the image partition would not be well defined.
    """
    value = {lbl: algebra.value_of_label(lbl) for lbl in model.poset.labels}
    for n, level in enumerate(model.partitions):
        owner: dict = {}
        for bi, block in enumerate(level):
            for d in block:
                v = value[d]
                if owner.setdefault(v, bi) != bi:
                    raise InputError(
                        f"partition level {n} does not factor through the completion"
                    )
    dense = frozenset(value[d] for d in model.dense)
    partitions = tuple(
        tuple(frozenset(value[d] for d in block) for block in level)
        for level in model.partitions
    )
    return SweetModel(poset=algebra.nonzero_poset(), dense=dense, partitions=partitions)


def amalgam_sweet(m1: SweetModel, m2: SweetModel, inst: AmalgamInstance) -> AmalgamSweetResult:
    """Amalgamate two sweetness models over an amalgam of their completions.

    The dense set consists of pairs whose coordinates are Boolean values of
    dense conditions; classes are products of the transported classes.  The
    result is validated, and both extension reports (along the canonical
    injections) are returned; nothing is assumed to hold.
    """
    if m1.levels != m2.levels:
        raise InputError("models have different numbers of partition levels")
    if inst.left != regular_open_completion(m1.poset):
        raise InputError("amalgam's left factor is not the first model's completion")
    if inst.right != regular_open_completion(m2.poset):
        raise InputError("amalgam's right factor is not the second model's completion")
    left_model = _image_model(m1, inst.left)
    right_model = _image_model(m2, inst.right)

    members = set(inst.amalgam.labels)
    dense = frozenset(
        (b1, b2)
        for b1 in left_model.dense
        for b2 in right_model.dense
        if (b1, b2) in members
    )
    partitions = []
    for n in range(m1.levels):
        level = []
        for blk1 in left_model.partitions[n]:
            for blk2 in right_model.partitions[n]:
                block = frozenset(
                    (b1, b2) for b1 in blk1 for b2 in blk2 if (b1, b2) in dense
                )
                if block:
                    level.append(block)
        partitions.append(tuple(level))
    model = SweetModel(poset=inst.amalgam, dense=dense, partitions=tuple(partitions))

    return AmalgamSweetResult(
        model=model,
        validation=validate_sweet(model),
        extends_left=validate_extends(
            left_model, model, inclusion=lambda b: (b, inst.right.full)
        ),
        extends_right=validate_extends(
            right_model, model, inclusion=lambda b: (inst.left.full, b)
        ),
    )
