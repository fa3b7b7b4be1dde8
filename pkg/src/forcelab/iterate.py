"""Two-step composition, Hechler forcing, and towers of sweetness models.

A two-step poset over P has conditions (p, tau) where tau names a fiber
condition at each atom of RO(P) below the value of p; at atoms not below p
the name is pruned to the fiber's weakest element, which makes labels
canonical.  ``two_step_equivalence`` compares composing with the quotient
fibers of a complete suborder against the big poset directly, using atom
traces over the common part.

Towers bundle a top poset with a nested sequence of level subsets, each
carrying a sweetness model.  ``tower_leq`` checks the order relation on a
witness set of levels: levelwise extension plus preservation of quotient
forcing into the top.  ``tower_chain_merge``, ``tower_hechler`` and
``tower_amalgamate`` build new towers and check, rather than assume, the
relations the constructions are meant to satisfy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .completion import CompleteAlgebra, Subalgebra, regular_open_completion
from .embed import (
    PosetInclusion,
    atom_projection,
    poset_inclusion,
    quotient_forces,
    is_complete_suborder,
    saturated_subalgebra,
)
from .errors import ConstructionError, InputError
from .posets import Poset, _bit_indices
from .sweet import CheckReport, Failure, SweetModel, validate_extends, validate_sweet


# ---------------------------------------------------------------------------
# Hechler forcing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HechlerParams:
    """Finite Hechler forcing: stems up to length m, values bounded by h."""

    m: int
    h: int

    def __post_init__(self):
        if self.m < 0 or self.h < 0:
            raise InputError("Hechler parameters must be nonnegative")
        if (self.m + 1) * (self.h + 1) ** self.m > 2000:
            raise InputError("Hechler poset too large")


def hechler_poset(params: HechlerParams) -> Poset:
    """Conditions (n, f): stem length n <= m and a total bound f.

    (n, f) <= (n', f') iff n <= n', f' agrees with f on the stem, and f'
    dominates f everywhere.  Weakest element: (0, (0, ..., 0)).
    """
    if params.m == 0:
        raise InputError("stem bound m must be at least 1")
    m, h = params.m, params.h
    labels = [
        (n, f)
        for n in range(m + 1)
        for f in itertools.product(range(h + 1), repeat=m)
    ]

    def leq(a, b) -> bool:
        n1, f1 = a
        n2, f2 = b
        return (
            n1 <= n2
            and f1[:n1] == f2[:n1]
            and all(x <= y for x, y in zip(f1, f2))
        )

    return Poset.from_relation(tuple(labels), leq)


# ---------------------------------------------------------------------------
# Two-step composition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AtomIndexedName:
    """A choice of fiber condition at each atom of an algebra."""

    algebra: CompleteAlgebra
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.algebra.atom_count:
            raise InputError("name must assign a value to every atom")


@dataclass(frozen=True)
class TwoStep:
    """A two-step poset together with the canonical base inclusion."""

    base: Poset
    algebra: CompleteAlgebra
    fibers: tuple[Poset, ...]
    poset: Poset
    inclusion: PosetInclusion


def two_step(base: Poset, fibers) -> TwoStep:
    """Compose a base poset with one fiber poset per atom of its completion.

    Conditions are pairs (p, tau) with tau a tuple over all atoms; at atoms
    not below p the entry is pruned to the fiber's weakest label.  Order:
    p <= p' in the base and tau(a) <= tau'(a) at every atom below p'.
    """
    algebra = regular_open_completion(base)
    if isinstance(fibers, dict):
        fibers = tuple(fibers[a] for a in range(algebra.atom_count))
    else:
        fibers = tuple(fibers)
    if len(fibers) != algebra.atom_count:
        raise InputError("need one fiber poset per atom")
    for f in fibers:
        if not isinstance(f, Poset):
            raise InputError("fibers must be posets")

    bots = tuple(f.labels[f.bottom] for f in fibers)
    labels = []
    for i, p in enumerate(base.labels):
        mask = algebra.dense_map[i]
        choices = [
            fibers[a].labels if mask >> a & 1 else (bots[a],)
            for a in range(algebra.atom_count)
        ]
        size = 1
        for c in choices:
            size *= len(c)
        if len(labels) + size > 5000:
            raise InputError("two-step poset too large")
        labels.extend((p, tau) for tau in itertools.product(*choices))

    base_index = {p: i for i, p in enumerate(base.labels)}

    def leq(a, b) -> bool:
        p1, t1 = a
        p2, t2 = b
        if not base.leq(base_index[p1], base_index[p2]):
            return False
        mask = algebra.dense_map[base_index[p2]]
        return all(
            fibers[x].leq_labels(t1[x], t2[x]) for x in _bit_indices(mask)
        )

    poset = Poset.from_relation(tuple(labels), leq)
    inclusion = poset_inclusion(base, poset, lambda p: (p, bots))
    return TwoStep(
        base=base, algebra=algebra, fibers=fibers, poset=poset, inclusion=inclusion
    )


def compose_hechler(base: Poset, params: HechlerParams) -> TwoStep:
    fiber = hechler_poset(params)
    alg = regular_open_completion(base)
    return two_step(base, (fiber,) * alg.atom_count)


@dataclass(frozen=True)
class EquivalenceReport:
    holds: bool
    detail: dict | None


def two_step_equivalence(inc: PosetInclusion) -> EquivalenceReport:
    """Compare two routes to the big poset of a complete suborder.

    Route one composes the small poset with its quotient fibers at each
    atom; route two is the big poset itself.  The completions are isomorphic
    over the small poset iff the multisets of atom traces (sets of small
    conditions below an atom) coincide; both are computed independently.
    """
    from collections import Counter

    from .embed import quotient_name

    if not is_complete_suborder(inc):
        raise InputError("two-step comparison needs a complete suborder")
    qn = quotient_name(inc)
    fibers = tuple(qn.fiber(a) for a in range(qn.algebra.atom_count))
    ts = two_step(inc.small, fibers)

    def traces(poset: Poset, injection) -> Counter:
        maxima = _bit_indices(poset.maximal_mask())
        out = Counter()
        for t in maxima:
            out[frozenset(
                inc.small.labels[i]
                for i in range(len(inc.small.labels))
                if poset.leq(injection[i], t)
            )] += 1
        return out

    left = traces(ts.poset, ts.inclusion.injection)
    right = traces(inc.large, inc.injection)
    if left == right:
        return EquivalenceReport(holds=True, detail=None)
    return EquivalenceReport(
        holds=False,
        detail={
            "iterated_atoms": sum(left.values()),
            "direct_atoms": sum(right.values()),
            "iterated_traces": sorted(
                (sorted(map(str, t)), c) for t, c in left.items()
            ),
            "direct_traces": sorted(
                (sorted(map(str, t)), c) for t, c in right.items()
            ),
        },
    )


# ---------------------------------------------------------------------------
# Sweetness through a Hechler step
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HechlerSweetResult:
    model: SweetModel
    validation: CheckReport
    extends: CheckReport


def _decided_value(ts: TwoStep, label):
    """The common fiber value of a two-step condition, or None.

    A condition (p, tau) is fully decided when tau takes one value at every
    atom below p."""
    p, tau = label
    mask = ts.algebra.value_of_label(p)
    values = {tau[a] for a in _bit_indices(mask)}
    if len(values) == 1:
        return values.pop()
    return None


def hechler_sweet(model: SweetModel, ts: TwoStep) -> HechlerSweetResult:
    """Extend a sweetness model through a two-step with constant fibers.

    The new dense set consists of pairs (p, tau) with p dense and tau fully
    decided; level-k classes pair the old class of p with the decided value.
    The construction is validated and the extension report along
    p -> (p, weakest name) is returned; nothing is assumed.
    """
    if ts.base != model.poset:
        raise InputError("two-step base does not match the model's poset")
    if any(f != ts.fibers[0] for f in ts.fibers[1:]):
        raise InputError("hechler_sweet needs the same fiber at every atom")

    dense = frozenset(
        lbl
        for lbl in ts.poset.labels
        if lbl[0] in model.dense and _decided_value(ts, lbl) is not None
    )
    partitions = []
    for level in model.partitions:
        blocks: dict = {}
        for lbl in dense:
            p = lbl[0]
            key = (
                next(i for i, b in enumerate(level) if p in b),
                _decided_value(ts, lbl),
            )
            blocks.setdefault(key, set()).add(lbl)
        partitions.append(tuple(frozenset(b) for b in blocks.values()))
    new_model = SweetModel(
        poset=ts.poset, dense=dense, partitions=tuple(partitions)
    )
    bots = tuple(f.labels[f.bottom] for f in ts.fibers)
    return HechlerSweetResult(
        model=new_model,
        validation=validate_sweet(new_model),
        extends=validate_extends(model, new_model, inclusion=lambda p: (p, bots)),
    )


# ---------------------------------------------------------------------------
# Towers
# ---------------------------------------------------------------------------


MAX_TOWER_LENGTH = 4
MAX_LEVEL_SIZE = 32


@dataclass(frozen=True)
class Tower:
    """A top poset with nested level subsets, each carrying a model.

    Invariants checked on construction: levels are nested and end at the
    full label set, every level contains the weakest element, each level is
    a complete suborder of every later one and of the top, each model lives
    on the induced level poset and validates.
    """

    top: Poset
    levels: tuple[frozenset, ...]
    models: tuple[SweetModel, ...]

    def __post_init__(self):
        levels = tuple(frozenset(s) for s in self.levels)
        object.__setattr__(self, "levels", levels)
        object.__setattr__(self, "models", tuple(self.models))
        if not levels or len(levels) != len(self.models):
            raise InputError("need one model per level")
        if len(levels) > MAX_TOWER_LENGTH:
            raise InputError(f"tower length capped at {MAX_TOWER_LENGTH}")
        if len(self.top.labels) > MAX_LEVEL_SIZE:
            raise InputError(f"level posets capped at {MAX_LEVEL_SIZE} elements")
        bottom = self.top.labels[self.top.bottom]
        for i, lv in enumerate(levels):
            if bottom not in lv:
                raise InputError(f"level {i} misses the weakest element")
            if i + 1 < len(levels) and not lv <= levels[i + 1]:
                raise InputError(f"level {i} is not contained in level {i + 1}")
        if levels[-1] != set(self.top.labels):
            raise InputError("last level must be the whole poset")
        for i, lv in enumerate(levels):
            if self.models[i].poset != self.top.induced(lv):
                raise InputError(f"model {i} does not live on its level poset")
        for i in range(len(levels)):
            for j in range(i + 1, len(levels)):
                inc = poset_inclusion(self.models[i].poset, self.level_poset(j))
                if not is_complete_suborder(inc):
                    raise InputError(
                        f"level {i} is not a complete suborder of level {j}"
                    )
        for i, m in enumerate(self.models):
            rep = validate_sweet(m)
            if not rep.holds:
                raise InputError(
                    f"model {i} fails {rep.failures[0].clause}"
                )

    def __len__(self) -> int:
        return len(self.levels)

    def level_poset(self, i: int) -> Poset:
        return self.models[i].poset

    def level_inclusion(self, i: int) -> PosetInclusion:
        return poset_inclusion(self.models[i].poset, self.top)


def _tower_mapping(t1: Tower, t2: Tower, mapping):
    inc = poset_inclusion(t1.top, t2.top, mapping)
    return inc, {
        t1.top.labels[i]: t2.top.labels[inc.injection[i]]
        for i in range(len(t1.top.labels))
    }


def tower_leq(t1: Tower, t2: Tower, witness, mapping=None) -> CheckReport:
    """Check the tower order on a witness set of level indices.

    Preconditions (input errors): equal lengths, witness indices in range,
    and the tops related by a complete suborder inclusion.  Per witness
    level: mapped levels contained in the corresponding level, the models
    related by validate_extends, and quotient forcing into the top preserved.
    Failures carry the level index first.
    """
    if len(t1) != len(t2):
        raise InputError("towers must have equal length")
    witness = sorted(set(witness))
    if any(i < 0 or i >= len(t1) for i in witness):
        raise InputError("witness index out of range")
    top_inc, image = _tower_mapping(t1, t2, mapping)
    if not is_complete_suborder(top_inc):
        raise InputError("tops are not related by a complete suborder inclusion")

    failures: list[Failure] = []
    for i in witness:
        mapped = {image[lbl] for lbl in t1.levels[i]}
        missing = sorted(
            (lbl for lbl in mapped if lbl not in t2.levels[i]),
            key=t2.top.index,
        )
        if missing:
            failures.append(Failure("level", (i, missing[0])))
            continue
        rep = validate_extends(
            t1.models[i], t2.models[i], inclusion=lambda lbl: image[lbl]
        )
        failures.extend(
            Failure(f.clause, (i,) + f.witness) for f in rep.failures
        )
        inc1 = t1.level_inclusion(i)
        inc2 = t2.level_inclusion(i)
        for q in t1.top.labels:
            for p in sorted(t1.levels[i], key=t1.top.index):
                if quotient_forces(inc1, p, q, _checked=True) and not quotient_forces(
                    inc2, image[p], image[q], _checked=True
                ):
                    failures.append(Failure("quotient", (i, p, q)))
    return CheckReport.from_failures(failures)


def tower_chain_merge(towers, witnesses) -> Tower:
    """Merge a label-identity chain of towers along witness sets.

    Preconditions: each consecutive pair satisfies tower_leq on its witness
    set, and every witness contains the top level.  The merged tower reads
    level i from the common witness level c(i) = least common witness >= i,
    with models computed as chain limits; tower_leq from every input to the
    result on the common witness set is checked before returning.
    """
    towers = list(towers)
    if not towers:
        raise InputError("merge needs at least one tower")
    length = len(towers[0])
    witnesses = [sorted(set(w)) for w in witnesses]
    if len(witnesses) != len(towers) - 1:
        raise InputError("need one witness set per consecutive pair")
    for w in witnesses:
        if length - 1 not in w:
            raise InputError("every witness must contain the top level")
    for j in range(len(towers) - 1):
        rep = tower_leq(towers[j], towers[j + 1], witnesses[j])
        if not rep.holds:
            raise InputError(
                f"chain link {j} fails tower order: {rep.failures[0].clause}"
            )
    common = set(range(length))
    for w in witnesses:
        common &= set(w)
    common = sorted(common)

    from .sweet import chain_limit

    last = towers[-1]
    levels = []
    models = []
    for i in range(length):
        ci = min(c for c in common if c >= i)
        levels.append(last.levels[ci])
        models.append(chain_limit([t.models[ci] for t in towers]))
    merged = Tower(top=last.top, levels=tuple(levels), models=tuple(models))

    for j, t in enumerate(towers):
        rep = tower_leq(t, merged, common)
        if not rep.holds:
            raise ConstructionError(
                "merged tower does not sit above a chain member",
                certificate={"index": j, "clause": rep.failures[0].clause},
            )
    return merged


def tower_hechler(tower: Tower, params: HechlerParams) -> Tower:
    """Compose every level of a tower with the same Hechler step.

    Level i of the result consists of the pairs (p, tau) with p in level i
    and tau factoring through the level's atom projection; its model is the
    hechler_sweet extension of the level model, relabeled into the top
    two-step.  tower_leq from the input along p -> (p, weakest name) with
    all levels as witness is checked before returning.
    """
    ts_top = compose_hechler(tower.top, params)
    bots = tuple(f.labels[f.bottom] for f in ts_top.fibers)
    levels = []
    models = []
    for i in range(len(tower)):
        inc = tower.level_inclusion(i)
        proj = atom_projection(inc)
        level_poset = tower.models[i].poset
        atom_of = {
            t: k for k, t in enumerate(_bit_indices(level_poset.maximal_mask()))
        }
        ts_i = compose_hechler(level_poset, params)

        def relabel(lbl, proj=proj, atom_of=atom_of):
            p, sigma = lbl
            mask = ts_top.algebra.value_of_label(p)
            tau = tuple(
                sigma[atom_of[proj[a]]] if mask >> a & 1 else bots[a]
                for a in range(ts_top.algebra.atom_count)
            )
            return (p, tau)

        hs = hechler_sweet(tower.models[i], ts_i)
        if not hs.validation.holds or not hs.extends.holds:
            raise ConstructionError(
                "level Hechler extension failed",
                certificate={"level": i},
            )
        level_labels = frozenset(relabel(lbl) for lbl in ts_i.poset.labels)
        induced = ts_top.poset.induced(level_labels)
        models.append(
            SweetModel(
                poset=induced,
                dense=frozenset(relabel(lbl) for lbl in hs.model.dense),
                partitions=tuple(
                    tuple(frozenset(relabel(x) for x in block) for block in level)
                    for level in hs.model.partitions
                ),
            )
        )
        levels.append(level_labels)

    result = Tower(top=ts_top.poset, levels=tuple(levels), models=tuple(models))
    rep = tower_leq(
        tower, result, range(len(tower)), mapping=lambda p: (p, bots)
    )
    if not rep.holds:
        raise ConstructionError(
            "Hechler tower does not sit above the input",
            certificate={"clause": rep.failures[0].clause},
        )
    return result


# ---------------------------------------------------------------------------
# Tower amalgamation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubalgebraIso:
    """An isomorphism between subalgebras of two completions."""

    left_algebra: CompleteAlgebra
    right_algebra: CompleteAlgebra
    dom: Subalgebra
    rng: Subalgebra
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.dom.atom_count != self.left_algebra.atom_count:
            raise InputError("domain lives in the wrong algebra")
        if self.rng.atom_count != self.right_algebra.atom_count:
            raise InputError("range lives in the wrong algebra")
        fwd = dict(self.pairs)
        if set(fwd) != set(self.dom.members) or len(fwd) != len(self.pairs):
            raise InputError("pairs must cover the domain exactly once")
        if set(fwd.values()) != set(self.rng.members):
            raise InputError("pairs must cover the range")
        if len(set(fwd.values())) != len(fwd):
            raise InputError("mapping must be injective")
        if fwd[0] != 0 or fwd[self.left_algebra.full] != self.right_algebra.full:
            raise InputError("mapping must fix zero and the unit")
        full_l, full_r = self.left_algebra.full, self.right_algebra.full
        for b in self.dom.members:
            if fwd[b ^ full_l] != fwd[b] ^ full_r:
                raise InputError("mapping must preserve complements")
            for c in self.dom.members:
                if fwd[b & c] != fwd[b] & fwd[c]:
                    raise InputError("mapping must preserve meets")
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    def apply(self, member: int) -> int:
        for a, b in self.pairs:
            if a == member:
                return b
        raise InputError("element outside the domain")

    @staticmethod
    def build(left_algebra, right_algebra, dom, rng, mapping) -> "SubalgebraIso":
        pairs = tuple(sorted((b, mapping[b]) for b in dom.members))
        return SubalgebraIso(left_algebra, right_algebra, dom, rng, pairs)


@dataclass(frozen=True)
class TowerAmalgamResult:
    tower: Tower
    leq_left: CheckReport
    leq_right: CheckReport


def tower_amalgamate(t1: Tower, t3: Tower, iso: SubalgebraIso, i0: int) -> TowerAmalgamResult:
    """Amalgamate two towers over a partial isomorphism of their tops.

    Preconditions (input errors): equal lengths; the iso's algebras are the
    completions of the two tops; its domain and range are contained in the
    saturated subalgebras of level i0; and for every level i >= i0 the iso
    matches the level subalgebras exactly.  Levels below i0 are padded with
    level i0.

    Members of the amalgamated top are pairs (p1, p3) such that some block
    of the domain meets the value of p1 while its image meets the value of
    p3.  Tower invariants and both tower_leq relations (witness: levels
    >= i0) are checked; failures raise with a certificate.
    """
    if len(t1) != len(t3):
        raise InputError("towers must have equal length")
    if not 0 <= i0 < len(t1):
        raise InputError("base level out of range")
    alg1 = regular_open_completion(t1.top)
    alg3 = regular_open_completion(t3.top)
    if iso.left_algebra != alg1 or iso.right_algebra != alg3:
        raise InputError("iso must relate the completions of the two tops")
    if t1.models[0].levels != t3.models[0].levels:
        raise InputError("towers carry different numbers of partition levels")

    sats1 = [saturated_subalgebra(t1.level_inclusion(i)) for i in range(len(t1))]
    sats3 = [saturated_subalgebra(t3.level_inclusion(i)) for i in range(len(t3))]
    if not set(iso.dom.members) <= sats1[i0].members:
        raise InputError(
            f"domain must sit inside the level-{i0} saturated subalgebra"
        )
    if not set(iso.rng.members) <= sats3[i0].members:
        raise InputError(
            f"range must sit inside the level-{i0} saturated subalgebra"
        )
    for i in range(i0, len(t1)):
        mapped = {iso.apply(b) for b in iso.dom.members & sats1[i].members}
        if mapped != iso.rng.members & sats3[i].members:
            raise InputError(f"iso does not match the level subalgebras at {i}")

    blocks = iso.dom.blocks()
    val1 = {lbl: alg1.value_of_label(lbl) for lbl in t1.top.labels}
    val3 = {lbl: alg3.value_of_label(lbl) for lbl in t3.top.labels}

    def member(p1, p3) -> bool:
        return any(
            val1[p1] & a and val3[p3] & iso.apply(a) for a in blocks
        )

    pair_labels = tuple(
        (p1, p3)
        for p1 in t1.top.labels
        for p3 in t3.top.labels
        if member(p1, p3)
    )
    i1 = {p: i for i, p in enumerate(t1.top.labels)}
    i3 = {p: i for i, p in enumerate(t3.top.labels)}

    def leq(a, b) -> bool:
        return t1.top.leq(i1[a[0]], i1[b[0]]) and t3.top.leq(i3[a[1]], i3[b[1]])

    top = Poset.from_relation(pair_labels, leq)

    levels = []
    models = []
    for i in range(len(t1)):
        ci = max(i, i0)
        lv = frozenset(
            (p1, p3)
            for (p1, p3) in pair_labels
            if p1 in t1.levels[ci] and p3 in t3.levels[ci]
        )
        m1, m3 = t1.models[ci], t3.models[ci]
        dense = frozenset(
            (p1, p3) for (p1, p3) in lv if p1 in m1.dense and p3 in m3.dense
        )
        partitions = []
        for n in range(m1.levels):
            level_blocks = []
            for b1 in m1.partitions[n]:
                for b3 in m3.partitions[n]:
                    blk = frozenset(
                        (p1, p3) for (p1, p3) in dense if p1 in b1 and p3 in b3
                    )
                    if blk:
                        level_blocks.append(blk)
            partitions.append(tuple(level_blocks))
        levels.append(lv)
        models.append(
            SweetModel(
                poset=top.induced(lv), dense=dense, partitions=tuple(partitions)
            )
        )

    try:
        tower = Tower(top=top, levels=tuple(levels), models=tuple(models))
    except InputError as exc:
        raise ConstructionError(
            f"amalgamated tower violates invariants: {exc}"
        ) from exc

    bot1 = t1.top.labels[t1.top.bottom]
    bot3 = t3.top.labels[t3.top.bottom]
    witness = range(i0, len(t1))
    leq_left = tower_leq(t1, tower, witness, mapping=lambda p: (p, bot3))
    leq_right = tower_leq(t3, tower, witness, mapping=lambda p: (bot1, p))
    for side, rep in (("left", leq_left), ("right", leq_right)):
        if not rep.holds:
            raise ConstructionError(
                f"amalgamated tower does not sit above the {side} input",
                certificate={
                    "side": side,
                    "clause": rep.failures[0].clause,
                    "witness": repr(rep.failures[0].witness),
                },
            )
    return TowerAmalgamResult(tower=tower, leq_left=leq_left, leq_right=leq_right)
