"""Exhaustive and randomized verification of the combinatorial lemmas.

Each ``verify_*`` function sweeps a deterministic instance space (or a
seeded random corpus), counts hypothesis satisfaction, and collects
counterexample certificates.  A certificate is a JSON-safe dict carrying a
DSL document for the objects involved plus typed data; ``replay`` rebuilds
the instance from the certificate alone and returns True when the failure
reproduces.

Runs respect a time budget (milliseconds; FORCELAB_BUDGET_MS overrides the
60 s default, 0 means unlimited) checked at instance boundaries, and can
fan out over a process pool; reports merge deterministically either way.
The canonical JSON form of a report omits elapsed time so that identical
invocations are byte-identical.
"""

from __future__ import annotations

import itertools
import json
import os
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from . import dsl
from .amalgam import (
    check_identification,
    extension_embedding,
    identity_amalgam,
    member_by_definition,
    amalgamate,
)
from .completion import CompleteAlgebra, regular_open_completion
from .embed import (
    CompleteEmbedding,
    is_complete_suborder,
    is_complete_suborder_via_reductions,
    poset_inclusion,
    quotient_forces,
    validate_complete_embedding,
)
from .errors import ConstructionError, ForcelabError, InputError
from .iterate import HechlerParams, compose_hechler, hechler_sweet, two_step_equivalence
from .posets import Poset, _bit_indices
from .sweet import SweetModel, chain_limit, amalgam_sweet, validate_extends, validate_sweet

CERT_SCHEMA = "forcelab/1"
DEFAULT_BUDGET_MS = 60_000


# ---------------------------------------------------------------------------
# Reports, budget, parallel driver
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    lemma: str
    caps: dict
    seed: int
    checked: int
    hypothesis_stats: dict
    counterexamples: list
    complete: bool
    elapsed_ms: int

    @property
    def verdict(self) -> str:
        if self.counterexamples:
            return "failed"
        if self.checked == 0:
            return "vacuous"
        return "passed"

    def canonical_dict(self) -> dict:
        """Everything except elapsed time: the byte-stable report body."""
        return {
            "lemma": self.lemma,
            "caps": self.caps,
            "seed": self.seed,
            "checked": self.checked,
            "hypothesis_stats": self.hypothesis_stats,
            "counterexamples": self.counterexamples,
            "complete": self.complete,
            "verdict": self.verdict,
        }

    def to_json(self, include_elapsed: bool = False) -> str:
        body = self.canonical_dict()
        if include_elapsed:
            body["elapsed_ms"] = self.elapsed_ms
        return json.dumps(body, sort_keys=True, indent=2) + "\n"


class _Clock:
    def __init__(self, budget_ms: int | None):
        if budget_ms is None:
            raw = os.environ.get("FORCELAB_BUDGET_MS", "")
            budget_ms = int(raw) if raw.isdigit() else DEFAULT_BUDGET_MS
        self.budget_ms = budget_ms
        self.t0 = time.monotonic()

    def elapsed_ms(self) -> int:
        return int((time.monotonic() - self.t0) * 1000)

    def exceeded(self) -> bool:
        return self.budget_ms > 0 and self.elapsed_ms() >= self.budget_ms


def _sorted_certs(cexs: list) -> list:
    return sorted(cexs, key=lambda c: json.dumps(c, sort_keys=True))


def _run_instances(instances, worker, jobs: int, clock: _Clock):
    """Run worker over instances, merging (checked, stats, cexs) triples.

    Sequential when jobs <= 1.  With a pool, work is submitted in windows
    and merged in submission order, so completing runs are independent of
    the worker count; the budget is checked between results either way.
    """
    checked = 0
    stats: Counter = Counter()
    cexs: list = []
    complete = True

    def merge(res) -> None:
        nonlocal checked
        c, st, cx = res
        checked += c
        stats.update(st)
        cexs.extend(cx)

    if jobs <= 1:
        for item in instances:
            if clock.exceeded():
                complete = False
                break
            merge(worker(item))
    else:
        items = iter(instances)
        window = jobs * 8
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            while complete:
                batch = list(itertools.islice(items, window))
                if not batch:
                    break
                for fut in [ex.submit(worker, it) for it in batch]:
                    merge(fut.result())
                if clock.exceeded():
                    complete = False
    return checked, dict(sorted(stats.items())), _sorted_certs(cexs), complete


# ---------------------------------------------------------------------------
# Instance enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def posets_with_bottom(n: int) -> tuple[Poset, ...]:
    """All labeled posets on {0..n-1} whose weakest element is 0."""
    if n < 1:
        raise InputError("need at least one element")
    if n == 1:
        return (Poset.chain(1),)
    pts = list(range(1, n))
    arcs = [(a, b) for a in pts for b in pts if a != b]
    out = []
    for mask in range(1 << len(arcs)):
        rel = {arcs[k] for k in _bit_indices(mask)}
        if any((b, a) in rel for a, b in rel):
            continue
        if any(
            (a, c) not in rel
            for a, b in rel
            for b2, c in rel
            if b == b2 and a != c
        ):
            continue
        pairs = [(0, x) for x in range(n)] + sorted(rel)
        out.append(Poset.from_relation(tuple(range(n)), pairs))
    return tuple(out)


def all_posets(max_elements: int) -> list[Poset]:
    out = []
    for n in range(1, max_elements + 1):
        out.extend(posets_with_bottom(n))
    return out


def _sub_inclusions(poset: Poset):
    """Identity inclusions from every bottom-containing label subset."""
    n = len(poset.labels)
    for sub in range(1, 1 << n):
        if not sub & (1 << poset.bottom):
            continue
        yield [poset.labels[i] for i in _bit_indices(sub)]


@lru_cache(maxsize=None)
def set_partitions(n: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of n atoms, each a sorted tuple of disjoint masks."""
    if n == 0:
        return ((),)
    parts: list[tuple[int, ...]] = [(1,)]
    for atom in range(1, n):
        new = []
        for p in parts:
            for i in range(len(p)):
                new.append(p[:i] + (p[i] | 1 << atom,) + p[i + 1 :])
            new.append(p + (1 << atom,))
        parts = new
    return tuple(tuple(sorted(p)) for p in sorted(set(parts)))


def coarsenings(blocks: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """All partitions obtained by merging whole blocks."""
    out = []
    for grouping in set_partitions(len(blocks)):
        merged = []
        for g in grouping:
            m = 0
            for i in _bit_indices(g):
                m |= blocks[i]
            merged.append(m)
        out.append(tuple(sorted(merged)))
    return tuple(sorted(set(out)))


def surjections(m: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All onto maps from m positions to k values."""
    return tuple(
        t
        for t in itertools.product(range(k), repeat=m)
        if len(set(t)) == k
    )


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


def _certificate(kind: str, document: str, data: dict) -> dict:
    return {"schema": CERT_SCHEMA, "kind": kind, "document": document, "data": data}


def _inclusion_document(small: Poset, large: Poset) -> str:
    doc = dsl.Document(
        declarations=(
            dsl.poset_decl("small", small),
            dsl.poset_decl("large", large),
            dsl.map_decl(
                "inc", "small", "large", {lbl: lbl for lbl in small.labels}
            ),
        )
    )
    return dsl.emit(doc, "dsl")


def _models_document(poset: Poset, models: dict[str, SweetModel]) -> str:
    decls = [dsl.poset_decl("P", poset)]
    for name, m in models.items():
        decls.append(dsl.sweet_decl(name, "P", m))
    return dsl.emit(dsl.Document(declarations=tuple(decls)), "dsl")


def _resolve_document(document: str) -> dict:
    return dsl.resolve(dsl.parse(document))


def replay(cert: dict) -> bool:
    """Rebuild a counterexample from its certificate; True when it re-fails."""
    if not isinstance(cert, dict):
        raise InputError("certificate must be an object")
    unknown = set(cert) - {"schema", "kind", "document", "data"}
    if unknown:
        raise InputError(f"unknown certificate fields {sorted(unknown)}")
    if cert.get("schema") != CERT_SCHEMA:
        raise InputError("unknown certificate schema")
    kind = cert.get("kind")
    data = cert.get("data", {})
    if kind == "embed-criteria":
        objs = _resolve_document(cert["document"])
        inc = poset_inclusion(objs["small"], objs["large"], objs["inc"])
        return is_complete_suborder(inc) != is_complete_suborder_via_reductions(inc)
    if kind == "two-step":
        objs = _resolve_document(cert["document"])
        inc = poset_inclusion(objs["small"], objs["large"], objs["inc"])
        return is_complete_suborder(inc) and not two_step_equivalence(inc).holds
    if kind == "quotient-route":
        objs = _resolve_document(cert["document"])
        inc = poset_inclusion(objs["small"], objs["large"], objs["inc"])
        small = objs["small"]
        p, q = data["p"], data["q"]
        direct = quotient_forces(inc, p, objs["inc"][q])
        pi, qi = small.index(p), small.index(q)
        brute = all(small.compatible(p2, qi) for p2 in _bit_indices(small.up[pi]))
        return direct != brute
    if kind == "amalgam":
        inst = _amalgam_instance(
            data["base_atoms"],
            tuple(data["surj1"]),
            tuple(data["surj2"]),
        )
        return not _amalgam_claim_holds(inst, data["claim"])
    if kind == "identity-collapse":
        alg = regular_open_completion(Poset.flat(tuple(range(data["atoms"]))))
        return not _identity_collapses(identity_amalgam(alg))
    if kind == "bcd":
        return _bcd_star_fails(
            tuple(data["b_blocks"]),
            tuple(data["d_blocks"]),
            tuple(data["c0_blocks"]),
        )
    if kind == "sweet":
        return _sweet_law_fails(cert)
    raise InputError(f"unknown certificate kind {kind!r}")


# ---------------------------------------------------------------------------
# Embedding criteria
# ---------------------------------------------------------------------------


def _embed_check(args):
    poset, sub_labels = args
    small = poset.induced(sub_labels)
    inc = poset_inclusion(small, poset)
    stats = Counter(inclusions=1)
    cexs = []
    r1 = is_complete_suborder(inc)
    r2 = is_complete_suborder_via_reductions(inc)
    if r1 != r2:
        cexs.append(
            _certificate(
                "embed-criteria", _inclusion_document(small, poset), {}
            )
        )
    if r1:
        stats["complete_suborders"] = 1
        rep = two_step_equivalence(inc)
        stats["two_step_runs"] = 1
        if not rep.holds:
            cexs.append(
                _certificate(
                    "two-step",
                    _inclusion_document(small, poset),
                    {"detail": rep.detail},
                )
            )
        for pi, p in enumerate(small.labels):
            for qi, q in enumerate(small.labels):
                direct = quotient_forces(inc, p, q, _checked=True)
                brute = all(
                    small.compatible(p2, qi) for p2 in _bit_indices(small.up[pi])
                )
                stats["quotient_pairs"] += 1
                if direct != brute:
                    cexs.append(
                        _certificate(
                            "quotient-route",
                            _inclusion_document(small, poset),
                            {
                                "p": dsl.stringify_label(p),
                                "q": dsl.stringify_label(q),
                            },
                        )
                    )
    return 1, stats, cexs


def verify_embedding_criteria(
    size_cap: int = 5,
    seed: int = 0,
    budget_ms: int | None = None,
    jobs: int = 1,
) -> VerificationReport:
    """Sweep every inclusion (induced subset with bottom) of every poset
    with at most size_cap elements: the two complete-suborder routes must
    agree; on complete suborders, two-step equivalence must hold and
    quotient forcing must match its small-poset characterization."""
    clock = _Clock(budget_ms)
    instances = [
        (poset, tuple(sub))
        for poset in all_posets(size_cap)
        for sub in _sub_inclusions(poset)
    ]
    checked, stats, cexs, complete = _run_instances(
        instances, _embed_check, jobs, clock
    )
    return VerificationReport(
        lemma="embedding-criteria",
        caps={"size_cap": size_cap},
        seed=seed,
        checked=checked,
        hypothesis_stats=stats,
        counterexamples=cexs,
        complete=complete,
        elapsed_ms=clock.elapsed_ms(),
    )


# ---------------------------------------------------------------------------
# Amalgamation claims
# ---------------------------------------------------------------------------


def _surjection_embedding(
    base: CompleteAlgebra, target: CompleteAlgebra, surj: tuple[int, ...]
) -> CompleteEmbedding:
    nz = base.nonzero_poset()
    mapping = tuple(
        sum(1 << a for a in range(target.atom_count) if b >> surj[a] & 1)
        for b in nz.labels
    )
    return CompleteEmbedding(source=nz, target=target, mapping=mapping)


def _amalgam_instance(base_atoms: int, surj1, surj2):
    base = regular_open_completion(Poset.flat(tuple(range(base_atoms))))
    left = regular_open_completion(Poset.flat(tuple(range(len(surj1)))))
    right = regular_open_completion(Poset.flat(tuple(range(len(surj2)))))
    f1 = _surjection_embedding(base, left, surj1)
    f2 = _surjection_embedding(base, right, surj2)
    return amalgamate(base, left, right, f1, f2)


def _identity_collapses(inst) -> bool:
    k = inst.base.atom_count
    if inst.completion.atom_count != k:
        return False
    tops = _bit_indices(inst.amalgam.maximal_mask())
    diag = {}
    for pos, t in enumerate(tops):
        b1, b2 = inst.amalgam.labels[t]
        if b1 != b2 or bin(b1).count("1") != 1:
            return False
        diag[pos] = b1
    for b in range(1, inst.base.full + 1):
        want = sum(1 << pos for pos, atom in diag.items() if atom & b)
        if inst.left_value(b) != want:
            return False
    return True


def _amalgam_claim_holds(inst, claim: str) -> bool:
    if claim == "membership":
        members = set(inst.amalgam.labels)
        return all(
            ((b1, b2) in members) == member_by_definition(inst, b1, b2)
            for b1 in range(inst.left.full + 1)
            for b2 in range(inst.right.full + 1)
        )
    if claim == "identification":
        return check_identification(inst)
    if claim == "inj-complete":
        return is_complete_suborder(inst.inj_left) and is_complete_suborder(
            inst.inj_right
        )
    if claim == "extension-embedding":
        try:
            validate_complete_embedding(extension_embedding(inst))
            return True
        except ForcelabError:
            return False
    if claim == "trivial-product":
        if inst.base.atom_count != 1:
            return True
        want = {
            (b1, b2)
            for b1 in range(1, inst.left.full + 1)
            for b2 in range(1, inst.right.full + 1)
        }
        return set(inst.amalgam.labels) == want
    if claim == "quotient-preserved":
        for p in range(1, inst.base.full + 1):
            subs = [p2 for p2 in range(1, inst.base.full + 1) if not p2 & ~p]
            for q in range(1, inst.left.full + 1):
                if not all(inst.f1.value(p2) & q for p2 in subs):
                    continue
                qi = inst.amalgam.index((q, inst.right.full))
                for p2 in subs:
                    pi = inst.amalgam.index(
                        (inst.f1.value(p2), inst.f2.value(p2))
                    )
                    if not inst.amalgam.compatible(pi, qi):
                        return False
        return True
    raise InputError(f"unknown amalgam claim {claim!r}")


_AMALGAM_CLAIMS = (
    "membership",
    "identification",
    "inj-complete",
    "extension-embedding",
    "trivial-product",
    "quotient-preserved",
)


def _amalgam_check(args):
    base_atoms, surj1, surj2 = args
    inst = _amalgam_instance(base_atoms, surj1, surj2)
    stats = Counter(
        instances=1,
        membership_pairs=(inst.left.full + 1) * (inst.right.full + 1),
    )
    cexs = []
    doc = dsl.emit(
        dsl.Document(
            declarations=(
                dsl.poset_decl("base_skel", inst.base.source),
                dsl.poset_decl("left_skel", inst.left.source),
                dsl.poset_decl("right_skel", inst.right.source),
            )
        ),
        "dsl",
    )
    for claim in _AMALGAM_CLAIMS:
        stats[f"claim_{claim}"] += 1
        if not _amalgam_claim_holds(inst, claim):
            cexs.append(
                _certificate(
                    "amalgam",
                    doc,
                    {
                        "base_atoms": base_atoms,
                        "surj1": list(surj1),
                        "surj2": list(surj2),
                        "claim": claim,
                    },
                )
            )
    return 1, stats, cexs


def verify_amalgam_claims(
    max_base_atoms: int = 2,
    max_factor_atoms: int = 3,
    seed: int = 0,
    budget_ms: int | None = None,
    jobs: int = 1,
) -> VerificationReport:
    """Sweep amalgam instances over atom surjections within the caps.

    Per instance: atom-rule membership against the witness-search oracle,
    identification, completeness of both canonical injections, validity of
    the extension embedding, the trivial-base product law, and preservation
    of quotient forcing.  Identity amalgams are checked to collapse to the
    base."""
    clock = _Clock(budget_ms)
    instances = [
        (k, s1, s2)
        for k in range(1, max_base_atoms + 1)
        for m in range(k, max_factor_atoms + 1)
        for r in range(k, max_factor_atoms + 1)
        for s1 in surjections(m, k)
        for s2 in surjections(r, k)
    ]
    checked, stats, cexs, complete = _run_instances(
        instances, _amalgam_check, jobs, clock
    )
    stats = Counter(stats)
    if complete:
        for atoms in range(1, max_factor_atoms + 1):
            if clock.exceeded():
                complete = False
                break
            alg = regular_open_completion(Poset.flat(tuple(range(atoms))))
            inst = identity_amalgam(alg)
            checked += 1
            stats["identity_instances"] += 1
            if not _identity_collapses(inst):
                cexs.append(
                    _certificate(
                        "identity-collapse",
                        dsl.emit(
                            dsl.Document(
                                declarations=(dsl.poset_decl("skel", alg.source),)
                            ),
                            "dsl",
                        ),
                        {"atoms": atoms},
                    )
                )
    return VerificationReport(
        lemma="amalgam-claims",
        caps={
            "max_base_atoms": max_base_atoms,
            "max_factor_atoms": max_factor_atoms,
        },
        seed=seed,
        checked=checked,
        hypothesis_stats=dict(sorted(stats.items())),
        counterexamples=_sorted_certs(cexs),
        complete=complete,
        elapsed_ms=clock.elapsed_ms(),
    )


# ---------------------------------------------------------------------------
# The interpolation lemma on nested subalgebras
# ---------------------------------------------------------------------------


def _members(blocks: tuple[int, ...]) -> tuple[int, ...]:
    out = set()
    for picks in itertools.product((0, 1), repeat=len(blocks)):
        m = 0
        for take, b in zip(picks, blocks):
            if take:
                m |= b
        out.add(m)
    return tuple(sorted(out))


def _forces(members, x0: int, x: int) -> bool:
    """Every nonzero member below x0 meets x."""
    return all(y & x for y in members if y and not y & ~x0)


def _bcd_star_fails(b_blocks, d_blocks, c0_blocks) -> bool:
    holds, _ = _bcd_instance_status(b_blocks, d_blocks, c0_blocks)
    return holds[0] and holds[1] and not holds[2]


def _bcd_instance_status(b_blocks, d_blocks, c0_blocks):
    B = _members(b_blocks)
    D = _members(d_blocks)
    C0 = _members(c0_blocks)
    n = max(B).bit_length()
    C = tuple(range(1 << n))
    B0 = tuple(sorted(set(B) & set(C0)))
    D0 = tuple(sorted(set(D) & set(C0)))

    hyp2 = all(
        d in C0
        for g in b_blocks
        for d in D
        if d & g
    )
    containment = all(d in C0 for d in D)
    hyp3 = all(
        _forces(C0, b0, b)
        for b in B
        for b0 in B0
        if _forces(B0, b0, b)
    )
    star_witness = None
    for d in D:
        for d0 in D0:
            if _forces(D0, d0, d) and not _forces(C0, d0, d):
                star_witness = (d, d0)
                break
        if star_witness:
            break
    return (hyp2, hyp3, star_witness is None), {
        "hyp2": hyp2,
        "hyp2_equals_containment": hyp2 == containment,
        "hyp3": hyp3,
        "star_witness": star_witness,
    }


def _bcd_check(args):
    n, b_blocks, d_blocks, c0_blocks = args
    (hyp2, hyp3, star), info = _bcd_instance_status(b_blocks, d_blocks, c0_blocks)
    stats = Counter(instances=1)
    if hyp2:
        stats["hyp2_holds"] = 1
    if hyp3:
        stats["hyp3_holds"] = 1
    if not info["hyp2_equals_containment"]:
        stats["hyp2_containment_mismatches"] = 1
    cexs = []
    if hyp2 and hyp3:
        stats["conclusions_checked"] = 1
        if not star:
            skel = dsl.emit(
                dsl.Document(
                    declarations=(
                        dsl.poset_decl("skel", Poset.flat(tuple(range(n)))),
                    )
                ),
                "dsl",
            )
            cexs.append(
                _certificate(
                    "bcd",
                    skel,
                    {
                        "atoms": n,
                        "b_blocks": list(b_blocks),
                        "d_blocks": list(d_blocks),
                        "c0_blocks": list(c0_blocks),
                        "witness": list(info["star_witness"]),
                    },
                )
            )
    return 1, stats, cexs


def verify_bcd(
    max_atoms: int = 4,
    seed: int = 0,
    budget_ms: int | None = None,
    jobs: int = 1,
) -> VerificationReport:
    """Sweep nested subalgebras B inside D inside the powerset of at most
    max_atoms atoms, against every subalgebra C0; with B0 = B meet C0 and
    D0 = D meet C0, instances satisfying the quotient-containment
    hypothesis and the lifting hypothesis (3) must satisfy its extension
    (3*).  Hypothesis (2) degenerates to D being contained in C0 at finite
    scale; the statistics record that the atom-quantified reading and the
    containment agree."""
    if max_atoms < 2:
        raise InputError("max_atoms must be at least 2")
    clock = _Clock(budget_ms)
    instances = [
        (n, b_blocks, d_blocks, c0_blocks)
        for n in range(1, max_atoms + 1)
        for d_blocks in set_partitions(n)
        for b_blocks in coarsenings(d_blocks)
        for c0_blocks in set_partitions(n)
    ]
    checked, stats, cexs, complete = _run_instances(
        instances, _bcd_check, jobs, clock
    )
    return VerificationReport(
        lemma="bcd",
        caps={"max_atoms": max_atoms},
        seed=seed,
        checked=checked,
        hypothesis_stats=stats,
        counterexamples=cexs,
        complete=complete,
        elapsed_ms=clock.elapsed_ms(),
    )


# ---------------------------------------------------------------------------
# Random sweetness corpus
# ---------------------------------------------------------------------------


def _is_class_top(poset: Poset, block: set, root) -> bool:
    return all(poset.leq_labels(x, root) for x in block)


def _graft(poset: Poset, root) -> Poset:
    new = len(poset.labels)

    def leq(a, b) -> bool:
        if b == new:
            return a == new or poset.leq_labels(a, root)
        if a == new:
            return False
        return poset.leq_labels(a, b)

    return Poset.from_relation(poset.labels + (new,), leq)


def grow_chain(rng: random.Random, links: int = 3, levels: int | None = None):
    """A label-identity chain of sweetness models built by leaf grafting.

    Each link grafts fresh maximal elements; a new element may merge into a
    class only when that class's top is itself new in the current link,
    which keeps every consecutive pair of snapshots in the extension
    relation.  Classes are chains with a top, partitions refine upward, and
    the snapshot posets stay complete suborders of each other.
    """
    n_levels = levels if levels is not None else rng.randint(1, 2)
    poset = Poset.chain(1)
    partitions: list[list[set]] = [[{0}] for _ in range(n_levels)]
    snapshots = []
    for link in range(links):
        fresh: set = set() if link else {0}
        for _ in range(rng.randint(1, 2)):
            maximal = sorted(poset.labels_of(poset.maximal_mask()))
            root = rng.choice(maximal)
            poset = _graft(poset, root)
            new = poset.labels[-1]
            cut = rng.randrange(n_levels)
            for k in range(n_levels):
                block = next(b for b in partitions[k] if root in b)
                if (
                    k < cut
                    and root in fresh
                    and _is_class_top(poset, block, root)
                ):
                    block.add(new)
                else:
                    partitions[k].append({new})
            fresh.add(new)
        snapshots.append(
            SweetModel(
                poset=poset,
                dense=frozenset(poset.labels),
                partitions=tuple(
                    tuple(frozenset(b) for b in level) for level in partitions
                ),
            )
        )
    return snapshots


def _unit_dense_hypothesis(model: SweetModel, algebra) -> bool:
    """Some dense element carries the unit value and every class of such an
    element sits entirely at the unit.  Exactly under this condition on the
    opposite factor do the amalgam model's extension clauses come out true:
    images take the form (value, unit), so the unit must be a dense image
    and its class must add no other values."""
    value = {lbl: algebra.value_of_label(lbl) for lbl in model.poset.labels}
    carriers = [d for d in model.dense if value[d] == algebra.full]
    if not carriers:
        return False
    return all(
        value[x] == algebra.full
        for d in carriers
        for n in range(model.levels)
        for x in model.class_of(n, d)
    )


def _random_flat_model(rng: random.Random, tips: int, levels: int) -> SweetModel:
    """A model on a flat poset: tips are always dense (each is its own only
    extension), the bottom joins at random, classes are singletons except
    that the bottom sometimes shares a class with tip 0."""
    poset = Poset.flat(tuple(range(tips)))
    dense: set = set(range(tips))
    merge_bottom = False
    if rng.random() < 0.6:
        dense.add("bot")
        # with one tip the bottom and the tip share a Boolean value, so they
        # must share a class to factor through the completion; with more tips
        # a merged bottom class would break continuity toward the other tips
        merge_bottom = tips == 1
    blocks = []
    for d in sorted(dense, key=poset.index):
        if merge_bottom and d == 0:
            blocks.append(frozenset({"bot", 0}))
        elif merge_bottom and d == "bot":
            continue
        else:
            blocks.append(frozenset({d}))
    return SweetModel(
        poset=poset,
        dense=frozenset(dense),
        partitions=(tuple(blocks),) * levels,
    )


def _sweet_batch(args):
    batch_seed, n_triples, hechler_runs, amalgam_runs = args
    rng = random.Random(batch_seed)
    stats = Counter()
    cexs = []

    def model_cert(law: str, poset, models: dict, extra: dict | None = None):
        data = {"law": law, "batch_seed": batch_seed}
        if extra:
            data.update(extra)
        return _certificate("sweet", _models_document(poset, models), data)

    for _ in range(n_triples):
        m1, m2, m3 = grow_chain(rng, links=3)
        stats["triples"] += 1
        named = {"m1": m1, "m2": m2, "m3": m3}
        bad = False
        for name, m in named.items():
            rep = validate_sweet(m)
            if not rep.holds:
                cexs.append(
                    model_cert(
                        "validate",
                        m.poset,
                        {name: m},
                        {"clause": rep.failures[0].clause},
                    )
                )
                bad = True
        if bad:
            continue
        e12 = validate_extends(m1, m2)
        e23 = validate_extends(m2, m3)
        e13 = validate_extends(m1, m3)
        if not (e12.holds and e23.holds):
            rep = e12 if not e12.holds else e23
            cexs.append(
                model_cert(
                    "chain-link",
                    m3.poset,
                    named,
                    {"clause": rep.failures[0].clause},
                )
            )
            continue
        stats["links_hold"] += 1
        if not e13.holds:
            cexs.append(
                model_cert(
                    "transitivity",
                    m3.poset,
                    named,
                    {"clause": e13.failures[0].clause},
                )
            )
            continue
        try:
            limit = chain_limit([m1, m2, m3])
        except ConstructionError as exc:
            cexs.append(
                model_cert("chain-limit", m3.poset, named, {"detail": str(exc)})
            )
            continue
        stats["limits_built"] += 1
        if limit != m3:
            cexs.append(model_cert("limit-identity", m3.poset, named))

    for _ in range(hechler_runs):
        m = grow_chain(rng, links=1, levels=1)[0]
        if len(m.poset.labels) > 4:
            stats["hechler_skipped"] += 1
            continue
        stats["hechler_runs"] += 1
        hs = hechler_sweet(m, compose_hechler(m.poset, HechlerParams(1, 1)))
        if not (hs.validation.holds and hs.extends.holds):
            rep = hs.validation if not hs.validation.holds else hs.extends
            cexs.append(
                model_cert(
                    "hechler-sweet",
                    m.poset,
                    {"m1": m},
                    {"clause": rep.failures[0].clause, "m": 1, "h": 1},
                )
            )

    for _ in range(amalgam_runs):
        tips1 = rng.randint(1, 3)
        tips2 = rng.randint(1, 3)
        levels = rng.randint(1, 2)
        ma = _random_flat_model(rng, tips1, levels)
        mb = _random_flat_model(rng, tips2, levels)
        if not (validate_sweet(ma).holds and validate_sweet(mb).holds):
            stats["amalgam_input_invalid"] += 1
            continue
        inst = _amalgam_instance(1, (0,) * tips1, (0,) * tips2)
        stats["amalgam_runs"] += 1
        res = amalgam_sweet(ma, mb, inst)
        # the extension clauses are guaranteed only when the opposite model
        # carries the unit as a dense value with a unit-only class
        reports = {
            "validate": (res.validation, True),
            "extends-left": (res.extends_left, _unit_dense_hypothesis(mb, inst.right)),
            "extends-right": (res.extends_right, _unit_dense_hypothesis(ma, inst.left)),
        }
        doc = dsl.emit(
            dsl.Document(
                declarations=(
                    dsl.poset_decl("P1", ma.poset),
                    dsl.poset_decl("P2", mb.poset),
                    dsl.sweet_decl("ma", "P1", ma),
                    dsl.sweet_decl("mb", "P2", mb),
                )
            ),
            "dsl",
        )
        for what, (rep, hyp) in reports.items():
            if hyp:
                stats["amalgam_conclusions"] += 1
            else:
                stats["amalgam_unsupported"] += 1
            if not rep.holds:
                if not hyp:
                    stats["amalgam_fails_outside_hypothesis"] += 1
                    continue
                cexs.append(
                    _certificate(
                        "sweet",
                        doc,
                        {
                            "law": "amalgam-sweet",
                            "batch_seed": batch_seed,
                            "tips1": tips1,
                            "tips2": tips2,
                            "which": what,
                            "clause": rep.failures[0].clause,
                        },
                    )
                )
    return n_triples, stats, cexs


def _sweet_law_fails(cert: dict) -> bool:
    data = cert["data"]
    law = data["law"]
    if law == "amalgam-sweet":
        objs = _resolve_document(cert["document"])

        def convert(m: SweetModel, tips: int) -> SweetModel:
            back = lambda x: "bot" if x == "bot" else int(x)
            return SweetModel(
                poset=Poset.flat(tuple(range(tips))),
                dense=frozenset(back(d) for d in m.dense),
                partitions=tuple(
                    tuple(frozenset(back(x) for x in b) for b in level)
                    for level in m.partitions
                ),
            )

        inst = _amalgam_instance(1, (0,) * data["tips1"], (0,) * data["tips2"])
        ma = convert(objs["ma"], data["tips1"])
        mb = convert(objs["mb"], data["tips2"])
        res = amalgam_sweet(ma, mb, inst)
        which = data["which"]
        if which == "validate":
            return not res.validation.holds
        if which == "extends-left":
            return _unit_dense_hypothesis(mb, inst.right) and not res.extends_left.holds
        if which == "extends-right":
            return _unit_dense_hypothesis(ma, inst.left) and not res.extends_right.holds
        raise InputError(f"unknown amalgam-sweet report {which!r}")
    objs = _resolve_document(cert["document"])
    models = {k: v for k, v in objs.items() if isinstance(v, SweetModel)}
    if law == "validate":
        return any(not validate_sweet(m).holds for m in models.values())
    m1, m2, m3 = (models.get(k) for k in ("m1", "m2", "m3"))
    if law == "chain-link":
        return not (
            validate_extends(m1, m2).holds and validate_extends(m2, m3).holds
        )
    if law == "transitivity":
        return (
            validate_extends(m1, m2).holds
            and validate_extends(m2, m3).holds
            and not validate_extends(m1, m3).holds
        )
    if law == "chain-limit":
        try:
            chain_limit([m1, m2, m3])
            return False
        except ConstructionError:
            return True
    if law == "limit-identity":
        return chain_limit([m1, m2, m3]) != m3
    if law == "hechler-sweet":
        hs = hechler_sweet(
            m1, compose_hechler(m1.poset, HechlerParams(data["m"], data["h"]))
        )
        return not (hs.validation.holds and hs.extends.holds)
    raise InputError(f"unknown sweet law {law!r}")


def verify_sweet_laws(
    count: int = 1000,
    seed: int = 0,
    budget_ms: int | None = None,
    jobs: int = 1,
) -> VerificationReport:
    """Seeded random corpus: chains of three grafted models checked for
    validity, extension transitivity, and chain limits; plus randomized
    hechler_sweet and amalgam_sweet preservation runs.  checked counts
    triples."""
    clock = _Clock(budget_ms)
    batch_size = 50
    batches = []
    produced = 0
    b = 0
    while produced < count:
        n = min(batch_size, count - produced)
        batches.append((seed * 100_003 + b, n, 2, 2))
        produced += n
        b += 1
    checked, stats, cexs, complete = _run_instances(
        batches, _sweet_batch, jobs, clock
    )
    return VerificationReport(
        lemma="sweet-laws",
        caps={"count": count},
        seed=seed,
        checked=checked,
        hypothesis_stats=stats,
        counterexamples=cexs,
        complete=complete,
        elapsed_ms=clock.elapsed_ms(),
    )


VERIFIERS = {
    "embed": verify_embedding_criteria,
    "amalgam": verify_amalgam_claims,
    "bcd": verify_bcd,
    "sweet": verify_sweet_laws,
}
