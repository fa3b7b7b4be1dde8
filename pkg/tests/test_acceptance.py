"""Acceptance gate: one test per criterion, one pass/fail line under -v.

Each test states its criterion in the docstring and checks it at the stated
scale.  Expensive sweeps are shared through module-scoped fixtures.
"""

import json

import pytest

from forcelab import (
    HechlerParams,
    Poset,
    Subalgebra,
    SubalgebraIso,
    SweetModel,
    Tower,
    amalgam_sweet,
    chain_limit,
    compose_hechler,
    dsl,
    hechler_poset,
    hechler_sweet,
    identity_amalgam,
    is_complete_suborder,
    is_complete_suborder_via_reductions,
    poset_inclusion,
    regular_open_completion,
    tower_amalgamate,
    tower_chain_merge,
    tower_hechler,
    tower_leq,
    validate_extends,
    validate_sweet,
)
from forcelab.cli import main
from forcelab.lemmalab import (
    all_posets,
    verify_amalgam_claims,
    verify_bcd,
    verify_embedding_criteria,
    verify_sweet_laws,
)

from conftest import FIXTURE_FILES, fixture_text


@pytest.fixture(scope="module")
def embed_report():
    return verify_embedding_criteria(5, budget_ms=0)


@pytest.fixture(scope="module")
def amalgam_report():
    return verify_amalgam_claims(budget_ms=0)


def fixture_inclusion(env, doc, name):
    decl = next(d for d in doc.declarations if getattr(d, "name", None) == name)
    return poset_inclusion(env[decl.src], env[decl.dst], env[name])


def test_criterion_01_suborder_criteria_agree(embed_report, core):
    """Antichain and reduction routes agree on every inclusion, |large| <= 5."""
    assert embed_report.verdict == "passed"
    assert embed_report.complete
    assert embed_report.checked == 3671
    assert embed_report.counterexamples == []

    doc, env = core
    expected = {"inc_true": True, "inc_false": False, "inc_flat": False}
    for name, want in expected.items():
        inc = fixture_inclusion(env, doc, name)
        assert is_complete_suborder(inc) is want, name
        assert is_complete_suborder_via_reductions(inc) is want, name


def test_criterion_02_completion_correctness():
    """dense_map dense and structure-preserving; completion idempotent, <= 5."""
    for poset in all_posets(5):
        alg = regular_open_completion(poset)
        values = [alg.dense_map[i] for i in range(len(poset))]
        for b in range(1, alg.full + 1):
            assert any(v & ~b == 0 for v in values), "dense_map not dense"
        for i in range(len(poset)):
            for j in range(len(poset)):
                if poset.leq(i, j):
                    assert values[j] & ~values[i] == 0
                compatible = bool(poset.compatible(i, j))
                assert compatible == bool(values[i] & values[j])
        again = regular_open_completion(alg.atom_order())
        assert again.atom_count == alg.atom_count
        assert sorted(again.atoms) == [1 << k for k in range(alg.atom_count)]


def test_criterion_03_amalgam_membership_oracle(amalgam_report):
    """Atom-criterion membership equals witness-search membership; trivial
    base gives the full product; identity amalgam collapses to the base."""
    assert amalgam_report.verdict == "passed"
    assert amalgam_report.complete
    assert amalgam_report.counterexamples == []
    stats = amalgam_report.hypothesis_stats
    assert stats["instances"] == 73
    assert stats["identity_instances"] == 3
    assert stats["membership_pairs"] == 3332
    assert stats["claim_membership"] == 73
    assert stats["claim_trivial-product"] == 73


def test_criterion_04_amalgamation_finite_claims(amalgam_report):
    """Injections complete, identification holds, quotient-forcing preserved."""
    assert amalgam_report.counterexamples == []
    stats = amalgam_report.hypothesis_stats
    assert stats["claim_inj-complete"] == 73
    assert stats["claim_identification"] == 73
    assert stats["claim_quotient-preserved"] == 73
    assert stats["claim_extension-embedding"] == 73


def test_criterion_05_bcd_sweep():
    """Nested-subalgebra lifting sweep at 4 atoms: zero counterexamples."""
    report = verify_bcd(4, budget_ms=60_000)
    assert report.complete, "sweep exceeded its budget"
    assert report.checked == 967
    assert report.checked > 0
    assert report.hypothesis_stats["hyp2_holds"] > 0
    assert report.hypothesis_stats["hyp3_holds"] > 0
    assert report.hypothesis_stats["conclusions_checked"] > 0
    assert report.counterexamples == []
    assert report.verdict == "passed"


def test_criterion_06_two_step_equivalence(embed_report):
    """Two-step over the quotient matches the big poset on every complete
    suborder with at most 5 elements in the large poset."""
    assert embed_report.verdict == "passed"
    assert embed_report.hypothesis_stats["complete_suborders"] > 0
    assert embed_report.counterexamples == []


def test_criterion_07_hechler_combinatorics():
    """Size formula, bottom condition, and the two worked examples."""
    for m in (1, 2, 3):
        for h in (0, 1, 2):
            poset = hechler_poset(HechlerParams(m, h))
            assert len(poset) == (m + 1) * (h + 1) ** m
            assert poset.labels[poset.bottom] == (0, (0,) * m)
    poset = hechler_poset(HechlerParams(2, 1))
    assert poset.leq_labels((0, (0, 0)), (1, (0, 1)))
    assert not poset.compatible(
        poset.index((1, (1, 0))), poset.index((1, (0, 0)))
    )


INVALID_CLAUSES = {
    "density_bad": "density",
    "directed_bad": "directedness",
    "fusion_bad": "fusion",
    "continuity_bad": "continuity",
}


def sweet_models(env):
    return {k: v for k, v in env.items() if isinstance(v, SweetModel)}


def test_criterion_08_sweetness_suite(sweet_valid, sweet_invalid):
    """Fixture validation, clause-exact rejection, transitivity at >= 1000
    random triples, and chain limits that validate and extend."""
    _, env = sweet_valid
    models = sweet_models(env)
    for name, model in models.items():
        assert validate_sweet(model).holds, name

    _, bad_env = sweet_invalid
    for name, clause in INVALID_CLAUSES.items():
        report = validate_sweet(bad_env[name])
        assert not report.holds, name
        assert {f.clause for f in report.failures} == {clause}, name

    # transitivity over every extending pair of fixture models
    items = sorted(models.items())
    for n1, m1 in items:
        for n2, m2 in items:
            if m1.poset != m2.poset or m1.levels != m2.levels:
                continue
            if not validate_extends(m1, m2).holds:
                continue
            for n3, m3 in items:
                if m3.poset != m2.poset or m3.levels != m2.levels:
                    continue
                if validate_extends(m2, m3).holds:
                    assert validate_extends(m1, m3).holds, (n1, n2, n3)

    limit = chain_limit([env["m_tree1"], env["m_tree2"]])
    assert validate_sweet(limit).holds
    assert validate_extends(env["m_tree1"], limit).holds
    assert validate_extends(env["m_tree2"], limit).holds

    random_report = verify_sweet_laws(count=1000, seed=0, budget_ms=0)
    assert random_report.verdict == "passed"
    assert random_report.checked >= 1000
    assert random_report.counterexamples == []


def transports_to_completion(model: SweetModel, alg) -> bool:
    """amalgam_sweet works on Boolean values, so it is defined only for
    models whose classes never separate conditions with the same value."""
    value = {lbl: alg.value_of_label(lbl) for lbl in model.poset.labels}
    for level in model.partitions:
        owner: dict = {}
        for bi, block in enumerate(level):
            for d in block:
                if owner.setdefault(value[d], bi) != bi:
                    return False
    return True


def test_criterion_09_sweetness_preservation(sweet_valid):
    """amalgam_sweet and hechler_sweet preserve sweetness on every fixture
    in their domain."""
    _, env = sweet_valid
    amalgamated = 0
    for name, model in sorted(sweet_models(env).items()):
        alg = regular_open_completion(model.poset)
        if transports_to_completion(model, alg):
            res = amalgam_sweet(model, model, identity_amalgam(alg))
            assert res.validation.holds, name
            assert res.extends_left.holds, name
            assert res.extends_right.holds, name
            amalgamated += 1

        hs = hechler_sweet(model, compose_hechler(model.poset, HechlerParams(1, 1)))
        assert hs.validation.holds, name
        assert hs.extends.holds, name
    assert amalgamated >= 5


def point_model(poset, labels) -> SweetModel:
    return SweetModel(
        poset=poset,
        dense=frozenset(labels),
        partitions=((tuple(frozenset({x}) for x in labels)),),
    )


def chain_tower(top_n: int, level_sizes) -> Tower:
    top = Poset.chain(top_n)
    levels = [frozenset(range(k)) for k in level_sizes]
    models = tuple(point_model(top.induced(sorted(lv)), lv) for lv in levels)
    return Tower(top=top, levels=tuple(levels), models=models)


def test_criterion_10_tower_suite(towers):
    """Reflexivity, chain merges, Hechler lifts, and tower amalgamation."""
    _, env = towers
    fixture_towers = {k: v for k, v in env.items() if isinstance(v, Tower)}
    assert len(fixture_towers) == 4
    for name, tower in fixture_towers.items():
        assert tower_leq(tower, tower, range(len(tower))).holds, name
        merged = tower_chain_merge([tower, tower], [range(len(tower))])
        assert tower_leq(tower, merged, range(len(tower))).holds, name

    ta, tb, tc = chain_tower(1, [1, 1, 1]), chain_tower(2, [1, 2, 2]), chain_tower(3, [1, 2, 3])
    merged = tower_chain_merge([ta, tb, tc], [[0, 1, 2], [0, 1, 2]])
    for t in (ta, tb, tc):
        assert tower_leq(t, merged, range(3)).holds

    lifted = tower_hechler(env["T_chain"], HechlerParams(1, 1))
    assert isinstance(lifted, Tower)
    assert tower_leq(lifted, lifted, range(len(lifted))).holds

    t = env["T_chain"]
    alg = regular_open_completion(t.top)
    sub = Subalgebra.whole(alg.atom_count)
    iso = SubalgebraIso.build(alg, alg, sub, sub, {b: b for b in sub.members})
    result = tower_amalgamate(t, t, iso, 0)
    assert result.leq_left.holds
    assert result.leq_right.holds


def test_criterion_11_cli_determinism(capsys, tmp_path):
    """Byte-identical verify reports; canonical DSL round-trip on fixtures."""
    args = ["verify", "sweet", "--caps", "150", "--seed", "4", "--budget", "0"]
    assert main(args) == 0
    out1 = capsys.readouterr().out
    assert main(args) == 0
    out2 = capsys.readouterr().out
    assert out1 == out2
    assert json.loads(out1)["verdict"] == "passed"

    for name in FIXTURE_FILES:
        doc = dsl.parse(fixture_text(name))
        text = dsl.emit(doc)
        assert dsl.parse(text) == doc, name
        assert dsl.emit(dsl.parse(text)) == text, name
