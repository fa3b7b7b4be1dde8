"""Exit codes, frozen outputs, and byte determinism of the command line."""

import json

import pytest

from forcelab.cli import main

from conftest import FIXTURE_FILES, fixture_text


@pytest.fixture(scope="module")
def fl(tmp_path_factory):
    root = tmp_path_factory.mktemp("fl")
    for name in FIXTURE_FILES:
        (root / name).write_text(fixture_text(name), encoding="utf-8")
    return lambda name: str(root / name)


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_valid_files(fl, capsys):
    code, out, _ = run(
        capsys, "check", fl("core.fl"), fl("sweet_valid.fl"), fl("towers.fl")
    )
    assert code == 0
    assert out.count("ok") == 3


def test_check_extends_bad_models_are_individually_fine(fl, capsys):
    code, out, _ = run(capsys, "check", fl("extends_bad.fl"))
    assert code == 0
    assert "ok" in out


def test_check_invalid_models(fl, capsys):
    code, out, _ = run(capsys, "check", "--json", fl("sweet_invalid.fl"))
    assert code == 1
    payload = json.loads(out)
    assert "invalid models:" in payload["files"][0]
    clauses = {c["data"]["clause"] for c in payload["certificates"]}
    assert clauses == {"density", "directedness", "fusion", "continuity"}


def test_completion_fork_text(fl, capsys):
    code, out, _ = run(capsys, "completion", fl("core.fl"), "fork")
    assert code == 0
    assert out == "atoms: 2\natom 0: a\natom 1: b\nelements: 4\n"


def test_completion_fork_json(fl, capsys):
    code, out, _ = run(capsys, "completion", "--json", fl("core.fl"), "fork")
    assert code == 0
    payload = json.loads(out)
    assert payload["atom_count"] == 2
    assert payload["element_count"] == 4
    assert payload["values"]["bot"] == 3


def test_completion_respects_element_cap(fl, capsys):
    code, _, err = run(
        capsys, "completion", fl("core.fl"), "chain3", "--max-elements", "2"
    )
    assert code == 2
    assert "error:" in err


def test_amalgamate_trivial_base(fl, capsys):
    code, out, _ = run(capsys, "amalgamate", "--json", fl("core.fl"), "trivial_base")
    assert code == 0
    payload = json.loads(out)
    assert payload == {"members": 9, "atom_count": 4, "identification": True}


def test_sweet_validate_all_valid(fl, capsys):
    code, out, _ = run(capsys, "sweet-validate", fl("sweet_valid.fl"))
    assert code == 0
    assert "FAIL" not in out


def test_sweet_validate_reports_clause(fl, capsys):
    code, out, _ = run(
        capsys, "sweet-validate", fl("sweet_invalid.fl"), "density_bad"
    )
    assert code == 1
    assert "FAIL clause=density" in out


def test_tower_leq_reflexive(fl, capsys):
    code, out, _ = run(
        capsys,
        "tower-leq", fl("towers.fl"), "T_chain", "T_chain", "--witness", "0,1",
    )
    assert code == 0
    assert out == "holds\n"


def test_tower_leq_negative(fl, capsys):
    code, out, _ = run(
        capsys,
        "tower-leq", fl("towers.fl"), "T_neg1", "T_neg2",
        "--witness", "0,1", "--map", "neg_map",
    )
    assert code == 1
    assert "clause=quotient" in out


def test_verify_bcd_small(capsys):
    code, out, err = run(capsys, "verify", "bcd", "--caps", "3", "--budget", "0")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "passed"
    assert payload["checked"] == 67
    assert payload["complete"] is True
    assert "verify bcd: passed" in err


def test_verify_byte_determinism(capsys):
    _, out1, _ = run(capsys, "verify", "sweet", "--caps", "40", "--budget", "0")
    _, out2, _ = run(capsys, "verify", "sweet", "--caps", "40", "--budget", "0")
    assert out1 == out2


def test_verify_jobs_equivalence(capsys):
    args = ("verify", "embed", "--caps", "4", "--budget", "0")
    _, out1, _ = run(capsys, *args, "--jobs", "1")
    _, out2, _ = run(capsys, *args, "--jobs", "2")
    assert out1 == out2


def test_verify_budget_truncates(capsys):
    code, out, _ = run(capsys, "verify", "bcd", "--caps", "4", "--budget", "1")
    payload = json.loads(out)
    assert payload["complete"] is False
    assert code == (0 if payload["checked"] else 1)


def test_emit_matches_library(fl, capsys):
    from forcelab import dsl

    code, out, _ = run(capsys, "emit", fl("core.fl"), "--format", "dsl")
    assert code == 0
    assert out == dsl.emit(dsl.parse(fixture_text("core.fl")))


def test_emit_json_format(fl, capsys):
    code, out, _ = run(capsys, "emit", fl("core.fl"), "--format", "json")
    assert code == 0
    assert json.loads(out)["schema"] == "forcelab/1"


def test_usage_error_exit_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2


def test_missing_file_exit_2(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/nope.fl")
    assert code == 2
    assert "error:" in err


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.fl"
    bad.write_text("poset P { elements a; }", encoding="utf-8")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert "syntax" in err


def test_unknown_name_exit_2(fl, capsys):
    code, _, err = run(capsys, "completion", fl("core.fl"), "nosuch")
    assert code == 2
    assert "no declaration" in err
