"""Command line front end.

Results go to stdout and are byte-stable for identical invocations;
diagnostics and timing go to stderr.  Exit codes: 0 when everything passed,
1 when a counterexample or validation failure was found (with a certificate
on stdout), 2 for usage, parse, or input errors.  No command writes to its
input files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dsl
from .completion import regular_open_completion
from .errors import ConstructionError, InputError, ParseError
from .lemmalab import VERIFIERS, _certificate
from .posets import Poset
from .sweet import SweetModel, validate_sweet
from .iterate import Tower, tower_leq

_VERIFY_DEFAULT_CAPS = {"bcd": 4, "embed": 5, "sweet": 1000, "amalgam": 3}


def _load(path: str):
    text = Path(path).read_text(encoding="utf-8")
    doc = dsl.parse(text)
    return doc, dsl.resolve(doc)


def _print_json(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _model_certificate(name: str, model: SweetModel, clause: str, witness) -> dict:
    document = dsl.emit(
        dsl.Document(
            declarations=(
                dsl.poset_decl("P", model.poset),
                dsl.sweet_decl(name, "P", model),
            )
        ),
        "dsl",
    )
    return _certificate(
        "sweet",
        document,
        {"law": "validate", "clause": clause, "witness": repr(witness)},
    )


def _cmd_check(args) -> int:
    status = 0
    lines = []
    certs = []
    for path in args.files:
        doc, objects = _load(path)
        models = {
            name: obj for name, obj in objects.items() if isinstance(obj, SweetModel)
        }
        bad = []
        for name, model in sorted(models.items()):
            report = validate_sweet(model)
            if not report.holds:
                f = report.failures[0]
                bad.append(name)
                certs.append(_model_certificate(name, model, f.clause, f.witness))
        if bad:
            status = 1
            lines.append(f"{path}: {len(doc.declarations)} declarations, "
                         f"invalid models: {' '.join(bad)}")
        else:
            lines.append(f"{path}: {len(doc.declarations)} declarations, ok")
    if args.json:
        _print_json({"files": lines, "certificates": certs})
    else:
        for line in lines:
            sys.stdout.write(line + "\n")
        for cert in certs:
            _print_json(cert)
    return status


def _resolve_named(objects: dict, name: str, kind: type, what: str):
    if name not in objects:
        raise InputError(f"no declaration named {name!r}")
    obj = objects[name]
    if not isinstance(obj, kind):
        raise InputError(f"{name!r} is not a {what}")
    return obj


def _cmd_completion(args) -> int:
    _, objects = _load(args.file)
    poset = _resolve_named(objects, args.name, Poset, "poset")
    if len(poset.labels) > args.max_elements:
        raise InputError(
            f"poset has {len(poset.labels)} elements, over the cap "
            f"{args.max_elements}"
        )
    alg = regular_open_completion(poset)
    payload = {
        "atom_count": alg.atom_count,
        "atoms": [dsl.stringify_label(a) for a in alg.atoms],
        "element_count": 1 << alg.atom_count,
        "values": {
            dsl.stringify_label(lbl): alg.value_of_label(lbl)
            for lbl in poset.labels
        },
    }
    if args.json:
        _print_json(payload)
    else:
        sys.stdout.write(f"atoms: {alg.atom_count}\n")
        for k, a in enumerate(payload["atoms"]):
            sys.stdout.write(f"atom {k}: {a}\n")
        sys.stdout.write(f"elements: {payload['element_count']}\n")
    return 0


def _cmd_amalgamate(args) -> int:
    from .amalgam import AmalgamInstance, check_identification

    _, objects = _load(args.file)
    inst = _resolve_named(objects, args.name, AmalgamInstance, "amalgam")
    payload = {
        "members": len(inst.amalgam.labels),
        "atom_count": inst.completion.atom_count,
        "identification": check_identification(inst),
    }
    if args.json:
        _print_json(payload)
    else:
        sys.stdout.write(f"members: {payload['members']}\n")
        sys.stdout.write(f"atoms: {payload['atom_count']}\n")
        ident = "true" if payload["identification"] else "false"
        sys.stdout.write(f"identification: {ident}\n")
    return 0 if payload["identification"] else 1


def _cmd_sweet_validate(args) -> int:
    _, objects = _load(args.file)
    models = {
        name: obj for name, obj in objects.items() if isinstance(obj, SweetModel)
    }
    names = args.names or sorted(models)
    status = 0
    results = {}
    certs = []
    for name in names:
        model = _resolve_named(models, name, SweetModel, "sweetness model")
        report = validate_sweet(model)
        if report.holds:
            results[name] = {"holds": True}
        else:
            status = 1
            f = report.failures[0]
            results[name] = {
                "holds": False,
                "clause": f.clause,
                "witness": repr(f.witness),
            }
            certs.append(_model_certificate(name, model, f.clause, f.witness))
    if args.json:
        _print_json({"models": results, "certificates": certs})
    else:
        for name in names:
            r = results[name]
            if r["holds"]:
                sys.stdout.write(f"{name}: ok\n")
            else:
                sys.stdout.write(
                    f"{name}: FAIL clause={r['clause']} witness={r['witness']}\n"
                )
        for cert in certs:
            _print_json(cert)
    return status


def _cmd_tower_leq(args) -> int:
    _, objects = _load(args.file)
    t1 = _resolve_named(objects, args.first, Tower, "tower")
    t2 = _resolve_named(objects, args.second, Tower, "tower")
    try:
        witness = tuple(int(x) for x in args.witness.split(",") if x != "")
    except ValueError:
        raise InputError(f"bad witness list {args.witness!r}")
    mapping = None
    if args.map is not None:
        mapping = _resolve_named(objects, args.map, dict, "map")
    report = tower_leq(t1, t2, witness, mapping)
    failures = [
        {"clause": f.clause, "witness": repr(f.witness)} for f in report.failures
    ]
    if args.json:
        _print_json({"holds": report.holds, "failures": failures})
    else:
        if report.holds:
            sys.stdout.write("holds\n")
        else:
            for f in failures:
                sys.stdout.write(
                    f"fails: clause={f['clause']} witness={f['witness']}\n"
                )
    return 0 if report.holds else 1


def _cmd_verify(args) -> int:
    caps = args.caps if args.caps is not None else _VERIFY_DEFAULT_CAPS[args.lemma]
    kwargs = {"seed": args.seed, "budget_ms": args.budget, "jobs": args.jobs}
    if args.lemma == "bcd":
        report = VERIFIERS["bcd"](max_atoms=caps, **kwargs)
    elif args.lemma == "embed":
        report = VERIFIERS["embed"](size_cap=caps, **kwargs)
    elif args.lemma == "sweet":
        report = VERIFIERS["sweet"](count=caps, **kwargs)
    else:
        report = VERIFIERS["amalgam"](
            max_base_atoms=min(2, caps), max_factor_atoms=caps, **kwargs
        )
    sys.stdout.write(report.to_json())
    sys.stderr.write(
        f"verify {args.lemma}: {report.verdict}, {report.checked} instances, "
        f"{report.elapsed_ms} ms\n"
    )
    return 0 if report.verdict == "passed" else 1


def _cmd_emit(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    doc = dsl.parse(text)
    sys.stdout.write(dsl.emit(doc, args.format))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forcelab",
        description="Finite forcing combinatorics: completions, amalgams, "
        "sweetness models, and lemma verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse, resolve, and validate files")
    p.add_argument("files", nargs="+")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("completion", help="completion of a declared poset")
    p.add_argument("file")
    p.add_argument("name")
    p.add_argument("--max-elements", type=int, default=16)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_completion)

    p = sub.add_parser("amalgamate", help="summarize a declared amalgam")
    p.add_argument("file")
    p.add_argument("name")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_amalgamate)

    p = sub.add_parser("sweet-validate", help="validate declared sweetness models")
    p.add_argument("file")
    p.add_argument("names", nargs="*")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_sweet_validate)

    p = sub.add_parser("tower-leq", help="compare two declared towers")
    p.add_argument("file")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--witness", required=True, help="comma-separated level indices")
    p.add_argument("--map", help="name of a declared map between the tops")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_tower_leq)

    p = sub.add_parser("verify", help="run a lemma verification sweep")
    p.add_argument("lemma", choices=sorted(VERIFIERS))
    p.add_argument("--caps", type=int, default=None, help="principal size cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--budget",
        type=int,
        default=None,
        help="budget in ms (default FORCELAB_BUDGET_MS or 60000; 0 = unlimited)",
    )
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("emit", help="re-emit a file in a chosen format")
    p.add_argument("file")
    p.add_argument("--format", choices=("dsl", "json", "dot"), default="dsl")
    p.set_defaults(func=_cmd_emit)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except ConstructionError as exc:
        cert = getattr(exc, "certificate", None)
        payload = {"error": str(exc)}
        if cert is not None:
            payload["certificate"] = cert
        _print_json(payload)
        return 1
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
