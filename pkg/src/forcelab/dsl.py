"""Line-oriented text format for posets, maps, models, towers, and amalgams.

Grammar, one declaration per block:

    poset NAME { elements: a b c; bottom: a; covers: a<b, a<c; }
    map NAME: SRC -> DST { a -> x; b -> y; }
    sweet NAME on POSET { dense: a b; E0: [a b][c]; E1: [a][b][c]; }
    tower NAME { level: POSET SWEET; level: POSET2 SWEET2; }
    hechler NAME m=2 h=1;
    amalgam NAME { base: P; left: L; right: R; f1: M1; f2: M2; }

Comments run from ``#`` to end of line.  Labels are identifiers (letters,
digits, ``_`` and ``.``) or double-quoted strings.  ``parse`` normalizes
member order, so parse(emit(parse(t))) = parse(t); declaration order is
preserved because resolution is single-pass.

Diagnostics carry line, column, and a code: syntax, duplicate-name,
unresolved-ref, missing-bottom, cycle, incomplete-map.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .amalgam import amalgamate, base_embedding_from_inclusion
from .errors import ParseError
from .iterate import HechlerParams, Tower, hechler_poset
from .posets import Poset
from .embed import poset_inclusion
from .sweet import SweetModel

_IDENT = re.compile(r"[A-Za-z0-9_.]+")


# ---------------------------------------------------------------------------
# Declarations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PosetDecl:
    name: str
    elements: tuple[str, ...]
    bottom: str
    covers: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class MapDecl:
    name: str
    src: str
    dst: str
    pairs: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class SweetDecl:
    name: str
    poset: str
    dense: tuple[str, ...]
    levels: tuple[tuple[tuple[str, ...], ...], ...]


@dataclass(frozen=True)
class TowerDecl:
    name: str
    entries: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class HechlerDecl:
    name: str
    m: int
    h: int


@dataclass(frozen=True)
class AmalgamDecl:
    name: str
    base: str
    left: str
    right: str
    f1: str
    f2: str


@dataclass(frozen=True)
class Document:
    declarations: tuple


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # ident, string, punct, end
    value: str
    line: int
    col: int


_PUNCT_TWO = ("->",)
_PUNCT_ONE = "{};:,<[]="


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text[i : i + 2] in _PUNCT_TWO:
            tokens.append(_Token("punct", text[i : i + 2], line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT_ONE:
            tokens.append(_Token("punct", ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            out = []
            while True:
                if i >= n or text[i] == "\n":
                    raise ParseError(
                        "unterminated string", start_line, start_col, "syntax"
                    )
                c = text[i]
                if c == "\\":
                    if i + 1 >= n:
                        raise ParseError(
                            "dangling escape", line, col, "syntax"
                        )
                    out.append(text[i + 1])
                    i += 2
                    col += 2
                    continue
                if c == '"':
                    i += 1
                    col += 1
                    break
                out.append(c)
                i += 1
                col += 1
            tokens.append(_Token("string", "".join(out), start_line, start_col))
            continue
        m = _IDENT.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col, "syntax")
    tokens.append(_Token("end", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: _Token | None = None, code: str = "syntax"):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col, code)

    def expect_punct(self, value: str) -> _Token:
        tok = self.next()
        if tok.kind != "punct" or tok.value != value:
            self.fail(f"expected {value!r}, got {tok.value or 'end of input'!r}", tok)
        return tok

    def expect_ident(self, what: str = "name") -> _Token:
        tok = self.next()
        if tok.kind != "ident":
            self.fail(f"expected {what}, got {tok.value or 'end of input'!r}", tok)
        return tok

    def label(self) -> str:
        tok = self.next()
        if tok.kind not in ("ident", "string"):
            self.fail(f"expected a label, got {tok.value or 'end of input'!r}", tok)
        return tok.value

    def at_label(self) -> bool:
        return self.peek().kind in ("ident", "string")


def parse(text: str) -> Document:
    p = _Parser(_tokenize(text))
    decls = []
    names = set()
    while p.peek().kind != "end":
        head = p.expect_ident("declaration keyword")
        if head.value == "poset":
            decl = _parse_poset(p)
        elif head.value == "map":
            decl = _parse_map(p)
        elif head.value == "sweet":
            decl = _parse_sweet(p)
        elif head.value == "tower":
            decl = _parse_tower(p)
        elif head.value == "hechler":
            decl = _parse_hechler(p)
        elif head.value == "amalgam":
            decl = _parse_amalgam(p)
        else:
            p.fail(f"unknown declaration {head.value!r}", head)
        if decl.name in names:
            p.fail(f"duplicate name {decl.name!r}", head, code="duplicate-name")
        names.add(decl.name)
        decls.append(decl)
    return Document(declarations=tuple(decls))


def _parse_poset(p: _Parser) -> PosetDecl:
    name_tok = p.next()
    if name_tok.kind not in ("ident", "string"):
        p.fail("expected poset name", name_tok)
    p.expect_punct("{")
    elements: list[str] = []
    bottom = None
    covers: list[tuple[str, str]] = []
    seen = set()
    while not (p.peek().kind == "punct" and p.peek().value == "}"):
        key = p.expect_ident("poset field")
        p.expect_punct(":")
        if key.value == "elements":
            while p.at_label():
                lbl = p.label()
                if lbl in elements:
                    p.fail(f"duplicate element {lbl!r}", key)
                elements.append(lbl)
            p.expect_punct(";")
        elif key.value == "bottom":
            bottom = p.label()
            p.expect_punct(";")
        elif key.value == "covers":
            while p.at_label():
                a = p.label()
                p.expect_punct("<")
                b = p.label()
                covers.append((a, b))
                if p.peek().kind == "punct" and p.peek().value == ",":
                    p.next()
            p.expect_punct(";")
        else:
            p.fail(f"unknown poset field {key.value!r}", key)
        if key.value in seen:
            p.fail(f"repeated field {key.value!r}", key)
        seen.add(key.value)
    p.expect_punct("}")
    if not elements:
        p.fail(f"poset {name_tok.value!r} declares no elements", name_tok)
    if bottom is None:
        p.fail(
            f"poset {name_tok.value!r} declares no bottom",
            name_tok,
            code="missing-bottom",
        )
    return PosetDecl(
        name=name_tok.value,
        elements=tuple(sorted(elements)),
        bottom=bottom,
        covers=tuple(sorted(set(covers))),
    )


def _parse_map(p: _Parser) -> MapDecl:
    name = p.label()
    p.expect_punct(":")
    src = p.label()
    p.expect_punct("->")
    dst = p.label()
    p.expect_punct("{")
    pairs = []
    while not (p.peek().kind == "punct" and p.peek().value == "}"):
        a = p.label()
        p.expect_punct("->")
        b = p.label()
        p.expect_punct(";")
        pairs.append((a, b))
    p.expect_punct("}")
    return MapDecl(name=name, src=src, dst=dst, pairs=tuple(sorted(pairs)))


def _parse_sweet(p: _Parser) -> SweetDecl:
    name = p.label()
    on = p.expect_ident("'on'")
    if on.value != "on":
        p.fail("expected 'on'", on)
    poset = p.label()
    p.expect_punct("{")
    dense: tuple[str, ...] | None = None
    levels: dict[int, tuple] = {}
    while not (p.peek().kind == "punct" and p.peek().value == "}"):
        key = p.expect_ident("sweet field")
        p.expect_punct(":")
        if key.value == "dense":
            if dense is not None:
                p.fail("repeated field 'dense'", key)
            members = []
            while p.at_label():
                members.append(p.label())
            p.expect_punct(";")
            dense = tuple(sorted(set(members)))
        elif re.fullmatch(r"E\d+", key.value):
            idx = int(key.value[1:])
            if idx in levels:
                p.fail(f"repeated level {key.value!r}", key)
            blocks = []
            while p.peek().kind == "punct" and p.peek().value == "[":
                p.next()
                block = []
                while p.at_label():
                    block.append(p.label())
                p.expect_punct("]")
                blocks.append(tuple(sorted(set(block))))
            p.expect_punct(";")
            levels[idx] = tuple(sorted(blocks))
        else:
            p.fail(f"unknown sweet field {key.value!r}", key)
    p.expect_punct("}")
    if dense is None:
        p.fail(f"sweet {name!r} declares no dense set")
    if sorted(levels) != list(range(len(levels))) or not levels:
        p.fail(f"sweet {name!r} must declare levels E0..E{{k}} contiguously")
    return SweetDecl(
        name=name,
        poset=poset,
        dense=dense,
        levels=tuple(levels[i] for i in range(len(levels))),
    )


def _parse_tower(p: _Parser) -> TowerDecl:
    name = p.label()
    p.expect_punct("{")
    entries = []
    while not (p.peek().kind == "punct" and p.peek().value == "}"):
        key = p.expect_ident("tower field")
        if key.value != "level":
            p.fail(f"unknown tower field {key.value!r}", key)
        p.expect_punct(":")
        poset = p.label()
        sweet = p.label()
        p.expect_punct(";")
        entries.append((poset, sweet))
    p.expect_punct("}")
    if not entries:
        p.fail(f"tower {name!r} declares no levels")
    return TowerDecl(name=name, entries=tuple(entries))


def _parse_hechler(p: _Parser) -> HechlerDecl:
    name = p.label()
    values = {}
    for field in ("m", "h"):
        key = p.expect_ident(f"'{field}'")
        if key.value != field:
            p.fail(f"expected '{field}='", key)
        p.expect_punct("=")
        num = p.expect_ident("number")
        if not num.value.isdigit():
            p.fail(f"expected a number, got {num.value!r}", num)
        values[field] = int(num.value)
    p.expect_punct(";")
    return HechlerDecl(name=name, m=values["m"], h=values["h"])


def _parse_amalgam(p: _Parser) -> AmalgamDecl:
    name = p.label()
    p.expect_punct("{")
    fields = {}
    while not (p.peek().kind == "punct" and p.peek().value == "}"):
        key = p.expect_ident("amalgam field")
        if key.value not in ("base", "left", "right", "f1", "f2"):
            p.fail(f"unknown amalgam field {key.value!r}", key)
        if key.value in fields:
            p.fail(f"repeated field {key.value!r}", key)
        p.expect_punct(":")
        fields[key.value] = p.label()
        p.expect_punct(";")
    p.expect_punct("}")
    missing = [f for f in ("base", "left", "right", "f1", "f2") if f not in fields]
    if missing:
        p.fail(f"amalgam {name!r} misses field {missing[0]!r}")
    return AmalgamDecl(name=name, **fields)


# ---------------------------------------------------------------------------
# Resolution
# ---------------------------------------------------------------------------


def _closure_check(decl: PosetDecl) -> None:
    n = len(decl.elements)
    pos = {e: i for i, e in enumerate(decl.elements)}
    up = [1 << i for i in range(n)]
    for a, b in decl.covers:
        for e in (a, b):
            if e not in pos:
                raise ParseError(
                    f"poset {decl.name!r} uses undeclared element {e!r}",
                    0,
                    0,
                    "unresolved-ref",
                )
        up[pos[a]] |= 1 << pos[b]
    for k in range(n):
        for i in range(n):
            if up[i] >> k & 1:
                up[i] |= up[k]
    for i in range(n):
        for j in range(i + 1, n):
            if up[i] >> j & 1 and up[j] >> i & 1:
                raise ParseError(
                    f"poset {decl.name!r} has a cycle through "
                    f"{decl.elements[i]!r} and {decl.elements[j]!r}",
                    0,
                    0,
                    "cycle",
                )
    if decl.bottom not in pos:
        raise ParseError(
            f"poset {decl.name!r} declares unknown bottom {decl.bottom!r}",
            0,
            0,
            "missing-bottom",
        )
    b = pos[decl.bottom]
    if up[b] != (1 << n) - 1:
        raise ParseError(
            f"poset {decl.name!r}: bottom {decl.bottom!r} is not below everything",
            0,
            0,
            "missing-bottom",
        )


def resolve(doc: Document) -> dict:
    """Build the declared objects, in declaration order.

    Returns a name -> object dict: Poset for poset/hechler declarations,
    a plain label dict for maps, SweetModel, Tower, AmalgamInstance.
    References must point backward; anything else is an unresolved-ref.
    """
    out: dict = {}

    def ref(name: str, want: type | tuple, what: str):
        if name not in out:
            raise ParseError(f"unresolved reference {name!r}", 0, 0, "unresolved-ref")
        obj = out[name]
        if not isinstance(obj, want):
            raise ParseError(
                f"{name!r} is not a {what}", 0, 0, "unresolved-ref"
            )
        return obj

    for decl in doc.declarations:
        if isinstance(decl, PosetDecl):
            _closure_check(decl)
            out[decl.name] = Poset.from_covers(decl.elements, decl.covers)
        elif isinstance(decl, MapDecl):
            src = ref(decl.src, Poset, "poset")
            dst = ref(decl.dst, Poset, "poset")
            mapping = dict(decl.pairs)
            if len(mapping) != len(decl.pairs):
                raise ParseError(
                    f"map {decl.name!r} maps an element twice",
                    0,
                    0,
                    "incomplete-map",
                )
            missing = [e for e in src.labels if e not in mapping]
            if missing:
                raise ParseError(
                    f"map {decl.name!r} is undefined at {missing[0]!r}",
                    0,
                    0,
                    "incomplete-map",
                )
            for tgt in mapping.values():
                dst.index(tgt)
            out[decl.name] = mapping
        elif isinstance(decl, SweetDecl):
            poset = ref(decl.poset, Poset, "poset")
            out[decl.name] = SweetModel(
                poset=poset,
                dense=frozenset(decl.dense),
                partitions=tuple(
                    tuple(frozenset(b) for b in level) for level in decl.levels
                ),
            )
        elif isinstance(decl, TowerDecl):
            posets = [ref(pn, Poset, "poset") for pn, _ in decl.entries]
            models = [ref(sn, SweetModel, "sweet model") for _, sn in decl.entries]
            out[decl.name] = Tower(
                top=posets[-1],
                levels=tuple(frozenset(q.labels) for q in posets),
                models=tuple(models),
            )
        elif isinstance(decl, HechlerDecl):
            out[decl.name] = hechler_poset(HechlerParams(decl.m, decl.h))
        elif isinstance(decl, AmalgamDecl):
            base = ref(decl.base, Poset, "poset")
            left = ref(decl.left, Poset, "poset")
            right = ref(decl.right, Poset, "poset")
            m1 = ref(decl.f1, dict, "map")
            m2 = ref(decl.f2, dict, "map")
            from .completion import regular_open_completion

            f1 = base_embedding_from_inclusion(poset_inclusion(base, left, m1))
            f2 = base_embedding_from_inclusion(poset_inclusion(base, right, m2))
            out[decl.name] = amalgamate(
                regular_open_completion(base), f1.target, f2.target, f1, f2
            )
        else:
            raise ParseError(f"unknown declaration {decl!r}", 0, 0, "syntax")
    return out


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def _quote(label: str) -> str:
    if _IDENT.fullmatch(label):
        return label
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def stringify_label(label) -> str:
    """Canonical string form for a library label in DSL output."""
    if isinstance(label, str):
        return label
    return repr(label).replace(" ", "")


def emit(doc: Document, fmt: str = "dsl") -> str:
    if fmt == "dsl":
        return _emit_dsl(doc)
    if fmt == "json":
        return _emit_json(doc)
    if fmt == "dot":
        return _emit_dot(doc)
    raise ParseError(f"unknown format {fmt!r}", 0, 0, "syntax")


def _emit_dsl(doc: Document) -> str:
    parts = []
    for d in doc.declarations:
        if isinstance(d, PosetDecl):
            lines = [f"poset {_quote(d.name)} {{"]
            lines.append("  elements: " + " ".join(_quote(e) for e in d.elements) + ";")
            lines.append(f"  bottom: {_quote(d.bottom)};")
            if d.covers:
                lines.append(
                    "  covers: "
                    + ", ".join(f"{_quote(a)}<{_quote(b)}" for a, b in d.covers)
                    + ";"
                )
            lines.append("}")
            parts.append("\n".join(lines))
        elif isinstance(d, MapDecl):
            lines = [f"map {_quote(d.name)}: {_quote(d.src)} -> {_quote(d.dst)} {{"]
            for a, b in d.pairs:
                lines.append(f"  {_quote(a)} -> {_quote(b)};")
            lines.append("}")
            parts.append("\n".join(lines))
        elif isinstance(d, SweetDecl):
            lines = [f"sweet {_quote(d.name)} on {_quote(d.poset)} {{"]
            lines.append("  dense: " + " ".join(_quote(e) for e in d.dense) + ";")
            for i, level in enumerate(d.levels):
                blocks = "".join(
                    "[" + " ".join(_quote(e) for e in blk) + "]" for blk in level
                )
                lines.append(f"  E{i}: {blocks};")
            lines.append("}")
            parts.append("\n".join(lines))
        elif isinstance(d, TowerDecl):
            lines = [f"tower {_quote(d.name)} {{"]
            for pn, sn in d.entries:
                lines.append(f"  level: {_quote(pn)} {_quote(sn)};")
            lines.append("}")
            parts.append("\n".join(lines))
        elif isinstance(d, HechlerDecl):
            parts.append(f"hechler {_quote(d.name)} m={d.m} h={d.h};")
        elif isinstance(d, AmalgamDecl):
            parts.append(
                f"amalgam {_quote(d.name)} {{\n"
                f"  base: {_quote(d.base)};\n  left: {_quote(d.left)};\n"
                f"  right: {_quote(d.right)};\n"
                f"  f1: {_quote(d.f1)};\n  f2: {_quote(d.f2)};\n}}"
            )
    return "\n\n".join(parts) + ("\n" if parts else "")


def _emit_json(doc: Document) -> str:
    decls = []
    for d in doc.declarations:
        if isinstance(d, PosetDecl):
            decls.append(
                {
                    "kind": "poset",
                    "name": d.name,
                    "elements": list(d.elements),
                    "bottom": d.bottom,
                    "covers": [list(c) for c in d.covers],
                }
            )
        elif isinstance(d, MapDecl):
            decls.append(
                {
                    "kind": "map",
                    "name": d.name,
                    "src": d.src,
                    "dst": d.dst,
                    "pairs": [list(c) for c in d.pairs],
                }
            )
        elif isinstance(d, SweetDecl):
            decls.append(
                {
                    "kind": "sweet",
                    "name": d.name,
                    "poset": d.poset,
                    "dense": list(d.dense),
                    "levels": [[list(b) for b in level] for level in d.levels],
                }
            )
        elif isinstance(d, TowerDecl):
            decls.append(
                {
                    "kind": "tower",
                    "name": d.name,
                    "levels": [list(e) for e in d.entries],
                }
            )
        elif isinstance(d, HechlerDecl):
            decls.append({"kind": "hechler", "name": d.name, "m": d.m, "h": d.h})
        elif isinstance(d, AmalgamDecl):
            decls.append(
                {
                    "kind": "amalgam",
                    "name": d.name,
                    "base": d.base,
                    "left": d.left,
                    "right": d.right,
                    "f1": d.f1,
                    "f2": d.f2,
                }
            )
    return json.dumps(
        {"schema": "forcelab/1", "declarations": decls},
        sort_keys=True,
        indent=2,
    ) + "\n"


def _emit_dot(doc: Document) -> str:
    lines = ["digraph document {"]
    for d in doc.declarations:
        if not isinstance(d, PosetDecl):
            continue
        lines.append(f'  subgraph "cluster_{d.name}" {{')
        lines.append(f'    label="{d.name}";')
        for e in d.elements:
            lines.append(f'    "{d.name}.{e}";')
        for a, b in d.covers:
            lines.append(f'    "{d.name}.{a}" -> "{d.name}.{b}";')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Converters for building documents from library objects
# ---------------------------------------------------------------------------


def poset_decl(name: str, poset: Poset) -> PosetDecl:
    labels = {lbl: stringify_label(lbl) for lbl in poset.labels}
    if len(set(labels.values())) != len(labels):
        raise ParseError(f"labels of {name!r} collide as text", 0, 0, "syntax")
    return PosetDecl(
        name=name,
        elements=tuple(sorted(labels.values())),
        bottom=labels[poset.labels[poset.bottom]],
        covers=tuple(sorted((labels[a], labels[b]) for a, b in poset.covers())),
    )


def sweet_decl(name: str, poset_name: str, model: SweetModel) -> SweetDecl:
    text = stringify_label
    return SweetDecl(
        name=name,
        poset=poset_name,
        dense=tuple(sorted(text(d) for d in model.dense)),
        levels=tuple(
            tuple(sorted(tuple(sorted(text(x) for x in blk)) for blk in level))
            for level in model.partitions
        ),
    )


def map_decl(name: str, src: str, dst: str, mapping: dict) -> MapDecl:
    text = stringify_label
    return MapDecl(
        name=name,
        src=src,
        dst=dst,
        pairs=tuple(sorted((text(a), text(b)) for a, b in mapping.items())),
    )
