"""Text format for instances: a quiver with relations plus named module constructors.

Example::

    convention: application-order
    field: prime:32003
    vertices: 1 2 3
    arrow alpha: 1 -> 1
    arrow beta: 1 -> 2
    arrow gamma: 2 -> 3
    relation: alpha alpha alpha
    relation: alpha beta gamma
    module S1 = simple 1
    module K = trivial
    module P = projective 1@0 2@5
    module X = shift S1 3
    module JP = radical P 1
    module O2 = syzygy S1 2

Paths list arrows in application order (first applied first).  A relation is a
sum of terms ``[coef*]path`` separated by ``+`` or ``-``.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional

from .algebra import AlgebraError, PathAlgebraPresentation, Quiver
from .scalar import Field

CONVENTION = "application-order"
MODULE_KINDS = {"simple": 1, "trivial": 0, "projective": None, "shift": 2, "radical": 2, "syzygy": 2}


@dataclass(frozen=True)
class InputError:
    kind: str  # "syntax" or "semantic"
    line: int
    column: int
    message: str

    def __str__(self):
        return f"line {self.line}, column {self.column}: {self.kind} error: {self.message}"


class InstanceError(ValueError):
    def __init__(self, errors: list):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors))

    @property
    def kinds(self) -> set:
        return {e.kind for e in self.errors}


@dataclass(frozen=True)
class ModuleSpec:
    name: str
    kind: str
    args: tuple  # strings / ints depending on kind


@dataclass(frozen=True)
class InstanceFile:
    field: str
    vertices: tuple
    arrows: tuple  # (name, src, tgt)
    relations: tuple  # tuple of ((Fraction, (arrow, ...)), ...)
    modules: tuple = ()
    d: Optional[int] = None

    def quiver(self) -> Quiver:
        return Quiver(self.vertices, self.arrows)

    def presentation(self, field: Optional[Field] = None) -> PathAlgebraPresentation:
        return PathAlgebraPresentation(self.quiver(), self.relations, field or Field.parse(self.field))

    def module(self, name: str) -> Optional[ModuleSpec]:
        for m in self.modules:
            if m.name == name:
                return m
        return None


def normalize_name(s: str) -> str:
    return unicodedata.normalize("NFKC", s).strip()


_NAME = r"[^\s:=@+\-*]+"
_ARROW_RE = re.compile(rf"^arrow\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})\s*$")
_MODULE_RE = re.compile(rf"^module\s+({_NAME})\s*=\s*(\S+)(.*)$")
_COEF_RE = re.compile(r"^([0-9]+(?:/[0-9]+)?)\*")


def _parse_relation(body: str, lineno: int, col0: int, errors: list) -> Optional[tuple]:
    terms = []
    pos = 0
    text = body
    sign = 1
    first = True
    while pos < len(text):
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        if text[pos] in "+-":
            sign = -1 if text[pos] == "-" else 1
            pos += 1
            while pos < len(text) and text[pos].isspace():
                pos += 1
        elif not first:
            errors.append(InputError("syntax", lineno, col0 + pos + 1, "expected '+' or '-' between terms"))
            return None
        # a term runs to the next +/- that is preceded by whitespace
        m = re.search(r"\s[+-](\s|$)", text[pos:])
        end = pos + m.start() if m else len(text)
        term = text[pos:end].strip()
        if not term:
            errors.append(InputError("syntax", lineno, col0 + pos + 1, "empty term"))
            return None
        coef = Fraction(1)
        cm = _COEF_RE.match(term)
        if cm:
            coef = Fraction(cm.group(1))
            term = term[cm.end():].strip()
        path = tuple(normalize_name(a) for a in term.replace(",", " ").split())
        if not path:
            errors.append(InputError("syntax", lineno, col0 + pos + 1, "term has no path"))
            return None
        if coef == 0:
            errors.append(InputError("semantic", lineno, col0 + pos + 1, "zero coefficient"))
            return None
        terms.append((sign * coef, path))
        pos = end
        first = False
        sign = 1
    if not terms:
        errors.append(InputError("syntax", lineno, col0 + 1, "empty relation"))
        return None
    return tuple(terms)


def parse_instance(text: str) -> InstanceFile:
    errors: list = []
    field = None
    vertices: Optional[tuple] = None
    arrows: list = []
    relations: list = []  # (lineno, col, relation)
    modules: list = []  # (lineno, col, spec)
    convention = None
    d = None
    seen_content = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        seen_content = True
        indent = len(line) - len(line.lstrip())
        s = line.strip()
        col = indent + 1
        if s.startswith("arrow "):
            m = _ARROW_RE.match(s)
            if not m:
                errors.append(InputError("syntax", lineno, col, "expected 'arrow NAME: SRC -> TGT'"))
                continue
            arrows.append((lineno, col, tuple(normalize_name(x) for x in m.groups())))
            continue
        if s.startswith("module "):
            m = _MODULE_RE.match(s)
            if not m:
                errors.append(InputError("syntax", lineno, col, "expected 'module NAME = CONSTRUCTOR ARGS'"))
                continue
            name, kind, rest = normalize_name(m.group(1)), m.group(2), m.group(3).split()
            if kind not in MODULE_KINDS:
                errors.append(InputError("syntax", lineno, col + m.start(2), f"unknown module constructor {kind!r}"))
                continue
            want = MODULE_KINDS[kind]
            if want is not None and len(rest) != want:
                errors.append(InputError("syntax", lineno, col, f"'{kind}' takes {want} argument(s)"))
                continue
            try:
                if kind == "simple":
                    args = (normalize_name(rest[0]),)
                elif kind == "trivial":
                    args = ()
                elif kind == "projective":
                    gens = []
                    for tok in rest:
                        v, _, s_ = tok.partition("@")
                        if not _:
                            raise ValueError(f"expected VERTEX@DEGREE, got {tok!r}")
                        gens.append((normalize_name(v), int(s_)))
                    args = tuple(gens)
                else:
                    args = (normalize_name(rest[0]), int(rest[1]))
            except ValueError as e:
                errors.append(InputError("syntax", lineno, col, str(e)))
                continue
            modules.append((lineno, col, ModuleSpec(name, kind, args)))
            continue
        key, sep, value = s.partition(":")
        if not sep:
            errors.append(InputError("syntax", lineno, col, f"unrecognised line {s!r}"))
            continue
        key = key.strip()
        vcol = col + len(key) + 1 + (len(value) - len(value.lstrip()))
        value = value.strip()
        if key == "convention":
            convention = value
            if value != CONVENTION:
                errors.append(InputError("semantic", lineno, vcol, f"unsupported path convention {value!r}"))
        elif key == "field":
            try:
                field = str(Field.parse(value))
            except ValueError as e:
                errors.append(InputError("semantic", lineno, vcol, str(e)))
        elif key == "vertices":
            names = tuple(normalize_name(v) for v in value.replace(",", " ").split())
            if not names:
                errors.append(InputError("syntax", lineno, vcol, "no vertices listed"))
            elif vertices is not None:
                errors.append(InputError("syntax", lineno, col, "vertices given twice"))
            else:
                vertices = names
        elif key == "relation":
            rel = _parse_relation(value, lineno, vcol, errors)
            if rel is not None:
                relations.append((lineno, vcol, rel))
        elif key == "d":
            try:
                d = int(value)
            except ValueError:
                errors.append(InputError("syntax", lineno, vcol, "d must be an integer"))
        else:
            errors.append(InputError("syntax", lineno, col, f"unknown key {key!r}"))
    if not seen_content:
        raise InstanceError([InputError("syntax", 1, 1, "empty instance file")])
    if convention is None:
        errors.append(InputError("syntax", 1, 1, f"missing header 'convention: {CONVENTION}'"))
    if vertices is None:
        errors.append(InputError("syntax", 1, 1, "missing 'vertices:' line"))
    if errors and any(e.kind == "syntax" for e in errors):
        raise InstanceError(errors)
    # semantic checks
    vset = set(vertices or ())
    if vertices and len(vset) != len(vertices):
        errors.append(InputError("semantic", 1, 1, "duplicate vertex name"))
    anames = set()
    for lineno, col, (name, src, tgt) in arrows:
        if name in anames:
            errors.append(InputError("semantic", lineno, col, f"duplicate arrow {name!r}"))
        if name in vset:
            errors.append(InputError("semantic", lineno, col, f"arrow {name!r} clashes with a vertex name"))
        anames.add(name)
        for v in (src, tgt):
            if v not in vset:
                errors.append(InputError("semantic", lineno, col, f"unknown vertex {v!r}"))
    arrow_list = tuple(a for _, _, a in arrows)
    quiver = None
    if not errors:
        try:
            quiver = Quiver(tuple(vertices), arrow_list)
        except (ValueError, AlgebraError) as e:
            errors.append(InputError("semantic", 1, 1, str(e)))
    rels = []
    for lineno, col, rel in relations:
        bad = [a for _, p in rel for a in p if a not in anames]
        if bad:
            errors.append(InputError("semantic", lineno, col, f"unknown arrow {bad[0]!r}"))
            continue
        if quiver is not None:
            try:
                PathAlgebraPresentation(quiver, (rel,), Field.parse(field or "prime:32003"))
            except AlgebraError as e:
                errors.append(InputError("semantic", lineno, col, str(e)))
                continue
        rels.append(rel)
    names = set()
    for lineno, col, spec in modules:
        if spec.name in names:
            errors.append(InputError("semantic", lineno, col, f"duplicate module {spec.name!r}"))
        if spec.kind == "simple" and spec.args[0] not in vset:
            errors.append(InputError("semantic", lineno, col, f"unknown vertex {spec.args[0]!r}"))
        if spec.kind == "projective":
            for v, _ in spec.args:
                if v not in vset:
                    errors.append(InputError("semantic", lineno, col, f"unknown vertex {v!r}"))
        if spec.kind in ("shift", "radical", "syzygy"):
            if spec.args[0] not in names:
                errors.append(InputError("semantic", lineno, col, f"unknown module {spec.args[0]!r} (define it first)"))
            if spec.kind != "shift" and spec.args[1] < 0:
                errors.append(InputError("semantic", lineno, col, f"{spec.kind} index must be non-negative"))
        names.add(spec.name)
    if d is not None and d < 2:
        errors.append(InputError("semantic", 1, 1, "d must be at least 2"))
    if errors:
        raise InstanceError(errors)
    return InstanceFile(field or "prime:32003", tuple(vertices), arrow_list, tuple(rels),
                        tuple(m for _, _, m in modules), d)


def _fmt_coef(c: Fraction) -> str:
    return str(c)


def serialize_instance(inst: InstanceFile) -> str:
    lines = [f"convention: {CONVENTION}", f"field: {inst.field}", "vertices: " + " ".join(inst.vertices)]
    if inst.d is not None:
        lines.append(f"d: {inst.d}")
    for name, s, t in inst.arrows:
        lines.append(f"arrow {name}: {s} -> {t}")
    for rel in inst.relations:
        parts = []
        for k, (c, p) in enumerate(rel):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = (" ".join(p)) if mag == 1 else f"{_fmt_coef(mag)}*{' '.join(p)}"
            if k == 0:
                parts.append(term if c > 0 else f"- {term}")
            else:
                parts.append(f"{sign} {term}")
        lines.append("relation: " + " ".join(parts))
    for m in inst.modules:
        if m.kind == "simple":
            args = m.args[0]
        elif m.kind == "trivial":
            args = ""
        elif m.kind == "projective":
            args = " ".join(f"{v}@{s}" for v, s in m.args)
        else:
            args = f"{m.args[0]} {m.args[1]}"
        lines.append(f"module {m.name} = {m.kind} {args}".rstrip())
    return "\n".join(lines) + "\n"
