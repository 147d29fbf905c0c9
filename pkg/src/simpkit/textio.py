"""Plain-text interchange: complexes, posets, category presentations.

Complexes::

    sset 2
    dim 0 3
    degen 0 0 3
    ...
    dim 1 6
    face 1 0 0 0
    degen 1 0 6 6
    ...

``ssset`` headers describe semisimplicial complexes (no ``degen`` lines);
an optional trailing ``truncated`` marks a complex cut off at its top
dimension.  ``#`` starts a comment.
"""
from __future__ import annotations

import io
import re
from pathlib import Path
from typing import TextIO

from .category import FiniteCategory, FiniteCategoryPresentation
from .sset import FiniteSimplicialSet, SemiSimplicialComplex, ValidationReport, validate
from .subdivision import FinitePoset


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ValidationFailed(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("complex violates the simplicial identities:\n" + "\n".join(report.lines()))
        self.report = report


def _lines(source):
    if isinstance(source, (str, Path)) and not (isinstance(source, str) and "\n" in source):
        text = Path(source).read_text()
    elif isinstance(source, str):
        text = source
    else:
        text = source.read()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(lineno, tokens):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None


# -- complexes ------------------------------------------------------------------

def parse_complex(source, check: bool = True) -> SemiSimplicialComplex:
    """Read a complex; ``check`` runs the identity validation afterwards."""
    it = iter(_lines(source))
    try:
        lineno, head = next(it)
    except StopIteration:
        raise ParseError(0, "empty input") from None
    if head[0] not in ("sset", "ssset") or len(head) not in (2, 3):
        raise ParseError(lineno, "expected header 'sset <top_dim>' or 'ssset <top_dim>'")
    simplicial = head[0] == "sset"
    (top,) = _ints(lineno, head[1:2])
    truncated = len(head) == 3
    if truncated and head[2] != "truncated":
        raise ParseError(lineno, f"unknown header flag {head[2]!r}")
    if top < 0:
        raise ParseError(lineno, "negative top dimension")

    counts: list[int] = []
    faces: list = [None]
    degens: list = []
    pending_degen: list[tuple[int, int, list[int]]] = []
    cur = -1
    next_face = next_degen = 0

    def close_dim(lineno):
        if cur < 0:
            return
        if cur >= 1 and next_face != counts[cur]:
            raise ParseError(lineno, f"dimension {cur}: {next_face} face lines for {counts[cur]} simplices")
        if simplicial and cur < top and next_degen != counts[cur]:
            raise ParseError(lineno, f"dimension {cur}: {next_degen} degen lines for {counts[cur]} simplices")

    lineno = 0
    for lineno, tok in it:
        kind = tok[0]
        if kind == "dim":
            vals = _ints(lineno, tok[1:])
            if len(vals) != 2:
                raise ParseError(lineno, "expected 'dim <n> <count>'")
            n, c = vals
            close_dim(lineno)
            if n != cur + 1:
                raise ParseError(lineno, f"expected dimension {cur + 1}, got {n}")
            if n > top:
                raise ParseError(lineno, f"dimension {n} above the declared top {top}")
            if c < 0:
                raise ParseError(lineno, "negative count")
            cur, next_face, next_degen = n, 0, 0
            counts.append(c)
            if n >= 1:
                faces.append([])
            if simplicial and n < top:
                degens.append([])
        elif kind in ("face", "degen"):
            vals = _ints(lineno, tok[1:])
            if len(vals) < 2:
                raise ParseError(lineno, f"expected '{kind} <n> <index> ...'")
            n, idx, entries = vals[0], vals[1], vals[2:]
            if n != cur:
                raise ParseError(lineno, f"{kind} line for dimension {n} inside dimension {cur}")
            if kind == "face":
                if n == 0:
                    if entries:
                        raise ParseError(lineno, "vertices have no faces")
                    continue
                if idx != next_face:
                    raise ParseError(lineno, f"expected face line for index {next_face}, got {idx}")
                if len(entries) != n + 1:
                    raise ParseError(lineno, f"expected {n + 1} faces, got {len(entries)}")
                bad = [e for e in entries if not 0 <= e < counts[n - 1]]
                if bad:
                    raise ParseError(lineno, f"face index {bad[0]} out of range [0, {counts[n - 1]})")
                faces[n].append(entries)
                next_face += 1
            else:
                if not simplicial:
                    raise ParseError(lineno, "degen lines are not allowed in an ssset")
                if n >= top:
                    raise ParseError(lineno, "no degeneracies out of the top dimension")
                if idx != next_degen:
                    raise ParseError(lineno, f"expected degen line for index {next_degen}, got {idx}")
                if len(entries) != n + 1:
                    raise ParseError(lineno, f"expected {n + 1} degeneracies, got {len(entries)}")
                degens[n].append(entries)
                pending_degen.append((lineno, n, entries))
                next_degen += 1
        else:
            raise ParseError(lineno, f"unknown directive {kind!r}")
    close_dim(lineno + 1)
    if cur != top:
        raise ParseError(lineno + 1, f"missing dimensions {cur + 1}..{top}")
    for ln, n, entries in pending_degen:
        bad = [e for e in entries if not 0 <= e < counts[n + 1]]
        if bad:
            raise ParseError(ln, f"degeneracy index {bad[0]} out of range [0, {counts[n + 1]})")

    if simplicial:
        X = FiniteSimplicialSet(faces, degens, counts)
    else:
        X = SemiSimplicialComplex(faces, counts, truncated=truncated)
    if check:
        report = validate(X)
        if len(report):
            raise ValidationFailed(report)
    return X


def dump_complex(X: SemiSimplicialComplex, out: TextIO | None = None) -> str:
    buf = io.StringIO()
    simplicial = X.is_simplicial
    flag = " truncated" if X.truncated and not simplicial else ""
    buf.write(f"{'sset' if simplicial else 'ssset'} {X.top_dim}{flag}\n")
    for n in range(X.top_dim + 1):
        buf.write(f"dim {n} {X.count(n)}\n")
        for x in range(X.count(n)):
            if n >= 1:
                buf.write(f"face {n} {x} " + " ".join(str(int(v)) for v in X.faces[n][x]) + "\n")
            if simplicial and n < X.top_dim:
                buf.write(f"degen {n} {x} " + " ".join(str(int(v)) for v in X.degens[n][x]) + "\n")
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


# -- posets ---------------------------------------------------------------------

def parse_poset(source) -> FinitePoset:
    it = iter(_lines(source))
    try:
        lineno, head = next(it)
    except StopIteration:
        raise ParseError(0, "empty input") from None
    if head[0] != "poset" or len(head) != 2:
        raise ParseError(lineno, "expected header 'poset <n>'")
    (size,) = _ints(lineno, head[1:])
    covers = []
    for lineno, tok in it:
        if tok[0] != "le" or len(tok) != 3:
            raise ParseError(lineno, "expected 'le <i> <j>'")
        a, b = _ints(lineno, tok[1:])
        if not (0 <= a < size and 0 <= b < size):
            raise ParseError(lineno, f"element out of range [0, {size})")
        covers.append((a, b))
    P = FinitePoset.from_covers(size, covers)
    probs = P.problems()
    if probs:
        raise ParseError(lineno, probs[0])
    return P


def dump_poset(P: FinitePoset) -> str:
    return "".join([f"poset {P.size}\n"] + [f"le {a} {b}\n" for a, b in P.covers()])


# -- category presentations -------------------------------------------------------

_ID = re.compile(r"^id\((.+)\)$")


def parse_word(text: str) -> tuple[tuple[str, ...], str | None]:
    """``g*f`` -> ((f, g), None); ``id(a)`` -> ((), a)."""
    m = _ID.match(text)
    if m:
        return (), m.group(1)
    parts = text.split("*")
    if any(not p for p in parts):
        raise ValueError(f"malformed word {text!r}")
    return tuple(reversed(parts)), None


def format_word(word, at: str | None = None) -> str:
    return "*".join(reversed(word)) if word else f"id({at})"


def parse_presentation(source) -> FiniteCategoryPresentation:
    it = iter(_lines(source))
    try:
        lineno, head = next(it)
    except StopIteration:
        raise ParseError(0, "empty input") from None
    if head != ["cat"]:
        raise ParseError(lineno, "expected header 'cat'")
    pres = FiniteCategoryPresentation([], [])
    names = set()
    for lineno, tok in it:
        kind = tok[0]
        if kind == "obj" and len(tok) == 2:
            if tok[1] in pres.objects:
                raise ParseError(lineno, f"duplicate object {tok[1]}")
            pres.objects.append(tok[1])
        elif kind == "arr" and len(tok) == 4:
            name, s, t = tok[1:]
            if name in names or "*" in name or _ID.match(name):
                raise ParseError(lineno, f"bad or duplicate arrow name {name}")
            for o in (s, t):
                if o not in pres.objects:
                    raise ParseError(lineno, f"unknown object {o}")
            names.add(name)
            pres.arrows.append((name, s, t))
        elif kind == "rel" and len(tok) == 4 and tok[2] == "=":
            try:
                (lw, la), (rw, ra) = parse_word(tok[1]), parse_word(tok[3])
                for w in (lw, rw):
                    for g in w:
                        if g not in names:
                            raise ValueError(f"unknown arrow {g}")
                pres.add_relation(lw, rw, la or ra)
            except (ValueError, KeyError) as exc:
                raise ParseError(lineno, str(exc)) from None
        else:
            raise ParseError(lineno, f"cannot parse {' '.join(tok)!r}")
    return pres


def dump_presentation(pres: FiniteCategoryPresentation) -> str:
    lines = ["cat"]
    lines += [f"obj {o}" for o in pres.objects]
    lines += [f"arr {n} {s} {t}" for n, s, t in pres.arrows]
    for r in pres.relations:
        lines.append(f"rel {format_word(r.lhs, r.src)} = {format_word(r.rhs, r.src)}")
    return "\n".join(lines) + "\n"


def describe_category(C: FiniteCategory) -> str:
    """Objects, arrows and the non-identity composition table, one fact per line."""
    lines = [f"objects {C.n_objects}", f"arrows {C.n_arrows}"]
    for o in C.objects:
        lines.append(f"obj {o}")
    for f in range(C.n_arrows):
        lines.append(f"arr {C.names[f]} {C.objects[C.src[f]]} {C.objects[C.dst[f]]}")
    for (g, f), h in sorted(C.comp.items()):
        if not (C.is_identity(f) or C.is_identity(g)):
            lines.append(f"comp {C.names[g]} {C.names[f]} = {C.names[h]}")
    return "\n".join(lines) + "\n"
