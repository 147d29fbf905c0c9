"""Polynomial differential forms of degree <= 2 in Darboux coordinates.

Basis forms are keyed by sorted tuples of variable names, so ``("p", "q")``
is ``dp∧dq``.  The symplectic form of a chart is ``Σ dp∧dq + Σ dσ∧ds``,
and Liouville fields solve ``ι_v ω = λ``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .poly import Poly, PolyParseError, parse_poly, poly_sum


class FormError(ValueError):
    pass


# -- charts ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DarbouxChart:
    """Coordinate pairs (q_i, p_i) on M and (s_j, σ_j) on T*S."""

    m_pairs: tuple[tuple[str, str], ...] = (("q", "p"),)
    s_pairs: tuple[tuple[str, str], ...] = (("s", "sigma"),)

    def __post_init__(self):
        names = self.coordinates
        if len(set(names)) != len(names):
            raise FormError("chart coordinate names must be distinct")

    @property
    def coordinates(self) -> tuple[str, ...]:
        return tuple(v for pair in self.m_pairs + self.s_pairs for v in pair)

    @property
    def m_coordinates(self) -> tuple[str, ...]:
        return tuple(v for pair in self.m_pairs for v in pair)

    @property
    def s_coordinates(self) -> tuple[str, ...]:
        return tuple(v for pair in self.s_pairs for v in pair)

    @classmethod
    def infer(cls, names: Iterable[str]) -> DarbouxChart:
        """Pairs q<k>/p<k> and s<k>/sigma<k>, from whichever member of a pair appears."""
        m, s = set(), set()
        for n in names:
            for pat, bucket in ((r"^[qp](\d*)$", m), (r"^(?:s|sigma)(\d*)$", s)):
                hit = re.match(pat, n)
                if hit:
                    bucket.add(hit.group(1))
                    break
            else:
                raise FormError(f"cannot place coordinate {n!r} in a Darboux chart")
        m = m or {""}
        s = s or {""}
        key = lambda k: (len(k), k)
        return cls(tuple((f"q{k}", f"p{k}") for k in sorted(m, key=key)),
                   tuple((f"s{k}", f"sigma{k}") for k in sorted(s, key=key)))

    def merge(self, other: DarbouxChart) -> DarbouxChart:
        return DarbouxChart(tuple(dict.fromkeys(self.m_pairs + other.m_pairs)),
                            tuple(dict.fromkeys(self.s_pairs + other.s_pairs)))

    def symplectic_form(self) -> PolyDForm:
        out = PolyDForm.zero(2)
        for base, fiber in self.m_pairs + self.s_pairs:
            out = out + PolyDForm.basis(fiber).wedge(PolyDForm.basis(base))
        return out


# -- forms ----------------------------------------------------------------------------

def _sort_sign(names: tuple[str, ...]) -> tuple[int, tuple[str, ...]]:
    if len(set(names)) != len(names):
        return 0, names
    sign = 1
    arr = list(names)
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


class PolyDForm:
    """A polynomial k-form, k in {0, 1, 2}."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Mapping[tuple[str, ...], Poly] | None = None):
        if degree not in (0, 1, 2):
            raise FormError("only degrees 0, 1 and 2 are supported")
        self.degree = degree
        clean: dict[tuple[str, ...], Poly] = {}
        for key, c in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise FormError(f"basis {key} does not have degree {degree}")
            sign, key = _sort_sign(key)
            if sign == 0:
                continue
            c = Poly.coerce(c)
            clean[key] = clean.get(key, Poly()) + (c if sign > 0 else -c)
        self.coeffs = {k: v for k, v in clean.items() if not v.is_zero()}

    @classmethod
    def zero(cls, degree: int) -> PolyDForm:
        return cls(degree)

    @classmethod
    def function(cls, f) -> PolyDForm:
        return cls(0, {(): Poly.coerce(f)})

    @classmethod
    def basis(cls, *names: str) -> PolyDForm:
        return cls(len(names), {tuple(names): Poly.const(1)})

    @classmethod
    def one_form(cls, coeffs: Mapping[str, object]) -> PolyDForm:
        return cls(1, {(k,): Poly.coerce(v) for k, v in coeffs.items()})

    def coefficient(self, *names: str) -> Poly:
        sign, key = _sort_sign(tuple(names))
        c = self.coeffs.get(key, Poly())
        return c if sign >= 0 else -c

    def variables(self) -> set[str]:
        out = set()
        for k, c in self.coeffs.items():
            out |= set(k) | c.variables()
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: PolyDForm) -> PolyDForm:
        if self.degree != other.degree:
            raise FormError("cannot add forms of different degrees")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Poly()) + c
        return PolyDForm(self.degree, out)

    def __neg__(self):
        return PolyDForm(self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> PolyDForm:
        f = Poly.coerce(f)
        return PolyDForm(self.degree, {k: f * c for k, c in self.coeffs.items()})

    def wedge(self, other: PolyDForm) -> PolyDForm:
        if self.degree + other.degree > 2:
            raise FormError("wedge would exceed degree 2")
        out: dict = {}
        for k1, c1 in self.coeffs.items():
            for k2, c2 in other.coeffs.items():
                sign, key = _sort_sign(k1 + k2)
                if sign:
                    term = c1 * c2
                    out[key] = out.get(key, Poly()) + (term if sign > 0 else -term)
        return PolyDForm(self.degree + other.degree, out)

    def __eq__(self, other):
        return isinstance(other, PolyDForm) and self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"PolyDForm({self.human()!r})"

    def __str__(self):
        return self.sexpr()

    # -- text
    def sexpr(self) -> str:
        parts = []
        for key in sorted(self.coeffs):
            basis = " ".join("d" + v for v in key)
            parts.append(f"(({self.coeffs[key]}) {basis})" if key else f"({self.coeffs[key]})")
        return f"(form{self.degree}" + "".join(" " + p for p in parts) + ")"

    def human(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for key in sorted(self.coeffs):
            c = self.coeffs[key]
            basis = "^".join("d" + v for v in key)
            if not key:
                parts.append(str(c))
            elif c == Poly.const(1):
                parts.append(basis)
            elif c.is_atomic():
                parts.append(f"{c} {basis}")
            else:
                parts.append(f"({c}) {basis}")
        return " + ".join(parts)


def d(form: PolyDForm) -> PolyDForm:
    """Exterior derivative on 0- and 1-forms."""
    if form.degree == 2:
        raise FormError("d of a 2-form is not needed here")
    out: dict = {}
    for key, c in form.coeffs.items():
        for v in sorted(c.variables()):
            dv = c.diff(v)
            sign, k = _sort_sign((v,) + key)
            if sign:
                out[k] = out.get(k, Poly()) + (dv if sign > 0 else -dv)
    return PolyDForm(form.degree + 1, out)


def partial_derivative(f: Poly, coordinate: str, chart: DarbouxChart | None = None) -> Poly:
    if chart is not None and coordinate not in chart.coordinates:
        raise FormError(f"unknown coordinate {coordinate!r}")
    return Poly.coerce(f).diff(coordinate)


def _restricted_d(f: Poly, coords: Iterable[str]) -> PolyDForm:
    f = Poly.coerce(f)
    return PolyDForm(1, {(v,): f.diff(v) for v in coords})


def d_M(f, chart: DarbouxChart) -> PolyDForm:
    return _restricted_d(f, chart.m_coordinates)


def d_S(f, chart: DarbouxChart) -> PolyDForm:
    return _restricted_d(f, chart.s_coordinates)


# -- vector fields -------------------------------------------------------------------

class PolyVectorField:
    __slots__ = ("components",)

    def __init__(self, components: Mapping[str, Poly]):
        self.components = {k: Poly.coerce(v) for k, v in components.items() if not Poly.coerce(v).is_zero()}

    def __getitem__(self, var: str) -> Poly:
        return self.components.get(var, Poly())

    def __add__(self, other):
        keys = set(self.components) | set(other.components)
        return PolyVectorField({k: self[k] + other[k] for k in keys})

    def __eq__(self, other):
        return isinstance(other, PolyVectorField) and self.components == other.components

    def contract(self, form: PolyDForm) -> PolyDForm:
        """ι_v of a 1- or 2-form."""
        if form.degree == 1:
            return PolyDForm.function(poly_sum(self[k[0]] * c for k, c in form.coeffs.items()))
        if form.degree == 2:
            out: dict = {}
            for (a, b), c in form.coeffs.items():
                out[(b,)] = out.get((b,), Poly()) + self[a] * c
                out[(a,)] = out.get((a,), Poly()) - self[b] * c
            return PolyDForm(1, out)
        raise FormError("cannot contract a 0-form")

    def ordered(self, chart: DarbouxChart | None = None) -> list[tuple[str, Poly]]:
        order = list(chart.coordinates) if chart else []
        keys = sorted(self.components, key=lambda k: (order.index(k) if k in order else len(order), k))
        return [(k, self.components[k]) for k in keys]

    def human(self, chart: DarbouxChart | None = None) -> str:
        if not self.components:
            return "0"
        parts = []
        for k, c in self.ordered(chart):
            if c == Poly.const(1):
                parts.append(f"d/d{k}")
            elif c.is_atomic():
                parts.append(f"{c} d/d{k}")
            else:
                parts.append(f"({c}) d/d{k}")
        return " + ".join(parts)

    def __repr__(self):
        return f"PolyVectorField({self.human()!r})"


# -- the movie construction -------------------------------------------------------------

def movie_form(lam_M: PolyDForm, h, chart: DarbouxChart) -> PolyDForm:
    """λ_M + Σ σ_j ds_j + dh."""
    stray = lam_M.variables() - set(chart.m_coordinates)
    if stray:
        raise FormError(f"λ_M uses non-M coordinates {sorted(stray)}")
    fiber = PolyDForm(1, {(s,): Poly.var(sig) for s, sig in chart.s_pairs})
    return lam_M + fiber + d(PolyDForm.function(h))


def liouville_field(lam: PolyDForm, chart: DarbouxChart) -> PolyVectorField:
    """The v with ι_v ω = λ for the chart's constant ω."""
    if lam.degree != 1:
        raise FormError("a Liouville form has degree 1")
    stray = lam.variables() - set(chart.coordinates)
    if stray:
        raise FormError(f"form uses coordinates outside the chart: {sorted(stray)}")
    if d(lam) != chart.symplectic_form():
        raise FormError("non-Darboux primitive")
    comps = {}
    # ι_v (dp∧dq) = v_p dq - v_q dp
    for base, fiber in chart.m_pairs + chart.s_pairs:
        comps[fiber] = lam.coefficient(base)
        comps[base] = -lam.coefficient(fiber)
    return PolyVectorField(comps)


def movie_chart(lam_M: PolyDForm, h) -> DarbouxChart:
    return DarbouxChart.infer(lam_M.variables() | Poly.coerce(h).variables())


def verify_movie_field_formula(h, lam_M: PolyDForm, chart: DarbouxChart | None = None) -> bool:
    """The fiber part of v is Σ (σ_j + ∂h/∂s_j) ∂_σ_j."""
    h = Poly.coerce(h)
    chart = chart or movie_chart(lam_M, h)
    v = liouville_field(movie_form(lam_M, h, chart), chart)
    return all(v[sig] == Poly.var(sig) + h.diff(s) for s, sig in chart.s_pairs)


# -- pullbacks --------------------------------------------------------------------------

CoordinateMap = Mapping[str, Poly]


def pullback(f: CoordinateMap, form: PolyDForm) -> PolyDForm:
    """f* of a form on the target, where ``f[y]`` is the target coordinate y in source terms."""
    f = {k: Poly.coerce(v) for k, v in f.items()}

    def img(v):
        return f.get(v, Poly.var(v))

    if form.degree == 0:
        return PolyDForm.function(form.coefficient().subs(f))
    out = PolyDForm.zero(form.degree)
    for key, c in form.coeffs.items():
        term = PolyDForm.function(c.subs(f))
        for v in key:
            dv = d(PolyDForm.function(img(v)))
            term = dv.scale(term.coefficient()) if term.degree == 0 else term.wedge(dv)
        out = out + term
    return out


def compose_maps(g: CoordinateMap, f: CoordinateMap) -> dict[str, Poly]:
    """g ∘ f for coordinate maps (apply f first)."""
    f = {k: Poly.coerce(v) for k, v in f.items()}
    out = {k: Poly.coerce(v).subs(f) for k, v in g.items()}
    for k, v in f.items():
        out.setdefault(k, v)
    return out


def check_strict_pullback(f: CoordinateMap, lam_src: PolyDForm, lam_dst: PolyDForm) -> bool:
    return pullback(f, lam_dst) == lam_src


def homotopy_primitive(alpha: PolyDForm) -> Poly:
    """h(x) = ∫_0^1 Σ x_a A_a(tx) dt, a primitive of a closed polynomial 1-form."""
    h = Poly()
    for (v,), c in alpha.coeffs.items():
        for m, coef in c.terms.items():
            deg = sum(e for _, e in m)
            h = h + Poly({m: coef / (deg + 1)}) * Poly.var(v)
    return h


@dataclass
class ExactnessResult:
    h: Poly | None
    difference: PolyDForm
    curvature: PolyDForm           # d of the difference; zero iff closed

    @property
    def exact(self) -> bool:
        return self.h is not None

    def report(self) -> str:
        if self.exact:
            return f"exact: difference = d({self.h})"
        return f"not closed: d(difference) = {self.curvature.human()}"


def check_exact_pullback(f: CoordinateMap, lam_src: PolyDForm, lam_dst: PolyDForm) -> ExactnessResult:
    """Find h with f*λ_dst - λ_src = dh.  Support of h is not examined."""
    diff = pullback(f, lam_dst) - lam_src
    curv = d(diff)
    if not curv.is_zero():
        return ExactnessResult(None, diff, curv)
    h = homotopy_primitive(diff)
    if d(PolyDForm.function(h)) != diff:
        raise AssertionError("homotopy primitive failed on a closed form")
    return ExactnessResult(h, diff, curv)


# -- text ----------------------------------------------------------------------------------

def _split_top(text: str):
    """Split at top-level + and - signs, keeping the sign with each piece."""
    pieces, depth, cur, sign = [], 0, "", 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur.strip() and not cur.rstrip().endswith(("*", "^", "/")):
            pieces.append((sign, cur.strip()))
            sign, cur = (1 if ch == "+" else -1), ""
        elif depth == 0 and ch in "+-" and not cur.strip():
            sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
        i += 1
    if cur.strip():
        pieces.append((sign, cur.strip()))
    return pieces


def parse_form(text: str) -> PolyDForm:
    """Read ``(form1 ((p) dq) ((s) dq))`` or ``p dq + (sigma + q) ds``."""
    text = text.strip()
    try:
        if text.startswith("(form"):
            return _parse_sexpr(text)
        return _parse_human(text)
    except PolyParseError as exc:
        raise FormError(str(exc)) from None


def _parse_sexpr(text: str) -> PolyDForm:
    m = re.match(r"^\(form([012])(.*)\)$", text, re.S)
    if not m:
        raise FormError(f"malformed form {text!r}")
    degree = int(m.group(1))
    body = m.group(2).strip()
    coeffs: dict = {}
    pos = 0
    while pos < len(body):
        if body[pos].isspace():
            pos += 1
            continue
        if body[pos] != "(":
            raise FormError(f"expected '(' at {body[pos:]!r}")
        depth, end = 0, pos
        while end < len(body):
            depth += body[end] == "("
            depth -= body[end] == ")"
            if depth == 0:
                break
            end += 1
        if depth:
            raise FormError("unbalanced parentheses")
        entry = body[pos + 1:end].strip()
        pos = end + 1
        if degree == 0:
            coeffs[()] = coeffs.get((), Poly()) + parse_poly(entry)
            continue
        if not entry.startswith("("):
            raise FormError(f"expected a parenthesized coefficient in {entry!r}")
        depth, k = 0, 0
        while k < len(entry):
            depth += entry[k] == "("
            depth -= entry[k] == ")"
            if depth == 0:
                break
            k += 1
        coeff = parse_poly(entry[1:k])
        basis = entry[k + 1:].split()
        if len(basis) != degree or any(not b.startswith("d") or len(b) < 2 for b in basis):
            raise FormError(f"bad basis {' '.join(basis)!r} for a {degree}-form")
        key = tuple(b[1:] for b in basis)
        sign, key = _sort_sign(key)
        if sign:
            coeffs[key] = coeffs.get(key, Poly()) + (coeff if sign > 0 else -coeff)
    return PolyDForm(degree, coeffs)


_BASIS = re.compile(r"^d[A-Za-z_]\w*(?:\^d[A-Za-z_]\w*)?$")


def _parse_human(text: str) -> PolyDForm:
    if text in ("", "0"):
        return PolyDForm.zero(1)
    terms = []
    for sign, piece in _split_top(text):
        tokens = piece.split()
        if tokens and _BASIS.match(tokens[-1]):
            basis = tuple(b[1:] for b in tokens[-1].split("^"))
            coeff_text = " ".join(tokens[:-1]) or "1"
        else:
            basis = ()
            coeff_text = piece
        c = parse_poly(coeff_text)
        terms.append((basis, c if sign > 0 else -c))
    degrees = {len(b) for b, _ in terms}
    if len(degrees) != 1:
        raise FormError(f"mixed degrees in {text!r}; parenthesize coefficients")
    return PolyDForm(degrees.pop(), _collect(terms))


def _collect(terms):
    out: dict = {}
    for basis, c in terms:
        sign, key = _sort_sign(basis)
        if sign:
            out[key] = out.get(key, Poly()) + (c if sign > 0 else -c)
    return out
