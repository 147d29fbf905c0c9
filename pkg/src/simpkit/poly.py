"""Multivariate polynomials with exact rational coefficients over named variables."""
from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Mapping, Union

Monomial = tuple  # sorted tuple of (variable, exponent) with exponent >= 1
Number = Union[int, Fraction]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Poly:
    """Immutable polynomial; zero coefficients are never stored."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(sorted(m))] = clean.get(tuple(sorted(m)), 0) + c
        self.terms = {m: c for m, c in clean.items() if c}
        self._hash = None

    # -- constructors
    @classmethod
    def const(cls, c: Number) -> Poly:
        return cls({(): c})

    @classmethod
    def var(cls, name: str) -> Poly:
        return cls({((name, 1),): 1})

    @classmethod
    def coerce(cls, x) -> Poly:
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        if isinstance(x, str):
            return parse_poly(x)
        raise TypeError(f"cannot make a polynomial from {type(x).__name__}")

    # -- structure
    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=0)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    # -- arithmetic
    def __add__(self, other):
        other = Poly.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        other = Poly.coerce(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out, base = Poly.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: Number) -> Poly:
        return Poly({m: c * v for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus
    def diff(self, var: str) -> Poly:
        out = {}
        for m, c in self.terms.items():
            exps = dict(m)
            e = exps.get(var, 0)
            if e:
                if e == 1:
                    del exps[var]
                else:
                    exps[var] = e - 1
                out[tuple(sorted(exps.items()))] = out.get(tuple(sorted(exps.items())), 0) + c * e
        return Poly(out)

    def subs(self, values: Mapping[str, Poly | Number]) -> Poly:
        """Simultaneous substitution of polynomials for variables."""
        values = {k: Poly.coerce(v) for k, v in values.items()}
        out = Poly()
        cache: dict[tuple[str, int], Poly] = {}
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v, e in m:
                if v in values:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = values[v] ** e
                    term = term * cache[key]
                else:
                    term = term * Poly({((v, e),): 1})
            out = out + term
        return out

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for v, e in m:
                term *= Fraction(values[v]) ** e
            total += term
        return total

    # -- printing
    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        # graded, then lexicographic on the exponent list
        return sorted(self.terms.items(), key=lambda t: (-_mono_degree(t[0]), t[0]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def is_atomic(self) -> bool:
        """True when printing needs no parentheses as a factor."""
        return len(self.terms) <= 1 and not str(self).startswith("-")


# -- parsing -------------------------------------------------------------------------

class PolyParseError(ValueError):
    pass


def parse_poly(text: str) -> Poly:
    """Parse ``3*q^2*s - p/2 + (q+1)^3``; ``^`` and ``**`` both mean power."""
    src = text.replace("^", "**").strip()
    if not src:
        raise PolyParseError("empty polynomial")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PolyParseError(f"cannot parse polynomial {text!r}: {exc.msg}") from None
    return _walk(tree.body, text)


def _walk(node, text) -> Poly:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Poly.const(node.value)
    if isinstance(node, ast.Name):
        return Poly.var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _walk(node.operand, text)
        return -inner if isinstance(node.op, ast.USub) else inner
    if isinstance(node, ast.BinOp):
        left = _walk(node.left, text)
        if isinstance(node.op, ast.Pow):
            exp = _walk(node.right, text)
            if exp.variables() or exp.constant().denominator != 1 or exp.constant() < 0:
                raise PolyParseError(f"exponent must be a non-negative integer in {text!r}")
            return left ** int(exp.constant())
        right = _walk(node.right, text)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if right.variables() or right.is_zero():
                raise PolyParseError(f"division only by nonzero constants in {text!r}")
            return left.scale(1 / right.constant())
    raise PolyParseError(f"unsupported syntax in polynomial {text!r}")


def poly_sum(items: Iterable[Poly]) -> Poly:
    out = Poly()
    for p in items:
        out = out + p
    return out
