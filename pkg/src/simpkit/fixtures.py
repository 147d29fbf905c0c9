"""Shipped fixtures: a small category library, complexes on disk, endofunctors."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .category import FiniteCategory, FiniteCategoryPresentation, Functor, category_nerve
from .sset import FiniteSimplicialSet, SemiSimplicialComplex

CATEGORY_FIXTURES = (
    "terminal", "arrow", "chain2", "iso", "z2", "z3", "idempotent",
    "square", "span", "split_idempotent", "parallel", "z2_groupoid",
)
GROUPOID_FIXTURES = ("terminal", "iso", "z2", "z3", "z2_groupoid")
COMPLEX_FIXTURES = ("delta2", "nerve_square", "horn21", "boundary2")


def fixture_path(filename: str) -> Path:
    return Path(str(resources.files("simpkit") / "fixtures" / filename))


def category_presentation(name: str) -> FiniteCategoryPresentation:
    from .textio import parse_presentation
    return parse_presentation(fixture_path(f"{name}.cat"))


@lru_cache(maxsize=None)
def category(name: str) -> FiniteCategory:
    return category_presentation(name).materialize()


@lru_cache(maxsize=None)
def fixture_nerve(name: str, top_dim: int = 3) -> FiniteSimplicialSet:
    return category_nerve(category(name), top_dim)


def complex_fixture(name: str) -> SemiSimplicialComplex:
    from .textio import parse_complex
    path = fixture_path(f"{name}.sset")
    if not path.exists():
        path = fixture_path(f"{name}.ssset")
    return parse_complex(path)


# -- endofunctors -----------------------------------------------------------------

def functor_by_names(A: FiniteCategory, B: FiniteCategory, objects: dict, generators: dict) -> Functor:
    """A functor out of a materialized presentation, given on objects and generator names.

    ``generators`` maps each generator name of ``A`` to an arrow name of
    ``B`` (an ``id(x)`` name is allowed).
    """
    obj = tuple(B.objects.index(objects[o]) for o in A.objects)
    images = {g: B.names.index(h) for g, h in generators.items()}
    arr = []
    for f in range(A.n_arrows):
        cur = B.identity[obj[A.src[f]]]
        for g in A.pres_words[f]:
            cur = B.comp[(images[g], cur)]
        arr.append(cur)
    F = Functor(A, B, obj, tuple(arr))
    probs = F.problems()
    if probs:
        raise ValueError(probs[0])
    return F


@dataclass(frozen=True)
class EndofunctorFixture:
    name: str
    category: FiniteCategory
    marked: tuple[str, ...]
    functor: Functor


def endofunctor_fixtures() -> list[EndofunctorFixture]:
    out = []

    C = category("arrow")
    T = functor_by_names(C, C, {"0": "0", "1": "1"}, {"f": "f"})
    out.append(EndofunctorFixture("identity-on-arrow", C, ("f",), T))

    pres = FiniteCategoryPresentation(["a0", "a1", "b0", "b1"], [("fa", "a0", "a1"), ("fb", "b0", "b1")])
    C = pres.materialize()
    T = functor_by_names(C, C, {"a0": "b0", "a1": "b1", "b0": "b0", "b1": "b1"}, {"fa": "fb", "fb": "fb"})
    out.append(EndofunctorFixture("swap-then-fix", C, ("fb",), T))

    C = category("chain2")
    T = functor_by_names(C, C, {"0": "0", "1": "0", "2": "2"}, {"f": "id(0)", "g": "g*f"})
    out.append(EndofunctorFixture("collapse-idempotent", C, (), T))
    return out


# -- movie construction: (h, λ_M) pairs -------------------------------------------------

MOVIE_FIXTURES = (
    ("0", "p dq"),
    ("q*s", "p dq"),
    ("q^2*s^3", "p dq"),
    ("s", "p dq"),
    ("s^2", "p dq"),
    ("q*p*s", "p dq"),
    ("p*s^2 - q", "p dq"),
    ("3/2*q^3*s", "p dq"),
    ("(q + s)^4", "p dq"),
    ("q^2*s^3 - 5*p*s + 7", "p dq"),
    ("-s^5/3", "p dq"),
    ("p^2*q^2*s", "p dq"),
    ("q*s", "-q dp"),
    ("q*s^2", "1/2*p dq - 1/2*q dp"),
    ("p*q*s^3 + s", "p dq + dq"),
    ("q*s1 + p*s2", "p dq"),
    ("s1*s2*q", "p dq"),
    ("q1*s + q2^2*s^2", "p1 dq1 + p2 dq2"),
    ("s1^2*s2^3*q1*p2", "p1 dq1 + p2 dq2"),
    ("q1*q2*s1 - p1*s2^2", "p1 dq1 - q2 dp2"),
)
