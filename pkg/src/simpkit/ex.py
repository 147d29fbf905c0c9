"""Ex and Ex_≃ at bounded level, and the comparison map m = max^*.

A k-simplex of Ex(X) is a simplicial map sd(Δ^k) -> X.  Since sd(Δ^k) is
the nerve of a poset, such a map is the same thing as a face-compatible
assignment of X-simplices to the *strict* chains of P'([k]); values on weak
chains follow by degeneracies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .sset import FiniteSimplicialSet, SemiSimplicialComplex, SimplicialMapData, TruncationError
from .subdivision import SubsetLattice, nonempty_subsets_poset, sd_simplex

EX_LEVEL_BOUND = 3
EX_BUDGET = 10**6


class ExBudgetExceeded(RuntimeError):
    def __init__(self, partial_count: int, budget: int):
        super().__init__(f"Ex enumeration exceeded its budget of {budget} maps (partial count {partial_count})")
        self.partial_count = partial_count


@dataclass(frozen=True)
class SdCells:
    """Strict chains of P'([k]) in processing order, with their faces."""

    k: int
    lattice: SubsetLattice
    chains: tuple[tuple[int, ...], ...]
    faces: tuple[tuple[int, ...], ...]           # chain index of d_i, per chain
    index: dict = field(hash=False, compare=False)

    def dim(self, c: int) -> int:
        return len(self.chains[c]) - 1


@lru_cache(maxsize=None)
def sd_cells(k: int) -> SdCells:
    P = nonempty_subsets_poset(k)
    levels = P.strict_chains()
    # vertices in linear-extension order; each vertex brings the chains it tops, by dimension
    order = P.linear_extension()
    rank = {a: r for r, a in enumerate(order)}
    chains = sorted((c for lev in levels for c in lev), key=lambda c: (rank[c[-1]], len(c), [rank[a] for a in c]))
    index = {c: i for i, c in enumerate(chains)}
    faces = tuple(tuple(index[c[:i] + c[i + 1:]] for i in range(len(c))) if len(c) > 1 else ()
                  for c in chains)
    return SdCells(k, P, tuple(chains), faces, index)


@dataclass(frozen=True)
class MarkedEdgeSet:
    """Edges of ``base`` declared to be equivalences; degenerate edges are always included."""

    base: SemiSimplicialComplex
    marked: frozenset

    def __post_init__(self):
        extra = {x for x in range(self.base.count(1)) if self.base.is_degenerate(1, x)}
        object.__setattr__(self, "marked", frozenset(self.marked) | frozenset(extra))

    def __contains__(self, edge: int) -> bool:
        return edge in self.marked

    @classmethod
    def degenerate_only(cls, X) -> MarkedEdgeSet:
        return cls(X, frozenset())

    @classmethod
    def all_edges(cls, X) -> MarkedEdgeSet:
        return cls(X, frozenset(range(X.count(1))))


class SdMap:
    """A simplicial map sd(Δ^k) -> X given on strict chains."""

    __slots__ = ("X", "k", "images")

    def __init__(self, X: FiniteSimplicialSet, k: int, images: Sequence[int]):
        self.X = X
        self.k = k
        self.images = tuple(images)

    def __eq__(self, other):
        return isinstance(other, SdMap) and self.k == other.k and self.images == other.images and self.X is other.X

    def __hash__(self):
        return hash((self.k, self.images))

    def __repr__(self):
        return f"SdMap(k={self.k}, vertices={self.vertex_table()})"

    @property
    def cells(self) -> SdCells:
        return sd_cells(self.k)

    def on_chain(self, chain: Sequence[int]) -> int:
        """Image of a weakly ascending chain of lattice elements."""
        strict = [chain[0]]
        pattern = [0]
        for a in chain[1:]:
            if a != strict[-1]:
                strict.append(a)
            pattern.append(len(strict) - 1)
        y = self.images[self.cells.index[tuple(strict)]]
        if len(strict) == len(chain):
            return y
        return self.X.degenerate_along(len(strict) - 1, y, pattern)

    def vertex_table(self) -> dict[int, int]:
        """Vertex images keyed by subset bitmask."""
        cells = self.cells
        P = cells.lattice
        return {P.masks[c[0]]: self.images[i] for i, c in enumerate(cells.chains) if len(c) == 1}

    def edge_of(self, a: int, b: int) -> int:
        return self.on_chain((a, b))

    def to_map_data(self) -> SimplicialMapData:
        sd = sd_simplex(self.k, margin=self.X.top_dim - self.k)
        top = min(sd.top_dim, self.X.top_dim)
        return SimplicialMapData(sd, self.X, [[self.on_chain(ch) for ch in sd.keys[n]] for n in range(top + 1)])

    def pullback(self, theta: Sequence[int]) -> SdMap:
        """Precompose with the map P'([m]) -> P'([k]) induced by ``theta: [m] -> [k]``."""
        m = len(theta) - 1
        src = sd_cells(m)
        P, Q = src.lattice, self.cells.lattice
        image = []
        for a in range(P.size):
            mask = 0
            for i in P.members[a]:
                mask |= 1 << theta[i]
            image.append(Q.mask_index[mask])
        return SdMap(self.X, m, [self.on_chain([image[a] for a in c]) for c in src.chains])


def _check_level(X, k, bound):
    if k > bound:
        raise ValueError(f"level {k} exceeds the configured bound {bound}")
    if X.truncated and X.top_dim < k:
        raise TruncationError(f"X is truncated at {X.top_dim} < {k}")


def _enumerate(X, k, equiv: MarkedEdgeSet | None, budget: int) -> list[SdMap]:
    cells = sd_cells(k)
    P = cells.lattice
    n_chains = len(cells.chains)
    dims = [len(c) - 1 for c in cells.chains]
    localizing = [len(c) == 2 and P.maxes[c[0]] == P.maxes[c[1]] for c in cells.chains]
    allowed_edges = equiv.marked if equiv is not None else None
    indexes = {n: X.face_index(n, tuple(range(n + 1))) for n in range(1, k + 1)}
    vertices = list(range(X.count(0)))
    images = [0] * n_chains
    out: list[SdMap] = []

    def rec(c):
        if c == n_chains:
            if len(out) >= budget:
                raise ExBudgetExceeded(len(out), budget)
            out.append(SdMap(X, k, images))
            return
        n = dims[c]
        if n == 0:
            candidates = vertices
        else:
            candidates = indexes[n].get(tuple(images[f] for f in cells.faces[c]), ())
        check = allowed_edges is not None and localizing[c]
        for y in candidates:
            if check and y not in allowed_edges:
                continue
            images[c] = y
            rec(c + 1)

    rec(0)
    return out


def ex_level(X: SemiSimplicialComplex, k: int, bound: int = EX_LEVEL_BOUND, budget: int = EX_BUDGET) -> list[SdMap]:
    """Every simplicial map sd(Δ^k) -> X, in canonical order."""
    _check_level(X, k, bound)
    return _enumerate(X, k, None, budget)


def ex_eq_level(X: SemiSimplicialComplex, k: int, equiv: MarkedEdgeSet, bound: int = EX_LEVEL_BOUND,
                budget: int = EX_BUDGET) -> list[SdMap]:
    """Maps sd(Δ^k) -> X sending every max-localizing edge to a marked edge."""
    if equiv.base is not X:
        raise ValueError("marked edges belong to a different complex")
    _check_level(X, k, bound)
    return _enumerate(X, k, equiv, budget)


def m_image(X: FiniteSimplicialSet, k: int, sigma: int) -> SdMap:
    """σ ∘ max for a k-simplex σ of X."""
    cells = sd_cells(k)
    P = cells.lattice
    return SdMap(X, k, [X.apply_operator(k, sigma, [P.maxes[a] for a in c]) for c in cells.chains])


def m_map(X: FiniteSimplicialSet, k: int):
    """The function σ ↦ σ ∘ max from k-simplices of X to Ex_≃(X)_k."""
    _check_level(X, k, EX_LEVEL_BOUND)
    return lambda sigma: m_image(X, k, sigma)


def face_theta(k: int, i: int) -> tuple[int, ...]:
    """δ_i: [k-1] -> [k], skipping i."""
    return tuple(j if j < i else j + 1 for j in range(k))


def degeneracy_theta(k: int, i: int) -> tuple[int, ...]:
    """σ_i: [k+1] -> [k], hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(k + 2))


class ExTruncation:
    """Ex(X) (or Ex_≃(X) when ``equiv`` is given) at levels ``0..max_level``."""

    def __init__(self, base: FiniteSimplicialSet, max_level: int, equiv: MarkedEdgeSet | None = None,
                 budget: int = EX_BUDGET):
        self.base = base
        self.max_level = max_level
        self.equiv = equiv
        if equiv is None:
            self.levels = [ex_level(base, k, max(max_level, EX_LEVEL_BOUND), budget) for k in range(max_level + 1)]
        else:
            self.levels = [ex_eq_level(base, k, equiv, max(max_level, EX_LEVEL_BOUND), budget)
                           for k in range(max_level + 1)]
        self._lookup = [{f.images: i for i, f in enumerate(lev)} for lev in self.levels]

    def count(self, k: int) -> int:
        return len(self.levels[k])

    def index(self, f: SdMap) -> int | None:
        return self._lookup[f.k].get(f.images)

    def face(self, k: int, i: int, f: SdMap) -> SdMap:
        return f.pullback(face_theta(k, i))

    def degeneracy(self, k: int, i: int, f: SdMap) -> SdMap:
        return f.pullback(degeneracy_theta(k, i))

    def closure_failures(self) -> list[tuple[str, int, int, int]]:
        """Face/degeneracy images that fall outside the stored levels."""
        bad = []
        for k, lev in enumerate(self.levels):
            for x, f in enumerate(lev):
                if k >= 1:
                    for i in range(k + 1):
                        if self.index(self.face(k, i, f)) is None:
                            bad.append(("face", k, x, i))
                if k + 1 <= self.max_level:
                    for i in range(k + 1):
                        if self.index(self.degeneracy(k, i, f)) is None:
                            bad.append(("degeneracy", k, x, i))
        return bad
