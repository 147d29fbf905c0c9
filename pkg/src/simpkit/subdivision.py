"""Finite posets, nerves, barycentric subdivision and the max projection."""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

import numpy as np

from .sset import (FiniteSimplicialSet, SemiSimplicialComplex, SimplicialMapData,
                   _as_order, chain_nerve, standard_simplex)

SUBSET_BOUND = 8


class PosetError(ValueError):
    pass


class FinitePoset:
    """Elements ``0..n-1`` with a boolean order matrix ``leq[a, b]``."""

    def __init__(self, leq, labels: Sequence | None = None, maxes: Sequence[int] | None = None):
        self.leq = np.array(leq, dtype=bool)
        self.leq.flags.writeable = False
        self.size = self.leq.shape[0]
        self.labels = tuple(labels) if labels is not None else tuple(range(self.size))
        # optional "max vertex" of each element, used by max-localizing tests
        self.maxes = tuple(maxes) if maxes is not None else None

    @classmethod
    def from_covers(cls, size: int, covers, labels=None) -> FinitePoset:
        leq = np.eye(size, dtype=bool)
        for a, b in covers:
            leq[a, b] = True
        # transitive closure (Warshall)
        for k in range(size):
            leq |= leq[:, [k]] & leq[[k], :]
        return cls(leq, labels)

    def problems(self) -> list[str]:
        L = self.leq
        out = []
        for a in range(self.size):
            if not L[a, a]:
                out.append(f"not reflexive at {a}")
        for a, b in zip(*np.nonzero(L & L.T)):
            if a < b:
                out.append(f"not antisymmetric: {a} <= {b} <= {a}")
        closure = (L.astype(int) @ L.astype(int)) > 0
        for a, b in zip(*np.nonzero(closure & ~L)):
            out.append(f"not transitive: {a} <= * <= {b} but not {a} <= {b}")
        return out

    def validate(self) -> None:
        probs = self.problems()
        if probs:
            raise PosetError("; ".join(probs))

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self.leq[a, b])

    def covers(self) -> list[tuple[int, int]]:
        """Pairs ``a < b`` with nothing strictly in between."""
        out = []
        for a in range(self.size):
            for b in range(self.size):
                if self.lt(a, b) and not any(self.lt(a, c) and self.lt(c, b) for c in range(self.size)):
                    out.append((a, b))
        return out

    def linear_extension(self) -> list[int]:
        # elements are always indexed compatibly in this package; fall back to a sort otherwise
        below = self.leq.sum(axis=0)
        order = sorted(range(self.size), key=lambda a: (below[a], a))
        return order

    def strict_chains(self, max_len: int | None = None) -> list[list[tuple[int, ...]]]:
        """Strict chains grouped by dimension (length - 1)."""
        levels = [[(a,) for a in range(self.size)]]
        while levels[-1] and (max_len is None or len(levels) < max_len):
            nxt = [c + (b,) for c in levels[-1] for b in range(self.size) if self.lt(c[-1], b)]
            if not nxt:
                break
            levels.append(nxt)
        return levels


class SubsetLattice(FinitePoset):
    """P'(I): nonempty subsets of a linear order, by inclusion.

    Elements are bitmasks over positions in ``ground``, ordered by
    (cardinality, lexicographic position list).  ``maxes[a]`` is the position
    of the largest member of subset ``a``.
    """

    def __init__(self, ground: Sequence):
        self.ground = tuple(ground)
        m = len(self.ground)
        subsets = [c for k in range(1, m + 1) for c in combinations(range(m), k)]
        self.members = tuple(subsets)
        self.masks = tuple(sum(1 << i for i in c) for c in subsets)
        self.mask_index = {mask: a for a, mask in enumerate(self.masks)}
        n = len(subsets)
        leq = np.zeros((n, n), dtype=bool)
        for a, ma in enumerate(self.masks):
            for b, mb in enumerate(self.masks):
                leq[a, b] = (ma & mb) == ma
        labels = [frozenset(self.ground[i] for i in c) for c in subsets]
        super().__init__(leq, labels, maxes=[c[-1] for c in subsets])

    def element(self, subset) -> int:
        """Index of a subset given by ground labels."""
        pos = {g: i for i, g in enumerate(self.ground)}
        mask = sum(1 << pos[g] for g in subset)
        return self.mask_index[mask]

    def max_of(self, a: int) -> int:
        return self.maxes[a]

    def initial_interval(self, i: int) -> int:
        """[min I, i] as an element, for a ground position ``i``."""
        return self.mask_index[(1 << (i + 1)) - 1]


def nonempty_subsets_poset(I, bound: int = SUBSET_BOUND) -> SubsetLattice:
    order = _as_order(I)
    if len(order) > bound:
        raise ValueError(f"|I| = {len(order)} exceeds the subset bound {bound}")
    return SubsetLattice(order)


def nerve(P: FinitePoset, top_dim: int) -> FiniteSimplicialSet:
    """k-simplices are weakly ascending chains ``p_0 <= ... <= p_k``."""
    X = chain_nerve(P.size, P.le, top_dim)
    X.poset = P
    return X


def sd_simplex(I, margin: int = 0, bound: int = SUBSET_BOUND) -> FiniteSimplicialSet:
    """sd(Δ^I) = nerve of P'(I), truncated at ``|I| - 1 + margin``."""
    P = nonempty_subsets_poset(I, bound)
    return nerve(P, len(P.ground) - 1 + margin)


class NonSingularError(ValueError):
    pass


def face_poset(X: SemiSimplicialComplex) -> FinitePoset:
    """Poset of nondegenerate simplices of a non-singular complex, ordered by faces.

    Elements are ordered by (dimension, index); the label of each element is
    its vertex set and its max is its largest vertex index.
    """
    cells = []
    seen = {}
    for n in range(X.top_dim + 1):
        for x in X.simplices(n):
            if X.is_degenerate(n, x):
                continue
            verts = X.vertices(n, x)
            if len(set(verts)) != len(verts):
                raise NonSingularError(f"simplex ({n}, {x}) has repeated vertices {verts}")
            key = frozenset(verts)
            if key in seen:
                raise NonSingularError(f"simplices {seen[key]} and ({n}, {x}) share the vertex set {sorted(key)}")
            seen[key] = (n, x)
            cells.append(key)
    size = len(cells)
    leq = np.array([[a <= b for b in cells] for a in cells], dtype=bool).reshape(size, size)
    return FinitePoset(leq, labels=cells, maxes=[max(c) for c in cells])


def sd_nonsingular(X: SemiSimplicialComplex, margin: int = 0) -> FiniteSimplicialSet:
    P = face_poset(X)
    return nerve(P, X.top_dim + margin)


def _subset_vertex_map(sd: FiniteSimplicialSet, target: FiniteSimplicialSet, f) -> SimplicialMapData:
    """Map of nerves induced by an element-wise monotone map ``f`` on vertices."""
    top = min(sd.top_dim, target.top_dim)
    maps = []
    for n in range(top + 1):
        maps.append([target.index_of(n, tuple(f(a) for a in chain)) for chain in sd.keys[n]])
    return SimplicialMapData(sd, target, maps)


def max_projection(I, margin: int = 0) -> SimplicialMapData:
    """sd(Δ^I) -> Δ^I induced by A ↦ max A."""
    sd = sd_simplex(I, margin)
    simplex = standard_simplex(I, margin)
    P = sd.poset
    return _subset_vertex_map(sd, simplex, P.max_of)


def max_adjoint(I, margin: int = 0) -> SimplicialMapData:
    """Δ^I -> sd(Δ^I) induced by i ↦ [min I, i]."""
    sd = sd_simplex(I, margin)
    simplex = standard_simplex(I, margin)
    return _subset_vertex_map(simplex, sd, sd.poset.initial_interval)


def sd_induced(a: Sequence[int], I, J, margin: int = 0) -> SimplicialMapData:
    """sd(Δ^I) -> sd(Δ^J) for a map of positions ``a`` (A ↦ a(A))."""
    src = sd_simplex(I, margin=margin + len(_as_order(J)) - len(_as_order(I)))
    dst = sd_simplex(J, margin)
    P, Q = src.poset, dst.poset

    def image(e):
        mask = 0
        for i in P.members[e]:
            mask |= 1 << a[i]
        return Q.mask_index[mask]

    return _subset_vertex_map(src, dst, image)


def is_max_localizing(sd: FiniteSimplicialSet, edge) -> bool:
    """Whether an inclusion edge A ⊆ B of a subdivision has max A = max B.

    ``edge`` is an edge index of ``sd`` or a pair of elements/subsets.
    """
    P = getattr(sd, "poset", None)
    if P is None or P.maxes is None:
        raise ValueError("complex is not a subdivision with cached maxima")
    if isinstance(edge, (int, np.integer)):
        a, b = sd.keys[1][edge]
    else:
        a, b = (_element(P, e) for e in edge)
        if not P.le(a, b):
            raise ValueError(f"{P.labels[a]} ⊆ {P.labels[b]} is not an inclusion edge")
    return P.maxes[a] == P.maxes[b]


def _element(P: FinitePoset, e) -> int:
    if isinstance(e, (int, np.integer)):
        return int(e)
    if isinstance(P, SubsetLattice):
        return P.element(e)
    return P.labels.index(frozenset(e))
