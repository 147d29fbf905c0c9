"""Finite semisimplicial and simplicial sets stored as dense face/degeneracy tables.

Simplices of dimension ``n`` are the integers ``0 .. count(n) - 1``.  Face
tables have shape ``(count(n), n + 1)``; entry ``[x, i]`` is the index of
``d_i x`` in dimension ``n - 1``.  Degeneracy tables have the same shape and
point one dimension up.

Simplicial sets are always stored truncated at ``top_dim``; asking for
simplices above the truncation raises :class:`TruncationError`.  A
semisimplicial complex that is not flagged ``truncated`` is a genuinely
finite object with no simplices above ``top_dim``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np


class TruncationError(ValueError):
    pass


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SimplexId:
    dim: int
    index: int


class SemiSimplicialComplex:
    is_simplicial = False

    def __init__(self, faces: Sequence, counts: Sequence[int], keys=None, truncated: bool = False):
        self.counts = tuple(int(c) for c in counts)
        if not self.counts:
            raise ValueError("a complex needs at least dimension 0")
        self.top_dim = len(self.counts) - 1
        tables = []
        for n, c in enumerate(self.counts):
            if n == 0:
                tables.append(_frozen(np.zeros((c, 0))))
                continue
            t = np.asarray(faces[n], dtype=np.int64).reshape(c, n + 1)
            tables.append(_frozen(t))
        self.faces = tuple(tables)
        self.keys = tuple(tuple(k) for k in keys) if keys is not None else None
        self.truncated = truncated
        self._cache: dict = {}

    # -- sizes -------------------------------------------------------------
    def count(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.top_dim:
            if self.truncated:
                raise TruncationError(f"dimension {n} is above the truncation {self.top_dim}")
            return 0
        return self.counts[n]

    def simplices(self, n: int) -> range:
        return range(self.count(n))

    def is_degenerate(self, n: int, x: int) -> bool:
        return False

    def nondegenerate_counts(self) -> tuple[int, ...]:
        return tuple(
            sum(1 for x in range(c) if not self.is_degenerate(n, x))
            for n, c in enumerate(self.counts)
        )

    # -- face calculus -----------------------------------------------------
    def face(self, n: int, i: int, x: int) -> int:
        return int(self.faces[n][x, i])

    def restrict(self, n: int, x: int, positions: Sequence[int]) -> int:
        """The face of ``x`` spanned by the given (increasing) vertex positions."""
        keep = set(positions)
        for i in range(n, -1, -1):
            if i not in keep:
                x = int(self.faces[n][x, i])
                n -= 1
        return x

    def vertices(self, n: int, x: int) -> tuple[int, ...]:
        return tuple(self.restrict(n, x, (k,)) for k in range(n + 1))

    def edge(self, n: int, x: int, a: int, b: int) -> int:
        return self.restrict(n, x, (a, b))

    def face_index(self, n: int, positions: tuple[int, ...]) -> dict:
        """Map from the tuple of faces ``d_i`` (i in positions) to simplex ids, for dim ``n``."""
        key = ("face_index", n, positions)
        if key not in self._cache:
            index: dict[tuple, list[int]] = {}
            if n <= self.top_dim:
                table = self.faces[n]
                cols = table[:, list(positions)] if positions else np.zeros((self.counts[n], 0), dtype=np.int64)
                for x, row in enumerate(cols.tolist()):
                    index.setdefault(tuple(row), []).append(x)
            self._cache[key] = index
        return self._cache[key]

    def index_of(self, n: int, key: Hashable) -> int:
        if self.keys is None:
            raise ValueError("complex carries no simplex keys")
        lookup = self._cache.get(("keys", n))
        if lookup is None:
            lookup = {k: i for i, k in enumerate(self.keys[n])}
            self._cache[("keys", n)] = lookup
        return lookup[key]

    def semisimplicial(self) -> SemiSimplicialComplex:
        return SemiSimplicialComplex(self.faces, self.counts, self.keys, truncated=self.truncated)

    def __repr__(self):
        kind = type(self).__name__
        return f"{kind}(top_dim={self.top_dim}, counts={self.counts})"


class FiniteSimplicialSet(SemiSimplicialComplex):
    is_simplicial = True

    def __init__(self, faces, degens, counts, keys=None, degenerate=None):
        super().__init__(faces, counts, keys, truncated=True)
        tables = []
        for n in range(self.top_dim):
            t = np.asarray(degens[n], dtype=np.int64).reshape(self.counts[n], n + 1)
            tables.append(_frozen(t))
        self.degens = tuple(tables)
        if degenerate is None:
            flags = [np.zeros(c, dtype=bool) for c in self.counts]
            for n, t in enumerate(self.degens):
                flags[n + 1][t.ravel()] = True
        else:
            flags = [np.asarray(f, dtype=bool) for f in degenerate]
        for f in flags:
            f.flags.writeable = False
        self.degenerate = tuple(flags)

    def is_degenerate(self, n: int, x: int) -> bool:
        return bool(self.degenerate[n][x])

    def degeneracy(self, n: int, i: int, x: int) -> int:
        if n >= self.top_dim:
            raise TruncationError(f"s_{i} on dimension {n} leaves the truncation {self.top_dim}")
        return int(self.degens[n][x, i])

    def degenerate_along(self, n: int, x: int, pattern: Sequence[int]) -> int:
        """Pull ``x`` back along the surjection ``pattern: [m] -> [n]`` (weakly increasing)."""
        if pattern[0] != 0 or pattern[-1] != n:
            raise ValueError(f"{pattern} is not a surjection onto [{n}]")
        dim = n
        for p in range(1, len(pattern)):
            if pattern[p] == pattern[p - 1]:
                x = self.degeneracy(dim, p - 1, x)
                dim += 1
        return x

    def apply_operator(self, n: int, x: int, theta: Sequence[int]) -> int:
        """``theta^* x`` for a weakly increasing ``theta: [m] -> [n]``."""
        image = sorted(set(theta))
        y = self.restrict(n, x, image)
        rank = {v: r for r, v in enumerate(image)}
        return self.degenerate_along(len(image) - 1, y, [rank[v] for v in theta])


# -- construction helpers -----------------------------------------------------

def build_from_keys(keys_by_dim: Sequence[Sequence[Hashable]],
                    face_fn: Callable[[Hashable, int], Hashable],
                    degen_fn: Callable[[Hashable, int], Hashable] | None = None,
                    truncated: bool = False):
    """Index a combinatorially described complex.

    ``face_fn(key, i)`` returns the key of ``d_i``; when ``degen_fn`` is given
    the result is a :class:`FiniteSimplicialSet` truncated at the last
    dimension listed.
    """
    lookup = [{k: i for i, k in enumerate(keys)} for keys in keys_by_dim]
    counts = [len(keys) for keys in keys_by_dim]
    faces = [None]
    for n in range(1, len(keys_by_dim)):
        faces.append([[lookup[n - 1][face_fn(k, i)] for i in range(n + 1)] for k in keys_by_dim[n]])
    if degen_fn is None:
        return SemiSimplicialComplex(faces, counts, keys_by_dim, truncated=truncated)
    degens = []
    for n in range(len(keys_by_dim) - 1):
        degens.append([[lookup[n + 1][degen_fn(k, i)] for i in range(n + 1)] for k in keys_by_dim[n]])
    return FiniteSimplicialSet(faces, degens, counts, keys_by_dim)


def _drop(chain: tuple, i: int) -> tuple:
    return chain[:i] + chain[i + 1:]


def _repeat(chain: tuple, i: int) -> tuple:
    return chain[: i + 1] + chain[i:]


def chain_nerve(n_elements: int, leq: Callable[[int, int], bool], top_dim: int) -> FiniteSimplicialSet:
    """Nerve of a finite poset on ``range(n_elements)``: weakly ascending chains."""
    levels = [[(a,) for a in range(n_elements)]]
    for _ in range(top_dim):
        levels.append([c + (b,) for c in levels[-1] for b in range(n_elements) if leq(c[-1], b)])
    return build_from_keys(levels, _drop, _repeat)


def _as_order(I) -> tuple:
    if isinstance(I, int):
        if I < 0:
            raise ValueError("empty linear order")
        return tuple(range(I + 1))
    order = tuple(I)
    if not order:
        raise ValueError("empty linear order")
    return order


def standard_simplex(I, margin: int = 0) -> FiniteSimplicialSet:
    """Δ^I as the nerve of the linear order ``I``; an int ``n`` means ``[n]``.

    k-simplices are weakly ascending tuples of positions in ``I``.
    """
    order = _as_order(I)
    top = len(order) - 1 + margin
    m = len(order)
    levels = [list(combinations_with_replacement(range(m), k + 1)) for k in range(top + 1)]
    X = build_from_keys(levels, _drop, _repeat)
    X.labels = order
    return X


def _subsets_complex(n: int, omit: Iterable[tuple]) -> SemiSimplicialComplex:
    omit = set(omit)
    levels = [[c for c in combinations(range(n + 1), k + 1) if c not in omit] for k in range(n)]
    while len(levels) > 1 and not levels[-1]:
        levels.pop()
    return build_from_keys(levels, _drop)


def boundary(n: int) -> SemiSimplicialComplex:
    """∂Δ^n: every nondegenerate face of Δ^n except the top one."""
    if n < 1:
        raise ValueError("boundary needs n >= 1")
    return _subsets_complex(n, ())


def horn(n: int, j: int) -> SemiSimplicialComplex:
    """Λ^n_j: the boundary of Δ^n without the face opposite vertex ``j``."""
    if n < 1:
        raise ValueError("horn needs n >= 1")
    if not 0 <= j <= n:
        raise ValueError(f"horn index {j} out of range [0, {n}]")
    missing = tuple(v for v in range(n + 1) if v != j)
    return _subsets_complex(n, [missing])


# -- maps -----------------------------------------------------------------------

class SimplicialMapData:
    """A dimensionwise index map between complexes, up to the common truncation."""

    def __init__(self, source: SemiSimplicialComplex, target: SemiSimplicialComplex, maps: Sequence):
        self.source = source
        self.target = target
        self.top_dim = min(source.top_dim, target.top_dim)
        self.maps = tuple(_frozen(np.asarray(maps[n], dtype=np.int64).reshape(source.counts[n]))
                          for n in range(self.top_dim + 1))

    def __call__(self, n: int, x: int) -> int:
        return int(self.maps[n][x])

    def compose(self, after: SimplicialMapData) -> SimplicialMapData:
        """``after ∘ self``."""
        top = min(self.top_dim, after.top_dim)
        return SimplicialMapData(self.source, after.target,
                                 [after.maps[n][self.maps[n]] for n in range(top + 1)])

    def is_identity(self) -> bool:
        return all(np.array_equal(m, np.arange(len(m))) for m in self.maps)

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        S, T = self.source, self.target
        for n in range(1, self.top_dim + 1):
            fn, fm = self.maps[n], self.maps[n - 1]
            for x in range(S.counts[n]):
                for i in range(n + 1):
                    lhs = int(T.faces[n][fn[x], i])
                    rhs = int(fm[S.faces[n][x, i]])
                    if lhs != rhs:
                        report.add("map-face", n, x, f"d_{i} f(x)={lhs} but f(d_{i} x)={rhs}")
        if S.is_simplicial and T.is_simplicial:
            for n in range(self.top_dim):
                fn, fup = self.maps[n], self.maps[n + 1]
                for x in range(S.counts[n]):
                    for i in range(n + 1):
                        lhs = int(T.degens[n][fn[x], i])
                        rhs = int(fup[S.degens[n][x, i]])
                        if lhs != rhs:
                            report.add("map-degeneracy", n, x, f"s_{i} f(x)={lhs} but f(s_{i} x)={rhs}")
        return report


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    identity: str
    dim: int
    index: int
    detail: str

    def __str__(self):
        return f"{self.identity} at simplex ({self.dim}, {self.index}): {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def add(self, identity, dim, index, detail):
        self.violations.append(Violation(identity, dim, int(index), detail))

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [str(v) for v in self.violations]


def validate(X: SemiSimplicialComplex) -> ValidationReport:
    """Check table ranges and every simplicial identity within the truncation."""
    report = ValidationReport()
    for n in range(1, X.top_dim + 1):
        t = X.faces[n]
        bad = np.argwhere((t < 0) | (t >= X.counts[n - 1]))
        for x, i in bad:
            report.add("face-range", n, x, f"d_{i} = {t[x, i]} outside [0, {X.counts[n - 1]})")
    if report.violations:
        return report

    for n in range(2, X.top_dim + 1):
        F, G = X.faces[n], X.faces[n - 1]
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                lhs = G[F[:, j], i]
                rhs = G[F[:, i], j - 1]
                for x in np.flatnonzero(lhs != rhs):
                    report.add("d_i d_j = d_{j-1} d_i", n, x,
                               f"i={i}, j={j}: d_{i} d_{j} x = {lhs[x]} but d_{j - 1} d_{i} x = {rhs[x]}")
    if not X.is_simplicial:
        return report

    for n in range(X.top_dim):
        t = X.degens[n]
        bad = np.argwhere((t < 0) | (t >= X.counts[n + 1]))
        for x, i in bad:
            report.add("degeneracy-range", n, x, f"s_{i} = {t[x, i]} outside [0, {X.counts[n + 1]})")
    if report.violations:
        return report

    for n in range(X.top_dim):
        S, Fup = X.degens[n], X.faces[n + 1]
        ids = np.arange(X.counts[n])
        for j in range(n + 1):
            sj = S[:, j]
            for i in range(n + 2):
                lhs = Fup[sj, i]
                if i == j or i == j + 1:
                    rhs = ids
                    name = "d_j s_j = d_{j+1} s_j = id"
                elif i < j:
                    rhs = X.degens[n - 1][X.faces[n][:, i], j - 1]
                    name = "d_i s_j = s_{j-1} d_i"
                else:
                    rhs = X.degens[n - 1][X.faces[n][:, i - 1], j]
                    name = "d_i s_j = s_j d_{i-1}"
                for x in np.flatnonzero(lhs != rhs):
                    report.add(name, n, x, f"i={i}, j={j}: got {lhs[x]}, expected {rhs[x]}")
        if n + 1 < X.top_dim:
            S2 = X.degens[n + 1]
            for i in range(n + 1):
                for j in range(i, n + 1):
                    lhs = S2[S[:, j], i]
                    rhs = S2[S[:, i], j + 1]
                    for x in np.flatnonzero(lhs != rhs):
                        report.add("s_i s_j = s_{j+1} s_i", n, x,
                                   f"i={i}, j={j}: s_{i} s_{j} x = {lhs[x]} but s_{j + 1} s_{i} x = {rhs[x]}")

    for n in range(X.top_dim + 1):
        image = np.zeros(X.counts[n], dtype=bool)
        if n >= 1:
            image[X.degens[n - 1].ravel()] = True
        for x in np.flatnonzero(image != X.degenerate[n]):
            report.add("degenerate-flag", n, x,
                       f"flag {bool(X.degenerate[n][x])} but image of a degeneracy is {bool(image[x])}")
    return report
