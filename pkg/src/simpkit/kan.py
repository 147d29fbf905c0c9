"""Horn enumeration, filler search, (inner) Kan reports and a bounded test for equivalence edges.

A map Λ^n_j -> X is determined by the images ``σ_i`` of the faces
``d_i Δ^n`` (i ≠ j) subject to ``d_a σ_b = d_{b-1} σ_a`` for ``a < b``.
Works on simplicial sets and on semisimplicial complexes alike.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .sset import SemiSimplicialComplex, TruncationError

HORN_BUDGET = 10**6


@dataclass(frozen=True)
class HornMap:
    n: int
    j: int
    faces: tuple      # length n + 1, None at position j

    def __str__(self):
        shown = " ".join("-" if f is None else str(f) for f in self.faces)
        return f"Λ^{self.n}_{self.j} [{shown}]"


@dataclass
class HornEnumeration:
    maps: list[HornMap]
    complete: bool

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)


def _needs(X, n):
    if X.truncated and n > X.top_dim:
        raise TruncationError(f"X is truncated at {X.top_dim} < {n}")


def enumerate_horns(X: SemiSimplicialComplex, n: int, j: int, budget: int = HORN_BUDGET,
                    allowed: dict[int, Iterable[int]] | None = None) -> HornEnumeration:
    """All horn maps Λ^n_j -> X (optionally restricting some faces to given simplex sets)."""
    if n < 1 or not 0 <= j <= n:
        raise ValueError(f"no horn Λ^{n}_{j}")
    _needs(X, n - 1)
    allowed = {i: set(v) for i, v in (allowed or {}).items()}
    slots = [i for i in range(n + 1) if i != j]
    # for slot b, constraints d_a σ_b = d_{b-1} σ_a for the earlier slots a
    earlier = {b: tuple(a for a in slots if a < b) for b in slots}
    faces = [None] * (n + 1)
    out: list[HornMap] = []
    complete = True
    all_simplices = range(X.count(n - 1))

    def candidates(b):
        prev = earlier[b]
        if n == 1 or not prev:
            cands = all_simplices
        else:
            key = tuple(X.face(n - 1, b - 1, faces[a]) for a in prev)
            cands = X.face_index(n - 1, prev).get(key, ())
        if b in allowed:
            return [x for x in cands if x in allowed[b]]
        return cands

    class _Stop(Exception):
        pass

    def rec(s):
        nonlocal complete
        if s == len(slots):
            if len(out) >= budget:
                complete = False
                raise _Stop
            out.append(HornMap(n, j, tuple(faces)))
            return
        b = slots[s]
        for x in candidates(b):
            faces[b] = x
            rec(s + 1)
        faces[b] = None

    try:
        rec(0)
    except _Stop:
        pass
    return HornEnumeration(out, complete)


def fillers(X: SemiSimplicialComplex, h: HornMap) -> list[int]:
    """Every n-simplex of X whose faces restrict to the horn, in stored order."""
    _needs(X, h.n)
    if h.n > X.top_dim:
        return []
    slots = tuple(i for i in range(h.n + 1) if i != h.j)
    key = tuple(h.faces[i] for i in slots)
    return list(X.face_index(h.n, slots).get(key, ()))


def find_filler(X: SemiSimplicialComplex, h: HornMap) -> int | None:
    found = fillers(X, h)
    return found[0] if found else None


@dataclass
class HornStats:
    total: int = 0
    filled: int = 0
    unique: int = 0
    complete: bool = True
    witnesses: list[HornMap] = field(default_factory=list)


@dataclass
class KanReport:
    max_n: int
    inner_only: bool
    stats: dict[tuple[int, int], HornStats] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s.complete and s.filled == s.total for s in self.stats.values())

    @property
    def fillers_unique(self) -> bool:
        return all(s.unique == s.total for s in self.stats.values())

    @property
    def complete(self) -> bool:
        return all(s.complete for s in self.stats.values())

    def witnesses(self) -> list[HornMap]:
        return [w for key in sorted(self.stats) for w in self.stats[key].witnesses]

    def machine_lines(self) -> list[str]:
        lines = []
        for (n, j) in sorted(self.stats):
            s = self.stats[(n, j)]
            lines.append(f"horn {n} {j} total {s.total} filled {s.filled}")
        for w in self.witnesses():
            lines.append(f"witness {w.n} {w.j} " + " ".join("-" if f is None else str(f) for f in w.faces))
        lines.append(f"complete {int(self.complete)}")
        lines.append(f"unique {int(self.fillers_unique)}")
        lines.append(f"result {'PASS' if self.passed else 'FAIL'}")
        return lines

    def text(self) -> str:
        rows = [f"{'n':>3} {'j':>3} {'total':>9} {'filled':>9} {'unique':>9}"]
        for (n, j) in sorted(self.stats):
            s = self.stats[(n, j)]
            mark = "" if s.complete else "  (incomplete)"
            rows.append(f"{n:>3} {j:>3} {s.total:>9} {s.filled:>9} {s.unique:>9}{mark}")
        for w in self.witnesses():
            rows.append(f"unfillable: {w}")
        rows.append("PASS" if self.passed else "FAIL")
        return "\n".join(rows)


def _check(X, max_n, inner_only, budget, witnesses) -> KanReport:
    _needs(X, max_n)
    report = KanReport(max_n, inner_only)
    for n in range(1, max_n + 1):
        js = range(1, n) if inner_only else range(n + 1)
        for j in js:
            horns = enumerate_horns(X, n, j, budget)
            s = HornStats(total=len(horns), complete=horns.complete)
            for h in horns:
                k = len(fillers(X, h))
                if k:
                    s.filled += 1
                    s.unique += k == 1
                elif len(s.witnesses) < witnesses:
                    s.witnesses.append(h)
            report.stats[(n, j)] = s
    return report


def check_inner_kan(X: SemiSimplicialComplex, max_n: int, budget: int = HORN_BUDGET, witnesses: int = 3) -> KanReport:
    return _check(X, max_n, True, budget, witnesses)


def check_kan(X: SemiSimplicialComplex, max_n: int, budget: int = HORN_BUDGET, witnesses: int = 3) -> KanReport:
    return _check(X, max_n, False, budget, witnesses)


# -- idempotents and equivalences -------------------------------------------------

def idempotent_witness(X: SemiSimplicialComplex, e: int) -> int | None:
    """A 2-simplex all of whose boundary edges are ``e``."""
    if X.top_dim < 2:
        return None
    return next(iter(X.face_index(2, (0, 1, 2)).get((e, e, e), ())), None)


def is_idempotent_edge(X: SemiSimplicialComplex, e: int) -> bool:
    return idempotent_witness(X, e) is not None


def idempotent_edges_at(X: SemiSimplicialComplex, v: int) -> list[int]:
    return [e for e in range(X.count(1))
            if X.face(1, 0, e) == v and X.face(1, 1, e) == v and is_idempotent_edge(X, e)]


@dataclass(frozen=True)
class EquivalenceCertificate:
    status: str              # "certified" or "refuted"
    bound: int
    witness: HornMap | None = None

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def __str__(self):
        if self.certified:
            return f"certified up to n = {self.bound}"
        return f"refuted by {self.witness} (searched up to n = {self.bound})"


def is_equivalence_edge_bounded(X: SemiSimplicialComplex, e: int, max_n: int,
                                budget: int = HORN_BUDGET) -> EquivalenceCertificate:
    """Bounded equivalence test: Λ^n_n horns with last edge ``e`` and Λ^n_0 horns
    with first edge ``e`` must all fill, for 2 <= n <= max_n."""
    _needs(X, max_n)
    for n in range(2, max_n + 1):
        top = n - 1
        last = {x for x in range(X.count(top)) if X.edge(top, x, top - 1, top) == e}
        first = {x for x in range(X.count(top)) if X.edge(top, x, 0, 1) == e}
        for j, slot, allowed in ((0, n, first), (n, 0, last)):
            horns = enumerate_horns(X, n, j, budget, allowed={slot: allowed})
            for h in horns:
                if find_filler(X, h) is None:
                    return EquivalenceCertificate("refuted", max_n, h)
            if not horns.complete:
                raise RuntimeError(f"horn budget exhausted at Λ^{n}_{j}; raise the budget")
    return EquivalenceCertificate("certified", max_n)
