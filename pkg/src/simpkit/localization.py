"""Small-scale localization: homotopy categories, formal inverses, max-localization.

Everything here is 1-categorical: "equivalence" means isomorphism, and
localizations are computed by adjoining inverses and closing the word
relations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .category import (FiniteCategory, FiniteCategoryPresentation, Functor, WORD_BOUND, are_isomorphic,
                       category_nerve, find_isomorphism, iter_functors, linear_order, poset_category)
from .kan import check_inner_kan
from .sset import FiniteSimplicialSet, _as_order
from .subdivision import nonempty_subsets_poset


class LocalizationError(ValueError):
    pass


def nerve_of_presentation(C: FiniteCategoryPresentation, top_dim: int, word_bound: int = WORD_BOUND) -> FiniteSimplicialSet:
    return category_nerve(C.materialize(word_bound), top_dim)


# -- homotopy category ----------------------------------------------------------

def homotopy_category(X: FiniteSimplicialSet) -> FiniteCategory:
    """Vertices and edges modulo the 2-simplex relation, for an inner-Kan X.

    ``[g] ∘ [f] = [h]`` whenever some 2-simplex has faces ``(g, h, f)``.
    """
    if not X.is_simplicial:
        raise LocalizationError("the homotopy category needs degeneracies")
    report = check_inner_kan(X, min(3, X.top_dim))
    if not report.passed:
        raise LocalizationError(f"X is not inner-Kan up to dimension {report.max_n}: {report.witnesses()[:1]}")
    n_edges = X.count(1)
    parent = list(range(n_edges))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    ident_edge = [X.degeneracy(0, 0, v) for v in range(X.count(0))]
    F2 = X.faces[2]
    for t in range(X.count(2)):
        d0, d1, d2 = (int(v) for v in F2[t])
        # a 2-simplex with one identity leg identifies the other two edges
        if d0 == ident_edge[X.face(1, 0, d2)]:
            parent[find(d1)] = find(d2)
        if d2 == ident_edge[X.face(1, 1, d0)]:
            parent[find(d1)] = find(d0)

    reps = sorted({find(e) for e in range(n_edges)})
    cls = {r: k for k, r in enumerate(reps)}
    src = [X.face(1, 1, r) for r in reps]
    dst = [X.face(1, 0, r) for r in reps]
    comp: dict[tuple[int, int], int] = {}
    for t in range(X.count(2)):
        d0, d1, d2 = (cls[find(int(v))] for v in F2[t])
        prev = comp.setdefault((d0, d2), d1)
        if prev != d1:
            raise LocalizationError("composition of homotopy classes is not well defined")
    label = getattr(X, "category", None)

    def name(r):
        if label is not None:
            return label.names[X.keys[1][r][1][0]]
        return f"e{r}"

    objects = [str(v) if label is None else label.objects[X.keys[0][v][0][0]] for v in range(X.count(0))]
    H = FiniteCategory(objects, [name(r) for r in reps], src, dst,
                       [cls[find(e)] for e in ident_edge], comp)
    probs = H.problems()
    if probs:
        raise LocalizationError("homotopy category is not a category: " + probs[0])
    H.edge_class = {e: cls[find(e)] for e in range(n_edges)}
    return H


# -- formal inverses --------------------------------------------------------------

def inverse_name(name: str) -> str:
    return f"{name}^-1"


def localize_category(C: FiniteCategoryPresentation | FiniteCategory, S: Iterable[str]) -> FiniteCategoryPresentation:
    """Adjoin a two-sided inverse for each named arrow of ``S``.

    A :class:`FiniteCategory` is first turned into its full-table
    presentation, so ``S`` may name any of its non-identity arrows.
    """
    if isinstance(C, FiniteCategory):
        S = [s for s in S if not C.is_identity(C.arrow(s))]
        C = C.to_presentation()
    pres = FiniteCategoryPresentation(list(C.objects), list(C.arrows), list(C.relations))
    for s in sorted(set(S)):
        name, a, b = C.arrow(s)
        inv = inverse_name(name)
        pres.arrows.append((inv, b, a))
        pres.add_relation((name, inv), (), a)
        pres.add_relation((inv, name), (), b)
    return pres


def canonical_functor(C: FiniteCategory, L: FiniteCategory) -> Functor:
    """C -> C[S^-1] for L materialized from ``localize_category(C, S)``."""
    obj = tuple(L.objects.index(o) for o in C.objects)
    words = getattr(C, "pres_words", None)
    arr = []
    for f in range(C.n_arrows):
        if C.is_identity(f):
            arr.append(L.identity[obj[C.src[f]]])
        elif C.names[f] in L.generator_names:
            arr.append(L.generator_names[C.names[f]])
        elif words is not None:
            cur = L.identity[obj[C.src[f]]]
            for g in words[f]:
                cur = L.comp[(L.generator_names[g], cur)]
            arr.append(cur)
        else:
            raise LocalizationError(f"cannot place arrow {C.names[f]} in the localization")
    F = Functor(C, L, obj, tuple(arr))
    probs = F.problems()
    if probs:
        raise LocalizationError(probs[0])
    return F


# -- functor categories over posets --------------------------------------------------

def chain_functors(n: int, D: FiniteCategory) -> list[Functor]:
    """Functors [n] -> D read off composable chains of D."""
    A = poset_category(linear_order(n))
    out = []

    def rec(objs, arrs):
        if len(objs) == n + 1:
            arr = [0] * A.n_arrows
            for (i, j), k in A.pair_index.items():
                cur = D.identity[objs[i]]
                for f in arrs[i:j]:
                    cur = D.comp[(f, cur)]
                arr[k] = cur
            out.append(Functor(A, D, tuple(objs), tuple(arr)))
            return
        if not objs:
            for o in range(D.n_objects):
                rec([o], [])
            return
        for f in range(D.n_arrows):
            if D.src[f] == objs[-1]:
                rec(objs + [D.dst[f]], arrs + [f])

    rec([], [])
    return out


def poset_functors(P, D: FiniteCategory, inverted=None) -> list[Functor]:
    """Functors P -> D for a finite poset, optionally sending chosen pairs to isomorphisms.

    Elements are visited along a linear extension; each new element gets an
    object and an arrow from every lower cover, and the composites along all
    paths into it must agree.  ``inverted(a, b)`` marks pairs that must map
    to isomorphisms.
    """
    A = poset_category(P)
    isos = D.isomorphisms()
    homs = {(a, b): D.hom(a, b) for a in range(D.n_objects) for b in range(D.n_objects)}
    order = P.linear_extension()
    lower = {p: [q for q in range(P.size) if P.lt(q, p)] for p in order}
    covers_into = {p: [q for q, r in P.covers() if r == p] for p in order}
    must = {p: {q for q in lower[p] if inverted is not None and inverted(q, p)} for p in order}
    obj = [None] * P.size
    table: dict[tuple[int, int], int] = {}
    out = []

    def extend(p, k):
        cov = covers_into[p]
        if k == len(cov):
            # every a < p is reached through some cover; all routes must agree
            new = {}
            for q in cov:
                fq = table[(q, p)]
                for a in lower[q] + [q]:
                    h = fq if a == q else D.comp[(fq, table[(a, q)])]
                    if new.setdefault(a, h) != h:
                        return
            if any(new[a] not in isos for a in must[p]):
                return
            extra = [a for a in new if (a, p) not in table]
            for a in extra:
                table[(a, p)] = new[a]
            yield
            for a in extra:
                del table[(a, p)]
            return
        q = cov[k]
        for f in homs[(obj[q], obj[p])]:
            if q in must[p] and f not in isos:
                continue
            table[(q, p)] = f
            yield from extend(p, k + 1)
        table.pop((q, p), None)

    def rec(i):
        if i == len(order):
            arr = [0] * A.n_arrows
            for (a, b), k in A.pair_index.items():
                arr[k] = D.identity[obj[a]] if a == b else table[(a, b)]
            out.append(Functor(A, D, tuple(obj), tuple(arr)))
            return
        p = order[i]
        for o in range(D.n_objects):
            obj[p] = o
            for _ in extend(p, 0):
                rec(i + 1)
        obj[p] = None

    rec(0)
    return out


def count_natural(F: Functor, G: Functor, iso_only: bool = False, stop_at: int | None = None) -> int:
    """Number of natural transformations F => G (componentwise isos if ``iso_only``)."""
    A, B = F.source, F.target
    isos = B.isomorphisms() if iso_only else None
    comp = B.comp
    checks: dict[int, list[tuple[int, int, int, int]]] = {}
    for g in A.generators:
        a, b = A.src[g], A.dst[g]
        checks.setdefault(max(a, b), []).append((a, b, F.arr[g], G.arr[g]))
    options = []
    for a in range(A.n_objects):
        hom = B.hom(F.obj[a], G.obj[a])
        options.append([c for c in hom if isos is None or c in isos])
    alpha = [None] * A.n_objects
    count = 0

    def rec(a):
        nonlocal count
        if a == A.n_objects:
            count += 1
            return stop_at is not None and count >= stop_at
        here = checks.get(a, ())
        for c in options[a]:
            alpha[a] = c
            if all(comp[(alpha[y], fg)] == comp[(gg, alpha[x])] for x, y, fg, gg in here):
                if rec(a + 1):
                    return True
        return False

    rec(0)
    return count


@dataclass
class MaxLocalizationReport:
    size: int
    n_plain: int
    n_inverting: int
    lands_in_inverting: bool
    injective: bool
    fully_faithful: bool
    essentially_surjective: bool

    @property
    def equivalence(self) -> bool:
        return self.lands_in_inverting and self.injective and self.fully_faithful and self.essentially_surjective

    @property
    def bijective(self) -> bool:
        return self.equivalence and self.n_plain == self.n_inverting


def _as_category(D) -> FiniteCategory:
    return D.materialize() if isinstance(D, FiniteCategoryPresentation) else D


def max_localization_report(I, D: FiniteCategoryPresentation | FiniteCategory, max_objects: int = 3,
                            max_arrows: int = 12) -> MaxLocalizationReport:
    """Compare Fun(Δ^I, D) with the functors sd(Δ^I) -> D inverting max-localizing edges.

    Both sides are enumerated separately: the left as composable chains in
    D, the right by generator assignment on the poset P'(I).  Restriction
    along max is checked to be fully faithful and essentially surjective.
    """
    order = _as_order(I)
    D = _as_category(D)
    if len(order) > 3:
        raise ValueError(f"|I| = {len(order)} exceeds the bound 3")
    if D.n_objects > max_objects or D.n_arrows > max_arrows:
        raise ValueError(f"D has {D.n_objects} objects and {D.n_arrows} arrows; bounds are {max_objects} and {max_arrows}")
    n = len(order) - 1
    lattice = nonempty_subsets_poset(order)
    sdcat = poset_category(lattice)

    plain = chain_functors(n, D)
    inverting = poset_functors(lattice, D, lambda a, b: lattice.maxes[a] == lattice.maxes[b])
    inv_index = {F.arr: k for k, F in enumerate(inverting)}

    def restrict(F: Functor) -> Functor:
        base = F.source.pair_index
        arr = [0] * sdcat.n_arrows
        for (a, b), k in sdcat.pair_index.items():
            arr[k] = F.arr[base[(lattice.maxes[a], lattice.maxes[b])]]
        return Functor(sdcat, D, tuple(F.obj[lattice.maxes[a]] for a in range(lattice.size)), tuple(arr))

    restricted = [restrict(F) for F in plain]
    lands = all(R.arr in inv_index for R in restricted)
    injective = len({R.arr for R in restricted}) == len(restricted)
    fully_faithful = all(count_natural(F, G) == count_natural(rF, rG)
                         for F, rF in zip(plain, restricted) for G, rG in zip(plain, restricted))
    hit = {R.arr for R in restricted}
    ess = all(H.arr in hit or any(count_natural(H, R, iso_only=True, stop_at=1) for R in restricted)
              for H in inverting)
    return MaxLocalizationReport(len(order), len(plain), len(inverting), lands, injective, fully_faithful, ess)


def verify_max_localization(I, D, **bounds) -> bool:
    return max_localization_report(I, D, **bounds).equivalence


# -- colimits along an endofunctor ------------------------------------------------

@dataclass
class EventualImage:
    category: FiniteCategory        # subcategory of the source, arrows/objects listed by id
    stages: int
    objects: tuple[int, ...]
    arrows: tuple[int, ...]


def eventual_image(C: FiniteCategory, T: Functor, max_stages: int = 10) -> EventualImage:
    """colim(C -T-> C -T-> ...) realized as the stable image of T."""
    objs, arrs = set(range(C.n_objects)), set(range(C.n_arrows))
    for stage in range(max_stages + 1):
        nobjs, narrs = {T.obj[o] for o in objs}, {T.arr[f] for f in arrs}
        if nobjs == objs and narrs == arrs:
            E = C.subcategory(objs, arrs)
            return EventualImage(E, stage, tuple(sorted(objs)), tuple(sorted(arrs)))
        objs, arrs = nobjs, narrs
    raise LocalizationError(f"the colimit does not stabilize within {max_stages} stages")


def induced_on_localization(C: FiniteCategory, S: Sequence[int], T: Functor, L: FiniteCategory) -> Functor:
    """T[S^-1]: L -> L, defined on generators and extended along words."""
    images = {}
    for f in range(C.n_arrows):
        if not C.is_identity(f):
            t = T.arr[f]
            images[C.names[f]] = L.identity[L.objects.index(C.objects[C.src[t]])] if C.is_identity(t) \
                else L.generator_names[C.names[t]]
    for s in S:
        if C.is_identity(s):
            continue
        t = T.arr[s]
        if C.is_identity(t):
            images[inverse_name(C.names[s])] = images[C.names[s]]
        else:
            images[inverse_name(C.names[s])] = L.generator_names[inverse_name(C.names[t])]
    obj = tuple(L.objects.index(C.objects[T.obj[C.objects.index(o)]]) for o in L.objects)
    arr = []
    for f in range(L.n_arrows):
        cur = L.identity[obj[L.src[f]]]
        for g in L.pres_words[f]:
            cur = L.comp[(images[g], cur)]
        arr.append(cur)
    F = Functor(L, L, obj, tuple(arr))
    probs = F.problems()
    if probs:
        raise LocalizationError("T does not descend to the localization: " + probs[0])
    return F


@dataclass
class StabilizationReport:
    stages_plain: int
    stages_localized: int
    localize_then_colim: FiniteCategory
    colim_then_localize: FiniteCategory
    isomorphic: bool


def stab_localization_report(C: FiniteCategory, S: Iterable[str | int], T: Functor, max_stages: int = 10,
                             word_bound: int = WORD_BOUND) -> StabilizationReport:
    S = sorted({C.arrow(s) if isinstance(s, str) else int(s) for s in S})
    if any(T.arr[s] not in S and not C.is_identity(T.arr[s]) for s in S):
        raise LocalizationError("T does not preserve S")
    probs = T.problems()
    if probs:
        raise LocalizationError("T is not a functor: " + probs[0])

    # colim, then localize at the image of S
    E = eventual_image(C, T, max_stages)
    on_E = set(E.arrows)
    shift = {f: T.arr[f] for f in on_E}                  # T restricted to E is a bijection
    marked = {f for f in (_power(T.arr, s, E.stages) for s in S)}
    frontier = list(marked)
    inv_shift = {v: k for k, v in shift.items()}
    while frontier:
        nxt = []
        for f in frontier:
            for g in (shift[f], inv_shift[f]):
                if g not in marked:
                    marked.add(g)
                    nxt.append(g)
        frontier = nxt
    colim_loc = localize_category(E.category, [C.names[f] for f in sorted(marked)]).materialize(word_bound)

    # localize, then colim along the induced functor
    L = localize_category(C, [C.names[s] for s in S]).materialize(word_bound)
    TL = induced_on_localization(C, S, T, L)
    EL = eventual_image(L, TL, max_stages)
    return StabilizationReport(E.stages, EL.stages, EL.category, colim_loc,
                               are_isomorphic(EL.category, colim_loc))


def _power(table, x, n):
    for _ in range(n):
        x = table[x]
    return x


def verify_stab_commutes_with_localization(C: FiniteCategory, S, T: Functor, **kwargs) -> bool:
    return stab_localization_report(C, S, T, **kwargs).isomorphic


# -- the test grid of small categories ----------------------------------------------

def _presentations(n_objects: int, n_gens: int):
    from itertools import product
    objs = [str(k) for k in range(n_objects)]
    for ends in product(product(objs, repeat=2), repeat=n_gens):
        arrows = [(f"g{k}", s, t) for k, (s, t) in enumerate(ends)]
        endpoint = {a[0]: (a[1], a[2]) for a in arrows}
        words = [(a[0], b[0]) for a in arrows for b in arrows if a[2] == b[1]]
        choices = []
        for w in words:
            s, t = endpoint[w[0]][0], endpoint[w[1]][1]
            opts = [None]                       # no relation on this word
            if s == t:
                opts.append(())
            opts += [(a[0],) for a in arrows if (a[1], a[2]) == (s, t)]
            opts += [v for v in words if v < w and (endpoint[v[0]][0], endpoint[v[1]][1]) == (s, t)]
            choices.append(opts)
        for pick in product(*choices):
            pres = FiniteCategoryPresentation(list(objs), list(arrows))
            for w, rhs in zip(words, pick):
                if rhs is not None:
                    pres.add_relation(w, rhs, endpoint[w[0]][0])
            yield pres


def small_category_grid(max_objects: int = 2, max_generators: int = 2, max_arrows: int = 12,
                        word_bound: int = WORD_BOUND) -> list[FiniteCategory]:
    """Finite categories on <= ``max_objects`` objects generated by <= ``max_generators`` arrows.

    Every length-two composable word is either left alone, sent to an
    identity, to a generator, or to another length-two word.  Presentations
    that fail to close or exceed ``max_arrows`` are dropped; the rest are
    deduplicated up to isomorphism.
    """
    found: dict[tuple, list[FiniteCategory]] = {}
    out = []
    for n_obj in range(1, max_objects + 1):
        for n_gen in range(max_generators + 1):
            for pres in _presentations(n_obj, n_gen):
                try:
                    C = pres.materialize(word_bound)
                except Exception:
                    continue
                if C.n_arrows > max_arrows:
                    continue
                key = (C.n_objects, C.n_arrows,
                       tuple(sorted(tuple(sorted(len(C.hom(a, b)) for b in range(C.n_objects))) for a in range(C.n_objects))))
                bucket = found.setdefault(key, [])
                if any(are_isomorphic(C, D) for D in bucket):
                    continue
                bucket.append(C)
                out.append(C)
    return out
