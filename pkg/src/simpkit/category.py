"""Finite categories: presentations, word closure, nerves, functors, isomorphisms.

Words are tuples of generator names in *application* order: ``("f", "g")``
means first ``f`` then ``g``, i.e. ``g ∘ f``.  The text syntax writes the
same composite as ``g*f``; ``id(a)`` is the empty word at object ``a``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Sequence

from .sset import FiniteSimplicialSet, build_from_keys
from .subdivision import FinitePoset

WORD_BOUND = 8
NODE_BUDGET = 200_000


class ClosureError(RuntimeError):
    pass


class CategoryError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    lhs: tuple[str, ...]
    rhs: tuple[str, ...]
    src: str
    dst: str


@dataclass
class FiniteCategoryPresentation:
    objects: list[str]
    arrows: list[tuple[str, str, str]]            # (name, src, dst)
    relations: list[Relation] = field(default_factory=list)

    def arrow(self, name: str) -> tuple[str, str, str]:
        for a in self.arrows:
            if a[0] == name:
                return a
        raise KeyError(name)

    def endpoints(self, word: Sequence[str], at: str | None = None) -> tuple[str, str]:
        if not word:
            if at is None:
                raise CategoryError("empty word needs an object")
            return at, at
        ends = {a[0]: (a[1], a[2]) for a in self.arrows}
        src = ends[word[0]][0]
        cur = src
        for g in word:
            if ends[g][0] != cur:
                raise CategoryError(f"word {'*'.join(reversed(word))} is not composable")
            cur = ends[g][1]
        return src, cur

    def add_relation(self, lhs: Sequence[str], rhs: Sequence[str], at: str | None = None) -> None:
        lhs, rhs = tuple(lhs), tuple(rhs)
        ends = self.endpoints(lhs or rhs, at)
        if lhs and self.endpoints(lhs) != ends or rhs and self.endpoints(rhs) != ends:
            raise CategoryError(f"relation sides have different endpoints: {lhs} = {rhs}")
        if not lhs and not rhs:
            return
        if (not lhs or not rhs) and ends[0] != ends[1]:
            raise CategoryError("identity relation between different objects")
        self.relations.append(Relation(lhs, rhs, *ends))

    def materialize(self, word_bound: int = WORD_BOUND) -> FiniteCategory:
        return close_presentation(self, word_bound)


def _word_name(word: Sequence[str], obj: str) -> str:
    return "*".join(reversed(word)) if word else f"id({obj})"


def close_presentation(pres: FiniteCategoryPresentation, word_bound: int = WORD_BOUND,
                       node_budget: int = NODE_BUDGET) -> FiniteCategory:
    """Materialize a presentation by coset enumeration on the right Cayley graph.

    Nodes are arrows; applying every relation at every node and merging
    coincidences yields the presented category when the process closes.
    Nodes whose defining word would exceed ``word_bound`` abort the run.
    """
    objects = list(pres.objects)
    if len(set(objects)) != len(objects):
        raise CategoryError("duplicate object names")
    gens = list(pres.arrows)
    gen_index = {g[0]: i for i, g in enumerate(gens)}
    if len(gen_index) != len(gens):
        raise CategoryError("duplicate arrow names")
    for name, s, t in gens:
        if s not in objects or t not in objects:
            raise CategoryError(f"arrow {name} has unknown endpoints")
    out = {o: [i for i, g in enumerate(gens) if g[1] == o] for o in objects}
    rels = [(tuple(gen_index[g] for g in r.lhs), tuple(gen_index[g] for g in r.rhs), r.src)
            for r in pres.relations]

    parent: list[int] = []
    start: list[str] = []
    end: list[str] = []
    words: list[tuple[int, ...]] = []
    edges: list[dict[int, int]] = []

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def new_node(s, e, w):
        if len(w) > word_bound:
            raise ClosureError(f"word closure did not terminate within length {word_bound}; increase word bound")
        if len(parent) >= node_budget:
            raise ClosureError("word closure exceeded the node budget; increase word bound")
        parent.append(len(parent))
        start.append(s)
        end.append(e)
        words.append(w)
        edges.append({})
        return len(parent) - 1

    def follow(n, g):
        t = edges[n].get(g)
        return None if t is None else find(t)

    def define(n, g):
        m = new_node(start[n], gens[g][2], words[n] + (g,))
        edges[n][g] = m
        return m

    def trace(n, w, create=True):
        for g in w:
            n = find(n)
            nxt = follow(n, g)
            if nxt is None:
                if not create:
                    return None
                nxt = define(n, g)
            n = nxt
        return find(n)

    def coincide(a, b):
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if x > y:
                x, y = y, x
            parent[y] = x
            if len(words[y]) < len(words[x]):
                words[x] = words[y]
            for g, t in edges[y].items():
                if g in edges[x]:
                    queue.append((edges[x][g], t))
                else:
                    edges[x][g] = t
            edges[y] = {}

    ident = {o: new_node(o, o, ()) for o in objects}
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(parent):
            if find(i) == i:
                for lhs, rhs, at in rels:
                    if at != end[i]:
                        continue
                    a, b = trace(i, lhs), trace(i, rhs)
                    if a != b:
                        coincide(a, b)
                        changed = True
                if find(i) == i:
                    for g in out[end[i]]:
                        if follow(i, g) is None:
                            define(i, g)
                            changed = True
            i += 1
        # verification pass: every live node satisfies every relation without new nodes
        if not changed:
            for n in range(len(parent)):
                if find(n) != n:
                    continue
                for lhs, rhs, at in rels:
                    if at == end[n] and trace(n, lhs, False) != trace(n, rhs, False):
                        changed = True
                        break

    alive = [n for n in range(len(parent)) if find(n) == n]
    obj_pos = {o: k for k, o in enumerate(objects)}
    alive.sort(key=lambda n: (obj_pos[start[n]], obj_pos[end[n]], len(words[n]), words[n]))
    arrow_of = {n: k for k, n in enumerate(alive)}

    names = []
    for n in alive:
        w = tuple(gens[g][0] for g in words[n])
        names.append(w[0] if len(w) == 1 else _word_name(w, start[n]))
    src = [obj_pos[start[n]] for n in alive]
    dst = [obj_pos[end[n]] for n in alive]
    identity = [arrow_of[find(ident[o])] for o in objects]
    comp = {}
    for f, nf in enumerate(alive):
        for g, ng in enumerate(alive):
            if dst[f] == src[g]:
                comp[(g, f)] = arrow_of[trace(nf, words[ng], False)]
    gen_arrow = {gens[g][0]: arrow_of[trace(ident[gens[g][1]], (g,), False)] for g in range(len(gens))}
    C = FiniteCategory([o for o in objects], names, src, dst, identity, comp)
    C.generator_names = gen_arrow
    # each arrow as a word in the presentation's generator names
    C.pres_words = tuple(tuple(gens[g][0] for g in words[n]) for n in alive)
    return C


class FiniteCategory:
    """A category with finitely many arrows and an explicit composition table.

    ``comp[(g, f)]`` is ``g ∘ f`` for ``dst(f) == src(g)``.
    """

    def __init__(self, objects, names, src, dst, identity, comp, generators=None):
        self.objects = tuple(objects)
        self.names = tuple(names)
        self.src = tuple(src)
        self.dst = tuple(dst)
        self.identity = tuple(identity)
        self.comp = dict(comp)
        self.generator_names: dict[str, int] = {}
        self._gens = None
        self._words = None
        if generators is not None:
            self._set_generators(generators)

    # -- basic structure -----------------------------------------------------
    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.names)

    def hom(self, a: int, b: int) -> list[int]:
        return [f for f in range(self.n_arrows) if self.src[f] == a and self.dst[f] == b]

    def compose(self, g: int, f: int) -> int:
        return self.comp[(g, f)]

    def is_identity(self, f: int) -> bool:
        return self.identity[self.src[f]] == f

    def inverse(self, f: int) -> int | None:
        a, b = self.src[f], self.dst[f]
        for g in self.hom(b, a):
            if self.comp[(g, f)] == self.identity[a] and self.comp[(f, g)] == self.identity[b]:
                return g
        return None

    def is_iso(self, f: int) -> bool:
        return self.inverse(f) is not None

    def isomorphisms(self) -> frozenset[int]:
        return frozenset(f for f in range(self.n_arrows) if self.is_iso(f))

    def is_gaunt(self) -> bool:
        """Every isomorphism is an identity."""
        return all(self.is_identity(f) for f in self.isomorphisms())

    def is_groupoid(self) -> bool:
        return len(self.isomorphisms()) == self.n_arrows

    def arrow(self, name: str) -> int:
        if name in self.generator_names:
            return self.generator_names[name]
        return self.names.index(name)

    def problems(self) -> list[str]:
        out = []
        for a, i in enumerate(self.identity):
            if self.src[i] != a or self.dst[i] != a:
                out.append(f"identity of {self.objects[a]} has wrong endpoints")
        for f in range(self.n_arrows):
            for g in range(self.n_arrows):
                if self.dst[f] != self.src[g]:
                    continue
                h = self.comp.get((g, f))
                if h is None:
                    out.append(f"missing composite {self.names[g]} ∘ {self.names[f]}")
                elif self.src[h] != self.src[f] or self.dst[h] != self.dst[g]:
                    out.append(f"composite {self.names[g]} ∘ {self.names[f]} has wrong endpoints")
            if self.comp.get((self.identity[self.dst[f]], f)) != f or self.comp.get((f, self.identity[self.src[f]])) != f:
                out.append(f"identity law fails at {self.names[f]}")
        if out:
            return out
        for f in range(self.n_arrows):
            for g in range(self.n_arrows):
                if self.dst[f] != self.src[g]:
                    continue
                gf = self.comp[(g, f)]
                for h in range(self.n_arrows):
                    if self.dst[g] == self.src[h] and self.comp[(h, gf)] != self.comp[(self.comp[(h, g)], f)]:
                        out.append(f"associativity fails at {self.names[h]}, {self.names[g]}, {self.names[f]}")
        return out

    # -- generators and words ------------------------------------------------
    def _set_generators(self, gens):
        gens = tuple(sorted(set(gens)))
        words = {self.identity[a]: () for a in range(self.n_objects)}
        frontier = list(words)
        while frontier:
            nxt = []
            for f in frontier:
                for g in gens:
                    if self.src[g] == self.dst[f]:
                        h = self.comp[(g, f)]
                        if h not in words:
                            words[h] = words[f] + (g,)
                            nxt.append(h)
            frontier = nxt
        if len(words) != self.n_arrows:
            raise CategoryError("the given arrows do not generate the category")
        self._gens = gens
        self._words = tuple(words[f] for f in range(self.n_arrows))

    @property
    def generators(self) -> tuple[int, ...]:
        if self._gens is None:
            self._set_generators(minimal_generators(self))
        return self._gens

    @property
    def words(self) -> tuple[tuple[int, ...], ...]:
        self.generators
        return self._words

    def to_presentation(self) -> FiniteCategoryPresentation:
        """All non-identity arrows as generators, the full table as relations."""
        objs = list(self.objects)
        arrows = [(self.names[f], objs[self.src[f]], objs[self.dst[f]])
                  for f in range(self.n_arrows) if not self.is_identity(f)]
        pres = FiniteCategoryPresentation(objs, arrows)
        for (g, f), h in sorted(self.comp.items()):
            if self.is_identity(f) or self.is_identity(g):
                continue
            rhs = () if self.is_identity(h) else (self.names[h],)
            pres.add_relation((self.names[f], self.names[g]), rhs, objs[self.src[f]])
        return pres

    def nerve(self, top_dim: int) -> FiniteSimplicialSet:
        return category_nerve(self, top_dim)

    def subcategory(self, objects, arrows) -> FiniteCategory:
        objects = sorted(objects)
        arrows = sorted(arrows)
        opos = {o: k for k, o in enumerate(objects)}
        apos = {f: k for k, f in enumerate(arrows)}
        comp = {(apos[g], apos[f]): apos[h] for (g, f), h in self.comp.items()
                if g in apos and f in apos}
        sub = FiniteCategory([self.objects[o] for o in objects], [self.names[f] for f in arrows],
                             [opos[self.src[f]] for f in arrows], [opos[self.dst[f]] for f in arrows],
                             [apos[self.identity[o]] for o in objects], comp)
        sub.embedding = (tuple(objects), tuple(arrows))
        return sub

    def __repr__(self):
        return f"FiniteCategory(objects={len(self.objects)}, arrows={len(self.names)})"


def minimal_generators(C: FiniteCategory) -> list[int]:
    """A generating set of non-identity arrows, greedily minimized."""
    gens = [f for f in range(C.n_arrows) if not C.is_identity(f)]

    def generated(gs):
        reach = set(C.identity)
        frontier = list(reach)
        while frontier:
            nxt = []
            for f in frontier:
                for g in gs:
                    if C.src[g] == C.dst[f]:
                        h = C.comp[(g, f)]
                        if h not in reach:
                            reach.add(h)
                            nxt.append(h)
            frontier = nxt
        return reach

    # drop long composites first so short arrows survive
    for f in sorted(gens, key=lambda f: -len(C.names[f])):
        rest = [g for g in gens if g != f]
        if f in generated(rest):
            gens = rest
    return gens


# -- standard categories --------------------------------------------------------

def poset_category(P: FinitePoset, names=None) -> FiniteCategory:
    pairs = [(a, b) for a in range(P.size) for b in range(P.size) if P.le(a, b)]
    idx = {p: k for k, p in enumerate(pairs)}
    labels = [str(l) for l in P.labels] if names is None else list(names)
    arrow_names = [f"id({labels[a]})" if a == b else f"{labels[a]}<{labels[b]}" for a, b in pairs]
    comp = {}
    for (a, b) in pairs:
        for (c, d) in pairs:
            if b == c:
                comp[(idx[(c, d)], idx[(a, b)])] = idx[(a, d)]
    C = FiniteCategory(labels, arrow_names, [p[0] for p in pairs], [p[1] for p in pairs],
                       [idx[(a, a)] for a in range(P.size)], comp,
                       generators=[idx[c] for c in P.covers()])
    C.poset = P
    C.pair_index = idx
    return C


def linear_order(n: int) -> FinitePoset:
    """[n] = {0 < 1 < ... < n}."""
    return FinitePoset.from_covers(n + 1, [(i, i + 1) for i in range(n)])


# -- nerves ---------------------------------------------------------------------

def category_nerve(C: FiniteCategory, top_dim: int) -> FiniteSimplicialSet:
    """k-simplices are composable chains ``(f_1, ..., f_k)``; keys are (objects, arrows)."""
    levels = [[((a,), ()) for a in range(C.n_objects)]]
    for _ in range(top_dim):
        nxt = []
        for objs, arrs in levels[-1]:
            for f in range(C.n_arrows):
                if C.src[f] == objs[-1]:
                    nxt.append((objs + (C.dst[f],), arrs + (f,)))
        levels.append(nxt)

    def face(key, i):
        objs, arrs = key
        k = len(arrs)
        if i == 0:
            return objs[1:], arrs[1:]
        if i == k:
            return objs[:-1], arrs[:-1]
        merged = C.comp[(arrs[i], arrs[i - 1])]
        return objs[:i] + objs[i + 1:], arrs[: i - 1] + (merged,) + arrs[i + 1:]

    def degen(key, i):
        objs, arrs = key
        return objs[: i + 1] + objs[i:], arrs[:i] + (C.identity[objs[i]],) + arrs[i:]

    X = build_from_keys(levels, face, degen)
    X.category = C
    return X


def nerve_edge(X: FiniteSimplicialSet, f: int) -> int:
    C = X.category
    return X.index_of(1, ((C.src[f], C.dst[f]), (f,)))


def isomorphism_edges(X: FiniteSimplicialSet) -> frozenset[int]:
    C = X.category
    return frozenset(nerve_edge(X, f) for f in C.isomorphisms())


# -- functors -------------------------------------------------------------------

@dataclass(frozen=True)
class Functor:
    source: FiniteCategory
    target: FiniteCategory
    obj: tuple[int, ...]
    arr: tuple[int, ...]

    def problems(self) -> list[str]:
        A, B = self.source, self.target
        out = []
        for a in range(A.n_objects):
            if self.arr[A.identity[a]] != B.identity[self.obj[a]]:
                out.append(f"identity of {A.objects[a]} not preserved")
        for f in range(A.n_arrows):
            if B.src[self.arr[f]] != self.obj[A.src[f]] or B.dst[self.arr[f]] != self.obj[A.dst[f]]:
                out.append(f"endpoints of {A.names[f]} not preserved")
        for (g, f), h in A.comp.items():
            if B.comp.get((self.arr[g], self.arr[f])) != self.arr[h]:
                out.append(f"composite {A.names[g]} ∘ {A.names[f]} not preserved")
        return out

    def then(self, other: Functor) -> Functor:
        return Functor(self.source, other.target,
                       tuple(other.obj[o] for o in self.obj),
                       tuple(other.arr[f] for f in self.arr))

    def is_isomorphism(self) -> bool:
        return (len(set(self.obj)) == self.target.n_objects == self.source.n_objects
                and len(set(self.arr)) == self.target.n_arrows == self.source.n_arrows)


def functor_from_generators(A: FiniteCategory, B: FiniteCategory, obj, gen_images: dict[int, int]) -> Functor:
    arr = []
    for f in range(A.n_arrows):
        w = A.words[f]
        cur = B.identity[obj[A.src[f]]]
        for g in w:
            cur = B.comp[(gen_images[g], cur)]
        arr.append(cur)
    return Functor(A, B, tuple(obj), tuple(arr))


def iter_functors(A: FiniteCategory, B: FiniteCategory, injective: bool = False) -> Iterator[Functor]:
    """All functors A -> B, by assignment on generators with relation checking.

    Composition constraints are checked as soon as every arrow they involve
    is determined.  With ``injective`` only injective-on-objects-and-arrows
    functors are produced (used for isomorphism search).
    """
    gens = list(A.generators)
    words = A.words
    steps: list[tuple[str, int]] = []
    seen_obj = set()
    for g in gens:
        for o in (A.src[g], A.dst[g]):
            if o not in seen_obj:
                seen_obj.add(o)
                steps.append(("obj", o))
        steps.append(("gen", g))
    for o in range(A.n_objects):
        if o not in seen_obj:
            steps.append(("obj", o))
    when = {("obj", o): k for k, (kind, o) in enumerate(steps) if kind == "obj"}
    when.update({("gen", g): k for k, (kind, g) in enumerate(steps) if kind == "gen"})

    def ready(f):
        if not words[f]:
            return when[("obj", A.src[f])]
        return max(when[("gen", g)] for g in words[f])

    arrows_at: dict[int, list[int]] = {}
    for f in range(A.n_arrows):
        arrows_at.setdefault(ready(f), []).append(f)
    checks_at: dict[int, list[tuple[int, int, int]]] = {}
    for (g, f), h in A.comp.items():
        if words[g] and words[f]:
            checks_at.setdefault(max(ready(g), ready(f), ready(h)), []).append((g, f, h))

    obj = [None] * A.n_objects
    arr = [None] * A.n_arrows
    gen_img: dict[int, int] = {}

    def image_of(f):
        cur = B.identity[obj[A.src[f]]]
        for g in words[f]:
            cur = B.comp[(gen_img[g], cur)]
        return cur

    def settle(k):
        for f in arrows_at.get(k, ()):
            v = image_of(f)
            if injective:
                if v in used_arr:
                    return False
                used_arr.add(v)
            arr[f] = v
        for g, f, h in checks_at.get(k, ()):
            if B.comp[(arr[g], arr[f])] != arr[h]:
                return False
        return True

    def unsettle(k):
        for f in arrows_at.get(k, ()):
            if arr[f] is not None and injective:
                used_arr.discard(arr[f])
            arr[f] = None

    used_obj: set[int] = set()
    used_arr: set[int] = set()

    def rec(k):
        if k == len(steps):
            yield Functor(A, B, tuple(obj), tuple(arr))
            return
        kind, x = steps[k]
        if kind == "obj":
            for b in range(B.n_objects):
                if injective and b in used_obj:
                    continue
                obj[x] = b
                used_obj.add(b)
                if settle(k):
                    yield from rec(k + 1)
                unsettle(k)
                used_obj.discard(b)
                obj[x] = None
        else:
            for b in B.hom(obj[A.src[x]], obj[A.dst[x]]):
                gen_img[x] = b
                if settle(k):
                    yield from rec(k + 1)
                unsettle(k)
                del gen_img[x]

    yield from rec(0)


def find_isomorphism(A: FiniteCategory, B: FiniteCategory) -> Functor | None:
    if A.n_objects != B.n_objects or A.n_arrows != B.n_arrows:
        return None

    def profile(C):
        return sorted(sorted(len(C.hom(a, b)) for b in range(C.n_objects)) for a in range(C.n_objects))

    if profile(A) != profile(B):
        return None
    for F in iter_functors(A, B, injective=True):
        if F.is_isomorphism():
            return F
    return None


def are_isomorphic(A: FiniteCategory, B: FiniteCategory) -> bool:
    return find_isomorphism(A, B) is not None
