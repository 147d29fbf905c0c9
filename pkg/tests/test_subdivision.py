from math import factorial

import pytest

from oracles import maximal_flags, strict_subset_chains
from simpkit.sset import boundary, horn, standard_simplex, validate
from simpkit.subdivision import (FinitePoset, NonSingularError, SubsetLattice, face_poset, is_max_localizing,
                                 max_adjoint, max_projection, nonempty_subsets_poset, sd_induced,
                                 sd_nonsingular, sd_simplex)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sd_counts_against_chain_oracle(n):
    X = sd_simplex(n)
    levels = strict_subset_chains(n)
    assert X.count(0) == 2 ** (n + 1) - 1
    assert X.nondegenerate_counts() == tuple(len(lev) for lev in levels)
    assert X.nondegenerate_counts()[n] == factorial(n + 1) == len(maximal_flags(n))


def test_sd_top_simplices_are_complete_flags():
    X = sd_simplex(2)
    P = X.poset
    flags = {tuple(P.labels[a] for a in key) for key in X.keys[2] if len(set(key)) == 3}
    assert flags == maximal_flags(2)


def test_sd_on_labelled_order():
    X = sd_simplex(("x", "y"))
    assert X.poset.labels == (frozenset("x"), frozenset("y"), frozenset("xy"))
    assert validate(X).ok


def test_subset_bound():
    with pytest.raises(ValueError, match="bound"):
        nonempty_subsets_poset(8)
    assert nonempty_subsets_poset(7).size == 255


def test_lattice_helpers():
    P = SubsetLattice((0, 1, 2))
    a = P.element({0, 2})
    assert P.max_of(a) == 2
    assert P.labels[P.initial_interval(1)] == frozenset({0, 1})
    assert P.le(P.element({0}), a) and not P.le(a, P.element({0}))
    assert len(P.covers()) == 9


def test_poset_validation():
    bad = FinitePoset([[1, 1], [1, 1]])
    assert any("antisymmetric" in p for p in bad.problems())
    intransitive = FinitePoset([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    assert any("transitive" in p for p in intransitive.problems())


def test_nonsingular_subdivision():
    X = sd_nonsingular(boundary(2))
    assert X.nondegenerate_counts() == (6, 6)
    H = sd_nonsingular(horn(2, 1))
    assert H.count(0) == 5
    # the simplex itself agrees with the subset-lattice construction
    assert sd_nonsingular(standard_simplex(2)).nondegenerate_counts() == sd_simplex(2).nondegenerate_counts()


def test_face_poset_rejects_singular_input():
    from simpkit.sset import SemiSimplicialComplex
    loop = SemiSimplicialComplex([None, [[0, 0]]], [1, 1])
    with pytest.raises(NonSingularError):
        face_poset(loop)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_max_and_adjoint(n):
    mx = max_projection(n, margin=1)
    ad = max_adjoint(n, margin=1)
    assert mx.validate().ok and ad.validate().ok
    assert ad.compose(mx).is_identity()
    # every A sits below [min, max A]: a natural map id -> adjoint ∘ max
    P = mx.source.poset
    for a in range(P.size):
        assert P.le(a, P.initial_interval(P.max_of(a)))


def test_max_localizing_edges():
    X = sd_simplex(2)
    P = X.poset
    assert is_max_localizing(X, ({1}, {0, 1}))
    assert not is_max_localizing(X, ({0}, {0, 1}))
    assert is_max_localizing(X, ({2}, {0, 1, 2}))
    with pytest.raises(ValueError):
        is_max_localizing(X, ({0, 1}, {1, 2}))
    n_loc = sum(is_max_localizing(X, e) for e in range(X.count(1)))
    # degenerate edges count, plus strict inclusions with the same max
    strict = sum(1 for a in range(P.size) for b in range(P.size)
                 if P.lt(a, b) and P.maxes[a] == P.maxes[b])
    assert n_loc == strict + P.size


def test_sd_functorial_for_injections():
    # {0,2} -> {0,1,2}
    f = sd_induced((0, 2), 1, 2)
    assert f.validate().ok
    P, Q = f.source.poset, f.target.poset
    for a in range(P.size):
        b = f(0, a)
        assert Q.labels[b] == frozenset((0, 2)[i] for i in P.members[a])


def test_sd_functorial_all_injections_up_to_four():
    from itertools import combinations
    for m in range(1, 5):
        for k in range(1, m + 1):
            for a in combinations(range(m), k):
                f = sd_induced(a, k - 1, m - 1)
                assert f.validate().ok
                P, Q = f.source.poset, f.target.poset
                for e in range(P.size):
                    assert Q.maxes[f(0, e)] == a[P.maxes[e]]
