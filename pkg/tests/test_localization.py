import pytest

from oracles import functors_from_poset
from simpkit.category import (FiniteCategoryPresentation, are_isomorphic, iter_functors, linear_order,
                              poset_category)
from simpkit.fixtures import CATEGORY_FIXTURES, category, category_presentation, endofunctor_fixtures
from simpkit.localization import (LocalizationError, canonical_functor, chain_functors, count_natural,
                                  eventual_image, homotopy_category, localize_category, max_localization_report,
                                  nerve_of_presentation, poset_functors, small_category_grid,
                                  stab_localization_report, verify_max_localization,
                                  verify_stab_commutes_with_localization)
from simpkit.sset import boundary, standard_simplex
from simpkit.subdivision import nonempty_subsets_poset


def free_chain():
    return FiniteCategoryPresentation(["0", "1", "2"], [("f", "0", "1"), ("g", "1", "2")])


def test_nerve_of_presentation_examples():
    X = nerve_of_presentation(category_presentation("terminal"), 3)
    assert X.nondegenerate_counts() == (1, 0, 0, 0)
    X = nerve_of_presentation(category_presentation("arrow"), 2)
    assert X.nondegenerate_counts() == (2, 1, 0)
    X = nerve_of_presentation(free_chain(), 3)
    assert X.nondegenerate_counts() == (3, 3, 1, 0)


@pytest.mark.parametrize("name", CATEGORY_FIXTURES)
def test_homotopy_category_round_trip(name):
    C = category(name)
    H = homotopy_category(nerve_of_presentation(category_presentation(name), 3))
    assert (H.n_objects, H.n_arrows) == (C.n_objects, C.n_arrows)
    assert are_isomorphic(H, C)


def test_homotopy_category_of_groupoid_and_point():
    H = homotopy_category(nerve_of_presentation(category_presentation("z2_groupoid"), 3))
    assert H.is_groupoid()
    T = homotopy_category(standard_simplex(0, margin=3))
    assert (T.n_objects, T.n_arrows) == (1, 1)


def test_homotopy_category_needs_inner_kan():
    with pytest.raises(LocalizationError):
        homotopy_category(standard_simplex(2).semisimplicial())
    X = boundary(2)
    with pytest.raises(LocalizationError):
        homotopy_category(X)


def test_localize_arrow_gives_iso_category():
    L = localize_category(category_presentation("arrow"), ["f"]).materialize()
    assert L.n_arrows == 4 and L.is_groupoid()
    assert are_isomorphic(L, category("iso"))


def test_localize_identities_only_changes_nothing():
    C = category("chain2")
    L = localize_category(C, ["id(0)", "id(1)"]).materialize()
    assert are_isomorphic(L, C)


def test_localize_free_chain_at_second_arrow():
    L = localize_category(free_chain(), ["g"]).materialize()
    one, two = L.objects.index("1"), L.objects.index("2")
    assert len(L.hom(two, one)) == 1
    F = canonical_functor(free_chain().materialize(), L)
    assert F.problems() == []
    assert L.is_iso(F.arr[free_chain().materialize().arrow("g")])
    assert not L.is_iso(F.arr[free_chain().materialize().arrow("f")])


def test_localize_reports_nontermination():
    pres = FiniteCategoryPresentation(["0"], [("t", "0", "0"), ("u", "0", "0")])
    pres.add_relation(("t", "t"), ("t",))
    with pytest.raises(Exception, match="increase word bound"):
        localize_category(pres, ["t"]).materialize()


@pytest.mark.parametrize("name,S", [("arrow", ["f"]), ("chain2", ["g"]), ("span", ["f"]),
                                    ("idempotent", []), ("square", ["d"])])
def test_localization_universal_property(name, S):
    C = category(name)
    L = localize_category(category_presentation(name), S).materialize()
    can = canonical_functor(C, L)
    for D in (category("iso"), category("z2"), category("arrow")):
        inverting = [F for F in iter_functors(C, D) if all(D.is_iso(F.arr[C.arrow(s)]) for s in S)]
        through = {F.arr for F in inverting}
        induced = [tuple(G.arr[can.arr[f]] for f in range(C.n_arrows)) for G in iter_functors(L, D)]
        assert len(induced) == len(set(induced)) == len(through)
        assert set(induced) == through


@pytest.mark.parametrize("n", [0, 1, 2])
@pytest.mark.parametrize("name", ["iso", "idempotent", "span", "z3"])
def test_chain_and_poset_enumerators_match_brute_force(n, name):
    D = category(name)
    P = linear_order(n)
    ref = functors_from_poset(list(range(P.size)), P.le, D)
    assert len(chain_functors(n, D)) == len(ref)
    assert len(poset_functors(P, D)) == len(ref)


@pytest.mark.parametrize("name", ["iso", "z2", "split_idempotent"])
def test_poset_functors_on_subdivision(name):
    D = category(name)
    lat = nonempty_subsets_poset(1)
    ref = functors_from_poset(list(range(lat.size)), lat.le, D)
    assert len(poset_functors(lat, D)) == len(ref)
    inv = poset_functors(lat, D, lambda a, b: lat.maxes[a] == lat.maxes[b])
    A = poset_category(lat)
    ref_inv = [F for F in iter_functors(A, D)
               if all(D.is_iso(F.arr[k]) for (a, b), k in A.pair_index.items() if lat.maxes[a] == lat.maxes[b])]
    assert len(inv) == len(ref_inv)


def test_count_natural_simple_cases():
    D = category("iso")
    Fs = chain_functors(0, D)
    # functors from a point are objects; transformations are arrows between them
    assert [[count_natural(F, G) for G in Fs] for F in Fs] == [[1, 1], [1, 1]]
    D = category("arrow")
    Fs = chain_functors(0, D)
    assert [[count_natural(F, G) for G in Fs] for F in Fs] == [[1, 1], [0, 1]]


def test_max_localization_examples():
    r = max_localization_report([0, 1], category("arrow"))
    assert (r.n_plain, r.n_inverting) == (3, 3) and r.bijective
    for name in CATEGORY_FIXTURES:
        if category(name).n_objects > 3:
            continue
        r = max_localization_report([0], category(name))
        assert r.n_plain == r.n_inverting == category(name).n_objects
    assert verify_max_localization([0, 1, 2], category("iso"))


def test_max_localization_non_gaunt_is_equivalence_only():
    r = max_localization_report([0, 1], category("iso"))
    assert r.equivalence and not r.bijective
    assert (r.n_plain, r.n_inverting) == (4, 8)


def test_max_localization_bounds():
    with pytest.raises(ValueError):
        verify_max_localization([0, 1, 2, 3], category("arrow"))
    with pytest.raises(ValueError):
        verify_max_localization([0], category("z3"), max_arrows=2)


def test_grid_size_and_spot_checks():
    grid = small_category_grid()
    assert len(grid) == 77
    for k, D in enumerate(grid):
        assert D.problems() == []
        for j in range(k):
            assert not are_isomorphic(D, grid[j]) or D is grid[j]
    for D in grid[::9]:
        assert verify_max_localization([0, 1], D)


def test_eventual_image_stages():
    for fx in endofunctor_fixtures():
        E = eventual_image(fx.category, fx.functor)
        assert E.stages <= 3


@pytest.mark.parametrize("fx", endofunctor_fixtures(), ids=lambda f: f.name)
def test_stab_commutes(fx):
    r = stab_localization_report(fx.category, fx.marked, fx.functor)
    assert r.isomorphic
    assert verify_stab_commutes_with_localization(fx.category, fx.marked, fx.functor)


def test_stab_identity_equals_plain_localization():
    fx = endofunctor_fixtures()[0]
    r = stab_localization_report(fx.category, fx.marked, fx.functor)
    L = localize_category(fx.category, fx.marked).materialize()
    assert are_isomorphic(r.localize_then_colim, L)


def test_stab_rejects_unpreserved_marking():
    fx = endofunctor_fixtures()[1]
    with pytest.raises(LocalizationError):
        stab_localization_report(fx.category, ("fa",), fx.functor)
