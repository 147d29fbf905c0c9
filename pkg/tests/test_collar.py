import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simpkit.collar import (CollarError, CollarPoint, collar_flow, cutoff, injectivity_ratio, kappa_S, make_rng,
                            parse_chain, partition_g, partition_sum, phi_piecewise, psi, sample_simplex,
                            verify_coherence, verify_partition_support)


def test_psi_and_cutoff_shape():
    u = np.linspace(-1, 2, 301)
    v = psi(u)
    assert np.all(v[u <= 0] == 0) and np.all(v[u >= 1] == 1)
    assert np.all(np.diff(v) >= 0)
    assert psi(0.5) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        cutoff(0.3, 1.0, 1.0)


def test_kappa_examples():
    assert kappa_S([0], [1.0, 0.0, 0.0]) == 1.0
    assert kappa_S([0, 1], [1.0, 0.0, 0.0]) == 0.0
    bary = np.full(3, 1 / 3)
    k = float(kappa_S([0], bary))
    assert 0 < k < 1
    # for a singleton the sum band is [0, 1/2] and the coordinate band [1/4, 1/2]
    expected = float(cutoff(1 / 3, 0.0, 0.5) * cutoff(1 / 3, 0.25, 0.5))
    assert k == pytest.approx(expected, abs=1e-15)
    with pytest.raises(ValueError):
        kappa_S([], bary)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_vertices_select_singletons(m):
    for i in range(m):
        x = np.zeros(m)
        x[i] = 1.0
        g = partition_g(x)
        assert g[(i,)] == 1.0
        assert all(v == 0 for S, v in g.items() if S != (i,))


def test_barycenter_of_edge_is_symmetric():
    g = partition_g(np.array([0.5, 0.5]))
    assert float(g[(0,)]) == pytest.approx(float(g[(1,)]))


def test_zero_coordinate_kills_charts_containing_it():
    g = partition_g(np.array([0.6, 0.4, 0.0]))
    assert all(float(v) == 0 for S, v in g.items() if 2 in S)


def test_partition_sum_on_many_samples():
    x = sample_simplex(make_rng(3), 4, 1000)
    assert np.abs(partition_sum(x) - 1).max() <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10**6))
def test_support_properties(m, seed):
    rng = make_rng(seed)
    x = sample_simplex(rng, m, 1)[0]
    r = verify_partition_support(x, rng)
    assert r.passed, r


@settings(max_examples=30, deadline=None)
@given(st.permutations(range(3)), st.integers(0, 10**6))
def test_partition_is_permutation_equivariant(perm, seed):
    x = sample_simplex(make_rng(seed), 3, 1)[0]
    g = partition_g(x)
    gp = partition_g(x[list(perm)])
    inv = {p: k for k, p in enumerate(perm)}
    for S, v in g.items():
        assert float(gp[tuple(sorted(inv[s] for s in S))]) == pytest.approx(float(v), abs=1e-15)


def test_phi_piecewise_examples():
    assert np.allclose(phi_piecewise((0,), (0, 1), (0,), [1.0], [-0.5]), [1.5, -0.5])
    x = np.array([0.3, 0.7])
    assert np.allclose(phi_piecewise((0, 1), (0, 1, 2), (1,), x, [0.0]), [0.3, 0.7, 0.0])
    with pytest.raises(CollarError, match="degenerate rescaling set"):
        phi_piecewise((0, 1), (0, 1, 2), (1,), [1.0, 0.0], [-0.2])


def test_flow_trivial_cases():
    x = np.array([0.2, 0.8])
    assert np.array_equal(collar_flow((0, 1), (0, 1), x, np.zeros(0)), x)
    y = collar_flow((0, 1), (0, 1, 2), x, [0.0])
    assert np.allclose(y, [0.2, 0.8, 0.0], atol=1e-15)


@pytest.mark.parametrize("t", [-0.1, -0.5, -1.0])
def test_single_chart_flow_matches_piecewise(t):
    # only g_{0} is nonzero along the path: x_0 stays above 1/2, x_1 below 1/8
    x = np.array([0.95, 0.05])
    flowed = collar_flow((0, 1), (0, 1, 2), x, [t])
    assert np.abs(flowed - phi_piecewise((0, 1), (0, 1, 2), (0,), x, [t])).max() <= 1e-8
    flowed = collar_flow((0,), (0, 1), [1.0], [t])
    assert np.allclose(flowed, [1 - t, t], atol=1e-8)


def test_flow_is_path_independent():
    x = sample_simplex(make_rng(7), 2, 40)
    t = make_rng(8).uniform(-1, 0, size=(40, 2))
    a = collar_flow((0, 1), (0, 1, 2, 3), x, t, path="straight")
    b = collar_flow((0, 1), (0, 1, 2, 3), x, t, path="staggered")
    assert np.abs(a - b).max() < 1e-7


def test_flow_preserves_sum_and_slice():
    x = sample_simplex(make_rng(1), 3, 50)
    t = make_rng(2).uniform(-1, 0, size=(50, 1))
    y = collar_flow((0, 1, 2), (0, 1, 2, 3), x, t)
    assert np.abs(y.sum(axis=1) - 1).max() < 1e-12
    assert np.array_equal(y[:, 3], t[:, 0])


def test_flow_argument_checks():
    with pytest.raises(ValueError):
        collar_flow((0,), (0, 1), [1.0], [0.5])
    with pytest.raises(ValueError):
        collar_flow((0,), (0, 1), [1.0], [-0.5], steps=4)
    with pytest.raises(ValueError):
        collar_flow((0, 2), (0, 1), [0.5, 0.5], [-0.5])


def test_collar_point_validation():
    p = CollarPoint((1, 0), [0.25, 0.75])
    assert p.index == (0, 1)
    with pytest.raises(ValueError):
        CollarPoint((0, 1), [0.5, 0.6])
    with pytest.raises(ValueError):
        CollarPoint((0, 1), [2.5, -1.5])


def test_coherence_exact_with_zero_collars():
    x = sample_simplex(make_rng(0), 1, 16)
    from simpkit.collar import coherence_residuals
    res = coherence_residuals([(0,), (0, 1), (0, 1, 2)], x, [np.zeros((16, 1)), np.zeros((16, 1))], 64)
    assert res.max() <= 1e-12


@pytest.mark.parametrize("chain", ["0;0,1", "1;0,1,2", "0,1;0,1,2;0,1,2,3", "2;1,2;0,1,2,3"])
def test_coherence_on_other_chains(chain):
    r = verify_coherence(chain, samples=24, steps=128)
    assert r.passed, r.max_residual


def test_coherence_report_lines():
    r = verify_coherence("0;0,1", samples=8, steps=16)
    lines = r.lines()
    assert lines[0] == "chain 0;0,1"
    assert lines[-1] == "result PASS"


def test_parse_chain_errors():
    assert parse_chain("0;0,1;0,1,2") == [(0,), (0, 1), (0, 1, 2)]
    for bad in ["0", "0,1;0", "0;0,1;0,1,2,3,4", "0;0"]:
        with pytest.raises(ValueError):
            parse_chain(bad)


def test_sampling_is_seeded():
    a = sample_simplex(make_rng(5), 3, 10)
    b = sample_simplex(make_rng(5), 3, 10)
    assert np.array_equal(a, b)
    assert np.abs(a.sum(axis=1) - 1).max() < 1e-12 and (a >= -1).all()


def test_injectivity_ratio_positive():
    assert injectivity_ratio((0, 1), (0, 1, 2), [-0.5], samples=50) > 0
