from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import heatprop as hp
from conftest import random_boundary, random_connected_graph

METHODS = (hp.FIXED_POINT, hp.GROUNDED)


def lemma_temperatures(sizes, seed_counts, p, q, hot):
    """Independent evaluation of the closed-form equilibrium with exact
    rationals: per-block free temperature and the mean temperature."""
    sizes = [Fraction(x) for x in sizes]
    seeds = [Fraction(x) for x in seed_counts]
    p, q = Fraction(p), Fraction(q)
    n = sum(sizes)
    l = hot - 1
    c = [s * (p - q) + n * q for s in seeds]
    denom = 1 - sum((nk - sk) * q / ck for nk, sk, ck in zip(sizes, seeds, c))
    mean = (seeds[l] / n) * (sizes[l] * (p - q) + n * q) / c[l] / denom
    temps = [n * mean * q / ck for ck in c]
    temps[l] = (seeds[l] * (p - q) + n * mean * q) / c[l]
    return [float(t) for t in temps], float(mean)


@pytest.mark.parametrize("method", METHODS)
def test_path_midpoint(method):
    g = hp.build_graph([(0, 1, 1), (1, 2, 1)])
    bc = hp.BoundaryCondition([0, 2], [0.0, 1.0])
    t = hp.solve_dirichlet(g, bc, hp.SolverConfig(method=method))
    np.testing.assert_allclose(t.values, [0.0, 0.5, 1.0], atol=1e-9)
    assert t.residual <= 1e-9


@pytest.mark.parametrize("method", METHODS)
def test_constant_boundary_gives_constant_field(method):
    rng = np.random.default_rng(3)
    g = random_connected_graph(rng, 12, extra_edges=10)
    bc = hp.BoundaryCondition([0, 5, 7], [2.5, 2.5, 2.5])
    t = hp.solve_dirichlet(g, bc, hp.SolverConfig(method=method))
    np.testing.assert_allclose(t.values, 2.5, atol=1e-8)


@pytest.mark.parametrize("method", METHODS)
def test_block_model_matches_closed_form(method):
    # K=2, n1=n2=100, s1=10, s2=5, p=0.1, q=0.01; block-1 seeds hot
    params = hp.BlockModelParams(sizes=(100, 100), seed_counts=(10, 5),
                                 p=0.1, q=0.01)
    g = hp.build_block_graph(params)
    seeds = params.seed_nodes()
    ids = np.array(seeds.nodes)
    bc = hp.BoundaryCondition(ids, np.array([1.0 if seeds.labels[i] == 1 else 0.0
                                             for i in ids]))
    t = hp.solve_dirichlet(g, bc, hp.SolverConfig(method=method))
    expected, mean = lemma_temperatures((100, 100), (10, 5), 0.1, 0.01, hot=1)
    for k in (1, 2):
        for i in params.free_nodes_of_block(k):
            assert t.values[i] == pytest.approx(expected[k - 1], abs=1e-8)
    assert hp.mean_temperature(t, hp.ALL_NODES) == pytest.approx(mean, abs=1e-8)


def test_seed_values_pinned_exactly():
    rng = np.random.default_rng(8)
    g = random_connected_graph(rng, 15, extra_edges=10)
    bc = random_boundary(rng, 15, 4)
    for method in METHODS:
        t = hp.solve_dirichlet(g, bc, hp.SolverConfig(method=method))
        np.testing.assert_array_equal(t.values[bc.seeds], bc.values)


def test_seedless_component_raises():
    edges = [(0, 1, 1), (1, 2, 1), (3, 4, 1)]
    g = hp.build_graph(edges)
    bc = hp.BoundaryCondition([0], [1.0])
    with pytest.raises(hp.SingularSystemError) as exc:
        hp.solve_dirichlet(g, bc)
    assert exc.value.node in (3, 4)


def test_convergence_error_carries_best_iterate():
    rng = np.random.default_rng(5)
    g = random_connected_graph(rng, 40, extra_edges=0)  # a tree: slow mixing
    bc = hp.BoundaryCondition([0], [1.0])
    cfg = hp.SolverConfig(method=hp.FIXED_POINT, tolerance=1e-12, max_iterations=3)
    with pytest.raises(hp.ConvergenceError) as exc:
        hp.solve_dirichlet(g, bc, cfg)
    assert exc.value.best is not None
    assert exc.value.residual > 1e-12


def test_boundary_validation():
    with pytest.raises(hp.DataError):
        hp.BoundaryCondition([], [])
    with pytest.raises(hp.DataError):
        hp.BoundaryCondition([0, 0], [1.0, 2.0])
    g = hp.build_graph([(0, 1, 1)])
    with pytest.raises(hp.DataError):
        hp.solve_dirichlet(g, hp.BoundaryCondition([0, 1], [0.0, 1.0]))


def test_mean_temperature():
    t = hp.TemperatureField(values=np.array([0.0, 0.5, 1.0]), residual=0.0,
                            iterations=0, seeds=np.array([0, 2]))
    assert hp.mean_temperature(t, hp.ALL_NODES) == pytest.approx(0.5)
    assert hp.mean_temperature(t, hp.FREE_NODES) == pytest.approx(0.5)
    all_seeded = hp.TemperatureField(values=np.array([1.0, 1.0]), residual=0.0,
                                     iterations=0, seeds=np.array([0, 1]))
    with pytest.raises(hp.EmptySetError):
        hp.mean_temperature(all_seeded, hp.FREE_NODES)


# --- property tests -------------------------------------------------------

graph_cases = st.tuples(st.integers(0, 2**32 - 1), st.integers(4, 14),
                        st.integers(0, 15), st.integers(1, 3))


@given(graph_cases)
@settings(max_examples=40, deadline=None)
def test_maximum_principle(case):
    seed, n, extra, n_seeds = case
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n, extra_edges=extra)
    bc = random_boundary(rng, n, n_seeds)
    for method in METHODS:
        t = hp.solve_dirichlet(g, bc, hp.SolverConfig(method=method))
        assert t.values.min() >= bc.values.min() - 1e-8
        assert t.values.max() <= bc.values.max() + 1e-8


@given(graph_cases, st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=30, deadline=None)
def test_affinity_in_boundary_values(case, alpha, beta):
    seed, n, extra, n_seeds = case
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n, extra_edges=extra)
    bc = random_boundary(rng, n, n_seeds)
    cfg = hp.SolverConfig(tolerance=1e-11)
    base = hp.solve_dirichlet(g, bc, cfg).values
    scaled_bc = hp.BoundaryCondition(bc.seeds, alpha * bc.values + beta)
    scaled = hp.solve_dirichlet(g, scaled_bc, cfg).values
    np.testing.assert_allclose(scaled, alpha * base + beta, atol=1e-7)


@given(graph_cases)
@settings(max_examples=30, deadline=None)
def test_one_minus_boundary_flips_solution(case):
    seed, n, extra, n_seeds = case
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n, extra_edges=extra)
    seeds = np.sort(rng.choice(n, size=n_seeds, replace=False))
    values = rng.uniform(0, 1, size=n_seeds)
    cfg = hp.SolverConfig(tolerance=1e-11)
    t = hp.solve_dirichlet(g, hp.BoundaryCondition(seeds, values), cfg).values
    flipped = hp.solve_dirichlet(g, hp.BoundaryCondition(seeds, 1 - values), cfg).values
    np.testing.assert_allclose(flipped, 1 - t, atol=1e-8)


@given(graph_cases)
@settings(max_examples=30, deadline=None)
def test_backend_agreement(case):
    seed, n, extra, n_seeds = case
    rng = np.random.default_rng(seed)
    g = random_connected_graph(rng, n, extra_edges=extra)
    bc = random_boundary(rng, n, n_seeds)
    tol = 1e-9
    fp = hp.solve_dirichlet(g, bc, hp.SolverConfig(method=hp.FIXED_POINT, tolerance=tol))
    gr = hp.solve_dirichlet(g, bc, hp.SolverConfig(method=hp.GROUNDED, tolerance=tol))
    assert np.max(np.abs(fp.values - gr.values)) <= 10 * tol


@pytest.mark.parametrize("method", METHODS)
def test_idempotent_at_equilibrium(method):
    rng = np.random.default_rng(11)
    g = random_connected_graph(rng, 12, extra_edges=8)
    bc = random_boundary(rng, 12, 3)
    cfg = hp.SolverConfig(method=method)
    t = hp.solve_dirichlet(g, bc, cfg)
    again = hp.solve_dirichlet(g, bc, cfg, initial=t.values)
    assert again.iterations <= 1


@pytest.mark.parametrize("method", METHODS)
def test_single_worker_bitwise_reproducible(method):
    rng = np.random.default_rng(21)
    g = random_connected_graph(rng, 20, extra_edges=15)
    bc = random_boundary(rng, 20, 4)
    cfg = hp.SolverConfig(method=method)
    a = hp.solve_dirichlet(g, bc, cfg)
    b = hp.solve_dirichlet(g, bc, cfg)
    assert np.array_equal(a.values, b.values)
    assert a.iterations == b.iterations
