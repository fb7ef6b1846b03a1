import math

import numpy as np
import pytest
import sympy

import config
from src.digraph import Digraph, add_isolated_vertices, disjoint_union, relabel
from src.errors import DomainError, InputError, NumericalError
from src.families import directed_cycle, directed_path, path_edges, symmetric_digraph
from src.spectra import (AlphaMatrix, adjacency_stack, alpha_matrix, b_alpha_matrix,
                         expected_frobenius_squared, graph_energy, laplacian, matrix_for,
                         matrix_trace_norm, singular_value_stack, singular_values, subadditivity_check,
                         symmetric_eigensystem, symmetric_eigenvalues, trace_norm, trace_norm_stack,
                         trace_norms)


def f(alpha):
    return math.sqrt(2 * alpha * alpha - 2 * alpha + 1)


def random_digraph(rng, n, p=0.4):
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return Digraph(n, arcs)


def test_alpha_matrix_entries(p3):
    M = alpha_matrix(p3, 0.3).entries
    expected = np.array([[0.3, 0.7, 0.0],
                         [0.0, 0.3, 0.7],
                         [0.0, 0.0, 0.0]])
    np.testing.assert_allclose(M, expected, rtol=0, atol=1e-15)


def test_alpha_matrix_is_read_only(p3):
    M = alpha_matrix(p3, 0.0)
    with pytest.raises(ValueError):
        M.entries[0, 0] = 5.0


def test_alpha_outside_range(p3):
    with pytest.raises(DomainError):
        alpha_matrix(p3, 1.0)


@pytest.mark.parametrize("alpha", [k / 20 for k in range(20)])
def test_single_arc_singular_values(p2, alpha):
    spectrum = singular_values(alpha_matrix(p2, alpha))
    np.testing.assert_allclose(spectrum.values, [f(alpha), 0.0], atol=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.3, 0.5, 0.8])
def test_arc_increment_matrix_rank_one(alpha):
    values = singular_values(b_alpha_matrix(4, alpha)).values
    np.testing.assert_allclose(values, [f(alpha), 0.0, 0.0, 0.0], atol=1e-12)


def test_arc_increment_is_difference_of_alpha_matrices():
    D = Digraph(3, [(1, 0), (1, 2)])
    alpha = 0.4
    difference = alpha_matrix(D, alpha).entries - alpha_matrix(Digraph(3, [(1, 2)]), alpha).entries
    np.testing.assert_allclose(difference, b_alpha_matrix(3, alpha).entries)


@pytest.mark.parametrize("n", range(2, 13))
def test_directed_path_trace_norm(n):
    assert trace_norm(directed_path(n), 0.0) == pytest.approx(n - 1, abs=1e-9)


@pytest.mark.parametrize("n", range(3, 13))
def test_directed_cycle_trace_norm(n):
    assert trace_norm(directed_cycle(n), 0.0) == pytest.approx(n, abs=1e-9)


def test_out_star_trace_norm(out_star):
    assert trace_norm(out_star, 0.0) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_empty_digraphs_have_zero_norm():
    assert trace_norm(Digraph(0, []), 0.3) == 0.0
    assert trace_norm(Digraph(4, []), 0.7) == 0.0


def test_cycle_spectrum_multiplicities(c3):
    spectrum = singular_values(alpha_matrix(c3, 0.0))
    assert [(round(v, 12), m) for v, m in spectrum.multiplicities()] == [(1.0, 3)]


def test_frobenius_identity():
    rng = np.random.default_rng(7)
    for _ in range(200):
        D = random_digraph(rng, int(rng.integers(1, 7)))
        alpha = float(rng.integers(0, 10)) / 10
        spectrum = singular_values(alpha_matrix(D, alpha))
        expected = expected_frobenius_squared(D, alpha)
        assert spectrum.frobenius_squared == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_permutation_invariance():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(2, 7))
        D = random_digraph(rng, n)
        perm = rng.permutation(n).tolist()
        alpha = float(rng.integers(0, 10)) / 10
        assert trace_norm(relabel(D, perm), alpha) == pytest.approx(trace_norm(D, alpha), abs=1e-10)


def test_disjoint_union_additivity():
    rng = np.random.default_rng(3)
    for _ in range(100):
        D1 = random_digraph(rng, int(rng.integers(1, 5)))
        D2 = random_digraph(rng, int(rng.integers(1, 5)))
        alpha = float(rng.integers(0, 10)) / 10
        total = trace_norm(D1, alpha) + trace_norm(D2, alpha)
        assert trace_norm(disjoint_union(D1, D2), alpha) == pytest.approx(total, abs=1e-9)


def test_isolated_vertices_do_not_change_norm(c3):
    assert trace_norm(add_isolated_vertices(c3, 2), 0.4) == pytest.approx(trace_norm(c3, 0.4), abs=1e-12)


def test_subadditivity_on_random_pairs():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        M1 = rng.normal(size=(n, n))
        M2 = rng.normal(size=(n, n))
        assert subadditivity_check(M1, M2)


def test_subadditivity_on_bounded_four_by_four_pairs():
    rng = np.random.default_rng(77)
    for _ in range(1000):
        M1 = rng.uniform(-1.0, 1.0, size=(4, 4))
        M2 = rng.uniform(-1.0, 1.0, size=(4, 4))
        assert subadditivity_check(M1, M2)


def test_subadditivity_shape_mismatch():
    with pytest.raises(InputError):
        subadditivity_check(np.eye(2), np.eye(3))


def test_eigensystem_reconstructs_matrix():
    rng = np.random.default_rng(5)
    for n in range(1, 8):
        A = rng.normal(size=(n, n))
        M = A + A.T
        values, vectors = symmetric_eigensystem(M)
        assert list(values) == sorted(values, reverse=True)
        np.testing.assert_allclose(vectors @ np.diag(values) @ vectors.T, M, atol=1e-10)
        np.testing.assert_allclose(vectors.T @ vectors, np.eye(n), atol=1e-12)


def test_eigenvalues_of_small_symmetric_matrix():
    np.testing.assert_allclose(symmetric_eigenvalues([[2.0, 1.0], [1.0, 2.0]]), [3.0, 1.0], atol=1e-14)


def test_non_symmetric_input_rejected():
    with pytest.raises(DomainError):
        symmetric_eigenvalues([[0.0, 1.0], [0.0, 0.0]])


def test_non_square_input_rejected():
    with pytest.raises(InputError):
        singular_values(np.zeros((2, 3)))


def test_non_convergence_raises(monkeypatch):
    monkeypatch.setattr(config, 'MAX_SWEEPS', 0)
    with pytest.raises(NumericalError):
        symmetric_eigenvalues([[1.0, 2.0], [2.0, 1.0]])


def test_stack_results_do_not_depend_on_batch():
    rng = np.random.default_rng(17)
    tails = rng.integers(0, 5, size=(6, 4))
    heads = (tails + rng.integers(1, 5, size=(6, 4))) % 5
    adjacency = adjacency_stack(5, tails, heads)
    together = trace_norm_stack(adjacency, 0.3)
    alone = np.array([trace_norm_stack(adjacency[i:i + 1], 0.3)[0] for i in range(6)])
    np.testing.assert_allclose(together, alone, rtol=0, atol=1e-14)


def test_trace_norms_groups_orders(p3, c3, out_star):
    digraphs = [p3, directed_cycle(5), out_star, c3, Digraph(0, [])]
    batched = trace_norms(digraphs, 0.2)
    single = [trace_norm(D, 0.2) for D in digraphs]
    np.testing.assert_allclose(batched, single, atol=1e-12)


def test_matrix_kinds(p2):
    np.testing.assert_array_equal(laplacian(p2).entries, [[1.0, -1.0], [0.0, 0.0]])
    assert matrix_trace_norm(p2, 'laplacian') == pytest.approx(math.sqrt(2))
    assert matrix_trace_norm(p2, 'signless_laplacian') == pytest.approx(math.sqrt(2))
    assert matrix_trace_norm(p2, 'adjacency') == pytest.approx(1.0)
    assert matrix_trace_norm(p2, 'out_degree') == pytest.approx(1.0)
    assert matrix_trace_norm(p2, 'alpha', 0.5) == pytest.approx(math.sqrt(0.5))
    with pytest.raises(InputError):
        matrix_for(p2, 'hermitian')


def test_alpha_matrix_equality():
    assert AlphaMatrix(2, np.eye(2)) == AlphaMatrix(2, np.eye(2), label="other")
    assert AlphaMatrix(2, np.eye(2)) != AlphaMatrix(2, np.zeros((2, 2)))


def test_graph_energy_of_symmetric_path():
    D = symmetric_digraph(path_edges(2), 2)
    assert graph_energy(D) == pytest.approx(2.0)
    for n in range(2, 8):
        D = symmetric_digraph(path_edges(n), n)
        assert graph_energy(D) == pytest.approx(trace_norm(D, 0.0), abs=1e-10)


def test_graph_energy_needs_symmetric_digraph(p3):
    with pytest.raises(InputError):
        graph_energy(p3)


def _oracle_squares(rational_rows):
    """Exact eigenvalues of M M^T via sympy real roots, as floats, descending"""
    M = sympy.Matrix(rational_rows)
    gram = M * M.T
    poly = sympy.Poly(gram.charpoly(sympy.Symbol('x')).as_expr(), sympy.Symbol('x'))
    roots = [float(r.evalf(30)) for r in poly.real_roots()]
    return sorted(roots, reverse=True)


def _oracle_cases(count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 5))
        alpha = sympy.Rational(int(rng.integers(0, 10)), 10)
        choices = [sympy.Integer(0), 1 - alpha] + [alpha * k for k in range(1, 4)]
        rows = [[choices[int(rng.integers(0, len(choices)))] for _ in range(n)] for _ in range(n)]
        yield rows


def _check_against_oracle(rows):
    floats = np.array([[float(x) for x in row] for row in rows])
    ours = singular_value_stack(floats[None, :, :])[0]
    exact = np.sqrt(np.clip(_oracle_squares(rows), 0.0, None))
    assert len(exact) == len(ours)
    np.testing.assert_allclose(ours, exact, rtol=0, atol=1e-8)


def test_singular_values_match_exact_roots():
    for rows in _oracle_cases(100, seed=1):
        _check_against_oracle(rows)


@pytest.mark.slow
def test_singular_values_match_exact_roots_thousand():
    for rows in _oracle_cases(1000, seed=2):
        _check_against_oracle(rows)
