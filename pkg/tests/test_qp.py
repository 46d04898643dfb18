from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from conftest import random_er
from mwcycle.generators import generate
from mwcycle.modulus import find_triangles
from mwcycle.oracles import enumerate_cycles, least_distance_modulus, projected_gradient_modulus
from mwcycle.qp import ConstraintMatrix, build_constraint_matrix, solve

TOL = 1e-8


def check_solution(matrix, sol, tol=TOL):
    dense = matrix.toarray()
    assert np.array_equal(sol.rho, matrix.transpose_dot(sol.lam) / 2)
    np.testing.assert_allclose(sol.rho, dense.T @ sol.lam / 2, rtol=1e-13, atol=1e-15)
    assert (sol.lam >= 0).all() and (sol.rho >= 0).all()
    lengths = dense @ sol.rho
    assert sol.max_violation == pytest.approx(np.max(1 - lengths), abs=1e-15)
    assert sol.max_violation <= tol
    assert np.max(np.abs(sol.lam * (lengths - 1))) <= 10 * tol
    gap = abs(sol.lam.sum() - 0.25 * np.sum((dense.T @ sol.lam) ** 2) - sol.rho @ sol.rho)
    assert gap <= 10 * tol
    assert sol.modulus == pytest.approx(sol.rho @ sol.rho, rel=1e-15)


@pytest.mark.parametrize("n", [3, 4, 7, 10])
def test_single_cycle(n):
    sol = solve(ConstraintMatrix([range(n)], n))
    np.testing.assert_allclose(sol.rho, 1 / n, atol=1e-12)
    assert sol.modulus == pytest.approx(1 / n, abs=1e-12)
    assert sol.converged


def test_two_disjoint_triangles():
    matrix = ConstraintMatrix([(0, 1, 2), (3, 4, 5)], 6)
    sol = solve(matrix)
    np.testing.assert_allclose(sol.rho, 1 / 3, atol=1e-12)
    assert sol.modulus == pytest.approx(2 / 3, abs=1e-12)
    check_solution(matrix, sol)


def test_k4_all_cycles_against_references(k4):
    cycles = enumerate_cycles(k4)
    matrix = build_constraint_matrix(cycles, k4)
    sol = solve(matrix)
    rows = [c.edge_ids for c in cycles]
    assert sol.modulus == pytest.approx(projected_gradient_modulus(rows, 6), abs=1e-7)
    assert sol.modulus == pytest.approx(least_distance_modulus(rows, 6)[0], abs=1e-7)
    check_solution(matrix, sol)


def test_matrix_validation_and_dedup():
    m = ConstraintMatrix([(2, 1, 0), (0, 1, 2), (0, 1, 2, 3)], 5)
    assert m.keys == [(0, 1, 2), (0, 1, 2, 3)]
    assert (2, 0, 1) in m and m.row_index((0, 1, 2, 3)) == 1
    with pytest.raises(ValueError):
        ConstraintMatrix([(0, 1)], 3)
    with pytest.raises(ValueError):
        ConstraintMatrix([(0, 1, 7)], 3)
    with pytest.raises(ValueError):
        solve(ConstraintMatrix([], 3))
    with pytest.raises(ValueError):
        solve(ConstraintMatrix([(0, 1, 2)], 3), tolerance=0)


def test_matrix_helpers_match_dense():
    m = ConstraintMatrix([(0, 1, 2), (1, 2, 3, 4), (0, 4, 5)], 6)
    rho = np.arange(6, dtype=float)
    lam = np.array([1.0, 2.0, 3.0])
    dense = m.toarray()
    np.testing.assert_array_equal(m.lengths(rho), dense @ rho)
    np.testing.assert_array_equal(m.transpose_dot(lam), dense.T @ lam)
    assert m.extended([(3, 4, 5), (0, 1, 2)]).keys[-1] == (3, 4, 5)


def test_iteration_limit_flags_non_convergence(k4):
    matrix = build_constraint_matrix(enumerate_cycles(k4), k4)
    sol = solve(matrix, max_iters=1)
    assert not sol.converged and sol.iterations == 1
    assert (sol.rho >= 0).all()


def test_warm_start_maps_rows_by_key(k4):
    cycles = enumerate_cycles(k4)
    first = solve(build_constraint_matrix(cycles[:4], k4))
    bigger = build_constraint_matrix(cycles, k4)
    warm = solve(bigger, warm=first)
    cold = solve(bigger)
    assert abs(warm.modulus - cold.modulus) <= 2 * TOL
    assert warm.iterations <= cold.iterations


def _cycle_sets(seed, count):
    g = random_er(seed, n_range=(5, 8), probs=(0.5, 0.7))
    cycles = enumerate_cycles(g)
    rng = np.random.default_rng(seed)
    if not cycles:
        return g, []
    pick = rng.choice(len(cycles), size=min(count, len(cycles)), replace=False)
    return g, [cycles[i] for i in sorted(pick)]


@given(st.integers(0, 10_000), st.integers(1, 25))
@settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_solution_properties(seed, count):
    g, cycles = _cycle_sets(seed, count)
    if not cycles:
        return
    matrix = build_constraint_matrix(cycles, g)
    sol = solve(matrix)
    assert sol.converged
    check_solution(matrix, sol)
    exact, _ = least_distance_modulus(matrix.keys, g.edge_count)
    assert sol.modulus == pytest.approx(exact, abs=1e-6)
    trace = sol.dual_trace
    assert all(b >= a - 1e-12 * (1 + abs(a)) for a, b in zip(trace, trace[1:]))


@given(st.integers(0, 10_000), st.integers(2, 20))
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_adding_constraints_never_lowers_modulus(seed, count):
    g, cycles = _cycle_sets(seed, count)
    if len(cycles) < 2:
        return
    values = []
    sol = None
    for k in range(1, len(cycles) + 1):
        sol = solve(build_constraint_matrix(cycles[:k], g), warm=sol)
        values.append(sol.modulus)
    assert all(b >= a - 2 * TOL for a, b in zip(values, values[1:]))


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_warm_and_cold_agree(seed):
    g, cycles = _cycle_sets(seed, 30)
    if len(cycles) < 2:
        return
    half = solve(build_constraint_matrix(cycles[: len(cycles) // 2], g))
    full = build_constraint_matrix(cycles, g)
    assert abs(solve(full, warm=half).modulus - solve(full).modulus) <= 2 * TOL


def test_larger_instance_converges():
    g = generate("proximity:60:seed=3")
    tris = find_triangles(g)
    matrix = build_constraint_matrix(tris, g)
    sol = solve(matrix)
    assert sol.converged
    check_solution(matrix, sol)
