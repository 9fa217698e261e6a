import numpy as np
import pytest

from rtsl.cocycle import (
    atom_transfer_matrix,
    cocycle_from_char_poly,
    cocycle_product,
    furstenberg_witness,
    invariant_direction_check,
    solve_recursion,
    transfer_matrix,
)
from rtsl.linalg import sl2_norm
from rtsl.randomness import BranchingDistribution, shift


def _random_omega(rng, length):
    return rng.integers(2, 4, size=length).astype(float)


def test_atom_matrix_entries_and_det():
    A = atom_transfer_matrix(4.0, 3.0)
    np.testing.assert_allclose(A, [[1.5, -0.5], [2.0, 0.0]])
    assert np.linalg.det(A) == pytest.approx(1.0)


def test_transfer_matrix_uses_first_window_entry():
    # the step factor at site 1 couples through omega_1, not omega_0
    A = transfer_matrix(np.array([9.0, 4.0, 25.0]), 2.0)
    np.testing.assert_allclose(A, [[1.0, -0.5], [2.0, 0.0]])


def test_recursion_constant_two_at_band_edge():
    # omega == 2, E = 2*sqrt(2) is the band edge: u_n = (n+1) * u_0
    u = solve_recursion(np.full(12, 2.0), 2.0 * np.sqrt(2.0), 8)
    np.testing.assert_allclose(u, np.arange(1, 11), atol=1e-10)


def test_recursion_satisfies_three_term_identity():
    rng = np.random.default_rng(6)
    omega = _random_omega(rng, 20)
    E = 1.3
    u = solve_recursion(omega, E, 15)
    roots = np.sqrt(omega)
    for n in range(1, 15):
        lhs = roots[n] * u[n + 1] + roots[n - 1] * u[n - 1]
        assert lhs == pytest.approx(E * u[n], abs=1e-9)


def test_cocycle_matches_brute_force_product():
    rng = np.random.default_rng(3)
    omega = _random_omega(rng, 40)
    E = 1.7
    n = 30
    M = np.eye(2)
    for i in range(1, n + 1):
        M = atom_transfer_matrix(omega[i], E) @ M
    cp = cocycle_product(omega, E, n)
    np.testing.assert_allclose(np.exp(cp.log_norm) * cp.matrix, M, rtol=1e-10)
    assert cp.log_norm == pytest.approx(np.log(sl2_norm(M)), rel=1e-10)
    assert cp.steps == n
    assert cp.reconstructed_det == pytest.approx(1.0, abs=1e-12)


def test_cocycle_propagates_recursion_state():
    # M_n maps (u_1, sqrt(omega_0) u_0) to (u_{n+1}, sqrt(omega_n) u_n)
    rng = np.random.default_rng(14)
    omega = _random_omega(rng, 25)
    E = 0.8
    n = 18
    u = solve_recursion(omega, E, n)
    roots = np.sqrt(omega)
    cp = cocycle_product(omega, E, n)
    v1 = np.array([u[1], roots[0] * u[0]])
    out = np.exp(cp.log_norm) * cp.matrix @ v1
    np.testing.assert_allclose(out, [u[n + 1], roots[n] * u[n]], rtol=1e-9)


def test_cocycle_shift_law():
    rng = np.random.default_rng(7)
    omega = _random_omega(rng, 60)
    E = 1.1
    m, n = 20, 25
    full = cocycle_product(omega, E, m + n)
    left = cocycle_product(shift(omega, n), E, m)
    right = cocycle_product(omega, E, n)
    scale = np.exp(left.log_norm + right.log_norm - full.log_norm)
    np.testing.assert_allclose(scale * (left.matrix @ right.matrix), full.matrix, atol=1e-12)


def test_cocycle_zero_steps_is_identity():
    cp = cocycle_product(np.full(3, 2.0), 1.0, 0)
    np.testing.assert_allclose(cp.matrix, np.eye(2))
    assert cp.log_norm == 0.0


def test_char_poly_route_matches_cocycle():
    rng = np.random.default_rng(12)
    for _ in range(10):
        n = int(rng.integers(1, 26))
        omega = _random_omega(rng, n + 2)
        E = rng.uniform(-3, 3)
        M = cocycle_from_char_poly(omega, E, n)
        cp = cocycle_product(omega, E, n)
        np.testing.assert_allclose(M, np.exp(cp.log_norm) * cp.matrix, rtol=1e-9, atol=1e-12)


def test_char_poly_route_single_step():
    omega = np.array([9.0, 4.0])
    np.testing.assert_allclose(cocycle_from_char_poly(omega, 2.0, 1), [[1.0, -0.5], [2.0, 0.0]])


def test_furstenberg_witness_diagonal_growth():
    P = furstenberg_witness(3.0, 2.0, 1.7, 8)
    assert abs(P[0, 1]) + abs(P[1, 0]) < 1e-12
    # each alternating pair contributes diag(sqrt(2/3), sqrt(3/2))
    assert P[1, 1] == pytest.approx((3.0 / 2.0) ** 4, rel=1e-12)
    assert P[0, 0] == pytest.approx((2.0 / 3.0) ** 4, rel=1e-12)


def test_furstenberg_witness_energy_independent():
    a = furstenberg_witness(3.0, 2.0, 0.5, 6)
    b = furstenberg_witness(3.0, 2.0, 7.0, 6)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_furstenberg_witness_rejects_equal_atoms():
    with pytest.raises(ValueError):
        furstenberg_witness(2.0, 2.0, 1.0, 4)


def test_no_invariant_direction_off_zero_energy():
    dist = BranchingDistribution.uniform((2, 3))
    for E in (0.5, 1.0, 2.0):
        report = invariant_direction_check(dist, E)
        assert not report["span_e1_invariant"]
        assert not report["span_e2_invariant"]
        assert not report["pair_invariant"]
        assert report["common_fixed_directions"] == []


def test_zero_energy_swaps_coordinate_spans():
    dist = BranchingDistribution.uniform((2, 3))
    report = invariant_direction_check(dist, 0.0)
    assert report["pair_invariant"]
    assert report["pair_swapped"]
    assert not report["span_e1_invariant"]


def test_invariant_check_rejects_degenerate():
    with pytest.raises(ValueError):
        invariant_direction_check(BranchingDistribution.point_mass(2), 1.0)
