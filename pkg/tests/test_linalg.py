import numpy as np
import pytest

from qdesigns.linalg import (
    dagger,
    hs_inner,
    hs_norm,
    is_hermitian,
    is_unitary,
    min_eigenvalue,
    partial_trace,
    permutation_operator,
    permute_subsystems,
    require_unitary,
    unvec_row,
    vec_row,
)
from qdesigns.random_channels import haar_unitary, make_rng


def test_partial_trace_bell_state():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    reduced = partial_trace(rho, [2, 2], [0])
    assert np.allclose(reduced, np.eye(2) / 2)


def test_partial_trace_factorized():
    rng = make_rng(0)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3], [0]), a * np.trace(b))
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3], [1]), b * np.trace(a))


def test_partial_trace_keep_order():
    rng = make_rng(1)
    m = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    # keeping all factors in order returns the matrix itself
    assert np.allclose(partial_trace(m, [2, 4], [0, 1]), m)


def test_reduced_haar_state_is_positive():
    rng = make_rng(2)
    for _ in range(20):
        u = haar_unitary(4, rng)
        state = np.zeros(4, dtype=complex)
        state[0] = 1.0
        rho = partial_trace(np.outer(u @ state, (u @ state).conj()), [2, 2], [0])
        assert abs(np.trace(rho) - 1) < 1e-12
        assert min_eigenvalue(rho) > -1e-12


def test_permute_subsystems_swap():
    rng = make_rng(3)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    swapped = permute_subsystems(np.kron(a, b), [2, 3], [1, 0])
    assert np.allclose(swapped, np.kron(b, a))


def test_permute_subsystems_composition():
    rng = make_rng(4)
    m = rng.standard_normal((8, 8))
    once = permute_subsystems(permute_subsystems(m, [2, 2, 2], [1, 2, 0]), [2, 2, 2], [1, 2, 0])
    third = permute_subsystems(m, [2, 2, 2], [2, 0, 1])
    assert np.allclose(once, third)


def test_permutation_operator_action():
    # P[x, y] = prod delta(x_n, y_{perm(n)}) permutes tensor factors of kets
    d = 3
    perm = (1, 0)
    p = permutation_operator(d, perm)
    rng = make_rng(5)
    u = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    assert np.allclose(p @ np.kron(u, v), np.kron(v, u))
    assert np.allclose(p @ p, np.eye(d * d))


def test_permutation_operator_three_cycle_matches_subsystem_permute():
    d = 2
    perm = (1, 2, 0)
    p = permutation_operator(d, perm)
    rng = make_rng(6)
    vecs = [rng.standard_normal(d) + 1j * rng.standard_normal(d) for _ in range(3)]
    lhs = p @ np.kron(np.kron(vecs[0], vecs[1]), vecs[2])
    rhs = np.kron(np.kron(vecs[perm[0]], vecs[perm[1]]), vecs[perm[2]])
    assert np.allclose(lhs, rhs)


def test_vec_unvec_round_trip():
    rng = make_rng(7)
    m = rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
    assert np.array_equal(unvec_row(vec_row(m), 3, 5), m)
    # row-major order: first row first
    assert np.array_equal(vec_row(m)[:5], m[0])


def test_hs_inner_and_norm():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    assert hs_inner(a, a) == pytest.approx(hs_norm(a) ** 2)
    assert hs_norm(a) == pytest.approx(np.sqrt(30))


def test_hermitian_and_unitary_predicates():
    assert is_hermitian(np.array([[1, 1j], [-1j, 0]]))
    assert not is_hermitian(np.array([[0, 1], [0, 0]]))
    assert is_unitary(np.eye(3))
    assert not is_unitary(np.diag([1.0, 2.0]))
    with pytest.raises(ValueError):
        require_unitary(np.diag([1.0, 2.0]))


def test_dagger():
    m = np.array([[1 + 1j, 2], [3, 4 - 1j]])
    assert np.array_equal(dagger(m), m.conj().T)
