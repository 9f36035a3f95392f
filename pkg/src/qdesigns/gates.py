"""Fixed gate matrices shared across modules.

Two-qubit gates use the row-major composite index convention with qubit 0
as the leftmost factor.  ``CNOT_10`` denotes control on qubit 0, target on
qubit 1; ``CNOT_01`` the reverse.
"""

import numpy as np

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
PHASE_S = np.array([[1, 0], [0, 1j]], dtype=complex)

# control qubit 0, target qubit 1
CNOT_10 = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]], dtype=complex)

# control qubit 1, target qubit 0
CNOT_01 = np.array(
    [[1, 0, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0],
     [0, 1, 0, 0]], dtype=complex)

SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]], dtype=complex)


def shift_operator(d: int) -> np.ndarray:
    """Cyclic shift X with X|a> = |a+1 mod d>."""
    x = np.zeros((d, d), dtype=complex)
    for a in range(d):
        x[(a + 1) % d, a] = 1.0
    return x


def clock_operator(d: int) -> np.ndarray:
    """Diagonal clock Z with Z|a> = exp(2 pi i a / d)|a>."""
    omega = np.exp(2j * np.pi / d)
    return np.diag(omega ** np.arange(d))


def weyl_operators(d: int) -> list[np.ndarray]:
    """The d^2 displacement operators X^a Z^b, ordered by (a, b) row-major."""
    x = shift_operator(d)
    z = clock_operator(d)
    ops = []
    xa = np.eye(d, dtype=complex)
    for _ in range(d):
        zb = np.eye(d, dtype=complex)
        for _ in range(d):
            ops.append(xa @ zb)
            zb = zb @ z
        xa = xa @ x
    return ops
