"""Unitary designs: Pauli and Clifford groups, diagonal-overlap criterion.

A weighted set of unitaries ``{(w_i, U_i)}`` on dimension ``d`` is a
unitary t-design iff the overlap sum

    sum_a sum_{ij} w_i w_j |<a|U_i^dagger U_j|a>|^(2t)

over any orthonormal basis ``{|a>}`` attains the lower bound
``d W^2 / binom(d+t-1, t)``.  Equivalently, every basis-vector orbit
``{U_i |a>}`` must saturate its Welch bound simultaneously, which is how
the sum is evaluated here (orbits are merged first, so large groups with
small orbits stay cheap).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .gates import CNOT_01, CNOT_10, HADAMARD, PAULI_I, PAULI_X, PAULI_Z, PHASE_S
from .linalg import DEFAULT_TOL, is_unitary, kron
from .projective import WeightedStateSet, merge_states, welch_bound, welch_sum

MAX_PAULI_QUBITS = 5
MAX_CLIFFORD_QUBITS = 2
_KEY_DECIMALS = 12
_NONZERO_TOL = 1e-8


@dataclass(frozen=True)
class UnitarySet:
    """Unitaries with weights on a fixed dimension, one element per entry.

    Element order is part of the artifact: generated groups are emitted in
    a deterministic order and serialized as given.
    """

    dim: int
    elements: list[np.ndarray]
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        elems = [np.asarray(u, dtype=complex) for u in self.elements]
        object.__setattr__(self, "elements", elems)
        if self.weights is None:
            w = np.ones(len(elems))
        else:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
        object.__setattr__(self, "weights", w)
        for u in elems:
            if u.shape != (self.dim, self.dim):
                raise ValueError(f"element of shape {u.shape} in dimension {self.dim}")
        if w.shape[0] != len(elems):
            raise ValueError(f"{w.shape[0]} weights for {len(elems)} elements")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        for i, u in enumerate(self.elements):
            if not is_unitary(u, tol):
                raise ValueError(f"element {i} is not unitary within {tol}")
        if np.any(self.weights <= 0):
            raise ValueError("unitary weights must be strictly positive")


def phase_canonical(u: np.ndarray) -> np.ndarray:
    """Fix the global phase: first non-negligible entry (row-major) real positive.

    Idempotent bitwise: an already canonical matrix is returned unchanged.
    """
    u = np.asarray(u, dtype=complex)
    flat = u.reshape(-1)
    for z in flat:
        if abs(z) > _NONZERO_TOL:
            if z.imag == 0.0 and z.real > 0.0:
                return u
            return u * (np.conj(z) / abs(z))
    raise ValueError("cannot phase-canonicalize the zero matrix")


def canonical_key(u: np.ndarray, decimals: int = _KEY_DECIMALS) -> bytes:
    """Hashable key identifying a unitary up to global phase."""
    c = np.round(phase_canonical(u), decimals)
    # avoid distinct keys for +-0.0
    c = c + 0.0
    return c.tobytes()


def pauli_group(n: int) -> UnitarySet:
    """The n-qubit Pauli group with phases, all 4^(n+1) elements.

    Elements are ``i^l * prod_a sigma_x^{j_a} sigma_z^{k_a}``; as a set
    modulo global phase they collapse to 4^n distinct operators.
    """
    if not 1 <= n <= MAX_PAULI_QUBITS:
        raise ValueError(f"pauli_group supports 1..{MAX_PAULI_QUBITS} qubits, got {n}")
    locals_ = []
    for jk in range(4):
        j, k = jk >> 1, jk & 1
        locals_.append(np.linalg.matrix_power(PAULI_X, j) @ np.linalg.matrix_power(PAULI_Z, k))
    words = [np.eye(1, dtype=complex)]
    for _ in range(n):
        words = [np.kron(w, p) for w in words for p in locals_]
    elements = [(1j**l) * w for l in range(4) for w in words]
    return UnitarySet(2**n, elements)


def _clifford_generators(n: int) -> list[np.ndarray]:
    gens = []
    for q in range(n):
        before = [PAULI_I] * q
        after = [PAULI_I] * (n - q - 1)
        gens.append(kron(*before, HADAMARD, *after))
        gens.append(kron(*before, PHASE_S, *after))
    if n == 2:
        gens.append(CNOT_10)
        gens.append(CNOT_01)
    return gens


@lru_cache(maxsize=None)
def clifford_group(n: int) -> UnitarySet:
    """The n-qubit Clifford group modulo global phase, n in {1, 2}.

    Enumerated by breadth-first closure over {H_i, S_i, CNOT_ij} with
    phase-canonical deduplication.  |C_1| = 24, |C_2| = 11520.
    """
    if not 1 <= n <= MAX_CLIFFORD_QUBITS:
        raise ValueError(f"clifford_group supports 1..{MAX_CLIFFORD_QUBITS} qubits, got {n}")
    gens = _clifford_generators(n)
    start = phase_canonical(np.eye(2**n, dtype=complex))
    seen = {canonical_key(start)}
    elements = [start]
    frontier = [start]
    while frontier:
        new_frontier = []
        for u in frontier:
            for g in gens:
                v = phase_canonical(g @ u)
                key = canonical_key(v)
                if key not in seen:
                    seen.add(key)
                    elements.append(v)
                    new_frontier.append(v)
        frontier = new_frontier
    return UnitarySet(2**n, elements)


def orbit_state(uset: UnitarySet, psi: np.ndarray) -> WeightedStateSet:
    """Apply every element to ``psi``; merge phase-duplicates, summing weights."""
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if v.size != uset.dim:
        raise ValueError(f"state of length {v.size} in dimension {uset.dim}")
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("orbit seed state must be normalized")
    orbit = np.array([u @ v for u in uset.elements])
    states, weights = merge_states(orbit, uset.weights)
    return WeightedStateSet(uset.dim, states, weights)


def unitary_design_sum(uset: UnitarySet, t: int) -> float:
    """The diagonal-overlap sum over the computational basis."""
    total = 0.0
    basis = np.eye(uset.dim, dtype=complex)
    for a in range(uset.dim):
        total += welch_sum(orbit_state(uset, basis[:, a]), t)
    return total


def unitary_design_bound(dim: int, total_weight: float, t: int) -> float:
    """Lower bound d W^2 / binom(d+t-1, t) of the diagonal-overlap sum."""
    return dim * welch_bound(dim, total_weight, t)


def unitary_design_residual(uset: UnitarySet, t: int) -> float:
    """Overlap sum minus its lower bound; zero iff a unitary t-design."""
    return unitary_design_sum(uset, t) - unitary_design_bound(uset.dim, uset.total_weight, t)


def is_unitary_design(uset: UnitarySet, t: int, tol: float = DEFAULT_TOL) -> bool:
    bound = unitary_design_bound(uset.dim, uset.total_weight, t)
    return unitary_design_residual(uset, t) <= tol * bound
