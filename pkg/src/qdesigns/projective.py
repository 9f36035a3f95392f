"""Complex projective designs: Welch bounds, SIC and MUB families.

A weighted state set ``{(w_i, |psi_i>)}`` is a projective t-design when the
Welch sum ``sum_{ij} w_i w_j |<psi_i|psi_j>|^(2t)`` attains its lower bound
``W^2 / binom(d+t-1, t)`` with ``W = sum_i w_i``.  Saturation of the bound
is equivalent to the weighted average of ``(|psi><psi|)^{tensor t}``
matching the Haar average over pure states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .gates import CNOT_01, CNOT_10, HADAMARD, PHASE_S, weyl_operators
from .linalg import DEFAULT_TOL, is_unitary

MERGE_OVERLAP_TOL = 1e-10
_NONZERO_TOL = 1e-8


@dataclass(frozen=True)
class WeightedStateSet:
    """Pure states with positive weights on a fixed dimension.

    ``states`` has one state per row; ``weights`` aligns with the rows.
    """

    dim: int
    states: np.ndarray
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        states = np.atleast_2d(np.asarray(self.states, dtype=complex))
        object.__setattr__(self, "states", states)
        if self.weights is None:
            w = np.ones(states.shape[0])
        else:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
        object.__setattr__(self, "weights", w)
        if states.shape[1] != self.dim:
            raise ValueError(
                f"states of length {states.shape[1]} do not live in dimension {self.dim}")
        if w.shape[0] != states.shape[0]:
            raise ValueError(
                f"{w.shape[0]} weights for {states.shape[0]} states")

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def validate(self, tol: float = 1e-12) -> None:
        """Check unit norms and positive weights, raising on violation."""
        norms = np.linalg.norm(self.states, axis=1)
        if np.max(np.abs(norms - 1.0)) > tol:
            raise ValueError(f"state norms deviate from 1 by {np.max(np.abs(norms - 1.0)):.3e}")
        if np.any(self.weights <= 0):
            raise ValueError("state weights must be strictly positive")


def phase_canonical_state(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first non-negligible entry is real positive."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    for z in v:
        if abs(z) > _NONZERO_TOL:
            if z.imag == 0.0 and z.real > 0.0:
                return v
            return v * (np.conj(z) / abs(z))
    raise ValueError("cannot phase-canonicalize the zero vector")


def merge_states(states: np.ndarray, weights: np.ndarray,
                 overlap_tol: float = MERGE_OVERLAP_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Merge states equal up to global phase, summing their weights.

    Two states are considered equal when ``|<a|b>|^2 >= 1 - overlap_tol``.
    Grouping is done by a rounded canonical-phase key first, then the group
    representatives are compared pairwise, so large orbits stay cheap.
    """
    states = np.atleast_2d(np.asarray(states, dtype=complex))
    weights = np.asarray(weights, dtype=float).reshape(-1)
    groups: dict[bytes, int] = {}
    reps: list[np.ndarray] = []
    sums: list[float] = []
    for v, w in zip(states, weights):
        c = phase_canonical_state(v)
        key = np.round(c, 10).tobytes()
        idx = groups.get(key)
        if idx is None:
            groups[key] = len(reps)
            reps.append(c)
            sums.append(float(w))
        else:
            sums[idx] += float(w)
    # second pass: merge representatives that hashed apart but coincide
    kept: list[int] = []
    for i in range(len(reps)):
        for j in kept:
            if abs(np.vdot(reps[j], reps[i])) ** 2 >= (1.0 - overlap_tol) * \
                    (np.vdot(reps[i], reps[i]).real * np.vdot(reps[j], reps[j]).real):
                sums[j] += sums[i]
                break
        else:
            kept.append(i)
    return np.array([reps[i] for i in kept]), np.array([sums[i] for i in kept])


def welch_sum(sset: WeightedStateSet, t: int) -> float:
    """Weighted Welch sum sum_{ij} w_i w_j |<psi_i|psi_j>|^(2t)."""
    if t < 1:
        raise ValueError(f"design order t={t} must be >= 1")
    v = sset.states
    g2 = np.abs(v.conj() @ v.T) ** 2
    w = sset.weights
    return float(np.einsum("i,ij,j->", w, g2**t, w))


def welch_bound(dim: int, total_weight: float, t: int) -> float:
    """Welch lower bound W^2 / binom(d+t-1, t)."""
    if t < 1:
        raise ValueError(f"design order t={t} must be >= 1")
    return total_weight**2 / math.comb(dim + t - 1, t)


def is_projective_design(sset: WeightedStateSet, t: int, tol: float = DEFAULT_TOL) -> bool:
    """Whether the Welch sum saturates its bound to relative tolerance ``tol``."""
    bound = welch_bound(sset.dim, sset.total_weight, t)
    return welch_sum(sset, t) - bound <= tol * bound


def sic_fiducial_d3(theta: float) -> np.ndarray:
    """One-parameter family of qutrit SIC fiducials.

    ``sin(theta) * (0, 1, -1)/sqrt(2) + cos(theta) * (2, -1, -1)/sqrt(6)``;
    every member generates a SIC-POVM under the Weyl-Heisenberg orbit.
    """
    a = np.array([0.0, 1.0, -1.0], dtype=complex) / np.sqrt(2.0)
    b = np.array([2.0, -1.0, -1.0], dtype=complex) / np.sqrt(6.0)
    return np.sin(theta) * a + np.cos(theta) * b


def sic_fiducial_d2() -> np.ndarray:
    """Qubit SIC fiducial with Bloch vector (1, 1, 1)/sqrt(3).

    The polar angle is the tetrahedral angle (cos theta = 1/sqrt(3)); the
    azimuth pi/4 makes the Weyl-Heisenberg orbit close on the regular
    tetrahedron.
    """
    ct = 1.0 / np.sqrt(3.0)
    half = np.arccos(ct) / 2.0
    return np.array([np.cos(half), np.exp(1j * np.pi / 4) * np.sin(half)], dtype=complex)


def wh_orbit(fiducial: np.ndarray) -> WeightedStateSet:
    """Weyl-Heisenberg orbit {X^a Z^b |psi>} with duplicates merged."""
    v = np.asarray(fiducial, dtype=complex).reshape(-1)
    d = v.size
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("fiducial state must be normalized")
    orbit = np.array([op @ v for op in weyl_operators(d)])
    states, weights = merge_states(orbit, np.ones(len(orbit)))
    return WeightedStateSet(d, states, weights)


def octahedron_states() -> WeightedStateSet:
    """Eigenstates of the three Pauli operators (a qubit 3-design)."""
    s = 1.0 / np.sqrt(2.0)
    states = np.array([
        [1, 0], [0, 1],
        [s, s], [s, -s],
        [s, 1j * s], [s, -1j * s],
    ], dtype=complex)
    return WeightedStateSet(2, states)


def _mub_prime(d: int) -> list[np.ndarray]:
    # computational basis plus the d quadratic Fourier bases of a prime d
    omega = np.exp(2j * np.pi / d)
    bases = [np.eye(d, dtype=complex)]
    a = np.arange(d)
    for k in range(d):
        b = np.empty((d, d), dtype=complex)
        for m in range(d):
            b[:, m] = omega ** ((k * a * a + m * a) % d)
        bases.append(b / np.sqrt(d))
    return bases


def mub_prep_unitaries() -> list[np.ndarray]:
    """Five two-qubit circuit unitaries whose columns give the d=4 MUB.

    ``U0 = I``, ``U1 = H (x) H``, ``U2 = (S (x) S) U1``, and ``U3``/``U4``
    append the two CNOT orderings to ``U2``.
    """
    u0 = np.eye(4, dtype=complex)
    u1 = np.kron(HADAMARD, HADAMARD)
    u2 = np.kron(PHASE_S, PHASE_S) @ u1
    u3 = CNOT_10 @ CNOT_01 @ u2
    u4 = CNOT_01 @ CNOT_10 @ u2
    return [u0, u1, u2, u3, u4]


def mub_family(d: int) -> list[np.ndarray]:
    """A complete set of d+1 mutually unbiased bases for d in {2, 3, 4}.

    Each basis is returned as a unitary matrix whose columns are the basis
    states.  For d = 4 the bases are produced by the fixed two-qubit
    preparation circuits of :func:`mub_prep_unitaries`.
    """
    if d == 2:
        s = 1.0 / np.sqrt(2.0)
        return [
            np.eye(2, dtype=complex),
            np.array([[s, s], [s, -s]], dtype=complex),
            np.array([[s, s], [1j * s, -1j * s]], dtype=complex),
        ]
    if d == 3:
        return _mub_prime(3)
    if d == 4:
        return mub_prep_unitaries()
    raise ValueError(f"complete MUB family not provided for d={d}; supported d: 2, 3, 4")


def states_of_bases(bases: list[np.ndarray]) -> WeightedStateSet:
    """Flatten a list of basis matrices into a unit-weight state set."""
    mats = [np.asarray(b, dtype=complex) for b in bases]
    d = mats[0].shape[0]
    if any(m.shape != (d, d) for m in mats):
        raise ValueError("all bases must be square matrices of equal dimension")
    states = np.vstack([m.T for m in mats])
    return WeightedStateSet(d, states)


_GOLDEN_AMPLITUDES = None


def _iso_amplitudes() -> np.ndarray:
    global _GOLDEN_AMPLITUDES
    if _GOLDEN_AMPLITUDES is None:
        s5 = np.sqrt(5.0)
        _GOLDEN_AMPLITUDES = np.array([
            0.5 * np.sqrt(1 + 1 / s5 + np.sqrt(10 + 2 * s5) / 5),
            0.5 * np.sqrt(1 - 1 / s5 + np.sqrt(10 - 2 * s5) / 5),
            0.5 * np.sqrt(1 + 1 / s5 - np.sqrt(10 + 2 * s5) / 5),
            0.5 * np.sqrt(1 - 1 / s5 - np.sqrt(10 - 2 * s5) / 5),
        ])
    return _GOLDEN_AMPLITUDES


def isocoherent_mub() -> list[np.ndarray]:
    """A complete set of five isocoherent MUB in dimension 4.

    Every state of every basis has computational-basis amplitudes equal to
    the same four values ``p0 > p1 > p2 > p3`` up to order, with
    ``sum p_i^2 = 1`` and ``sum p_i^4 = 2/5``.  Phases are integer
    multiples of the golden angles ``arccos((+-1 +- sqrt(5))/4)``.
    """
    p0, p1, p2, p3 = _iso_amplitudes()
    amp = np.array([
        [p3, p2, p1, p0],
        [p0, p3, p2, p1],
        [p2, p1, p0, p3],
        [p1, p0, p3, p2],
    ])
    s5 = np.sqrt(5.0)
    tpp = np.arccos((1 + s5) / 4)
    tpm = np.arccos((1 - s5) / 4)
    tmp = np.arccos((-1 + s5) / 4)
    tmm = np.arccos((-1 - s5) / 4)
    pi = np.pi
    phases = [
        [[0, 0, 0, 0], [0, 0, 0, pi], [0, 0, pi, 0], [0, pi, pi, 0]],
        [[0, 0, 0, 0], [-tmm, -tmm, -tmm, tpp], [tmp, tmp, -tpm, tmp], [-tmp, tpm, tpm, -tmp]],
        [[0, 0, 0, 0], [tmm, tmm, tmm, -tpp], [-tmp, -tmp, tpm, -tmp], [tmp, -tpm, -tpm, tmp]],
        [[0, 0, 0, 0], [-tmp, -tmp, -tmp, tpm], [-tmm, -tmm, tpp, -tmm], [tmm, -tpp, -tpp, tmm]],
        [[0, 0, 0, 0], [tmp, tmp, tmp, -tpm], [tmm, tmm, -tpp, tmm], [-tmm, tpp, tpp, -tmm]],
    ]
    return [amp * np.exp(1j * np.array(ph)) for ph in phases]


def isocoherence_cost(u: np.ndarray, bases: list[np.ndarray] | None = None) -> float:
    """L1 mismatch between rotated-basis amplitudes and a shared profile.

    Applies ``u`` to every state of the given bases (default: the standard
    d=4 MUB family), takes computational-basis probability vectors, sorts
    each in descending order (the optimal per-state permutation for L1
    matching against a sorted target) and scores against the componentwise
    median profile.  The median is the unconstrained L1 minimizer; it sums
    to 1 whenever the cost vanishes, and is a documented heuristic
    otherwise.  Zero cost certifies an isocoherent family.
    """
    u = np.asarray(u, dtype=complex)
    if bases is None:
        bases = mub_family(4)
    d = bases[0].shape[0]
    if u.shape != (d, d):
        raise ValueError(f"rotation shape {u.shape} does not match basis dimension {d}")
    if not is_unitary(u):
        raise ValueError("rotation must be unitary")
    rotated = states_of_bases([u @ b for b in bases])
    probs = np.abs(rotated.states) ** 2
    profile = -np.sort(-probs, axis=1)
    target = np.median(profile, axis=0)
    return float(np.sum(np.abs(profile - target)))


def state_reconstruct(sset: WeightedStateSet, probs) -> np.ndarray:
    """Linear-inversion state estimate from Born probabilities on a 2-design.

    Implements ``rho = d(d+1) * sum_i w_i p_i |psi_i><psi_i| / W - I`` with
    ``p_i = Tr(rho |psi_i><psi_i|)``; exact whenever the set is a weighted
    projective 2-design and the probabilities are exact.
    """
    p = np.asarray(probs, dtype=float).reshape(-1)
    if p.shape[0] != len(sset):
        raise ValueError(f"{p.shape[0]} probabilities for {len(sset)} states")
    d = sset.dim
    v = sset.states
    acc = (v.T * (sset.weights * p)) @ v.conj()
    return d * (d + 1) * acc / sset.total_weight - np.eye(d, dtype=complex)
