"""Channel designs via Choi states and analytic Haar averages.

Choi states use the layout (all outputs)(all inputs): for ``t`` copies of a
channel on dimension ``d`` the matrix acts on ``H_d^{(x)2t}`` with the ``t``
output factors first.  The t-copy Haar average over Stinespring dilations
with a k-dimensional environment is evaluated in closed form with the
Weingarten expansion

    (1/d^t) sum_{s,r in S_t} Wg(s r^{-1}, dk) k^cycles(s) P_out(s) (x) P_in(r)

where ``P(s)`` is the slot-permutation operator with entries
``prod_n delta(x_n, y_{s(n)})``.  The unistochastic variant integrates over
U(d^2) with a maximally mixed environment; there both the environment
output and input indices contract, giving ``d^cycles(s) d^cycles(r)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .gates import CNOT_01, HADAMARD, PAULI_X, PHASE_S, weyl_operators
from .linalg import (
    DEFAULT_TOL,
    dagger,
    hs_norm,
    kron,
    permutation_operator,
    permute_subsystems,
    require_unitary,
    unvec_row,
    vec_row,
)
from .unitary import clifford_group
from .weingarten import (
    compose,
    cycle_count,
    enumerate_symmetric_group,
    invert,
    weingarten,
)

MAX_COPIES = 3
CHOI_DEDUP_TOL = 1e-8


@dataclass(frozen=True)
class QuantumChannel:
    """Completely positive trace-preserving map in Kraus form."""

    dim: int
    kraus: list[np.ndarray]

    def __post_init__(self):
        ops = [np.asarray(k, dtype=complex) for k in self.kraus]
        object.__setattr__(self, "kraus", ops)
        for k in ops:
            if k.shape != (self.dim, self.dim):
                raise ValueError(f"Kraus operator of shape {k.shape} on dimension {self.dim}")
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        out = np.zeros_like(rho)
        for k in self.kraus:
            out += k @ rho @ dagger(k)
        return out

    def completeness_defect(self) -> float:
        acc = sum(dagger(k) @ k for k in self.kraus)
        return float(np.max(np.abs(acc - np.eye(self.dim))))

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        defect = self.completeness_defect()
        if defect > tol:
            raise ValueError(f"Kraus completeness violated by {defect:.3e}")


@dataclass(frozen=True)
class ChoiState:
    """Trace-one positive operator representing ``copies`` channel copies."""

    dim: int
    copies: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        n = self.dim ** (2 * self.copies)
        if m.shape != (n, n):
            raise ValueError(
                f"Choi matrix shape {m.shape}, expected {(n, n)} for "
                f"d={self.dim}, t={self.copies}")

    def validate(self, tol: float = DEFAULT_TOL, psd_tol: float = 1e-9) -> None:
        m = self.matrix
        if np.max(np.abs(m - dagger(m))) > tol:
            raise ValueError("Choi matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > tol:
            raise ValueError(f"Choi trace {np.trace(m):.6f} differs from 1")
        if float(np.linalg.eigvalsh(m)[0]) < -psd_tol:
            raise ValueError("Choi matrix has a significantly negative eigenvalue")


@dataclass(frozen=True)
class WeightedChannelSet:
    """Channels with real weights; signed weights are permitted but flagged."""

    dim: int
    channels: list[QuantumChannel]
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        chans = list(self.channels)
        object.__setattr__(self, "channels", chans)
        if self.weights is None:
            w = np.ones(len(chans))
        else:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
        object.__setattr__(self, "weights", w)
        for c in chans:
            if c.dim != self.dim:
                raise ValueError("channel dimension mismatch inside set")
        if w.shape[0] != len(chans):
            raise ValueError(f"{w.shape[0]} weights for {len(chans)} channels")
        if np.sum(np.abs(w)) == 0.0:
            raise ValueError("channel weights must not all vanish")

    def __len__(self) -> int:
        return len(self.channels)

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    @property
    def has_signed_weights(self) -> bool:
        return bool(np.any(self.weights < 0))


def unitary_channel(v: np.ndarray) -> QuantumChannel:
    v = require_unitary(v)
    return QuantumChannel(v.shape[0], [v])


def maximally_depolarizing(d: int) -> QuantumChannel:
    """The channel rho -> I/d, with Weyl-twirl Kraus operators."""
    return QuantumChannel(d, [w / d for w in weyl_operators(d)])


def choi_of_channel(phi: QuantumChannel, tol: float = DEFAULT_TOL) -> ChoiState:
    """Trace-1 Choi state sigma = (1/d) sum_ab Phi(|a><b|) (x) |a><b|."""
    phi.validate(tol)
    d = phi.dim
    m = np.zeros((d * d, d * d), dtype=complex)
    for k in phi.kraus:
        r = vec_row(k)
        m += np.outer(r, r.conj())
    return ChoiState(d, 1, m / d)


def choi_copies(choi: ChoiState, t: int) -> ChoiState:
    """Choi of ``t`` independent copies, reordered to (outputs)(inputs)."""
    if choi.copies != 1:
        raise ValueError("choi_copies expects a single-copy Choi state")
    if not 1 <= t <= MAX_COPIES:
        raise ValueError(f"copy count t={t} outside supported range 1..{MAX_COPIES}")
    m = choi.matrix
    for _ in range(t - 1):
        m = np.kron(m, choi.matrix)
    # factors of the plain tensor power interleave as out1 in1 out2 in2 ...
    perm = [2 * i for i in range(t)] + [2 * i + 1 for i in range(t)]
    m = permute_subsystems(m, [choi.dim] * 2 * t, perm)
    return ChoiState(choi.dim, t, m)


def choi_tcopy(phi: QuantumChannel, t: int, tol: float = DEFAULT_TOL) -> ChoiState:
    """Choi state of ``Phi^{(x)t}`` in the (outputs)(inputs) layout."""
    return choi_copies(choi_of_channel(phi, tol), t)


@lru_cache(maxsize=None)
def _slot_permutations(d: int, t: int) -> dict[tuple[int, ...], np.ndarray]:
    return {p: permutation_operator(d, p) for p in enumerate_symmetric_group(t)}


def average_choi(d: int, k: float, t: int) -> ChoiState:
    """Haar average of the t-copy Choi over a k-dimensional environment.

    ``k`` may be any real >= 1 with ``dk >= t``; non-integer values realize
    the analytic continuation used by the effective-dimension fit.  For
    t = 1 the average collapses to I/d^2 independently of ``k``.
    """
    if d < 2:
        raise ValueError("system dimension must be at least 2")
    if k < 1:
        raise ValueError(f"environment dimension k={k} must be >= 1")
    if not 1 <= t <= MAX_COPIES:
        raise ValueError(f"copy count t={t} outside supported range 1..{MAX_COPIES}")
    if d * k < t:
        raise ValueError(f"Weingarten domain requires d*k >= t, got {d * k} < {t}")
    if t == 1:
        return ChoiState(d, 1, np.eye(d * d, dtype=complex) / (d * d))
    slots = _slot_permutations(d, t)
    perms = enumerate_symmetric_group(t)
    n = d ** (2 * t)
    m = np.zeros((n, n), dtype=complex)
    for s in perms:
        ks = float(k) ** cycle_count(s)
        for r in perms:
            wg = weingarten(compose(s, invert(r)), d * k)
            m += (wg * ks) * np.kron(slots[s], slots[r])
    return ChoiState(d, t, m / d**t)


def average_choi_unistochastic(d: int, t: int) -> ChoiState:
    """Haar average of the t-copy Choi of unistochastic channels on U(d^2).

    Both environment output and environment input indices contract here,
    one following each slot permutation:

        (1/d^{2t}) sum_{s,r} Wg(s r^{-1}, d^2) d^{cycles(s)} d^{cycles(r)}
                   P_out(s) (x) P_in(r).

    The printed closed form this implements was rederived from the Haar
    integral; it is the unique assignment with unit trace, and it matches
    the exact two-qubit Clifford pushforward at t = 2 and 3.
    """
    if d < 2:
        raise ValueError("system dimension must be at least 2")
    if not 1 <= t <= MAX_COPIES:
        raise ValueError(f"copy count t={t} outside supported range 1..{MAX_COPIES}")
    if d * d < t:
        raise ValueError(f"Weingarten domain requires d^2 >= t, got {d * d} < {t}")
    if t == 1:
        return ChoiState(d, 1, np.eye(d * d, dtype=complex) / (d * d))
    slots = _slot_permutations(d, t)
    perms = enumerate_symmetric_group(t)
    n = d ** (2 * t)
    m = np.zeros((n, n), dtype=complex)
    for s in perms:
        ds = float(d) ** cycle_count(s)
        for r in perms:
            wg = weingarten(compose(s, invert(r)), d * d)
            m += (wg * ds * float(d) ** cycle_count(r)) * np.kron(slots[s], slots[r])
    return ChoiState(d, t, m / d ** (2 * t))


def average_tcopy_choi(cset: WeightedChannelSet, t: int) -> np.ndarray:
    """Weight-normalized average of t-copy Choi matrices of a channel set."""
    acc = np.zeros((cset.dim ** (2 * t),) * 2, dtype=complex)
    for phi, w in zip(cset.channels, cset.weights):
        acc += w * choi_tcopy(phi, t).matrix
    total = cset.total_weight
    if total == 0.0:
        raise ValueError("channel weights sum to zero; cannot normalize")
    return acc / total


def design_distance(cset: WeightedChannelSet, d: int, k: float, t: int) -> float:
    """HS distance between the weighted t-copy average and average_choi."""
    if cset.dim != d:
        raise ValueError(f"channel set dimension {cset.dim} differs from d={d}")
    return hs_norm(average_tcopy_choi(cset, t) - average_choi(d, k, t).matrix)


def unistochastic_design_distance(cset: WeightedChannelSet, d: int, t: int) -> float:
    """HS distance to the unistochastic Haar average."""
    if cset.dim != d:
        raise ValueError(f"channel set dimension {cset.dim} differs from d={d}")
    return hs_norm(average_tcopy_choi(cset, t) - average_choi_unistochastic(d, t).matrix)


def channel_from_stinespring(u: np.ndarray, d: int, k: int, env_index: int = 0
                             ) -> QuantumChannel:
    """Reduce a unitary on system (x) environment to a channel on the system.

    ``Phi(rho) = Tr_E[U (rho (x) |e><e|) U^dagger]`` with the environment as
    the rightmost factor prepared in basis state ``env_index``.
    """
    u = require_unitary(u)
    if u.shape != (d * k, d * k):
        raise ValueError(f"unitary of shape {u.shape} cannot split into d={d}, k={k}")
    if not 0 <= env_index < k:
        raise ValueError(f"environment index {env_index} outside 0..{k - 1}")
    blocks = u.reshape(d, k, d, k)
    ops = [np.array(blocks[:, l, :, env_index]) for l in range(k)]
    return QuantumChannel(d, ops)


def unistochastic_channel(u: np.ndarray, d: int) -> QuantumChannel:
    """Channel Tr_E[U (rho (x) I/d) U^dagger] for a unitary on d^2.

    Uses the d^2 Kraus operators ``U^l_o / sqrt(d)`` over environment output
    l and input o; always unital.
    """
    u = require_unitary(u)
    if u.shape != (d * d, d * d):
        raise ValueError(f"unitary of shape {u.shape} is not on dimension {d * d}")
    blocks = u.reshape(d, d, d, d)  # (sys_out, env_out, sys_in, env_in)
    ops = [np.array(blocks[:, l, :, o]) / np.sqrt(d)
           for l in range(d) for o in range(d)]
    return QuantumChannel(d, ops)


def kraus_from_choi(choi: ChoiState, tol: float = 1e-12) -> QuantumChannel:
    """Extract a Kraus representation by eigendecomposition of a 1-copy Choi."""
    if choi.copies != 1:
        raise ValueError("Kraus extraction expects a single-copy Choi state")
    d = choi.dim
    vals, vecs = np.linalg.eigh(choi.matrix)
    ops = []
    for lam, v in zip(vals, vecs.T):
        if lam > tol:
            ops.append(np.sqrt(d * lam) * unvec_row(v, d, d))
    return QuantumChannel(d, ops)


def _dedup_by_choi(chois: list[np.ndarray], tol: float = CHOI_DEDUP_TOL
                   ) -> tuple[list[int], list[int]]:
    """Group Choi matrices by Frobenius equality.

    Returns (representative index per input, first-occurrence order of
    representatives).  Hash buckets on rounded entries keep this linear; the
    bucket representatives are then cross-checked pairwise.
    """
    reps: list[int] = []
    rep_of: list[int] = []
    buckets: dict[bytes, list[int]] = {}
    for i, c in enumerate(chois):
        key = (np.round(c, 9) + 0.0).tobytes()
        assigned = None
        for j in buckets.get(key, []):
            if hs_norm(c - chois[j]) <= tol:
                assigned = j
                break
        if assigned is None:
            # fall back to comparing against all existing representatives,
            # covering values that straddle the rounding grid
            for j in reps:
                if hs_norm(c - chois[j]) <= tol:
                    assigned = j
                    break
        if assigned is None:
            assigned = i
            reps.append(i)
        buckets.setdefault(key, []).append(assigned)
        rep_of.append(assigned)
    return rep_of, reps


def clifford_induced_channels(n_total: int = 2, n_sys: int = 1) -> WeightedChannelSet:
    """Partial-trace pushforward of the two-qubit Clifford group.

    Every element of C_2 is reduced to a qubit channel with a one-qubit
    environment in |0>; duplicates are merged by Choi equality.  The result
    is 48 channels: 24 unitary (multiplicity 96) and 24 of Kraus rank 2
    (multiplicity 384), emitted with weights reduced to the 1 : 4 ratio.
    """
    if (n_total, n_sys) != (2, 1):
        raise ValueError("only the (n_total, n_sys) = (2, 1) reduction is supported")
    group = clifford_group(2)
    channels = [channel_from_stinespring(u, 2, 2) for u in group.elements]
    chois = [choi_of_channel(c).matrix for c in channels]
    rep_of, reps = _dedup_by_choi(chois)
    counts = {r: 0 for r in reps}
    for r in rep_of:
        counts[r] += 1
    mults = np.array([counts[r] for r in reps], dtype=float)
    g = np.gcd.reduce([int(m) for m in mults])
    return WeightedChannelSet(2, [channels[r] for r in reps], mults / g)


def contraction_target(phi: QuantumChannel, tol: float = DEFAULT_TOL) -> np.ndarray | None:
    """The pure state a contraction channel maps everything onto, if any."""
    img = phi.apply(np.eye(phi.dim, dtype=complex) / phi.dim)
    purity = float(np.real(np.trace(img @ img)))
    if abs(purity - 1.0) > tol:
        return None
    vals, vecs = np.linalg.eigh(img)
    return vecs[:, -1]


def r2_channels() -> WeightedChannelSet:
    """The 24 Kraus-rank-2 qubit channels of the Clifford pushforward.

    Built directly from Choi states (1/2)(|psi_0><psi_0| + |psi_1><psi_1|)
    with |psi_i> = (A (x) B) CNOT^c (sigma_x^j (x) I)|0 i> over c, j in
    {0, 1} and A, B in {I, H, SH}; the CNOT is controlled on the second
    qubit.  Duplicates are merged.  The set is emitted contractions first
    (6 channels mapping everything onto an octahedron vertex), then the 18
    mixed-unitary channels.
    """
    singles = [np.eye(2, dtype=complex), HADAMARD, PHASE_S @ HADAMARD]
    seeds = []
    for c in (0, 1):
        for j in (0, 1):
            for a in singles:
                for b in singles:
                    w = kron(a, b)
                    if c:
                        w = w @ CNOT_01
                    w = w @ kron(np.linalg.matrix_power(PAULI_X, j), np.eye(2))
                    psi0 = w[:, 0]  # |00>
                    psi1 = w[:, 1]  # |01>
                    seeds.append(0.5 * (np.outer(psi0, psi0.conj())
                                        + np.outer(psi1, psi1.conj())))
    rep_of, reps = _dedup_by_choi(seeds)
    channels = [kraus_from_choi(ChoiState(2, 1, seeds[r])) for r in reps]
    order = sorted(range(len(channels)),
                   key=lambda i: (contraction_target(channels[i]) is None, i))
    return WeightedChannelSet(2, [channels[i] for i in order])


def qubit_channel_design(k: float) -> WeightedChannelSet:
    """The analytic qubit channel [2,k]-design for any real k >= 1.

    Combines the 24 Clifford unitary channels at weight 1, the 24 rank-2
    channels at weight 4(k-1) and the maximally depolarizing channel at
    weight 32(k^2-3k+2).  Elements whose weight is exactly zero are
    dropped, so k=2 reduces to the 48-channel [3,2]-design.  For
    1 < k < 2 the depolarizing weight is negative; the set is then flagged
    as signed rather than rejected.
    """
    if k < 1:
        raise ValueError(f"environment dimension k={k} must be >= 1")
    b = 4.0 * (k - 1.0)
    c = 32.0 * (k * k - 3.0 * k + 2.0)
    channels: list[QuantumChannel] = []
    weights: list[float] = []
    for u in clifford_group(1).elements:
        channels.append(unitary_channel(u))
        weights.append(1.0)
    if b != 0.0:
        for phi in r2_channels().channels:
            channels.append(phi)
            weights.append(b)
    if c != 0.0:
        channels.append(maximally_depolarizing(2))
        weights.append(c)
    return WeightedChannelSet(2, channels, np.array(weights))


def unistochastic_design_qubit() -> WeightedChannelSet:
    """The 43-channel unistochastic 3-design on qubits.

    24 Clifford unitary channels at weight 1, the 18 mixed-unitary rank-2
    channels at weight 12 and the maximally depolarizing channel at
    weight 240.
    """
    channels: list[QuantumChannel] = []
    weights: list[float] = []
    for u in clifford_group(1).elements:
        channels.append(unitary_channel(u))
        weights.append(1.0)
    r2 = r2_channels()
    for phi in r2.channels:
        if contraction_target(phi) is None:
            channels.append(phi)
            weights.append(12.0)
    channels.append(maximally_depolarizing(2))
    weights.append(240.0)
    return WeightedChannelSet(2, channels, np.array(weights))
