"""Ancilla-free noise tomography and effective environment dimension.

The tomography scheme prepares the 20 two-qubit MUB states, sends them
through a noise channel and measures in all five MUB bases (100 circuits
per delay).  Linear inversion turns the counts into a two-qubit Choi
state, which is read as two copies of a single-qubit channel and fitted
against the analytic [2,k] averages: k* is the k minimizing the
Hilbert-Schmidt distance, epsilon* the attained minimum.  The enhanced
model adds weight w on the complete emission channel (the rank-2
contraction onto |0><0|) before renormalizing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channels import (
    ChoiState,
    QuantumChannel,
    average_choi,
    choi_tcopy,
    contraction_target,
    maximally_depolarizing,
    qubit_channel_design,
    r2_channels,
)
from .linalg import dagger, hs_norm, is_hermitian, vec_row
from .projective import mub_family, state_reconstruct, states_of_bases

N_BASES = 5
N_OUTCOMES = 4
N_PREPS = N_BASES * N_OUTCOMES
K_MAX = 64.0
W_MAX = 64.0
GRID_POINTS = 64
REFINE_TOL = 1e-9


@dataclass(frozen=True)
class CountsRecord:
    delay_us: float
    prep_basis: int
    prep_index: int
    meas_basis: int
    outcome: int
    count: int

    def __post_init__(self):
        for name, value, top in (("prep_basis", self.prep_basis, N_BASES),
                                 ("prep_index", self.prep_index, N_OUTCOMES),
                                 ("meas_basis", self.meas_basis, N_BASES),
                                 ("outcome", self.outcome, N_OUTCOMES)):
            if not 0 <= value < top:
                raise ValueError(f"{name}={value} outside 0..{top - 1}")
        if self.count < 0 or not np.isfinite(self.count):
            raise ValueError(f"invalid count {self.count}")


@dataclass(frozen=True)
class TomographyDataset:
    records: list[CountsRecord]
    shots: int

    def __post_init__(self):
        object.__setattr__(self, "records", list(self.records))
        if self.shots < 1:
            raise ValueError("shots must be >= 1")

    def delays(self) -> list[float]:
        return sorted({r.delay_us for r in self.records})

    def count_grid(self, delay_us: float) -> np.ndarray:
        """Counts as a (prep_basis, prep_index, meas_basis, outcome) array.

        Raises if any of the 100 circuits at this delay is missing or if a
        circuit's outcome counts fail to sum to the declared shots.
        """
        grid = np.full((N_BASES, N_OUTCOMES, N_BASES, N_OUTCOMES), -1, dtype=np.int64)
        for r in self.records:
            if r.delay_us == delay_us:
                grid[r.prep_basis, r.prep_index, r.meas_basis, r.outcome] = r.count
        missing = [(int(b), int(i), int(m))
                   for b, i, m in zip(*np.nonzero((grid < 0).any(axis=3)))]
        if missing:
            raise ValueError(
                f"incomplete circuit grid at delay {delay_us}: missing "
                f"(prep_basis, prep_index, meas_basis) cells {missing[:8]}"
                + ("..." if len(missing) > 8 else ""))
        totals = grid.sum(axis=3)
        if np.any(totals != self.shots):
            bad = np.argwhere(totals != self.shots)[0]
            raise ValueError(
                f"counts at delay {delay_us}, circuit {tuple(int(x) for x in bad)} "
                f"sum to {int(totals[tuple(bad)])}, expected {self.shots}")
        return grid

    def validate(self) -> None:
        for delay in self.delays():
            self.count_grid(delay)


@dataclass(frozen=True)
class KStarFit:
    k_star: float
    epsilon_star: float
    w: float | None
    model: str

    def __post_init__(self):
        if self.k_star < 1.0:
            raise ValueError(f"k_star={self.k_star} below the k >= 1 domain")
        if self.epsilon_star < 0.0:
            raise ValueError("epsilon_star must be nonnegative")
        if self.model not in ("uniform", "emission"):
            raise ValueError(f"unknown model tag {self.model!r}")
        if (self.w is None) != (self.model == "uniform"):
            raise ValueError("w is present exactly for the emission model")

    def validate(self, sigma_measured: ChoiState, tol: float = 1e-9) -> None:
        """Recompute the objective at the reported optimum."""
        if self.model == "uniform":
            obj = hs_norm(sigma_measured.matrix - _uniform_model(self.k_star))
        else:
            obj = hs_norm(sigma_measured.matrix - _emission_model(self.k_star, self.w))
        if abs(obj - self.epsilon_star) > tol:
            raise ValueError(
                f"epsilon_star={self.epsilon_star} but objective at optimum is {obj}")


@lru_cache(maxsize=1)
def _prep_design():
    # 20 states ordered (basis, index), matching the count grid layout
    return states_of_bases(mub_family(4))


def _prep_states() -> np.ndarray:
    return _prep_design().states


def ideal_prep_projectors() -> list[np.ndarray]:
    """The 20 two-qubit MUB preparation states as density matrices."""
    return [np.outer(v, v.conj()) for v in _prep_states()]


def simulate_counts(channel: QuantumChannel, shots: int, rng: np.random.Generator,
                    delay_us: float = 0.0) -> TomographyDataset:
    """Multinomial Born-rule counts for the 100 tomography circuits."""
    if channel.dim != 4:
        raise ValueError("tomography circuits act on two qubits (dim 4)")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    vecs = _prep_states()
    records = []
    for b in range(N_BASES):
        for i in range(N_OUTCOMES):
            out = channel.apply(np.outer(vecs[4 * b + i], vecs[4 * b + i].conj()))
            for m in range(N_BASES):
                basis = vecs[4 * m: 4 * m + 4]
                probs = np.real(np.einsum("oi,ij,oj->o", basis.conj(), out, basis))
                probs = np.clip(probs, 0.0, None)  # shot-noise-free negativity is O(eps)
                counts = rng.multinomial(shots, probs / probs.sum())
                for o in range(N_OUTCOMES):
                    records.append(CountsRecord(delay_us, b, i, m, o, int(counts[o])))
    return TomographyDataset(records, shots)


def exact_counts(channel: QuantumChannel, shots: int,
                 delay_us: float = 0.0) -> TomographyDataset:
    """Infinite-statistics stand-in: expected counts, rounded.

    Useful for algebraic round-trip checks; rounding keeps integer counts
    but per-circuit sums are repaired on the largest entry so the dataset
    stays valid.
    """
    vecs = _prep_states()
    records = []
    for b in range(N_BASES):
        for i in range(N_OUTCOMES):
            out = channel.apply(np.outer(vecs[4 * b + i], vecs[4 * b + i].conj()))
            for m in range(N_BASES):
                basis = vecs[4 * m: 4 * m + 4]
                probs = np.real(np.einsum("oi,ij,oj->o", basis.conj(), out, basis))
                probs = np.clip(probs, 0.0, None)
                counts = np.round(shots * probs / probs.sum()).astype(np.int64)
                counts[int(np.argmax(counts))] += shots - int(counts.sum())
                for o in range(N_OUTCOMES):
                    records.append(CountsRecord(delay_us, b, i, m, o, int(counts[o])))
    return TomographyDataset(records, shots)


def reconstruct_states_from_probs(probs: np.ndarray) -> list[np.ndarray]:
    """States from Born probabilities shaped (prep_basis, prep_index, 20).

    Probabilities over the 20-outcome MUB design feed the projective
    reconstruction formula; with d(d+1) = |S| = 20 the prefactor is 1.
    Exact probabilities reproduce the states exactly.
    """
    probs = np.asarray(probs, dtype=float).reshape(N_BASES, N_OUTCOMES, N_PREPS)
    design = _prep_design()
    return [state_reconstruct(design, probs[b, i])
            for b in range(N_BASES) for i in range(N_OUTCOMES)]


def reconstruct_states(dataset: TomographyDataset, delay_us: float) -> list[np.ndarray]:
    """Linear-inversion state estimates for the 20 preparations.

    Outputs are Hermitian with unit trace but may have negative
    eigenvalues under shot noise; they are reported raw.
    """
    grid = dataset.count_grid(delay_us)
    return reconstruct_states_from_probs(grid.reshape(N_BASES, N_OUTCOMES, N_PREPS)
                                         / dataset.shots)


def reconstruct_channel(inputs: list[np.ndarray], outputs: list[np.ndarray],
                        psd_project: bool = False) -> ChoiState:
    """Least-squares channel inversion from (input, output) state pairs.

    Stacking row-vectorized states into matrices A_in and A_out, the
    transfer rows pinv(A_in) @ A_out are the images N(|a><b|); these
    assemble into the Choi state sum_ab N(|a><b|) (x) |a><b|, normalized
    to unit trace.  Exact on exact data whenever the inputs span the
    operator space.
    """
    if len(inputs) != len(outputs):
        raise ValueError("inputs and outputs must pair up")
    d = np.asarray(inputs[0]).shape[0]
    a_in = np.array([vec_row(m) for m in inputs])
    a_out = np.array([vec_row(m) for m in outputs])
    if np.linalg.matrix_rank(a_in, tol=1e-10) < d * d:
        raise ValueError("input states do not span the operator space")
    transfer = np.linalg.pinv(a_in) @ a_out
    sigma = transfer.reshape(d, d, d, d).transpose(2, 0, 3, 1).reshape(d * d, d * d)
    sigma = (sigma + dagger(sigma)) / 2  # symmetrize away float dust
    tr = float(np.real(np.trace(sigma)))
    if abs(tr) < 1e-12:
        raise ValueError("reconstructed Choi has vanishing trace")
    sigma = sigma / tr
    if psd_project:
        vals, vecs = np.linalg.eigh(sigma)
        vals = np.clip(vals, 0.0, None)
        sigma = (vecs * vals) @ dagger(vecs)
        sigma = sigma / np.trace(sigma)
    return ChoiState(d, 1, sigma)


def pair_choi_from_twoqubit(sigma: ChoiState) -> ChoiState:
    """Reinterpret a two-qubit Choi state as a two-copy qubit Choi state.

    With outputs ordered (A1 A2) and inputs (B1 B2), the two-qubit layout
    (A1 A2)(B1 B2) already coincides with the t=2 copy layout
    (out1 out2)(in1 in2), so the matrix is unchanged; only the copy
    bookkeeping flips.  Applying the map twice returns the input.
    """
    if sigma.matrix.shape != (16, 16):
        raise ValueError("expected a 16 x 16 Choi matrix over two qubits")
    if (sigma.dim, sigma.copies) == (4, 1):
        return ChoiState(2, 2, sigma.matrix)
    if (sigma.dim, sigma.copies) == (2, 2):
        return ChoiState(4, 1, sigma.matrix)
    raise ValueError(f"unsupported Choi shape (d={sigma.dim}, t={sigma.copies})")


def emission_channel() -> QuantumChannel:
    """The complete emission channel: rank-2 contraction onto |0><0|."""
    for phi in r2_channels().channels:
        target = contraction_target(phi)
        if target is not None and abs(abs(target[0]) - 1.0) < 1e-9:
            return phi
    raise RuntimeError("contraction onto |0> not found in the rank-2 set")


@lru_cache(maxsize=1)
def _model_parts() -> dict[str, np.ndarray]:
    """Precomputed t=2 Choi sums for the design-based model evaluators."""
    from .unitary import clifford_group

    sum_c1 = np.zeros((16, 16), dtype=complex)
    for u in clifford_group(1).elements:
        sum_c1 += choi_tcopy(QuantumChannel(2, [u]), 2).matrix
    sum_r2 = np.zeros((16, 16), dtype=complex)
    for phi in r2_channels().channels:
        sum_r2 += choi_tcopy(phi, 2).matrix
    return {
        "c1": sum_c1,
        "r2": sum_r2,
        "dep": choi_tcopy(maximally_depolarizing(2), 2).matrix,
        "em": choi_tcopy(emission_channel(), 2).matrix,
    }


def _uniform_model(k: float) -> np.ndarray:
    # algebraically identical to average_choi(2, k, 2); the design-sum form
    # costs one weighted combination of cached 16 x 16 blocks per call
    p = _model_parts()
    b = 4.0 * (k - 1.0)
    c = 32.0 * (k * k - 3.0 * k + 2.0)
    return (p["c1"] + b * p["r2"] + c * p["dep"]) / (24.0 + 24.0 * b + c)


def _emission_model(k: float, w: float) -> np.ndarray:
    p = _model_parts()
    b = 4.0 * (k - 1.0)
    c = 32.0 * (k * k - 3.0 * k + 2.0)
    return ((p["c1"] + b * p["r2"] + c * p["dep"] + w * p["em"])
            / (24.0 + 24.0 * b + c + w))


def model_choi_uniform(k: float) -> ChoiState:
    """The t=2 qubit average over a k-dimensional environment."""
    if k < 1:
        raise ValueError(f"k={k} must be >= 1")
    return average_choi(2, k, 2)


def model_choi_emission(k: float, w: float) -> ChoiState:
    """Uniform model with extra weight w on the complete emission channel."""
    if k < 1:
        raise ValueError(f"k={k} must be >= 1")
    if w < 0:
        raise ValueError(f"emission weight w={w} must be >= 0")
    return ChoiState(2, 2, _emission_model(k, w))


def emission_mixture_channel(k: float, w: float) -> QuantumChannel:
    """Two-qubit mixture channel whose pair Choi is model_choi_emission(k, w).

    Mixes Phi (x) Phi over the emission-weighted design; valid as a channel
    whenever all weights are nonnegative (k = 1 or k >= 2).
    """
    design = qubit_channel_design(k)
    channels = list(design.channels)
    weights = list(design.weights)
    if w > 0:
        channels.append(emission_channel())
        weights.append(float(w))
    if any(x < 0 for x in weights):
        raise ValueError(f"signed design weights at k={k}; no mixture channel exists")
    total = sum(weights)
    kraus = []
    for phi, wt in zip(channels, weights):
        scale = np.sqrt(wt / total)
        for ka in phi.kraus:
            for kb in phi.kraus:
                kraus.append(scale * np.kron(ka, kb))
    return QuantumChannel(4, kraus)


def fit_dataset(dataset: TomographyDataset, model: str = "uniform"
                ) -> list[tuple[float, "KStarFit"]]:
    """Reconstruct and fit every delay in a dataset, in delay order."""
    inputs = ideal_prep_projectors()
    out = []
    for delay in dataset.delays():
        states = reconstruct_states(dataset, delay)
        sigma = reconstruct_channel(inputs, states)
        out.append((delay, fit_kstar(pair_choi_from_twoqubit(sigma), model)))
    return out


def _golden_section(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def _k_grid() -> np.ndarray:
    return np.geomspace(1.0, K_MAX, GRID_POINTS)


def _w_grid() -> np.ndarray:
    return np.concatenate([[0.0], np.geomspace(1e-3, W_MAX, GRID_POINTS - 1)])


def fit_kstar(sigma_measured: ChoiState, model: str = "uniform") -> KStarFit:
    """Minimize the HS distance to the analytic model over its parameters.

    Deterministic coarse-grid search followed by golden-section
    refinement (coordinate descent for the two-parameter emission model)
    down to 1e-6 in each parameter.  k is constrained to [1, 64] and w to
    [0, 64]; inputs favoring closed dynamics return exactly k* = 1.
    """
    if sigma_measured.matrix.shape != (16, 16):
        raise ValueError("fit expects a two-copy qubit Choi state (16 x 16)")
    m = sigma_measured.matrix
    if not is_hermitian(m, 1e-8):
        raise ValueError("measured Choi state must be Hermitian")
    if abs(np.trace(m) - 1.0) > 1e-8:
        raise ValueError("measured Choi state must have unit trace")
    if model == "uniform":
        obj = lambda k: hs_norm(m - _uniform_model(k))
        ks = _k_grid()
        vals = [obj(k) for k in ks]
        i = int(np.argmin(vals))
        lo, hi = ks[max(0, i - 1)], ks[min(len(ks) - 1, i + 1)]
        k_star, eps = _golden_section(obj, lo, hi, REFINE_TOL)
        if k_star - 1.0 <= REFINE_TOL:
            k_star, eps = 1.0, obj(1.0)
        return KStarFit(float(k_star), float(eps), None, "uniform")
    if model == "emission":
        obj = lambda k, w: hs_norm(m - _emission_model(k, w))

        # At fixed k the model is affine in s = w/(W0 + w) with s monotone
        # in w, so the objective is quasiconvex in w and golden-section
        # over the whole range is safe.
        def best_w(k: float) -> tuple[float, float]:
            return _golden_section(lambda w: obj(k, w), 0.0, W_MAX, REFINE_TOL)

        ks = _k_grid()
        vals = [best_w(k)[1] for k in ks]
        i = int(np.argmin(vals))
        lo, hi = ks[max(0, i - 1)], ks[min(len(ks) - 1, i + 1)]
        k_star, _ = _golden_section(lambda k: best_w(k)[1], lo, hi, REFINE_TOL)
        if k_star - 1.0 <= REFINE_TOL:
            k_star = 1.0
        w_star = best_w(k_star)[0]
        if w_star <= REFINE_TOL:
            w_star = 0.0
        return KStarFit(float(k_star), float(obj(k_star, w_star)), float(w_star),
                        "emission")
    raise ValueError(f"unknown model {model!r}")
