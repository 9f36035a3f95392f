"""Random-matrix ensembles and the three random-channel constructions.

All sampling goes through numpy Generator streams backed by PCG64; a fixed
(seed, stream) pair reproduces the exact sample sequence.  Construction 1
normalizes Ginibre blocks into Kraus operators, Construction 2 normalizes a
Wishart matrix into a Choi state and Construction 3 reduces a Haar unitary.
At environment parameter s = M = d^2 all three induce the same channel
measure; the Monte-Carlo helpers at the bottom estimate t-copy Choi means
with entrywise standard errors to test exactly that.
"""

from __future__ import annotations

import numpy as np

from .channels import ChoiState, QuantumChannel, channel_from_stinespring
from .linalg import dagger, permute_subsystems

MAX_RESAMPLES = 3
SINGULARITY_TOL = 1e-12


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """PCG64 generator; distinct streams of one seed are independent."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def ginibre(d1: int, d2: int, rng: np.random.Generator) -> np.ndarray:
    """d1 x d2 matrix with i.i.d. entries (x + iy)/sqrt(2), x,y ~ N(0,1)."""
    return (rng.standard_normal((d1, d2)) + 1j * rng.standard_normal((d1, d2))) / np.sqrt(2)


def gue(d: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(d, d, rng)
    return (g + dagger(g)) / 2


def wishart(d: int, s: int, rng: np.random.Generator) -> np.ndarray:
    if not (isinstance(s, (int, np.integer)) and s >= 1):
        raise ValueError("wishart sampling needs integer s >= 1")
    g = ginibre(d, int(s), rng)
    return g @ dagger(g)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """CUE sample via QR of a Ginibre matrix.

    The phases are fixed so the triangular factor has a real positive
    diagonal, which makes the decomposition unique and the distribution
    exactly Haar; plain QR output is biased.
    """
    q, r = np.linalg.qr(ginibre(dim, dim, rng))
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def _inv_sqrt(h: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(h)
    if vals[0] <= SINGULARITY_TOL * max(1.0, float(vals[-1])):
        raise FloatingPointError("near-singular normalization matrix")
    return (vecs / np.sqrt(vals)) @ dagger(vecs)


def sample_kraus_channel(d: int, s: int, rng: np.random.Generator) -> QuantumChannel:
    """Construction 1: K_i = G_i H^{-1/2}, H = sum G_i^dagger G_i."""
    if not (isinstance(s, (int, np.integer)) and s >= 1):
        raise ValueError("Kraus construction needs integer s >= 1")
    for _ in range(MAX_RESAMPLES):
        gs = [ginibre(d, d, rng) for _ in range(int(s))]
        h = sum(dagger(g) @ g for g in gs)
        try:
            hm = _inv_sqrt(h)
        except FloatingPointError:
            continue
        return QuantumChannel(d, [g @ hm for g in gs])
    raise FloatingPointError(
        f"normalization matrix singular after {MAX_RESAMPLES} resamples")


def sample_choi_channel(d: int, s: int, rng: np.random.Generator) -> ChoiState:
    """Construction 2: Wishart matrix normalized into a trace-1 Choi state.

    With the (outputs)(inputs) layout, trace preservation pins the input
    marginal, so the normalizer acts on the input factor:
    sigma = (I (x) H^{-1/2}) W (I (x) H^{-1/2}) / d with H the partial
    trace of W over the output factor; then Tr_out sigma = I/d.
    """
    if not (isinstance(s, (int, np.integer)) and s >= 1):
        raise ValueError("Choi construction needs integer s >= 1")
    for _ in range(MAX_RESAMPLES):
        w = wishart(d * d, s, rng)
        h = np.einsum("aiaj->ij", w.reshape(d, d, d, d))
        try:
            hm = _inv_sqrt(h)
        except FloatingPointError:
            continue
        n = np.kron(np.eye(d), hm)
        return ChoiState(d, 1, n @ w @ n / d)
    raise FloatingPointError(
        f"normalization matrix singular after {MAX_RESAMPLES} resamples")


def sample_stinespring_channel(d: int, m: int, rng: np.random.Generator) -> QuantumChannel:
    """Construction 3: Tr_E[U (rho (x) |0><0|) U^dagger], U Haar on dm."""
    return channel_from_stinespring(haar_unitary(d * m, rng), d, m)


# --- batched Monte-Carlo estimation -------------------------------------

def _batch_tcopy(choi_batch: np.ndarray, t: int) -> np.ndarray:
    """Interleaved-layout t-fold Kronecker power of a (B, n, n) batch."""
    out = choi_batch
    for _ in range(t - 1):
        b, p, _ = out.shape
        n = choi_batch.shape[1]
        out = np.einsum("bij,bkl->bikjl", out, choi_batch).reshape(b, p * n, p * n)
    return out


def _batch_choi_stinespring(d: int, m: int, b: int, rng) -> np.ndarray:
    g = (rng.standard_normal((b, d * m, d * m))
         + 1j * rng.standard_normal((b, d * m, d * m))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r, axis1=1, axis2=2)
    u = q * (diag / np.abs(diag))[:, None, :]
    k = u.reshape(b, d, m, d, m)[:, :, :, :, 0]       # (B, d_out, env, d_in)
    v = np.transpose(k, (0, 2, 1, 3)).reshape(b, m, d * d)
    return np.einsum("bli,blj->bij", v, v.conj()) / d


def _batch_choi_wishart(d: int, s: int, b: int, rng) -> np.ndarray:
    n = d * d
    for _ in range(MAX_RESAMPLES):
        g = (rng.standard_normal((b, n, s))
             + 1j * rng.standard_normal((b, n, s))) / np.sqrt(2)
        w = g @ np.conj(np.transpose(g, (0, 2, 1)))
        h = np.einsum("baiaj->bij", w.reshape(b, d, d, d, d))
        vals, vecs = np.linalg.eigh(h)
        if np.min(vals[:, 0] / np.maximum(1.0, vals[:, -1])) <= SINGULARITY_TOL:
            continue
        hm = np.einsum("bik,bk,bjk->bij", vecs, 1.0 / np.sqrt(vals), vecs.conj())
        nrm = np.einsum("ik,bjl->bijkl", np.eye(d), hm).reshape(b, n, n)
        return nrm @ w @ nrm / d
    raise FloatingPointError("singular Wishart normalization persisted across resamples")


def _batch_choi_kraus(d: int, s: int, b: int, rng) -> np.ndarray:
    for _ in range(MAX_RESAMPLES):
        g = (rng.standard_normal((b, s, d, d))
             + 1j * rng.standard_normal((b, s, d, d))) / np.sqrt(2)
        h = np.einsum("bsij,bsik->bjk", g.conj(), g)
        vals, vecs = np.linalg.eigh(h)
        if np.min(vals[:, 0] / np.maximum(1.0, vals[:, -1])) <= SINGULARITY_TOL:
            continue
        hm = np.einsum("bik,bk,bjk->bij", vecs, 1.0 / np.sqrt(vals), vecs.conj())
        k = np.einsum("bsij,bjl->bsil", g, hm)
        v = k.reshape(b, s, d * d)
        return np.einsum("bli,blj->bij", v, v.conj()) / d
    raise FloatingPointError("singular Kraus normalization persisted across resamples")


_BATCHERS = {
    "kraus": _batch_choi_kraus,
    "choi": _batch_choi_wishart,
    "stinespring": _batch_choi_stinespring,
}


def empirical_tcopy_mean(construction: str, d: int, param: int, t: int,
                         n_samples: int, rng: np.random.Generator,
                         chunk: int = 2048):
    """Empirical mean of the t-copy Choi over ``n_samples`` random channels.

    ``param`` is the construction parameter (s for 1 and 2, M for 3).
    Returns (mean, se_real, se_imag): the mean in the (outputs)(inputs)
    layout plus entrywise standard errors of the mean for the real and
    imaginary parts, suitable for z-testing against an analytic average.
    """
    if construction not in _BATCHERS:
        raise ValueError(f"unknown construction {construction!r}")
    if n_samples < 2:
        raise ValueError("need at least 2 samples for standard errors")
    batcher = _BATCHERS[construction]
    n = d ** (2 * t)
    s1 = np.zeros((n, n), dtype=complex)
    s2_re = np.zeros((n, n))
    s2_im = np.zeros((n, n))
    left = n_samples
    while left > 0:
        b = min(chunk, left)
        chois = _batch_tcopy(batcher(d, param, b, rng), t)
        s1 += chois.sum(axis=0)
        s2_re += np.sum(chois.real**2, axis=0)
        s2_im += np.sum(chois.imag**2, axis=0)
        left -= b
    mean = s1 / n_samples
    var_re = np.maximum(s2_re / n_samples - mean.real**2, 0.0)
    var_im = np.maximum(s2_im / n_samples - mean.imag**2, 0.0)
    se_re = np.sqrt(var_re / n_samples)
    se_im = np.sqrt(var_im / n_samples)
    perm = [2 * i for i in range(t)] + [2 * i + 1 for i in range(t)]
    dims = [d] * (2 * t)
    return (permute_subsystems(mean, dims, perm),
            permute_subsystems(se_re, dims, perm).real,
            permute_subsystems(se_im, dims, perm).real)


def max_z_score(mean: np.ndarray, se_re: np.ndarray, se_im: np.ndarray,
                target: np.ndarray, exact_tol: float = 1e-12) -> float:
    """Largest entrywise z-score of mean against target.

    Entries whose sampled standard error vanishes (values fixed by
    symmetry) must instead match the target within ``exact_tol``.
    """
    z = 0.0
    for dev, se in ((mean.real - target.real, se_re),
                    (mean.imag - target.imag, se_im)):
        live = se > 0
        if np.any(np.abs(dev[~live]) > exact_tol):
            return np.inf
        if np.any(live):
            z = max(z, float(np.max(np.abs(dev[live]) / se[live])))
    return z
