"""Dense linear algebra helpers for multipartite operators.

Conventions used throughout the package:

* matrices are dense ``numpy`` arrays of dtype ``complex128``,
* composite indices are flattened row-major (C order), so subsystem 0 is
  the leftmost tensor factor and varies slowest,
* ``vec`` denotes row-major flattening of a matrix into a column vector,
* tolerances are absolute unless stated otherwise; the package-wide
  default is ``DEFAULT_TOL = 1e-10``.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

DEFAULT_TOL = 1e-10


def as_complex_matrix(m) -> np.ndarray:
    """Coerce input to a 2-d complex128 array, rejecting anything else."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {a.ndim}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conjugate(np.swapaxes(m, -1, -2))


def kron(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more matrices, leftmost factor slowest.

    ``kron(A, B)[i*dB + k, j*dB + l] == A[i, j] * B[k, l]``, matching the
    row-major composite index convention.
    """
    if not factors:
        raise ValueError("kron requires at least one factor")
    out = as_complex_matrix(factors[0])
    for f in factors[1:]:
        out = np.kron(out, as_complex_matrix(f))
    return out


def _check_square(m: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    m = as_complex_matrix(m)
    n = math.prod(dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"subsystem dimensions must be positive, got {list(dims)}")
    if m.shape != (n, n):
        raise ValueError(
            f"matrix shape {m.shape} does not match subsystem dimensions "
            f"{list(dims)} with product {n}"
        )
    return m


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out all subsystems not listed in ``keep``.

    Parameters
    ----------
    m : array
        Square matrix on the tensor product of the given subsystems.
    dims : sequence of int
        Dimension of each tensor factor, leftmost first.
    keep : sequence of int
        Indices of the subsystems to retain, in the order they should
        appear in the result.

    Returns
    -------
    array
        Matrix acting on the retained subsystems only.
    """
    m = _check_square(m, dims)
    k = len(dims)
    keep = list(keep)
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate subsystem index in keep={keep}")
    if any(i < 0 or i >= k for i in keep):
        raise ValueError(f"keep={keep} out of range for {k} subsystems")
    traced = [i for i in range(k) if i not in keep]
    t = m.reshape(*dims, *dims)
    # Row axis i pairs with column axis k + i.  Trace the dropped pairs one
    # at a time, starting from the highest axis so earlier indices stay put.
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i, axis2=t.ndim // 2 + i)
    # Remaining row axes are ordered by subsystem index; reorder to `keep`.
    kept_sorted = sorted(keep)
    nkeep = len(keep)
    if nkeep == 0:
        return t.reshape(1, 1)
    perm = [kept_sorted.index(i) for i in keep]
    t = t.transpose(*perm, *(np.array(perm) + nkeep))
    n = math.prod(dims[i] for i in keep)
    return t.reshape(n, n)


def permute_subsystems(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of a square matrix.

    ``perm`` uses gather semantics: factor ``j`` of the result is factor
    ``perm[j]`` of the input.  Equivalent to conjugation by the
    corresponding subsystem-permutation unitary.
    """
    m = _check_square(m, dims)
    k = len(dims)
    perm = list(perm)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"perm={perm} is not a permutation of 0..{k - 1}")
    t = m.reshape(*dims, *dims)
    t = t.transpose(*perm, *(np.array(perm) + k))
    n = math.prod(dims)
    return t.reshape(n, n)


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product Tr(a^dagger b)."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hs_norm(m: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm sqrt(Tr(m^dagger m))."""
    return float(np.linalg.norm(as_complex_matrix(m)))


def vec_row(m: np.ndarray) -> np.ndarray:
    """Row-major flattening of a matrix into a 1-d vector."""
    return as_complex_matrix(m).reshape(-1)


def unvec_row(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec_row` for the given target shape."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != rows * cols:
        raise ValueError(f"vector of length {v.size} cannot fill a {rows}x{cols} matrix")
    return v.reshape(rows, cols)


def is_hermitian(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    m = as_complex_matrix(m)
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - dagger(m))) <= tol


def is_unitary(m: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return np.max(np.abs(dagger(m) @ m - np.eye(m.shape[0]))) <= tol


def require_unitary(m: np.ndarray, tol: float = DEFAULT_TOL, what: str = "matrix") -> np.ndarray:
    m = as_complex_matrix(m)
    if not is_unitary(m, tol):
        raise ValueError(f"{what} is not unitary within tolerance {tol}")
    return m


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(np.linalg.eigvalsh(as_complex_matrix(m))[0])


def permutation_operator(d: int, perm: Sequence[int]) -> np.ndarray:
    """Operator on (C^d)^{\\otimes t} with entries prod_n delta(x_n, y_{perm(n)}).

    The returned 0/1 matrix ``P`` satisfies ``P[x, y] = 1`` exactly when the
    multi-indices obey ``x[n] == y[perm[n]]`` for every tensor slot ``n``.
    ``perm`` must be a permutation of ``range(t)``.
    """
    t = len(perm)
    if sorted(perm) != list(range(t)):
        raise ValueError(f"perm={list(perm)} is not a permutation of 0..{t - 1}")
    n = d**t
    p = np.zeros((n, n), dtype=complex)
    for y in range(n):
        digits = []
        rem = y
        for _ in range(t):
            digits.append(rem % d)
            rem //= d
        digits.reverse()  # digits[n] is the n-th slot of the column index
        x = 0
        for s in range(t):
            x = x * d + digits[perm[s]]
        p[x, y] = 1.0
    return p
