"""Weingarten calculus for moments of the unitary group.

The Weingarten function of order ``t`` at dimension ``D`` is obtained by
solving the Gram system over the group algebra of the symmetric group
``S_t``: with ``G[s, r] = D**cycles(s^{-1} r)``, the vector ``w`` solving
``G w = e_id`` assigns ``Wg(r, D) = w[r]``.  The value depends only on the
cycle type of ``r``, which is how tables are stored here.

``D`` may be any real number ``>= t`` (Gram invertibility); non-integer
values appear when averaging over environments of effective non-integer
dimension.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

MAX_ORDER = 6


def enumerate_symmetric_group(t: int) -> list[tuple[int, ...]]:
    """All permutations of ``range(t)`` in lexicographic order, ``t <= 6``."""
    if not 1 <= t <= MAX_ORDER:
        raise ValueError(f"order t={t} out of supported range 1..{MAX_ORDER}")
    return list(itertools.permutations(range(t)))


def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Composition (p o q)(i) = p[q[i]]."""
    return tuple(p[q[i]] for i in range(len(p)))


def invert(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def cycle_count(p: tuple[int, ...]) -> int:
    """Number of cycles of a permutation, fixed points included."""
    seen = [False] * len(p)
    count = 0
    for i in range(len(p)):
        if not seen[i]:
            count += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
    return count


def cycle_type(p: tuple[int, ...]) -> tuple[int, ...]:
    """Sorted tuple of cycle lengths, e.g. identity of S_3 -> (1, 1, 1)."""
    seen = [False] * len(p)
    lengths = []
    for i in range(len(p)):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                n += 1
            lengths.append(n)
    return tuple(sorted(lengths))


@lru_cache(maxsize=None)
def weingarten_table(t: int, dim: float) -> dict[tuple[int, ...], float]:
    """Weingarten values of order ``t`` at dimension ``dim``, by cycle type.

    Solves the full ``t! x t!`` Gram system and collapses to cycle types,
    so permutations of equal type receive exactly equal values.  Cached per
    ``(t, dim)``.

    Raises
    ------
    ValueError
        If ``dim < t`` (the Gram matrix is singular below the order).
    """
    dim = float(dim)
    if not 1 <= t <= MAX_ORDER:
        raise ValueError(f"order t={t} out of supported range 1..{MAX_ORDER}")
    if dim < t:
        raise ValueError(f"dimension {dim} below order {t}; Gram system is singular")
    perms = enumerate_symmetric_group(t)
    n = len(perms)
    gram = np.empty((n, n))
    for i, s in enumerate(perms):
        s_inv = invert(s)
        for j, r in enumerate(perms):
            gram[i, j] = dim ** cycle_count(compose(s_inv, r))
    rhs = np.zeros(n)
    rhs[perms.index(tuple(range(t)))] = 1.0
    w = np.linalg.solve(gram, rhs)
    by_type: dict[tuple[int, ...], list[float]] = {}
    for p, v in zip(perms, w):
        by_type.setdefault(cycle_type(p), []).append(v)
    return {ct: float(np.mean(vs)) for ct, vs in by_type.items()}


def weingarten(p: tuple[int, ...], dim: float) -> float:
    """Weingarten value of the permutation ``p`` at dimension ``dim``."""
    return weingarten_table(len(p), float(dim))[cycle_type(p)]
