"""Simplex designs, decoherence pushforwards and mesh averaging.

A weighted point set on the probability simplex is a simplex t-design when
its weighted monomial averages match the flat (Dirichlet(1,...,1)) moments
up to total degree t.  Decohering a projective design in any orthonormal
basis pushes it forward to a simplex design of the same strength; affine
maps transport simplex designs onto arbitrary geometric simplices, which
gives exact quadrature on triangulated meshes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import DEFAULT_TOL, require_unitary
from .projective import WeightedStateSet

POINT_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class SimplexDesign:
    """Points on the probability simplex with positive weights."""

    dim: int
    points: np.ndarray
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        object.__setattr__(self, "points", pts)
        if self.weights is None:
            w = np.ones(pts.shape[0])
        else:
            w = np.asarray(self.weights, dtype=float).reshape(-1)
        object.__setattr__(self, "weights", w)
        if pts.shape[1] != self.dim:
            raise ValueError(f"points of length {pts.shape[1]} on a {self.dim}-outcome simplex")
        if w.shape[0] != pts.shape[0]:
            raise ValueError(f"{w.shape[0]} weights for {pts.shape[0]} points")

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def validate(self, tol: float = 1e-12) -> None:
        if np.any(self.points < -tol):
            raise ValueError("simplex points must be componentwise nonnegative")
        sums = np.sum(self.points, axis=1)
        if np.max(np.abs(sums - 1.0)) > tol:
            raise ValueError("simplex points must sum to 1")
        if np.any(self.weights <= 0):
            raise ValueError("simplex weights must be strictly positive")


@dataclass(frozen=True)
class Triangulation:
    """Vertices in R^m and simplices given as index tuples into them."""

    vertices: np.ndarray
    simplices: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        s = np.atleast_2d(np.asarray(self.simplices, dtype=int))
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "simplices", s)
        if s.size and (s.min() < 0 or s.max() >= v.shape[0]):
            raise ValueError("simplex vertex index out of range")


def merge_points(points: np.ndarray, weights: np.ndarray,
                 tol: float = POINT_MERGE_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Merge points within L-infinity distance ``tol``, summing weights."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    weights = np.asarray(weights, dtype=float).reshape(-1)
    kept_pts: list[np.ndarray] = []
    kept_w: list[float] = []
    for p, w in zip(points, weights):
        for i, q in enumerate(kept_pts):
            if np.max(np.abs(p - q)) <= tol:
                kept_w[i] += float(w)
                break
        else:
            kept_pts.append(p)
            kept_w.append(float(w))
    return np.array(kept_pts), np.array(kept_w)


def decohere(sset: WeightedStateSet, basis: np.ndarray | None = None) -> SimplexDesign:
    """Push a state set to outcome distributions of a basis measurement.

    Point ``i`` is the Born vector ``|<b_j|psi_i>|^2`` over the measurement
    basis (columns of ``basis``, computational by default).  Coincident
    points are merged with summed weights, so total weight is conserved.
    Decoherence maps projective t-designs to simplex t-designs.
    """
    d = sset.dim
    if basis is None:
        amps = sset.states
    else:
        basis = require_unitary(np.asarray(basis, dtype=complex), what="measurement basis")
        if basis.shape != (d, d):
            raise ValueError(f"basis shape {basis.shape} for dimension {d}")
        amps = sset.states @ basis.conj()
    probs = np.abs(amps) ** 2
    pts, w = merge_points(probs, sset.weights)
    return SimplexDesign(d, pts, w)


def multi_indices(d: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent tuples over d variables with total degree <= max_degree."""
    out = []
    for total in range(max_degree + 1):
        for cuts in itertools.combinations(range(total + d - 1), d - 1):
            prev = -1
            alpha = []
            for c in cuts:
                alpha.append(c - prev - 1)
                prev = c
            alpha.append(total + d - 1 - prev - 1)
            out.append(tuple(alpha))
    return out


def flat_simplex_moment(d: int, alpha) -> float:
    """Moment E[prod_i p_i^alpha_i] of the flat measure on the d-outcome simplex.

    Equals ``(d-1)! * prod_i alpha_i! / (d-1+sum alpha)!`` (Dirichlet(1,..,1)).
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != d or any(a < 0 for a in alpha):
        raise ValueError(f"invalid exponent tuple {alpha} for d={d}")
    num = math.factorial(d - 1)
    for a in alpha:
        num *= math.factorial(a)
    return num / math.factorial(d - 1 + sum(alpha))


def simplex_design_residual(design: SimplexDesign, t: int) -> float:
    """Largest deviation of weighted monomial averages from flat moments."""
    if t < 0:
        raise ValueError("design order must be nonnegative")
    pts = design.points
    w = design.weights / design.total_weight
    worst = 0.0
    for alpha in multi_indices(design.dim, t):
        mono = np.ones(len(design))
        for i, a in enumerate(alpha):
            if a:
                mono = mono * pts[:, i] ** a
        avg = float(np.dot(w, mono))
        worst = max(worst, abs(avg - flat_simplex_moment(design.dim, alpha)))
    return worst


def is_simplex_design(design: SimplexDesign, t: int, tol: float = DEFAULT_TOL) -> bool:
    """Whether all moments up to total degree t match the flat measure."""
    return simplex_design_residual(design, t) <= tol


def generalized_simpson(d: int) -> SimplexDesign:
    """Simpson-type simplex 2-design: d vertices at weight 1, center at d^2.

    For d = 2 this is the 1:4:1 Simpson rule on the interval.
    """
    if d < 2:
        raise ValueError("generalized Simpson rule needs d >= 2")
    pts = np.vstack([np.eye(d), np.full((1, d), 1.0 / d)])
    w = np.concatenate([np.ones(d), [float(d * d)]])
    return SimplexDesign(d, pts, w)


def simplex_measure(vertices: np.ndarray) -> float:
    """(d-1)-volume of the simplex spanned by d vertex rows in R^m."""
    v = np.atleast_2d(np.asarray(vertices, dtype=float))
    edges = v[1:] - v[0]
    if edges.shape[0] == 0:
        return 0.0
    gram = edges @ edges.T
    det = float(np.linalg.det(gram))
    if det < 0:
        det = 0.0
    return math.sqrt(det) / math.factorial(edges.shape[0])


def affine_transport(design: SimplexDesign, target_vertices: np.ndarray
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Map barycentric design points onto a geometric simplex.

    Returns the transported points ``sum_i p_i v_i`` (rows) and the
    unchanged weights.  A degenerate target of zero measure is rejected.
    """
    v = np.atleast_2d(np.asarray(target_vertices, dtype=float))
    if v.shape[0] != design.dim:
        raise ValueError(
            f"{v.shape[0]} target vertices for a {design.dim}-outcome design")
    if simplex_measure(v) == 0.0:
        raise ValueError("target simplex is degenerate (zero measure)")
    return design.points @ v, design.weights.copy()


def mesh_average(tri: Triangulation, f, design: SimplexDesign | None = None) -> float:
    """Measure-weighted average of ``f`` over a triangulated mesh.

    Each simplex is averaged with the transported design (generalized
    Simpson rule of matching dimension by default) and the results are
    combined with Gram-determinant surface measures.  Exact for
    polynomials up to the design strength.
    """
    nverts = tri.simplices.shape[1] if tri.simplices.size else 0
    if nverts == 0:
        raise ValueError("mesh holds no simplices")
    if design is None:
        design = generalized_simpson(nverts)
    if design.dim != nverts:
        raise ValueError(
            f"design on {design.dim} outcomes cannot average {nverts}-vertex simplices")
    total_measure = 0.0
    total = 0.0
    for index, simplex in enumerate(tri.simplices):
        verts = tri.vertices[simplex]
        m = simplex_measure(verts)
        if m == 0.0:
            raise ValueError(f"simplex {index} is degenerate (zero measure)")
        pts, w = affine_transport(design, verts)
        vals = np.array([float(f(p)) for p in pts])
        total += m * float(np.dot(w, vals)) / design.total_weight
        total_measure += m
    return total / total_measure
