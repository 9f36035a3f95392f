import math

import numpy as np
import pytest

from qdesigns.gates import PAULI_X, PAULI_Y, PAULI_Z
from qdesigns.projective import (
    mub_family,
    octahedron_states,
    sic_fiducial_d3,
    states_of_bases,
    wh_orbit,
)
from qdesigns.random_channels import haar_unitary, make_rng
from qdesigns.simplex import (
    SimplexDesign,
    Triangulation,
    affine_transport,
    decohere,
    flat_simplex_moment,
    generalized_simpson,
    is_simplex_design,
    merge_points,
    mesh_average,
    multi_indices,
    simplex_design_residual,
    simplex_measure,
)


def test_multi_indices_count_and_degrees():
    idx = multi_indices(3, 2)
    assert len(idx) == math.comb(5, 3)
    assert all(len(a) == 3 and sum(a) <= 2 for a in idx)
    assert (0, 0, 0) in idx and (2, 0, 0) in idx and (0, 1, 1) in idx


def test_flat_moments():
    assert flat_simplex_moment(3, (1, 0, 0)) == pytest.approx(1.0 / 3.0)
    assert flat_simplex_moment(3, (2, 0, 0)) == pytest.approx(2.0 / 12.0)
    assert flat_simplex_moment(3, (1, 1, 0)) == pytest.approx(1.0 / 12.0)
    assert flat_simplex_moment(2, (2, 2)) == pytest.approx(
        math.factorial(2) ** 2 / math.factorial(5))
    with pytest.raises(ValueError):
        flat_simplex_moment(3, (1, 1))
    with pytest.raises(ValueError):
        flat_simplex_moment(2, (-1, 1))


def test_merge_points():
    pts = np.array([[0.5, 0.5], [0.5, 0.5 + 1e-12], [1.0, 0.0]])
    merged, w = merge_points(pts, np.array([1.0, 2.0, 4.0]))
    assert merged.shape[0] == 2
    assert sorted(w.tolist()) == [3.0, 4.0]


def test_design_validation():
    d = SimplexDesign(2, np.array([[0.7, 0.3]]))
    d.validate()
    with pytest.raises(ValueError):
        SimplexDesign(3, np.array([[0.5, 0.5]]))
    with pytest.raises(ValueError):
        SimplexDesign(2, np.array([[0.5, 0.5]]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        SimplexDesign(2, np.array([[0.5, 0.4]])).validate()
    with pytest.raises(ValueError):
        SimplexDesign(2, np.array([[-0.2, 1.2]])).validate()
    with pytest.raises(ValueError):
        SimplexDesign(2, np.array([[0.5, 0.5]]), np.array([0.0])).validate()


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_generalized_simpson_is_two_design(d):
    gs = generalized_simpson(d)
    gs.validate()
    assert len(gs) == d + 1
    assert gs.weights[-1] == d * d
    assert simplex_design_residual(gs, 2) <= 1e-12
    assert is_simplex_design(gs, 2)


def test_simpson_interval_exact_for_cubics():
    # the 1:4:1 rule is the classic Simpson rule, exact through degree 3
    assert simplex_design_residual(generalized_simpson(2), 3) <= 1e-12


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_generalized_simpson_not_three_design(d):
    assert simplex_design_residual(generalized_simpson(d), 3) > 1e-3


def test_generalized_simpson_rejects_small_dimension():
    with pytest.raises(ValueError):
        generalized_simpson(1)


def test_octahedron_pushforward_simpson_weights():
    push = decohere(octahedron_states())
    assert len(push) == 3
    assert sorted(push.weights.tolist()) == [1.0, 1.0, 4.0]
    assert simplex_design_residual(push, 3) <= 1e-12


def test_octahedron_pushforward_gauss_nodes():
    # decohering in the eigenbasis of (X+Y+Z)/sqrt(3) lands all six states
    # on the two-point Gauss rule (1 -+ 1/sqrt(3))/2 with equal weights
    h = (PAULI_X + PAULI_Y + PAULI_Z) / np.sqrt(3.0)
    _, vecs = np.linalg.eigh(h)
    push = decohere(octahedron_states(), vecs)
    assert len(push) == 2
    assert np.allclose(push.weights, 3.0)
    nodes = np.sort(push.points[:, 0])
    want = np.array([(1 - 1 / np.sqrt(3)) / 2, (1 + 1 / np.sqrt(3)) / 2])
    assert np.max(np.abs(nodes - want)) <= 1e-12
    assert simplex_design_residual(push, 3) <= 1e-12


def test_octahedron_pushforward_invariant_under_rotations():
    oc = octahedron_states()
    rng = make_rng(61)
    for _ in range(16):
        basis = haar_unitary(2, rng)
        push = decohere(oc, basis)
        assert push.total_weight == pytest.approx(6.0)
        assert simplex_design_residual(push, 3) <= 1e-10


def test_mub_pushforward_weight_histogram():
    push = decohere(states_of_bases(mub_family(3)))
    assert len(push) == 4
    assert sorted(push.weights.tolist()) == [1.0, 1.0, 1.0, 9.0]
    assert simplex_design_residual(push, 2) <= 1e-12


def test_sic_pushforward_equilateral_triangle():
    # each qutrit SIC decoheres onto three points of weight 3 forming an
    # equilateral triangle at half the simplex circumradius
    for theta in [0.0, 0.9, 2.2, 4.0]:
        push = decohere(wh_orbit(sic_fiducial_d3(theta)))
        assert len(push) == 3
        assert np.allclose(push.weights, 3.0)
        center = np.full(3, 1.0 / 3.0)
        radii = np.linalg.norm(push.points - center, axis=1)
        simplex_radius = np.sqrt(2.0 / 3.0)
        assert np.max(np.abs(radii / simplex_radius - 0.5)) <= 1e-10
        sides = [np.linalg.norm(push.points[i] - push.points[j])
                 for i in range(3) for j in range(i)]
        assert np.max(np.abs(np.array(sides) - sides[0])) <= 1e-10
        assert simplex_design_residual(push, 2) <= 1e-12


def test_decohere_input_checks():
    oc = octahedron_states()
    with pytest.raises(ValueError):
        decohere(oc, np.eye(3))
    with pytest.raises(ValueError):
        decohere(oc, 2.0 * np.eye(2))


def test_simplex_measure():
    tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert simplex_measure(tri) == pytest.approx(0.5)
    seg = np.array([[1.0, 1.0], [4.0, 5.0]])
    assert simplex_measure(seg) == pytest.approx(5.0)
    degenerate = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])
    assert simplex_measure(degenerate) == pytest.approx(0.0)
    assert simplex_measure(np.array([[3.0, 4.0]])) == 0.0


def test_affine_transport_identity():
    gs = generalized_simpson(3)
    pts, w = affine_transport(gs, np.eye(3))
    assert np.allclose(pts, gs.points)
    assert np.array_equal(w, gs.weights)


def test_affine_transport_interval():
    # transported Simpson rule integrates quadratics on [a, b] exactly
    gs = generalized_simpson(2)
    a, b = 1.0, 4.0
    pts, w = affine_transport(gs, np.array([[a], [b]]))
    avg = np.dot(w, (pts[:, 0] ** 2)) / np.sum(w)
    exact = (b**3 - a**3) / (3.0 * (b - a))
    assert avg == pytest.approx(exact, rel=1e-14)


def test_affine_transport_rejects_degenerate_and_mismatch():
    gs = generalized_simpson(3)
    with pytest.raises(ValueError):
        affine_transport(gs, np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]))
    with pytest.raises(ValueError):
        affine_transport(gs, np.array([[0.0], [1.0]]))


def triangle_monomial_average(verts, a, b, c):
    # mean over the triangle of lambda0^a lambda1^b lambda2^c in barycentric
    # coordinates: 2 a! b! c! / (a+b+c+2)!
    return 2.0 * math.factorial(a) * math.factorial(b) * math.factorial(c) \
        / math.factorial(a + b + c + 2)


def test_transport_quadratics_on_random_triangles():
    rng = make_rng(62)
    gs = generalized_simpson(3)
    for _ in range(8):
        verts = rng.standard_normal((3, 2))
        pts, w = affine_transport(gs, verts)
        for (a, b, c) in [(2, 0, 0), (1, 1, 0), (0, 1, 1), (0, 0, 2)]:
            # evaluate the barycentric monomial through the affine map
            bary = gs.points
            vals = bary[:, 0] ** a * bary[:, 1] ** b * bary[:, 2] ** c
            avg = np.dot(w, vals) / np.sum(w)
            assert avg == pytest.approx(triangle_monomial_average(verts, a, b, c), rel=1e-12)


def unit_square_fan(n_per_side=1):
    # a 2 x n grid of triangles over the unit square
    xs = np.linspace(0.0, 1.0, n_per_side + 1)
    verts = np.array([[x, y] for y in xs for x in xs])
    tris = []
    for j in range(n_per_side):
        for i in range(n_per_side):
            v00 = j * (n_per_side + 1) + i
            v10 = v00 + 1
            v01 = v00 + (n_per_side + 1)
            v11 = v01 + 1
            tris.append([v00, v10, v11])
            tris.append([v00, v11, v01])
    return Triangulation(verts, np.array(tris))


def test_mesh_average_constant_and_linear():
    tri = unit_square_fan(3)
    assert mesh_average(tri, lambda p: 1.0) == pytest.approx(1.0, rel=1e-14)
    # mean of x over the unit square is 1/2
    assert mesh_average(tri, lambda p: p[0]) == pytest.approx(0.5, rel=1e-13)
    assert mesh_average(tri, lambda p: 3.0 * p[0] - 2.0 * p[1] + 1.0) == \
        pytest.approx(3.0 * 0.5 - 2.0 * 0.5 + 1.0, rel=1e-13)


def test_mesh_average_quadratics_exact():
    tri = unit_square_fan(2)
    # unit square means: x^2 -> 1/3, x y -> 1/4, x^2 + y^2 -> 2/3
    assert mesh_average(tri, lambda p: p[0] ** 2) == pytest.approx(1.0 / 3.0, rel=1e-13)
    assert mesh_average(tri, lambda p: p[0] * p[1]) == pytest.approx(0.25, rel=1e-13)
    assert mesh_average(tri, lambda p: p[0] ** 2 + p[1] ** 2) == \
        pytest.approx(2.0 / 3.0, rel=1e-13)


def test_mesh_average_polygon_fan():
    # irregular 20-triangle fan around an interior point
    rng = make_rng(63)
    n = 20
    angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, n))
    radii = rng.uniform(0.5, 1.5, n)
    ring = np.stack([radii * np.cos(angles), radii * np.sin(angles)], axis=1)
    center = np.array([[0.05, -0.03]])
    verts = np.vstack([center, ring])
    tris = np.array([[0, 1 + i, 1 + (i + 1) % n] for i in range(n)])
    tri = Triangulation(verts, tris)

    def f(p):
        return 2.0 * p[0] ** 2 - p[0] * p[1] + 0.5 * p[1] ** 2 + p[0] - 3.0

    # reference: exact per-triangle averages from barycentric moments
    total_area = 0.0
    total = 0.0
    for simplex in tris:
        v = verts[simplex]
        area = simplex_measure(v)
        acc = 0.0
        # expand f over barycentric monomials via quadratic interpolation:
        # integrate by sampling the 6 canonical points is overkill; use the
        # exact moment table instead
        for (a, b, c), coeff in quadratic_barycentric_coefficients(f, v).items():
            acc += coeff * triangle_monomial_average(v, a, b, c)
        total += area * acc
        total_area += area
    want = total / total_area
    assert mesh_average(tri, f) == pytest.approx(want, rel=1e-12)


def quadratic_barycentric_coefficients(f, verts):
    # represent a quadratic f through barycentric monomials on the triangle:
    # solve for coefficients over the 6 monomials using 6 sample points
    monos = [(2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1)]
    samples = np.array([
        [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0],
        [0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5],
    ])
    mat = np.array([[s[0] ** a * s[1] ** b * s[2] ** c for (a, b, c) in monos]
                    for s in samples])
    rhs = np.array([f(s @ verts) for s in samples])
    coeffs = np.linalg.solve(mat, rhs)
    return dict(zip(monos, coeffs))


def test_mesh_average_rejects_degenerate_simplex():
    verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [2.0, 0.0]])
    tris = np.array([[0, 1, 2], [0, 1, 3]])  # second triangle is collinear
    with pytest.raises(ValueError, match="simplex 1"):
        mesh_average(Triangulation(verts, tris), lambda p: 1.0)


def test_mesh_average_rejects_empty_mesh():
    with pytest.raises(ValueError, match="no simplices"):
        mesh_average(Triangulation(np.zeros((0, 2)), np.zeros((0, 0), dtype=int)),
                     lambda p: 1.0)


def test_mesh_average_rejects_design_dimension_mismatch():
    tri = unit_square_fan(1)
    with pytest.raises(ValueError):
        mesh_average(tri, lambda p: 1.0, design=generalized_simpson(2))


def test_triangulation_rejects_bad_indices():
    with pytest.raises(ValueError):
        Triangulation(np.zeros((3, 2)), np.array([[0, 1, 3]]))
