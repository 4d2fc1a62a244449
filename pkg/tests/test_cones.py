import random
from itertools import product

import pytest

from limitcm.cones import (
    Cone,
    NonPointedConeError,
    cone_facets,
    dual_description,
    hilbert_basis,
    positive_grading,
    region_minimal_generators,
)
from limitcm.exactlin import dot, identity_matrix


def test_facets_2d_slope():
    assert cone_facets(((1, 0), (1, 2)), 2) == ((0, 1), (2, -1))


def test_facets_quadrant():
    assert cone_facets(((1, 0), (0, 1)), 2) == ((0, 1), (1, 0))


def test_facets_ray_in_z1():
    assert cone_facets(((1,),), 1) == ((1,),)


def test_facets_lower_dimensional_ray():
    ineqs = cone_facets(((1, 1),), 2)
    # the ray must be exactly the solution set of the inequalities
    for v in product(range(-4, 5), repeat=2):
        expected = v[0] == v[1] and v[0] >= 0
        assert (all(dot(n, v) >= 0 for n in ineqs)) == expected


def test_redundant_generator_ignored():
    assert cone_facets(((1, 0), (1, 1), (1, 2)), 2) == ((0, 1), (2, -1))


def test_pointedness():
    assert Cone(2, ((1, 0), (1, 2))).pointed
    assert not Cone(2, ((1, 0), (-1, 0))).pointed
    assert not Cone(2, ((1, 0), (-1, 1), (0, -1))).pointed
    assert Cone(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1))).pointed


def test_dual_description_octant():
    rays, lin = dual_description(identity_matrix(3), 3)
    assert not lin
    assert sorted(rays) == sorted(identity_matrix(3))


def test_extreme_rays_drop_interior():
    c = Cone(2, ((1, 0), (1, 1), (1, 2)))
    assert c.extreme_rays == ((1, 0), (1, 2))


def test_face_lattice_2d():
    c = Cone(2, ((1, 0), (1, 2)))
    faces = c.face_lattice()
    ranks = [f[2] for f in faces]
    assert ranks == [0, 1, 1, 2]


def test_positive_grading():
    lam = positive_grading(((1, 0), (1, 2)))
    assert lam is not None
    assert dot(lam, (1, 0)) > 0 and dot(lam, (1, 2)) > 0
    assert positive_grading(((1, 0), (-1, 0))) is None


def test_hilbert_basis_slope_two():
    hb = hilbert_basis(((1, 0), (1, 2)), 2)
    assert hb == ((1, 0), (1, 1), (1, 2))


def test_hilbert_basis_slope_three():
    hb = hilbert_basis(((1, 0), (1, 3)), 2)
    assert hb == ((1, 0), (1, 1), (1, 2), (1, 3))


def test_hilbert_basis_ray_full_lattice():
    assert hilbert_basis(((2,), (3,)), 1) == ((1,),)


def test_hilbert_basis_respects_lattice():
    # even-sum sublattice of Z^2 inside the quadrant
    lat = ((1, 1), (0, 2))
    hb = hilbert_basis(((1, 0), (0, 1)), 2, lat)
    assert hb == ((0, 2), (1, 1), (2, 0))


def test_hilbert_basis_lower_dim_ray_in_plane():
    assert hilbert_basis(((2, 2),), 2) == ((1, 1),)


def test_hilbert_basis_nonpointed_rejected():
    with pytest.raises(NonPointedConeError):
        hilbert_basis(((1, 0), (-1, 0)), 2)


def in_cone(facets, v):
    return all(dot(f, v) >= 0 for f in facets)


def test_hilbert_basis_random_properties():
    rng = random.Random(11)
    for _ in range(25):
        d = rng.choice([2, 3])
        gens = tuple(
            (1,) + tuple(rng.randint(-4, 4) for _ in range(d - 1))
            for _ in range(rng.randint(2, 4))
        )
        hb = hilbert_basis(gens, d)
        cone = Cone(d, gens)
        ineqs = cone.inequalities
        # (a) every cone lattice point in a small box decomposes over hb
        from limitcm.exactlin import solve_nonneg

        for v in product(range(-3, 6), repeat=d):
            if in_cone(ineqs, v):
                sols, complete = solve_nonneg(hb, v, 12)
                assert sols, (gens, hb, v)
        # (b) minimality: no element is a sum of two nonzero cone points
        for i, g in enumerate(hb):
            for s in hb:
                diff = tuple(a - b for a, b in zip(g, s))
                if s != g and any(diff) and in_cone(ineqs, diff):
                    raise AssertionError((gens, hb, g, s))
        # (c) idempotence
        assert hilbert_basis(hb, d) == hb


def test_region_minimal_generators_colon_shape():
    # region b >= 1 inside the slope-2 cone: minimal points (1,1) and (1,2)
    normals = ((0, 1), (2, -1))
    gens = region_minimal_generators(normals, (1, 0), identity_matrix(2), 2)
    assert gens == ((1, 1), (1, 2))


def test_region_minimal_generators_trivial_bounds():
    normals = ((0, 1), (2, -1))
    gens = region_minimal_generators(normals, (0, 0), identity_matrix(2), 2)
    assert gens == ((0, 0),)
