import random

from hypothesis import given, strategies as st

from limitcm.exactlin import (
    hermite_normal_form,
    hnf_solve,
    identity_matrix,
    lattice_intersection,
    lattice_membership,
    left_kernel,
    matmul,
    right_kernel,
    row_basis,
    saturate_span,
    solve_nonneg,
    xgcd,
)


def det2(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def test_xgcd():
    for a, b in [(2, 3), (0, 5), (-4, 6), (12, 18), (0, 0), (-7, -21)]:
        x, y, g = xgcd(a, b)
        assert x * a + y * b == g
        assert g >= 0


def test_hnf_identity():
    ident = identity_matrix(2)
    h, u = hermite_normal_form(ident)
    assert h == ident
    assert u == ident


def test_hnf_known_2x2():
    h, u = hermite_normal_form(((2, 0), (1, 1)))
    assert row_basis(((2, 0), (1, 1))) == ((1, 1), (0, 2))
    assert matmul(u, ((2, 0), (1, 1))) == h


def test_hnf_gcd_column():
    assert row_basis(((2,), (3,))) == ((1,),)


@given(
    st.lists(
        st.tuples(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9)),
        min_size=1,
        max_size=5,
    )
)
def test_hnf_properties(rows):
    m = tuple(rows)
    h, u = hermite_normal_form(m)
    assert matmul(u, m) == h
    # row lattices coincide: random small vectors are members of one iff the other
    rng = random.Random(7)
    for _ in range(10):
        coeffs = [rng.randint(-3, 3) for _ in rows]
        v = tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(3))
        assert lattice_membership(h, v) is not None
        assert lattice_membership(m, v) is not None


def test_lattice_membership_basic():
    assert lattice_membership(((1, 0), (0, 1)), (5, -3)) == (5, -3)
    assert lattice_membership(((1, 0), (1, 2)), (0, 1)) is None
    assert lattice_membership(((2,),), (3,)) is None
    assert lattice_membership(((2,),), (-6,)) == (-3,)


def test_lattice_membership_expresses_in_original_basis():
    basis = ((2, 1), (1, 1))
    v = (7, 4)
    coeffs = lattice_membership(basis, v)
    assert coeffs is not None
    got = tuple(
        sum(c * row[j] for c, row in zip(coeffs, basis)) for j in range(2)
    )
    assert got == v


def test_kernels():
    assert left_kernel(((1, 2), (2, 4))) == ((2, -1),) or left_kernel(
        ((1, 2), (2, 4))
    ) == ((-2, 1),)
    k = right_kernel(((1, 2, 3),), 3)
    assert len(k) == 2
    for w in k:
        assert sum(a * b for a, b in zip((1, 2, 3), w)) == 0


def test_saturate_span():
    sat = saturate_span(((2, 2),), 2)
    assert sat == ((1, 1),)
    assert saturate_span(((1, 0), (0, 2)), 2) == ((1, 0), (0, 1))


def test_lattice_intersection():
    # even-b lattice cap even-a lattice
    b1 = ((1, 0), (0, 2))
    b2 = ((2, 0), (0, 1))
    inter = lattice_intersection(b1, b2)
    assert lattice_membership(inter, (2, 2)) is not None
    assert lattice_membership(inter, (1, 2)) is None
    assert lattice_membership(inter, (2, 1)) is None


def test_solve_nonneg_examples():
    sols, complete = solve_nonneg(((1, 0), (1, 2)), (3, 2), 3)
    assert sols == [(2, 1)]
    assert complete
    sols, complete = solve_nonneg(((1, 0), (1, 2)), (1, 1), 3)
    assert sols == []
    assert complete
    sols, complete = solve_nonneg(((1, 0), (1, 2)), (0, 0), 3)
    assert sols == [(0, 0)]
    assert complete


def test_solve_nonneg_agrees_with_bruteforce():
    rng = random.Random(3)
    for _ in range(40):
        k = rng.randint(1, 3)
        rows = tuple(
            tuple(rng.randint(0, 3) for _ in range(2)) for _ in range(k)
        )
        rows = tuple((r[0] + 1, r[1]) for r in rows)  # first coord > 0: pointed
        target = tuple(
            sum(rng.randint(0, 2) * r[j] for r in rows) for j in range(2)
        )
        sols, complete = solve_nonneg(rows, target, 8)
        brute = []
        from itertools import product

        for xs in product(range(9), repeat=k):
            if all(
                sum(x * r[j] for x, r in zip(xs, rows)) == target[j]
                for j in range(2)
            ):
                brute.append(xs)
        assert sorted(sols) == sorted(brute)
        if complete:
            # certified: nothing new appears with a larger box
            more, _ = solve_nonneg(rows, target, 12)
            assert sorted(more) == sorted(brute)
