"""Exact integer linear algebra over Z: Hermite forms, kernels, lattice
membership, and bounded nonnegative solving.

Vectors are tuples of Python ints (arbitrary precision), matrices are
tuples of equal-length row vectors.  All functions are pure and
deterministic; nothing here ever rounds.
"""

from __future__ import annotations

from math import gcd

Vec = tuple
Mat = tuple


def vec(xs) -> Vec:
    return tuple(int(x) for x in xs)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(k: int, a: Vec) -> Vec:
    return tuple(k * x for x in a)


def dot(a: Vec, b: Vec) -> int:
    return sum(x * y for x, y in zip(a, b, strict=True))


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def zero_vec(n: int) -> Vec:
    return (0,) * n


def unit_vec(i: int, n: int) -> Vec:
    return tuple(1 if j == i else 0 for j in range(n))


def primitive(a: Vec) -> Vec:
    """Divide out the gcd of the coordinates (zero vector is returned as is)."""
    g = 0
    for x in a:
        g = gcd(g, x)
    if g <= 1:
        return tuple(a)
    return tuple(x // g for x in a)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) and g >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def transpose(rows: Mat) -> Mat:
    if not rows:
        return ()
    return tuple(zip(*rows, strict=True))


def identity_matrix(n: int) -> Mat:
    return tuple(unit_vec(i, n) for i in range(n))


def matmul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(r, c) for c in bt) for r in a)


def hermite_normal_form(rows: Mat) -> tuple[Mat, Mat]:
    """Row Hermite normal form with transformation.

    Returns (H, U) with U unimodular (|det U| = 1) and U*M = H, where H is
    in row echelon form with positive pivots and entries above each pivot
    reduced into [0, pivot).  Zero rows of H sit at the bottom; the row
    lattice of H equals that of M.
    """
    if not rows:
        raise ValueError("empty matrix")
    n = len(rows[0])
    H = [list(r) for r in rows]
    m = len(H)
    U = [list(unit_vec(i, m)) for i in range(m)]
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, m):
            if H[i][col]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            H[r], H[piv] = H[piv], H[r]
            U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            if H[i][col] == 0:
                continue
            a, b = H[r][col], H[i][col]
            x, y, g = xgcd(a, b)
            ag, mbg = a // g, -(b // g)
            H[r], H[i] = (
                [x * p + y * q for p, q in zip(H[r], H[i])],
                [mbg * p + ag * q for p, q in zip(H[r], H[i])],
            )
            U[r], U[i] = (
                [x * p + y * q for p, q in zip(U[r], U[i])],
                [mbg * p + ag * q for p, q in zip(U[r], U[i])],
            )
        if H[r][col] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][col] // H[r][col]
            if q:
                H[i] = [p - q * s for p, s in zip(H[i], H[r])]
                U[i] = [p - q * s for p, s in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    return tuple(map(tuple, H)), tuple(map(tuple, U))


def row_basis(rows: Mat) -> Mat:
    """Nonzero rows of the HNF: a canonical basis of the row lattice."""
    if not rows:
        return ()
    H, _ = hermite_normal_form(rows)
    return tuple(r for r in H if not is_zero_vec(r))


def hnf_solve(hnf_rows: Mat, v: Vec) -> Vec | None:
    """Solve y * H = v for integer y, H a zero-row-free row HNF.

    Returns the coefficient vector or None when v is not in the row
    lattice.  Back-substitutes along the pivot columns.
    """
    rem = list(v)
    coeffs = []
    for row in hnf_rows:
        p = next(j for j, x in enumerate(row) if x)
        q, s = divmod(rem[p], row[p])
        if s:
            return None
        coeffs.append(q)
        if q:
            rem = [a - q * b for a, b in zip(rem, row)]
    if any(rem):
        return None
    return tuple(coeffs)


def lattice_membership(basis: Mat, v: Vec) -> Vec | None:
    """Integer coordinates of v in the row lattice of `basis`, or None."""
    if not basis:
        return None if any(v) else ()
    if len(v) != len(basis[0]):
        raise ValueError("dimension mismatch")
    H, U = hermite_normal_form(basis)
    nonzero = [i for i, r in enumerate(H) if not is_zero_vec(r)]
    y = hnf_solve(tuple(H[i] for i in nonzero), v)
    if y is None:
        return None
    full = [0] * len(basis)
    for i, q in zip(nonzero, y):
        full[i] = q
    x = tuple(sum(full[i] * U[i][j] for i in range(len(basis))) for j in range(len(basis)))
    return x


def left_kernel(rows: Mat) -> Mat:
    """Basis of {u : u*M = 0}; saturated since U is unimodular."""
    if not rows:
        return ()
    H, U = hermite_normal_form(rows)
    return tuple(U[i] for i in range(len(H)) if is_zero_vec(H[i]))


def right_kernel(rows: Mat, ncols: int | None = None) -> Mat:
    """Basis of {w : M*w^T = 0} as row vectors of length ncols."""
    if not rows:
        n = ncols
        if n is None:
            raise ValueError("ncols required for empty matrix")
        return identity_matrix(n)
    return left_kernel(transpose(rows))


def saturate_span(rows: Mat, dim: int) -> Mat:
    """HNF basis of Z^dim intersected with the rational span of the rows."""
    nz = tuple(r for r in rows if not is_zero_vec(r))
    if not nz:
        return ()
    perp = right_kernel(nz, dim)
    if not perp:
        return identity_matrix(dim)
    sat = right_kernel(perp, dim)
    return row_basis(sat)


def lattice_intersection(b1: Mat, b2: Mat) -> Mat:
    """HNF basis of the intersection of two row lattices in the same Z^n."""
    if not b1 or not b2:
        return ()
    stacked = tuple(b1) + tuple(b2)
    kern = left_kernel(stacked)
    k1 = len(b1)
    vecs = []
    for u in kern:
        # u = (u1 | u2) with u1*b1 + u2*b2 = 0, so u1*b1 = -(u2*b2) is common.
        x = tuple(sum(u[i] * b1[i][j] for i in range(k1)) for j in range(len(b1[0])))
        if not is_zero_vec(x):
            vecs.append(x)
    if not vecs:
        return ()
    return row_basis(tuple(vecs))


def solve_nonneg(rows: Mat, target: Vec, bound: int, grading: Vec | None = None):
    """All x >= 0 with x*M = target and every x_i <= bound.

    `grading` is a vector with positive pairing against every row (a
    pointedness certificate); when supplied, solutions are capped by
    grading(target)/grading(row) and the enumeration is certified complete
    whenever those caps fit under `bound`.  Without it the search is
    box-truncated.  Returns (solutions, complete) with solutions in
    lexicographic order.
    """
    if bound < 0:
        raise ValueError("bound must be >= 0")
    if not rows:
        return ([()] if is_zero_vec(target) else [], True)
    if len(rows[0]) != len(target):
        raise ValueError("dimension mismatch")
    if grading is None:
        from . import cones

        grading = cones.positive_grading(rows)
    k = len(rows)
    caps = [bound] * k
    complete = grading is not None
    if grading is not None:
        gt = dot(grading, target)
        if gt < 0:
            return [], True
        for i, row in enumerate(rows):
            gr = dot(grading, row)
            if gr <= 0:
                complete = False
                continue
            cap = gt // gr
            if cap < caps[i]:
                caps[i] = cap
            elif cap > bound:
                complete = False
    sols = []
    x = [0] * k

    def rec(i: int, rem: tuple, grem: int | None):
        if i == k:
            if all(v == 0 for v in rem):
                sols.append(tuple(x))
            return
        row = rows[i]
        gr = dot(grading, row) if grading is not None else 0
        cur = rem
        g = grem
        for c in range(0, caps[i] + 1):
            if g is not None and g < 0:
                break
            x[i] = c
            rec(i + 1, cur, g)
            cur = tuple(a - b for a, b in zip(cur, row))
            if g is not None:
                g -= gr
        x[i] = 0

    rec(0, tuple(target), dot(grading, target) if grading is not None else None)
    return sols, complete
