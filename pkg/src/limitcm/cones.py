"""Rational polyhedral cones in exact arithmetic.

Facet/ray duality is computed by an incremental double description run
over the dual side: the extreme rays of {x : <v, x> >= 0 for v in V} are
exactly the facet normals of cone(V) when cone(V) is full dimensional.
Insertion is in lexicographic order and all normal vectors are reduced to
primitive integer representatives, so every derived object (facets, faces,
triangulations, Hilbert bases) is deterministic.

Cones here are small: ambient dimension <= 6 and a few dozen generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from .exactlin import (
    Mat,
    Vec,
    dot,
    hermite_normal_form,
    identity_matrix,
    is_zero_vec,
    lattice_membership,
    primitive,
    row_basis,
    right_kernel,
    saturate_span,
    transpose,
    vadd,
    vneg,
    vsub,
    zero_vec,
)

MAX_DIM = 6


class NonPointedConeError(ValueError):
    """Raised where a construction requires a pointed cone."""


def _rank(rows) -> int:
    """Rank over Q of an integer matrix (fraction-free elimination)."""
    m = [list(map(Fraction, r)) for r in rows if not is_zero_vec(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def dual_description(vectors, dim: int):
    """Extreme rays and lineality basis of {x in Q^dim : <v,x> >= 0 for all v}.

    Incremental double description: the lineality space starts as all of
    Q^dim and each inserted inequality either splits off one lineality
    direction or partitions the current rays, combining adjacent +/- pairs.
    Adjacency is the algebraic test on the rank of the common tight set.
    """
    lineality = [unit for unit in identity_matrix(dim)]
    rays: list[Vec] = []
    tight: dict[Vec, set[int]] = {}
    processed: list[Vec] = []
    ineqs = sorted({primitive(v) for v in vectors if not is_zero_vec(v)})
    for a in ineqs:
        idx = len(processed)
        w = next((v for v in lineality if dot(a, v) != 0), None)
        if w is not None:
            if dot(a, w) < 0:
                w = vneg(w)
            daw = dot(a, w)
            lineality = [
                primitive(tuple(daw * x - dot(a, v) * y for x, y in zip(v, w)))
                for v in lineality
                if v is not w
            ]
            lineality = [v for v in lineality if not is_zero_vec(v)]
            new_rays = []
            new_tight = {}
            for r in rays:
                r2 = primitive(tuple(daw * x - dot(a, r) * y for x, y in zip(r, w)))
                if is_zero_vec(r2):
                    continue
                new_tight[r2] = tight[r] | {idx}
                new_rays.append(r2)
            w = primitive(w)
            # w was in the lineality space, hence tight for every processed
            # inequality, and strictly positive on the new one.
            new_tight[w] = set(range(idx))
            new_rays.append(w)
            rays = new_rays
            tight = new_tight
        else:
            pos = [r for r in rays if dot(a, r) > 0]
            zer = [r for r in rays if dot(a, r) == 0]
            neg = [r for r in rays if dot(a, r) < 0]
            for r in zer:
                tight[r].add(idx)
            if neg:
                target_rank = dim - len(lineality) - 2
                new_rays = pos + zer
                for p in pos:
                    for q in neg:
                        common = tight[p] & tight[q]
                        if _rank([processed[i] for i in common]) != target_rank:
                            continue
                        r = primitive(
                            tuple(dot(a, p) * y - dot(a, q) * x for x, y in zip(p, q))
                        )
                        if is_zero_vec(r):
                            continue
                        tight[r] = common | {idx}
                        new_rays.append(r)
                for q in neg:
                    tight.pop(q, None)
                rays = new_rays
        processed.append(a)
    rays = sorted(set(rays))
    return rays, sorted(lineality)


def _lift_normal(span_basis: Mat, normal_in_coords: Vec) -> Vec:
    """Integer ambient vector pairing with span elements like the coordinate
    normal does: solves B * lam = m by the minimum-norm rational solution."""
    r = len(span_basis)
    n = len(span_basis[0])
    gram = [[Fraction(dot(span_basis[i], span_basis[j])) for j in range(r)] for i in range(r)]
    rhs = [Fraction(x) for x in normal_in_coords]
    # Solve gram * c = rhs, then lam = c^T * B.
    m = [row[:] + [rhs[i]] for i, row in enumerate(gram)]
    for col in range(r):
        piv = next(i for i in range(col, r) if m[i][col])
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(r):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    c = [m[i][r] for i in range(r)]
    lam = [sum(c[i] * span_basis[i][j] for i in range(r)) for j in range(n)]
    den = 1
    for x in lam:
        den = den * x.denominator // gcd(den, x.denominator)
    return primitive(tuple(int(x * den) for x in lam))


@dataclass(frozen=True)
class Cone:
    """Cone generated by integer ray representatives.

    Facets are inner normals within the linear span; `equations` cut out
    the span itself.  A vector is in the cone iff it satisfies every
    equation with = 0 and every facet with >= 0.
    """

    dim: int
    rays: tuple[Vec, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.dim > MAX_DIM:
            raise ValueError(f"dimension above configured maximum {MAX_DIM}")
        cleaned = tuple(sorted({primitive(r) for r in self.rays if not is_zero_vec(r)}))
        object.__setattr__(self, "rays", cleaned)

    @cached_property
    def span_basis(self) -> Mat:
        """Saturated lattice basis of the rational span (Z^dim cap span)."""
        return saturate_span(self.rays, self.dim)

    @cached_property
    def rank(self) -> int:
        return len(self.span_basis)

    def coords(self, v: Vec) -> Vec | None:
        """Coordinates of v within the span lattice, None if outside."""
        if not self.span_basis:
            return () if is_zero_vec(v) else None
        return lattice_membership(self.span_basis, v)

    @cached_property
    def _rays_in_coords(self) -> Mat:
        return tuple(self.coords(r) for r in self.rays)

    @cached_property
    def equations(self) -> Mat:
        """Saturated integer basis of the orthogonal complement of the span."""
        nz = tuple(r for r in self.rays if not is_zero_vec(r))
        if not nz:
            return identity_matrix(self.dim)
        return right_kernel(nz, self.dim)

    @cached_property
    def _facets_in_coords(self) -> Mat:
        if not self.rays:
            return ()
        rays, lin = dual_description(self._rays_in_coords, self.rank)
        assert not lin, "dual of a full-dimensional cone is pointed"
        return tuple(rays)

    @cached_property
    def facets(self) -> Mat:
        """Inner facet normals lifted to ambient integer vectors."""
        if not self.rays:
            return ()
        return tuple(
            sorted(_lift_normal(self.span_basis, m) for m in self._facets_in_coords)
        )

    @cached_property
    def inequalities(self) -> Mat:
        """Facets plus +/- equation pairs: v in cone iff all pairings >= 0."""
        eqs = []
        for e in self.equations:
            eqs.append(e)
            eqs.append(vneg(e))
        return tuple(self.facets) + tuple(sorted(eqs))

    @cached_property
    def pointed(self) -> bool:
        return _rank(self._facets_in_coords) == self.rank

    def contains(self, v: Vec) -> bool:
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        return all(dot(e, v) == 0 for e in self.equations) and all(
            dot(f, v) >= 0 for f in self.facets
        )

    @cached_property
    def extreme_rays(self) -> tuple[Vec, ...]:
        """Primitive extreme ray representatives (subset of `rays` up to scale)."""
        if not self.pointed:
            raise NonPointedConeError("extreme rays of a non-pointed cone")
        out = []
        for r, rc in zip(self.rays, self._rays_in_coords):
            sat = [f for f in self._facets_in_coords if dot(f, rc) == 0]
            if _rank(sat) == self.rank - 1:
                out.append(r)
        return tuple(sorted(set(out)))

    def face_lattice(self):
        """All faces as (saturated facet index set, ray index set, rank),
        ordered by (rank, ray indices).  Includes {0} and the full cone."""
        if not self.pointed:
            raise NonPointedConeError("face lattice of a non-pointed cone")
        facets = self._facets_in_coords
        rays_c = self._rays_in_coords
        seen = {}
        from itertools import combinations

        nfac = len(facets)
        for size in range(nfac + 1):
            for subset in combinations(range(nfac), size):
                members = tuple(
                    i
                    for i, rc in enumerate(rays_c)
                    if all(dot(facets[j], rc) == 0 for j in subset)
                )
                if members in seen:
                    continue
                sat = tuple(
                    j
                    for j in range(nfac)
                    if all(dot(facets[j], rays_c[i]) == 0 for i in members)
                )
                rk = _rank([rays_c[i] for i in members])
                seen[members] = (sat, members, rk)
        return sorted(seen.values(), key=lambda t: (t[2], t[1]))


def positive_grading(generators, dim: int | None = None) -> Vec | None:
    """Integer functional strictly positive on all nonzero generators, or
    None when the generated cone is not pointed.  (Sum of facet normals.)"""
    gens = [g for g in generators if not is_zero_vec(g)]
    if not gens:
        return None
    n = dim if dim is not None else len(gens[0])
    cone = Cone(n, tuple(gens))
    if not cone.pointed:
        return None
    total = zero_vec(n)
    for f in cone.inequalities:
        total = vadd(total, f)
    if any(dot(total, g) <= 0 for g in gens):
        return None
    return total


def cone_facets(generators, dim: int) -> tuple[Vec, ...]:
    """Minimal inequality description of cone(generators): facet normals
    plus +/- pairs for the span equations (empty span gives the inequalities
    cutting out {0})."""
    return Cone(dim, tuple(generators)).inequalities


def _triangulate_coords(rays: list[Vec], rank: int) -> list[tuple[Vec, ...]]:
    """Placing triangulation of a pointed cone given by its extreme rays
    (rank = dimension of the cone's span); returns ray tuples per simplex.

    Recursion: pull the lexicographically least ray v0 and triangulate every
    facet not containing v0, coning each piece with v0.
    """
    rays = sorted(rays)
    if len(rays) == rank:
        return [tuple(rays)]
    sub = Cone(len(rays[0]), tuple(rays))
    v0 = rays[0]
    simplices = []
    for f in sub.facets:
        if dot(f, v0) == 0:
            continue
        on_facet = [r for r in rays if dot(f, r) == 0]
        for part in _triangulate_coords(on_facet, rank - 1):
            simplices.append(tuple(sorted(part + (v0,))))
    return sorted(set(simplices))


def _inverse_fraction(rows: Mat):
    n = len(rows)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next(i for i in range(col, n) if m[i][col])
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return [row[n:] for row in m]


def _parallelepiped_points(w_rows: Mat) -> list[Vec]:
    """Lattice points of {sum t_i w_i : 0 <= t_i < 1} for independent rows,
    one representative per coset of Z^r modulo the row lattice."""
    r = len(w_rows)
    H, _ = hermite_normal_form(w_rows)
    diag = []
    for i in range(r):
        p = next(j for j, x in enumerate(H[i]) if x)
        assert p == i, "square full-rank HNF should be upper triangular"
        diag.append(H[i][i])
    winv = _inverse_fraction(w_rows)
    points = set()
    idx = [0] * r

    def emit(v):
        t = [sum(Fraction(v[i]) * winv[i][j] for i in range(r)) for j in range(r)]
        floors = [x.numerator // x.denominator for x in t]
        p = tuple(
            v[j] - sum(floors[i] * w_rows[i][j] for i in range(r)) for j in range(r)
        )
        points.add(p)

    def rec(i):
        if i == r:
            emit(tuple(idx))
            return
        for c in range(diag[i]):
            idx[i] = c
            rec(i + 1)
        idx[i] = 0

    rec(0)
    return sorted(points)


def hilbert_basis(generators, dim: int, lattice: Mat | None = None) -> tuple[Vec, ...]:
    """Minimal generating set of (cone(generators) cap lattice) as a monoid.

    The lattice defaults to Z^dim and is first cut down to the cone's span.
    Triangulates into simplicial subcones, enumerates each fundamental
    parallelepiped, and reduces the candidates to the irreducible elements.
    Raises NonPointedConeError when the cone contains a line.
    """
    cone = Cone(dim, tuple(generators))
    if not cone.rays:
        return ()
    if not cone.pointed:
        raise NonPointedConeError("Hilbert basis requires a pointed cone")
    if lattice is None:
        lattice = identity_matrix(dim)
    # Lattice points of the cone live in (lattice cap span); write everything
    # in coordinates of that sublattice, where the cone is full dimensional.
    if cone.equations:
        from .exactlin import lattice_intersection

        base = lattice_intersection(row_basis(lattice), cone.span_basis)
    else:
        base = row_basis(lattice)
    if len(base) > cone.rank:
        raise ValueError("lattice exceeds the cone's span")
    if len(base) < cone.rank:
        # only part of the cone is reachable: cut it down to the span of the
        # attainable lattice and restart there
        if not base:
            return ()
        span_eqs = right_kernel(base, dim)
        ineqs = list(cone.inequalities)
        for e in span_eqs:
            ineqs.append(e)
            ineqs.append(vneg(e))
        rays, lin = dual_description(tuple(ineqs), dim)
        if lin:
            raise NonPointedConeError("cut cone is not pointed")
        if not rays:
            return ()
        return hilbert_basis(rays, dim, base)

    def to_coords(v: Vec) -> Vec | None:
        return lattice_membership(base, v)

    rays_c = []
    for r in cone.extreme_rays:
        # smallest positive multiple of the ray lying in the lattice
        c = to_coords(r)
        k = 1
        while c is None:
            k += 1
            c = to_coords(tuple(k * x for x in r))
            if k > 10**6:
                raise ValueError("ray has no multiple in the lattice")
        rays_c.append(primitive(c))
    rank = cone.rank
    sub = Cone(rank, tuple(rays_c))
    facets_c = sub._facets_in_coords

    def in_cone_coords(u: Vec) -> bool:
        return all(dot(f, u) >= 0 for f in facets_c)

    candidates = set(sub.extreme_rays)
    for simplex in _triangulate_coords(list(sub.extreme_rays), rank):
        for p in _parallelepiped_points(simplex):
            if not is_zero_vec(p) and in_cone_coords(p):
                candidates.add(p)
    candidates.discard(zero_vec(rank))
    cand = sorted(candidates)
    basis = []
    for g in cand:
        reducible = False
        for s in cand:
            if s == g:
                continue
            d = vsub(g, s)
            if is_zero_vec(d):
                continue
            if in_cone_coords(d):
                reducible = True
                break
        if not reducible:
            basis.append(g)
    out = []
    for u in basis:
        v = tuple(sum(u[i] * base[i][j] for i in range(rank)) for j in range(cone.dim))
        out.append(v)
    return tuple(sorted(out))


def region_minimal_generators(
    normals: Mat, bounds, lattice: Mat, dim: int
) -> tuple[Vec, ...]:
    """Minimal elements of {x in lattice : <n_i, x> >= b_i} under divisibility
    by the monoid {x in lattice : <n_i, x> >= 0}.

    Homogenizes with a level coordinate t (level 0 is the monoid, level 1 the
    region) and reads the level-1 part of the Hilbert basis of the lifted
    cone.  All bounds must be >= 0 so that level 0 really is the monoid.
    """
    if any(b < 0 for b in bounds):
        raise ValueError("bounds must be >= 0")
    n1 = dim + 1
    ineqs = [tuple(nv) + (-b,) for nv, b in zip(normals, bounds, strict=True)]
    ineqs.append(zero_vec(dim) + (1,))
    rays, lin = dual_description(ineqs, n1)
    if lin:
        raise NonPointedConeError("lifted region cone is not pointed")
    lifted_lattice = tuple(tuple(row) + (0,) for row in lattice) + (
        zero_vec(dim) + (1,),
    )
    hb = hilbert_basis(rays, n1, lifted_lattice)
    return tuple(sorted(v[:-1] for v in hb if v[-1] == 1))
