"""Submonoids of Z^n.

Two flavours share one duck-typed interface: finitely generated
(`AffineMonoid`, exact membership with decomposition witnesses) and the
closed catalog of oracle families (`SlopeHalfplane`, `SlopeBounded`,
`VeroneseCongruence`, `WrappedAffine`) whose membership, group of
differences, faces, and "membership somewhere along a ray" predicates all
have closed forms.  The oracle families are what the direct-limit
constructions are made of; every family except the slope halfplane is
finitely generated and simply delegates to its affine realization.

Directional membership is exposed as formulas over the pairings with a
fixed list of normals (see `formulas`), which keeps the unbounded part of
every later computation symbolic and finite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import formulas as fm
from .cones import Cone, NonPointedConeError, hilbert_basis, positive_grading
from .exactlin import (
    Mat,
    Vec,
    dot,
    hnf_solve,
    identity_matrix,
    is_zero_vec,
    lattice_intersection,
    row_basis,
    solve_nonneg,
    vadd,
    vsub,
    zero_vec,
)


class MembershipUndecided(RuntimeError):
    """Bounded search was inconclusive and no certificate is available."""


class ClosureNotRepresentable(ValueError):
    """The integral closure inside the requested ambient monoid is not
    certified to be finitely generated."""


@dataclass(frozen=True)
class Face:
    """A face of a monoid: the submonoid of elements where a set of facet
    inequalities is tight.  `killable` lists the normal indices that
    localizing at the face's monomials can push arbitrarily high."""

    monoid: object
    label: str
    rank: int
    gens: tuple[Vec, ...]
    killable: frozenset[int]
    saturated: tuple[int, ...] = ()
    kind: str = "affine"

    def contains(self, v: Vec) -> bool:
        if self.kind == "affine":
            if not self.monoid.contains(v):
                return False
            normals = self.monoid.formula_normals()
            return all(dot(normals[j], v) == 0 for j in self.saturated)
        if self.kind == "origin":
            return is_zero_vec(v)
        if self.kind == "axis":
            return self.monoid.contains(v) and v[1] == 0
        if self.kind == "all":
            return self.monoid.contains(v)
        raise AssertionError(self.kind)

    def leq(self, other: "Face") -> bool:
        if self.kind == "affine" and other.kind == "affine":
            return set(self.saturated) >= set(other.saturated)
        return self.rank <= other.rank and all(other.contains(g) for g in self.gens)


@dataclass(frozen=True)
class FacePrime:
    """Monomial prime of k[monoid]: exponents of all monomials outside a
    face.  Height is corank of the face in the group of differences."""

    face: Face
    height: int

    @property
    def monoid(self):
        return self.face.monoid

    def contains_exponent(self, v: Vec) -> bool:
        return self.monoid.contains(v) and not self.face.contains(v)

    @property
    def label(self) -> str:
        return f"prime(complement of {self.face.label})"

    def doc(self):
        return {
            "face": self.face.label,
            "face_gens": [list(g) for g in self.face.gens],
            "height": self.height,
        }


def _affine_faces(monoid) -> tuple[Face, ...]:
    from itertools import combinations

    from .cones import _rank

    cone = monoid.cone
    normals = monoid.formula_normals()
    facets = cone.facets
    gens = monoid.generators
    # every face of the cone is spanned by the generators lying on it, so
    # the generator subset identifies the face
    seen = {}
    for size in range(len(facets) + 1):
        for subset in combinations(range(len(facets)), size):
            members = tuple(
                g for g in gens if all(dot(facets[j], g) == 0 for j in subset)
            )
            if members in seen:
                continue
            sat = tuple(
                j
                for j, n in enumerate(normals)
                if all(dot(n, g) == 0 for g in members)
            )
            killable = frozenset(
                j for j, n in enumerate(normals) if any(dot(n, g) > 0 for g in members)
            )
            label = "face[" + ",".join(str(list(g)) for g in members) + "]"
            seen[members] = Face(
                monoid=monoid,
                label=label,
                rank=_rank(members),
                gens=members,
                killable=killable,
                saturated=sat,
                kind="affine",
            )
    return tuple(sorted(seen.values(), key=lambda f: (f.rank, f.gens)))


@dataclass(frozen=True)
class AffineMonoid:
    """Finitely generated submonoid of Z^dim with exact membership."""

    dim: int
    generators: tuple[Vec, ...]

    def __post_init__(self):
        gens = []
        for g in self.generators:
            g = tuple(int(x) for x in g)
            if len(g) != self.dim:
                raise ValueError("generator dimension mismatch")
            if not is_zero_vec(g):
                gens.append(g)
        object.__setattr__(self, "generators", tuple(sorted(set(gens))))

    # -- structure ---------------------------------------------------------

    @cached_property
    def cone(self) -> Cone:
        return Cone(self.dim, self.generators)

    @cached_property
    def group_basis(self) -> Mat:
        """HNF basis of the group of differences."""
        if not self.generators:
            return ()
        return row_basis(self.generators)

    @property
    def gp_rank(self) -> int:
        return len(self.group_basis)

    @cached_property
    def _gp_is_full(self) -> bool:
        return self.group_basis == identity_matrix(self.dim)

    @cached_property
    def grading(self) -> Vec | None:
        return positive_grading(self.generators, self.dim)

    @property
    def pointed(self) -> bool:
        return self.cone.pointed

    @cached_property
    def saturation_basis(self) -> tuple[Vec, ...]:
        """Minimal generators of (cone cap group of differences)."""
        return hilbert_basis(self.generators, self.dim, self.group_basis)

    @cached_property
    def is_normal(self) -> bool:
        self.__dict__["_normality_pending"] = True
        try:
            return all(self.contains(h) for h in self.saturation_basis)
        finally:
            del self.__dict__["_normality_pending"]

    # -- membership --------------------------------------------------------

    def gp_contains(self, v: Vec) -> bool:
        if self._gp_is_full:
            return True
        if not self.group_basis:
            return is_zero_vec(v)
        return hnf_solve(self.group_basis, v) is not None

    def contains(self, v: Vec) -> bool:
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        if is_zero_vec(v):
            return True
        cone = self.cone
        if not all(dot(e, v) == 0 for e in cone.equations):
            return False
        if not all(dot(f, v) >= 0 for f in cone.facets):
            return False
        if not self.gp_contains(v):
            return False
        if "_normality_pending" not in self.__dict__ and self.is_normal:
            return True
        return self.witness(v) is not None

    def witness(self, v: Vec) -> Vec | None:
        """Lexicographically least nonnegative decomposition over the
        generators, or None.  Certified complete for pointed cones."""
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        if is_zero_vec(v):
            return (0,) * len(self.generators)
        lam = self.grading
        if lam is None:
            sols, complete = solve_nonneg(self.generators, v, 32, None)
            if sols:
                return sols[0]
            if not complete:
                raise MembershipUndecided(
                    "membership in a non-pointed monoid was not resolved"
                )
            return None
        bound = max(0, dot(lam, v))
        sols, complete = solve_nonneg(self.generators, v, bound, lam)
        assert complete
        return sols[0] if sols else None

    # -- formulas ----------------------------------------------------------

    @property
    def supports_formulas(self) -> bool:
        return self.is_normal

    def formula_normals(self) -> Mat:
        return self.cone.inequalities

    def member_formula(self, shift: Vec) -> fm.Formula:
        """Degrees a (in shift + gp) with a - shift in the monoid; valid
        when the monoid is normal."""
        atoms = [
            (i, dot(n, shift), None) for i, n in enumerate(self.formula_normals())
        ]
        return fm.formula(fm.conj(*atoms))

    def eventual_formula(
        self, c: Vec, killable: frozenset[int], shift: Vec
    ) -> fm.Formula:
        """Degrees a (in shift + gp) such that a - shift + m*c + u lands in
        the monoid for some m >= 0 and face shift u."""
        atoms = []
        for i, n in enumerate(self.formula_normals()):
            if i in killable or dot(n, c) > 0:
                continue
            atoms.append((i, dot(n, shift), None))
        return fm.formula(fm.conj(*atoms))

    # -- faces --------------------------------------------------------------

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        if not self.pointed:
            raise NonPointedConeError("faces of a non-pointed monoid")
        return _affine_faces(self)

    def face_primes(self) -> tuple[FacePrime, ...]:
        return tuple(
            FacePrime(f, self.gp_rank - f.rank) for f in self.faces
        )

    # -- misc ----------------------------------------------------------------

    def find_positive_shift(self, v: Vec, max_total: int = 16) -> Vec | None:
        """Monoid element u with v + u in the monoid (for exhibiting group
        elements as differences); searched by total generator multiplicity."""
        gens = self.generators
        from itertools import combinations_with_replacement

        for total in range(0, max_total + 1):
            for combo in combinations_with_replacement(range(len(gens)), total):
                u = zero_vec(self.dim)
                for i in combo:
                    u = vadd(u, gens[i])
                if self.contains(vadd(v, u)):
                    return u
        return None

    def to_doc(self):
        return {
            "kind": "affine",
            "dim": self.dim,
            "generators": [list(g) for g in self.generators],
        }

    def __str__(self):
        return f"affine<{','.join(str(list(g)) for g in self.generators)}>"


def _slope_halfplane_faces(m) -> tuple[Face, ...]:
    origin = Face(m, "face[]", 0, (), frozenset(), (), "origin")
    axis = Face(m, "face[[1, 0]]", 1, ((1, 0),), frozenset({0}), (1,), "axis")
    full = Face(m, "face[all]", 2, ((1, 0), (1, 1)), frozenset({0, 1}), (), "all")
    return (origin, axis, full)


@dataclass(frozen=True)
class SlopeHalfplane:
    """All lattice points with positive first coordinate and nonnegative
    second coordinate, together with the origin.  Normal, not finitely
    generated; the model non-affine monoid."""

    dim: int = 2

    family = "slope_halfplane"
    supports_formulas = True

    def __post_init__(self):
        if self.dim != 2:
            raise ValueError("slope halfplane lives in Z^2")

    def contains(self, v: Vec) -> bool:
        if len(v) != 2:
            raise ValueError("dimension mismatch")
        return (v[0] == 0 and v[1] == 0) or (v[0] >= 1 and v[1] >= 0)

    @property
    def group_basis(self) -> Mat:
        return identity_matrix(2)

    @property
    def gp_rank(self) -> int:
        return 2

    def gp_contains(self, v: Vec) -> bool:
        return True

    def formula_normals(self) -> Mat:
        return ((1, 0), (0, 1))

    def member_formula(self, shift: Vec) -> fm.Formula:
        s0, s1 = shift
        return fm.formula(
            fm.conj((0, s0 + 1, None), (1, s1, None)),
            fm.conj((0, s0, s0), (1, s1, s1)),
        )

    def eventual_formula(
        self, c: Vec, killable: frozenset[int], shift: Vec
    ) -> fm.Formula:
        kill0 = (not is_zero_vec(c)) or 0 in killable
        kill1 = c[1] > 0 or 1 in killable
        s0, s1 = shift
        if kill0 and kill1:
            return fm.TRUE
        if kill0:
            return fm.formula(fm.conj((1, s1, None)))
        if kill1:
            return fm.formula(
                fm.conj((0, s0 + 1, None)),
                fm.conj((0, s0, s0), (1, None, s1)),
            )
        return self.member_formula(shift)

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        return _slope_halfplane_faces(self)

    def face_primes(self) -> tuple[FacePrime, ...]:
        return tuple(FacePrime(f, 2 - f.rank) for f in self.faces)

    def to_doc(self):
        return {"kind": "oracle", "family": "slope_halfplane", "dim": 2}

    def __str__(self):
        return "slope_halfplane"


class _RealizedOracle:
    """Mixin for oracle families that equal a finitely generated monoid."""

    @property
    def group_basis(self) -> Mat:
        return self.realization.group_basis

    @property
    def gp_rank(self) -> int:
        return self.realization.gp_rank

    def gp_contains(self, v: Vec) -> bool:
        return self.realization.gp_contains(v)

    supports_formulas = True

    def formula_normals(self) -> Mat:
        return self.realization.formula_normals()

    def member_formula(self, shift: Vec) -> fm.Formula:
        return self.realization.member_formula(shift)

    def eventual_formula(self, c, killable, shift) -> fm.Formula:
        return self.realization.eventual_formula(c, killable, shift)

    @property
    def faces(self) -> tuple[Face, ...]:
        return self.realization.faces

    def face_primes(self) -> tuple[FacePrime, ...]:
        return self.realization.face_primes()


@dataclass(frozen=True)
class SlopeBounded(_RealizedOracle):
    """Lattice points (a, b) with 0 <= b <= n*a: the n-th stage of the
    filtration of the slope halfplane."""

    n: int
    dim: int = 2

    family = "slope_bounded"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("slope bound must be >= 0")
        if self.dim != 2:
            raise ValueError("slope-bounded monoids live in Z^2")

    def contains(self, v: Vec) -> bool:
        if len(v) != 2:
            raise ValueError("dimension mismatch")
        return v[0] >= 0 and v[1] >= 0 and v[1] <= self.n * v[0]

    @cached_property
    def realization(self) -> AffineMonoid:
        return AffineMonoid(2, tuple((1, i) for i in range(self.n + 1)))

    def to_doc(self):
        return {"kind": "oracle", "family": "slope_bounded", "n": self.n, "dim": 2}

    def __str__(self):
        return f"slope_bounded({self.n})"


@dataclass(frozen=True)
class VeroneseCongruence(_RealizedOracle):
    """Nonnegative vectors in Z^s with coordinate sum divisible by d."""

    d: int
    s: int

    family = "veronese"

    def __post_init__(self):
        if self.d < 1 or self.s < 1:
            raise ValueError("need d >= 1 and s >= 1")

    @property
    def dim(self) -> int:
        return self.s

    def contains(self, v: Vec) -> bool:
        if len(v) != self.s:
            raise ValueError("dimension mismatch")
        return all(x >= 0 for x in v) and sum(v) % self.d == 0

    @cached_property
    def realization(self) -> AffineMonoid:
        return veronese_truncation(self.d, self.s)

    def to_doc(self):
        return {"kind": "oracle", "family": "veronese", "d": self.d, "s": self.s}

    def __str__(self):
        return f"veronese({self.d},{self.s})"


@dataclass(frozen=True)
class WrappedAffine(_RealizedOracle):
    """An affine monoid presented behind the oracle interface."""

    monoid: AffineMonoid

    family = "wrapped_affine"

    @property
    def dim(self) -> int:
        return self.monoid.dim

    def contains(self, v: Vec) -> bool:
        return self.monoid.contains(v)

    @property
    def realization(self) -> AffineMonoid:
        return self.monoid

    def to_doc(self):
        return {
            "kind": "oracle",
            "family": "wrapped_affine",
            "dim": self.monoid.dim,
            "generators": [list(g) for g in self.monoid.generators],
        }

    def __str__(self):
        return f"wrapped({self.monoid})"


ORACLE_FAMILIES = (SlopeHalfplane, SlopeBounded, VeroneseCongruence, WrappedAffine)


def is_oracle(m) -> bool:
    return isinstance(m, ORACLE_FAMILIES)


def monoid_from_doc(doc):
    kind = doc.get("kind")
    if kind == "affine":
        return AffineMonoid(int(doc["dim"]), tuple(map(tuple, doc["generators"])))
    if kind == "oracle":
        family = doc.get("family")
        if family == "slope_halfplane":
            return SlopeHalfplane()
        if family == "slope_bounded":
            return SlopeBounded(int(doc["n"]))
        if family == "veronese":
            return VeroneseCongruence(int(doc["d"]), int(doc["s"]))
        if family == "wrapped_affine":
            return WrappedAffine(
                AffineMonoid(int(doc["dim"]), tuple(map(tuple, doc["generators"])))
            )
        raise ValueError(f"unknown oracle family {family!r}")
    raise ValueError(f"unknown monoid kind {kind!r}")


# -- closures and systems ----------------------------------------------------


def integral_closure(
    n_monoid: AffineMonoid, ambient="group", oracle=None
) -> AffineMonoid:
    """Elements of the ambient with a positive multiple inside the monoid:
    the lattice points of the monoid's cone inside the ambient lattice,
    returned via their minimal generators.

    ambient: "group" (group of differences), "full" (all of Z^dim), or
    "oracle" with an oracle monoid whose membership then also filters the
    result; if some minimal generator fails that membership the closure is
    not certified finitely generated and ClosureNotRepresentable is raised.
    """
    if not n_monoid.pointed:
        raise NonPointedConeError("integral closure requires a pointed cone")
    if ambient == "group":
        lattice = n_monoid.group_basis
    elif ambient == "full":
        lattice = identity_matrix(n_monoid.dim)
    elif ambient == "oracle":
        if oracle is None:
            raise ValueError("oracle ambient requires the oracle monoid")
        lattice = oracle.group_basis
    else:
        raise ValueError(f"unknown ambient {ambient!r}")
    hb = hilbert_basis(n_monoid.generators, n_monoid.dim, lattice)
    if ambient == "oracle":
        bad = [h for h in hb if not oracle.contains(h)]
        if bad:
            raise ClosureNotRepresentable(
                f"minimal generator {bad[0]} of the saturation is outside the ambient"
            )
    return AffineMonoid(n_monoid.dim, hb)


def stage_closure(ambient, finite_subset) -> AffineMonoid:
    """The stage attached to a finite subset X of the ambient monoid: the
    integral closure of the monoid generated by X inside the group generated
    by X.  Always normal; always contained in a normal ambient."""
    X = tuple(sorted({tuple(map(int, x)) for x in finite_subset}))
    for x in X:
        if not ambient.contains(x):
            raise ValueError(f"{x} is not in the ambient monoid")
    X = tuple(x for x in X if not is_zero_vec(x))
    if not X:
        return AffineMonoid(ambient.dim, ())
    hb = hilbert_basis(X, ambient.dim, row_basis(X))
    stage = AffineMonoid(ambient.dim, hb)
    bad = [g for g in stage.generators if not ambient.contains(g)]
    if bad:
        raise ValueError(
            f"stage generator {bad[0]} escapes the ambient monoid; ambient not normal?"
        )
    return stage


@dataclass(frozen=True)
class DirectSystem:
    """An inclusion chain of affine stages inside an ambient monoid."""

    ambient: object
    stages: tuple[tuple[tuple[Vec, ...], AffineMonoid], ...]

    def monoids(self):
        return tuple(m for _, m in self.stages)


def slope_filtration(n_max: int) -> DirectSystem:
    """Stages generated by (1,0),...,(1,n) for n = 0..n_max inside the
    slope halfplane."""
    ambient = SlopeHalfplane()
    stages = []
    for n in range(n_max + 1):
        X = tuple((1, i) for i in range(n + 1))
        stages.append((X, AffineMonoid(2, X)))
    return DirectSystem(ambient, tuple(stages))


def veronese_truncation(d: int, s: int) -> AffineMonoid:
    """Minimal generators of {v in N_0^s : d divides sum(v)}."""
    if d < 1 or s < 1:
        raise ValueError("need d >= 1 and s >= 1")
    rows = []
    for i in range(s - 1):
        row = [0] * s
        row[i], row[i + 1] = 1, -1
        rows.append(tuple(row))
    last = [0] * s
    last[-1] = d
    rows.append(tuple(last))
    hb = hilbert_basis(identity_matrix(s), s, tuple(rows))
    return AffineMonoid(s, hb)


def embed(monoid: AffineMonoid, dim: int) -> AffineMonoid:
    """Zero-pad the generators into a larger ambient Z^dim."""
    if dim < monoid.dim:
        raise ValueError("target dimension too small")
    pad = (0,) * (dim - monoid.dim)
    return AffineMonoid(dim, tuple(g + pad for g in monoid.generators))


# -- fullness -----------------------------------------------------------------


@dataclass(frozen=True)
class FullnessVerdict:
    status: str  # "full" | "not_full" | "full_within_box"
    certified: bool
    witness: tuple | None = None  # (v, alpha, alpha_prime) with v = alpha - alpha'

    def __bool__(self):
        return self.status == "full"


def _difference_witness(m: AffineMonoid, v: Vec):
    shift = m.find_positive_shift(v)
    if shift is None:
        return (v, None, None)
    return (v, vadd(v, shift), shift)


def is_full(m: AffineMonoid, n_monoid, box=None) -> FullnessVerdict:
    """Is every difference of elements of `m` that lies in `n_monoid`
    already in `m`?  Decided exactly when the bigger monoid is normal with
    computable cone and lattice; otherwise checked over a degree box."""
    for g in m.generators:
        if not n_monoid.contains(g):
            raise ValueError("first monoid is not contained in the second")
    big_affine = None
    if isinstance(n_monoid, AffineMonoid):
        big_affine = n_monoid
    elif isinstance(n_monoid, _RealizedOracle):
        big_affine = n_monoid.realization
    if big_affine is not None and big_affine.is_normal and m.generators:
        lattice = lattice_intersection(m.group_basis, big_affine.group_basis)
        hb = hilbert_basis(big_affine.generators, big_affine.dim, lattice)
        for h in hb:
            if not m.contains(h):
                return FullnessVerdict("not_full", True, _difference_witness(m, h))
        return FullnessVerdict("full", True)
    if box is None:
        raise ValueError("a degree box is required for this pair")
    for v in box.iter_degrees():
        if m.gp_contains(v) and n_monoid.contains(v) and not m.contains(v):
            return FullnessVerdict("not_full", True, _difference_witness(m, v))
    return FullnessVerdict("full_within_box", False)
