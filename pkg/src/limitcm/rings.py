"""Monoid rings k[C] and their monomial quotients: exact element
arithmetic, monomial-ideal calculus (colon, sum, product, intersection),
monomial primes, heights, and zerodivisor tests.

A monomial ideal is stored by its minimal generator exponents and denotes
the exponent set union of (g + C).  Over a normal affine monoid every
operation here is certified complete; over the oracle families results
that cannot be finite are reported within an exponent box and flagged.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

from .cones import region_minimal_generators
from .exactlin import Vec, dot, is_zero_vec, vadd, vsub, zero_vec
from .fields import QQ, field_from_doc
from .monoids import AffineMonoid, FacePrime, is_oracle, monoid_from_doc


class UncertifiedOperation(RuntimeError):
    """An exact answer was requested where only a box-truncated one exists."""


# -- elements -----------------------------------------------------------------


@dataclass(frozen=True)
class RingElement:
    """Element of k[C]: finite support map exponent -> nonzero scalar."""

    monoid: object
    field: object
    terms: tuple  # sorted tuple of (exponent, scalar)

    @staticmethod
    def make(monoid, field, term_map) -> "RingElement":
        clean = []
        for e, c in sorted(term_map.items()):
            c = field(c)
            if c == field.zero:
                continue
            if not monoid.contains(e):
                raise ValueError(f"exponent {e} is outside the monoid")
            clean.append((tuple(e), c))
        return RingElement(monoid, field, tuple(clean))

    @staticmethod
    def monomial(monoid, field, exponent, coeff=1) -> "RingElement":
        return RingElement.make(monoid, field, {tuple(exponent): coeff})

    @staticmethod
    def zero(monoid, field) -> "RingElement":
        return RingElement(monoid, field, ())

    @staticmethod
    def one(monoid, field) -> "RingElement":
        return RingElement.make(monoid, field, {zero_vec(monoid.dim): 1})

    def _check(self, other):
        if self.monoid != other.monoid or self.field != other.field:
            raise ValueError("monoid/field mismatch")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, self.field.zero) + c
        return RingElement.make(self.monoid, self.field, acc)

    def __neg__(self):
        return RingElement(
            self.monoid, self.field, tuple((e, -c) for e, c in self.terms)
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        acc = {}
        f = self.field
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = vadd(e1, e2)
                acc[e] = acc.get(e, f.zero) + c1 * c2
        return RingElement.make(self.monoid, self.field, acc)

    def scalar_mul(self, c):
        c = self.field(c)
        return RingElement.make(
            self.monoid, self.field, {e: c * x for e, x in self.terms}
        )

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def support(self):
        return tuple(e for e, _ in self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            mono = "1" if is_zero_vec(e) else "t[" + ",".join(map(str, e)) + "]"
            if is_zero_vec(e):
                parts.append(str(c))
            elif c == self.field.one:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


_TERM_RE = re.compile(
    r"^\s*(?:(?P<coef>-?\d+(?:/\d+)?)\s*\*\s*)?t\[(?P<exps>[-\d,\s]*)\]\s*$"
    r"|^\s*(?P<const>-?\d+(?:/\d+)?)\s*$"
)


def parse_element(text: str, monoid, field=QQ) -> RingElement:
    """Parse "c*t[a,b] + d*t[e,f] - ..." (or bare rational constants)."""
    text = text.strip()
    if not text:
        raise ValueError("empty element text")
    chunks = re.split(r"(?<=[\]\d])\s*([+-])\s*(?=[-\d]|t\[|\d)", text)
    acc: dict = {}
    sign = 1
    pending = chunks[0]
    items = [(1, pending)]
    i = 1
    while i < len(chunks):
        op, term = chunks[i], chunks[i + 1]
        items.append((1 if op == "+" else -1, term))
        i += 2
    for sgn, raw in items:
        m = _TERM_RE.match(raw)
        if not m:
            raise ValueError(f"cannot parse term {raw!r}")
        if m.group("const") is not None:
            e = zero_vec(monoid.dim)
            c = Fraction(m.group("const"))
        else:
            exps = m.group("exps").strip()
            e = tuple(int(x) for x in exps.split(",")) if exps else ()
            if len(e) != monoid.dim:
                raise ValueError(f"exponent {e} has wrong dimension")
            c = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        acc[e] = acc.get(e, Fraction(0)) + sgn * c
    return RingElement.make(monoid, field, acc)


def parse_sequence(text: str, monoid) -> tuple[Vec, ...]:
    """Comma-separated monomials "t[1,0],t[1,1]" -> exponent tuples."""
    out = []
    for chunk in re.findall(r"t\[([-\d,\s]*)\]", text):
        e = tuple(int(x) for x in chunk.split(",")) if chunk.strip() else ()
        if len(e) != monoid.dim:
            raise ValueError(f"exponent {e} has wrong dimension")
        out.append(e)
    if not out:
        raise ValueError(f"no monomials found in {text!r}")
    return tuple(out)


# -- monomial ideals -----------------------------------------------------------


def _minimalize(monoid, exps) -> tuple[Vec, ...]:
    """Reduce to pairwise incomparable exponents under monoid divisibility."""
    uniq = sorted(set(map(tuple, exps)))
    kept = []
    for g in uniq:
        redundant = False
        for h in uniq:
            if h != g and monoid.contains(vsub(g, h)):
                redundant = True
                break
        if redundant:
            continue
        kept.append(g)
    return tuple(kept)


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal of k[C] given by minimal generator exponents."""

    monoid: object
    generators: tuple[Vec, ...]

    def __post_init__(self):
        for g in self.generators:
            if not self.monoid.contains(g):
                raise ValueError(f"generator {g} is outside the monoid")
        object.__setattr__(
            self, "generators", _minimalize(self.monoid, self.generators)
        )

    @staticmethod
    def zero(monoid) -> "MonomialIdeal":
        return MonomialIdeal(monoid, ())

    @property
    def is_zero(self) -> bool:
        return not self.generators

    @property
    def mu(self) -> int:
        """Number of minimal monomial generators."""
        return len(self.generators)

    def contains_exponent(self, e: Vec) -> bool:
        return any(self.monoid.contains(vsub(e, g)) for g in self.generators)

    def is_proper(self) -> bool:
        return not self.contains_exponent(zero_vec(self.monoid.dim))

    def __le__(self, other: "MonomialIdeal") -> bool:
        return all(other.contains_exponent(g) for g in self.generators)

    def membership_witnesses(self, element: RingElement):
        """Per-monomial witnesses: exponent -> (generator, decomposition) or
        None; the element lies in the ideal iff every entry is non-None."""
        out = {}
        for e in element.support():
            hit = None
            for g in self.generators:
                d = vsub(e, g)
                if self.monoid.contains(d):
                    wit = (
                        self.monoid.witness(d)
                        if isinstance(self.monoid, AffineMonoid)
                        else None
                    )
                    hit = (g, wit)
                    break
            out[e] = hit
        return out

    def contains_element(self, element: RingElement) -> bool:
        return all(w is not None for w in self.membership_witnesses(element).values())

    def to_doc(self):
        return {
            "monoid": self.monoid.to_doc(),
            "generators": [list(g) for g in self.generators],
        }

    def __str__(self):
        if not self.generators:
            return "(0)"
        return "(" + ", ".join("t" + str(list(g)) for g in self.generators) + ")"


def ideal_from_doc(doc) -> MonomialIdeal:
    monoid = monoid_from_doc(doc["monoid"])
    return MonomialIdeal(monoid, tuple(map(tuple, doc.get("generators", ()))))


def ideal_sum(i1: MonomialIdeal, i2: MonomialIdeal) -> MonomialIdeal:
    if i1.monoid != i2.monoid:
        raise ValueError("monoid mismatch")
    return MonomialIdeal(i1.monoid, i1.generators + i2.generators)


def ideal_product(i1: MonomialIdeal, i2: MonomialIdeal) -> MonomialIdeal:
    if i1.monoid != i2.monoid:
        raise ValueError("monoid mismatch")
    gens = tuple(vadd(a, b) for a in i1.generators for b in i2.generators)
    return MonomialIdeal(i1.monoid, gens)


# -- modules over a normal affine monoid ---------------------------------------


def _region_bounds(monoid: AffineMonoid, lower_pts) -> tuple:
    """Facet bounds for the set of monoid lattice points v with v - p in the
    cone for some... no: for all p in lower_pts (intersection of shifts)."""
    normals = monoid.formula_normals()
    bounds = []
    for n in normals:
        b = 0
        for p in lower_pts:
            b = max(b, dot(n, p))
        bounds.append(b)
    return tuple(bounds)


def _region_min_gens(monoid: AffineMonoid, lower_pts) -> tuple[Vec, ...]:
    """Minimal monoid elements v with v - p in cone(monoid) for every p in
    lower_pts; exact for normal monoids."""
    normals = monoid.formula_normals()
    bounds = _region_bounds(monoid, lower_pts)
    return region_minimal_generators(
        normals, bounds, monoid.group_basis, monoid.dim
    )


def module_intersection(monoid: AffineMonoid, gens1, gens2) -> tuple[Vec, ...]:
    """Minimal generators of the intersection of two monomial modules given
    by generator exponents (normal affine monoids only)."""
    out = set()
    for a in gens1:
        for b in gens2:
            out.update(_region_min_gens(monoid, (a, b)))
    return _minimalize(monoid, out)


@dataclass(frozen=True)
class ColonResult:
    """Generators of a colon (or intersection) with its certification."""

    monoid: object
    generators: tuple[Vec, ...]
    certified: bool
    box_bound: int | None = None  # exponent box half-width when truncated

    def ideal(self) -> MonomialIdeal:
        if not self.certified:
            raise UncertifiedOperation(
                "box-truncated generator list does not define the full ideal"
            )
        return MonomialIdeal(self.monoid, self.generators)

    def same_exponents(self, other: "ColonResult | MonomialIdeal") -> bool:
        """Equality of the generated exponent sets; exact when both sides are
        certified, otherwise compared across the smaller exponent box."""
        certified_other = isinstance(other, MonomialIdeal) or other.certified
        if self.certified and certified_other:
            a = MonomialIdeal(self.monoid, self.generators)
            b = MonomialIdeal(self.monoid, other.generators)
            return a.generators == b.generators
        bound = min(
            x
            for x in (self.box_bound, getattr(other, "box_bound", None))
            if x is not None
        )
        a = MonomialIdeal(self.monoid, self.generators)
        b = MonomialIdeal(self.monoid, other.generators)
        return all(
            a.contains_exponent(v) == b.contains_exponent(v)
            for v in _exponent_box(self.monoid, bound)
        )


def _exponent_box(monoid, bound: int):
    for v in product(range(0, bound + 1), repeat=monoid.dim):
        if monoid.contains(v):
            yield v


def colon(
    ideal: MonomialIdeal, by, box_bound: int = 8
) -> ColonResult:
    """Colon of a monomial ideal by a monomial exponent or another monomial
    ideal: all monoid exponents d with d + j inside the ideal for every
    generator j.

    Certified complete over normal affine monoids; box-truncated (with the
    exponent box half-width recorded) elsewhere.
    """
    monoid = ideal.monoid
    if isinstance(by, MonomialIdeal):
        if by.monoid != monoid:
            raise ValueError("monoid mismatch")
        js = by.generators
    else:
        js = (tuple(by),)
    for j in js:
        if not monoid.contains(j):
            raise ValueError(f"colon by {j}: not a monoid element")
    if ideal.is_zero:
        return ColonResult(monoid, (), True)
    if isinstance(monoid, AffineMonoid) and monoid.supports_formulas:
        current: tuple[Vec, ...] | None = None
        for j in js:
            gens_j = set()
            for g in ideal.generators:
                v = vsub(g, j)
                gens_j.update(_region_min_gens(monoid, (zero_vec(monoid.dim), v)))
            gens_j = _minimalize(monoid, gens_j)
            current = (
                gens_j
                if current is None
                else module_intersection(monoid, current, gens_j)
            )
        return ColonResult(monoid, tuple(current), True)
    # oracle / non-normal: enumerate the exponent box and minimalize there
    hits = []
    for d in _exponent_box(monoid, box_bound):
        if all(ideal.contains_exponent(vadd(d, j)) for j in js):
            hits.append(d)
    return ColonResult(monoid, _minimalize(monoid, hits), False, box_bound)


def ideal_intersection(
    i1: MonomialIdeal, i2: MonomialIdeal, box_bound: int = 8
) -> ColonResult:
    if i1.monoid != i2.monoid:
        raise ValueError("monoid mismatch")
    monoid = i1.monoid
    if i1.is_zero or i2.is_zero:
        return ColonResult(monoid, (), True)
    if isinstance(monoid, AffineMonoid) and monoid.supports_formulas:
        gens = module_intersection(monoid, i1.generators, i2.generators)
        return ColonResult(monoid, gens, True)
    hits = [
        d
        for d in _exponent_box(monoid, box_bound)
        if i1.contains_exponent(d) and i2.contains_exponent(d)
    ]
    return ColonResult(monoid, _minimalize(monoid, hits), False, box_bound)


# -- quotient rings -------------------------------------------------------------


@dataclass(frozen=True)
class QuotientRing:
    """k[C]/I for a monomial ideal I; graded piece at a is k iff a is in
    C minus the exponent set of I."""

    monoid: object
    modulus: MonomialIdeal
    field: object = QQ

    def __post_init__(self):
        if self.modulus.monoid != self.monoid:
            raise ValueError("modulus lives over a different monoid")
        if not self.modulus.is_proper():
            raise ValueError("modulus contains a unit")

    @staticmethod
    def monoid_ring(monoid, field=QQ) -> "QuotientRing":
        return QuotientRing(monoid, MonomialIdeal.zero(monoid), field)

    @property
    def dim(self) -> int:
        return self.monoid.dim

    def piece_nonzero(self, a: Vec) -> bool:
        return self.monoid.contains(a) and not self.modulus.contains_exponent(a)

    def monomial_nonzero(self, e: Vec) -> bool:
        return self.piece_nonzero(e)

    def krull_dim(self) -> int:
        if not self.modulus.is_zero:
            raise ValueError("dimension is only computed for the monoid ring itself")
        return self.monoid.gp_rank

    def to_doc(self):
        doc = {"monoid": self.monoid.to_doc(), "field": self.field.doc()}
        if not self.modulus.is_zero:
            doc["ideal"] = [list(g) for g in self.modulus.generators]
        return doc

    def __str__(self):
        base = f"k[{self.monoid}]"
        if self.modulus.is_zero:
            return base
        return f"{base}/{self.modulus}"


def ring_from_doc(doc) -> QuotientRing:
    monoid = monoid_from_doc(doc["monoid"])
    field = field_from_doc(doc.get("field", "Q"))
    gens = tuple(map(tuple, doc.get("ideal", ())))
    return QuotientRing(monoid, MonomialIdeal(monoid, gens), field)


# -- monomial primes ------------------------------------------------------------


def face_primes_over(ring: QuotientRing, extra_gens=()) -> tuple[FacePrime, ...]:
    """Face primes of the underlying monoid containing (modulus + extra)."""
    gens = tuple(extra_gens) + ring.modulus.generators
    primes = []
    for p in ring.monoid.face_primes():
        if all(p.contains_exponent(g) for g in gens):
            primes.append(p)
    return tuple(primes)


def min_face_primes(ring: QuotientRing, ideal_gens) -> tuple[FacePrime, ...]:
    """Minimal monomial primes over the ideal generated by `ideal_gens` in
    the quotient ring: maximal faces avoiding all generators (including the
    modulus).  Monomial scope: only face primes are inspected."""
    gens = tuple(ideal_gens)
    if not gens and ring.modulus.is_zero:
        raise ValueError("zero ideal has no minimal primes over it")
    containing = face_primes_over(ring, gens)
    out = []
    for p in containing:
        strictly_below = any(
            q is not p and p.face.leq(q.face) and q.face != p.face for q in containing
        )
        if not strictly_below:
            out.append(p)
    return tuple(sorted(out, key=lambda p: (p.height, p.face.gens)))


def height(ring: QuotientRing, ideal_gens) -> int:
    """Height of a nonzero monomial ideal of the monoid ring: the minimum
    height of a face prime containing it (monomial scope)."""
    if not ring.modulus.is_zero:
        raise ValueError("height is computed in the monoid ring itself")
    gens = tuple(ideal_gens)
    if not gens:
        return 0
    return min(p.height for p in min_face_primes(ring, gens))


def is_zerodivisor(ring: QuotientRing, e: Vec, box_bound: int = 8):
    """Is the class of the monomial with exponent e a zerodivisor?

    Returns (verdict, witness_exponent_or_None, certified).  The witness w
    satisfies: w is nonzero in the ring and w + e lies in the modulus.
    """
    if not ring.monoid.contains(e):
        raise ValueError(f"{e} is not a monoid element")
    if not ring.piece_nonzero(e):
        raise ValueError(f"monomial {e} is zero in the ring")
    res = colon(ring.modulus, e, box_bound=box_bound)
    for w in res.generators:
        if not ring.modulus.contains_exponent(w):
            return True, w, True  # an explicit witness certifies itself
    if ring.modulus.is_zero:
        return False, None, True  # monoid rings are domains
    return False, None, res.certified
