"""Exact coefficient fields (Q and F_p) and the small dense linear algebra
the homology slices need: rank, kernels, solving, induced quotient maps.

Matrices are lists of rows of field scalars and act on column vectors, so a
matrix with `ncols` columns maps a space of dimension ncols to one of
dimension nrows.  Dimensions here are tiny (at most 2^sequence_length).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class RationalField:
    char = 0

    def __call__(self, n):
        return Fraction(n)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def inv(self, a):
        return 1 / a

    def doc(self):
        return "Q"

    def __str__(self):
        return "Q"

    def parse(self, text: str):
        return Fraction(text)


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        p = self.p
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")

    @property
    def char(self):
        return self.p

    def __call__(self, n):
        if isinstance(n, Fraction):
            return self(n.numerator) * self.inv(self(n.denominator))
        return int(n) % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def doc(self):
        return {"Fp": self.p}

    def __str__(self):
        return f"F{self.p}"

    def parse(self, text: str):
        return self(Fraction(text))


QQ = RationalField()


def field_from_doc(doc):
    if doc == "Q":
        return QQ
    if isinstance(doc, dict) and set(doc) == {"Fp"}:
        return PrimeField(int(doc["Fp"]))
    raise ValueError(f"unknown field document: {doc!r}")


def _normalize(field, rows):
    return [[field(x) for x in row] for row in rows]


def rref(field, rows, ncols):
    """Reduced row echelon form; returns (rows, pivot column list)."""
    m = _normalize(field, rows)
    if field.char:
        p = field.p
        reduce = lambda x: x % p
    else:
        reduce = lambda x: x
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if reduce(m[i][col]) != field.zero), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][col])
        m[r] = [reduce(x * inv) for x in m[r]]
        for i in range(len(m)):
            if i != r and reduce(m[i][col]) != field.zero:
                f = m[i][col]
                m[i] = [reduce(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(field, rows, ncols=None):
    if not rows:
        return 0
    n = ncols if ncols is not None else len(rows[0])
    return len(rref(field, rows, n)[1])


def kernel_basis(field, rows, ncols):
    """Basis of {x : M x = 0} as column vectors (returned as tuples)."""
    red, pivots = rref(field, rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [field.zero] * ncols
        v[j] = field.one
        for i, pc in enumerate(pivots):
            v[pc] = field(-red[i][j]) if field.char == 0 else (-red[i][j]) % field.p
        basis.append(tuple(v))
    return basis


def solve_columns(field, cols, target, ncols_hint=None):
    """Express `target` as a combination of `cols` (list of column vectors);
    returns coefficients or None.  Length of every column must agree."""
    if not cols:
        return () if all(x == field.zero for x in target) else None
    nrows = len(cols[0])
    aug = [[field(cols[j][i]) for j in range(len(cols))] + [field(target[i])] for i in range(nrows)]
    red, pivots = rref(field, aug, len(cols) + 1)
    if len(cols) in pivots:
        return None
    coeffs = [field.zero] * len(cols)
    for i, pc in enumerate(pivots):
        coeffs[pc] = red[i][len(cols)]
    return tuple(coeffs)


def matvec(field, rows, x):
    return tuple(
        sum((field(a) * field(b) for a, b in zip(row, x)), field.zero) for row in rows
    )


def is_zero_matrix(field, rows):
    return all(field(x) == field.zero for row in rows for x in row)


def homology_dimension(field, d_out, d_in, space_dim):
    """dim ker(d_out) - rank(d_in) where d_out maps the space forward and
    d_in maps into it; matrices given as row lists over `space_dim` columns
    (d_in has space_dim rows)."""
    rk_out = rank(field, d_out, space_dim) if d_out else 0
    ncols_in = len(d_in[0]) if d_in and d_in[0] else 0
    rk_in = rank(field, d_in, ncols_in) if d_in and ncols_in else 0
    return space_dim - rk_out - rk_in


def induced_quotient_map(field, ker_src, im_src, ker_tgt, im_tgt, chain_rows):
    """Matrix of the induced map ker/im -> ker/im under the chain map.

    ker_* are kernel bases (column vectors), im_* are image-spanning column
    lists; chain_rows is the chain map acting on source coordinates.
    Returns (matrix rows, src_classes, tgt_classes) where the classes index
    the chosen homology bases.
    """
    def select_quotient_basis(ker, im):
        # rank is transpose-invariant, so stack the vectors as rows
        chosen = []
        acc = [list(v) for v in im]
        for v in ker:
            before = rank(field, acc, len(v)) if acc else 0
            trial = acc + [list(v)]
            if rank(field, trial, len(v)) > before:
                chosen.append(v)
                acc = trial
        return chosen

    src_basis = select_quotient_basis(ker_src, im_src)
    tgt_basis = select_quotient_basis(ker_tgt, im_tgt)
    cols = []
    for v in src_basis:
        w = matvec(field, chain_rows, v)
        combo = solve_columns(field, list(tgt_basis) + list(im_tgt), w)
        assert combo is not None, "chain image must land in the target kernel"
        cols.append(combo[: len(tgt_basis)])
    rows = [
        tuple(cols[j][i] for j in range(len(src_basis)))
        for i in range(len(tgt_basis))
    ]
    return rows, src_basis, tgt_basis
