"""Tiny DNF algebra over interval atoms.

An atom constrains one linear functional (referenced by index) to an
integer interval.  A conjunction maps indices to merged intervals; a
formula is a tuple of conjunctions (disjunctive normal form).  TRUE is a
single empty conjunction, FALSE the empty formula.  Used for exact
"which degrees satisfy this membership condition" reasoning.
"""

from __future__ import annotations

Interval = tuple  # (lo, hi), either side None for unbounded
Conj = tuple  # sorted tuple of (index, lo, hi)
Formula = tuple  # tuple of Conj

TRUE: Formula = ((),)
FALSE: Formula = ()


def conj(*atoms) -> Conj:
    merged: dict[int, list] = {}
    for idx, lo, hi in atoms:
        cur = merged.setdefault(idx, [None, None])
        if lo is not None:
            cur[0] = lo if cur[0] is None else max(cur[0], lo)
        if hi is not None:
            cur[1] = hi if cur[1] is None else min(cur[1], hi)
    out = []
    for idx in sorted(merged):
        lo, hi = merged[idx]
        if lo is not None and hi is not None and lo > hi:
            return None  # empty
        out.append((idx, lo, hi))
    return tuple(out)


def _atom_key(atom):
    idx, lo, hi = atom
    return (
        idx,
        lo is not None,
        lo if lo is not None else 0,
        hi is not None,
        hi if hi is not None else 0,
    )


def _conj_key(c: Conj):
    return tuple(_atom_key(a) for a in c)


def _sorted_formula(conjs) -> Formula:
    return tuple(sorted(conjs, key=_conj_key))


def formula(*conjs) -> Formula:
    return _sorted_formula({c for c in conjs if c is not None})


def f_and(a: Formula, b: Formula) -> Formula:
    out = set()
    for ca in a:
        for cb in b:
            c = conj(*(ca + cb))
            if c is not None:
                out.add(c)
    return _sorted_formula(out)


def f_or(a: Formula, b: Formula) -> Formula:
    return _sorted_formula(set(a) | set(b))


def f_not(a: Formula) -> Formula:
    # complement of a DNF: AND over conjunctions of the OR of atom complements
    result = TRUE
    for c in a:
        pieces = []
        for idx, lo, hi in c:
            if lo is not None:
                pieces.append(conj((idx, None, lo - 1)))
            if hi is not None:
                pieces.append(conj((idx, hi + 1, None)))
        result = f_and(result, formula(*pieces))
        if not result:
            return FALSE
    return result


def f_all(formulas) -> Formula:
    out = TRUE
    for f in formulas:
        out = f_and(out, f)
        if not out:
            return FALSE
    return out


def f_any(formulas) -> Formula:
    out = FALSE
    for f in formulas:
        out = f_or(out, f)
    return out


def evaluate(f: Formula, values) -> bool:
    """values: sequence of functional values indexed by atom index."""
    for c in f:
        ok = True
        for idx, lo, hi in c:
            v = values[idx]
            if lo is not None and v < lo:
                ok = False
                break
            if hi is not None and v > hi:
                ok = False
                break
        if ok:
            return True
    return False
