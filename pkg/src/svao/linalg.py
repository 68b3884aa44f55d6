"""Exact rational linear algebra on sparse rows, backed by sympy's DomainMatrix."""
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _to_dm(rows, ncols):
    dense = [[QQ(0)] * ncols for _ in rows]
    for r, row in enumerate(rows):
        for c, v in row.items():
            v = Fraction(v)
            dense[r][c] = QQ(v.numerator, v.denominator)
    return DomainMatrix(dense, (len(rows), ncols), QQ)


def _frac(x):
    return Fraction(int(x.numerator), int(x.denominator))


def rref(rows, ncols):
    """Reduced row echelon form: (list of sparse rows, pivot columns)."""
    if not rows or ncols == 0:
        return [], ()
    red, pivots = _to_dm(rows, ncols).rref()
    dense = red.to_list()
    out = []
    for r in range(len(pivots)):
        out.append({c: _frac(v) for c, v in enumerate(dense[r]) if v})
    return out, tuple(pivots)


def rank(rows, ncols):
    return len(rref(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of {x : row . x = 0 for every row}, as sparse vectors."""
    if ncols == 0:
        return []
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = {f: Fraction(1)}
        for row, p in zip(red, pivots):
            v = row.get(f)
            if v:
                vec[p] = -v
        basis.append(vec)
    return basis


def solve(rows, rhs, ncols):
    """One solution x of rows . x = rhs, or None when inconsistent."""
    aug = [dict(row) for row in rows]
    for row, b in zip(aug, rhs):
        if b:
            row[ncols] = Fraction(b)
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = {}
    for row, p in zip(red, pivots):
        v = row.get(ncols)
        if v:
            x[p] = v
    return x


def in_span(vectors, target, ncols):
    """Coefficients expressing target in the span of vectors, or None."""
    rows = [dict() for _ in range(ncols)]
    for j, vec in enumerate(vectors):
        for c, v in vec.items():
            rows[c][j] = v
    rhs = [target.get(c, 0) for c in range(ncols)]
    return solve(rows, rhs, len(vectors))
