"""
Integer lattice helpers built on sympy's domain matrices: exact integer
kernels, row-style Hermite normal form, LLL reduction and saturation.
"""

from fractions import Fraction
from math import lcm

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form

from .exceptions import InternalInconsistencyError

KERNEL_ATTEMPTS = 16


def identity(dim):
    return tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))


def integer_rows(rows):
    """Scale every rational row to an integer row"""
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        scale = lcm(*[x.denominator for x in row]) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def rational_rank(rows, ncols):
    if not rows:
        return 0
    entries = [[QQ(x.numerator, x.denominator) for x in map(Fraction, row)] for row in rows]
    return DomainMatrix(entries, (len(rows), ncols), QQ).rank()


def lll_rows(rows):
    """LLL-reduce independent integer rows"""
    if not rows:
        return []
    ncols = len(rows[0])
    matrix = DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), ncols), ZZ)
    reduced = matrix.lll()
    return [tuple(int(x) for x in row) for row in reduced.to_Matrix().tolist()]


def hnf_rows(vectors, dim):
    """
    Canonical basis of the lattice spanned by `vectors`: echelon form with
    positive leading entries, ordered by leading position.
    """
    vectors = [tuple(int(x) for x in v) for v in vectors if any(v)]
    if not vectors:
        return ()
    # sympy reduces columns with pivots at the bottom, so reverse coordinates
    columns = [[ZZ(v[dim - 1 - i]) for v in vectors] for i in range(dim)]
    reduced = hermite_normal_form(DomainMatrix(columns, (dim, len(vectors)), ZZ)).to_Matrix()
    basis = [tuple(int(reduced[dim - 1 - i, j]) for i in range(dim)) for j in range(reduced.cols)]
    return tuple(reversed(basis))


def integer_kernel(rows, ncols):
    """Primitive basis of {x in Z^ncols : rows . x = 0} for rational rows"""
    rows = [row for row in integer_rows(rows) if any(row)]
    if not rows:
        return identity(ncols)
    target = ncols - rational_rank(rows, ncols)
    if target == 0:
        return ()
    weight = 1 << 8
    for _ in range(KERNEL_ATTEMPTS):
        lattice = [
            [int(i == j) for j in range(ncols)] + [weight * row[i] for row in rows]
            for i in range(ncols)
        ]
        found = [row[:ncols] for row in lll_rows(lattice) if not any(row[ncols:])]
        if len(found) == target:
            return hnf_rows(found, ncols)
        weight <<= 16
    raise InternalInconsistencyError('integer kernel did not stabilise under LLL')


def saturate(vectors, dim):
    """Z^dim intersected with the rational span of `vectors`"""
    vectors = [tuple(v) for v in vectors if any(v)]
    if not vectors:
        return ()
    complement = integer_kernel(vectors, dim)
    if not complement:
        return identity(dim)
    return integer_kernel(complement, dim)
