"""
Linear algebra over the two arithmetic tiers.

Matrices are lists of rows. The exact tier works on SymbolicComplex
entries and raises NotRepresentableError when a product or quotient leaves
the declared span; the numeric tier works on mpmath numbers with guard
digits. Every routine here is written once against the tier interface.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import (
    MAX_THRESHOLD, MIN_PRECISION, SymbolicComplex, SymbolicReal, default_threshold,
    numeric_context,
)
from .exceptions import (
    InconsistentSystemError, InputError, NotRepresentableError, SingularGeneratorError,
    ThresholdError,
)

logger = logging.getLogger(__name__)

TIER_CHOICES = ('exact-then-numeric', 'exact', 'numeric')


@dataclass(frozen=True)
class BackendConfig:
    """Numerical settings shared by every stage of an analysis"""
    precision: int = 60
    tau: Optional[float] = None
    tier: str = 'exact-then-numeric'

    def __post_init__(self):
        if self.precision < MIN_PRECISION:
            raise InputError(f'precision must be at least {MIN_PRECISION} digits')
        if self.tier not in TIER_CHOICES:
            raise InputError(f"unknown tier '{self.tier}'")
        if self.tau is not None:
            if self.tau <= 0:
                raise InputError('tau must be positive')
            if self.tau >= MAX_THRESHOLD:
                raise ThresholdError(f'threshold {self.tau} is too permissive (must be below 1e-5)')

    @property
    def threshold(self):
        if self.tau is None:
            return default_threshold(self.precision)
        return numeric_context(self.precision + 10).mpf(self.tau)

    @property
    def strict(self):
        return self.tier == 'exact'


# ============================================================================
# Tiers
# ============================================================================

class ExactTier:
    name = 'exact'

    def __init__(self, basis, precision=60):
        self.basis = basis
        self.precision = precision
        self.zero = SymbolicComplex.zero(basis)
        self.one = SymbolicComplex.one(basis)

    def convert(self, value):
        if isinstance(value, SymbolicComplex):
            return value
        if isinstance(value, SymbolicReal):
            return SymbolicComplex.from_real(value)
        if isinstance(value, (int, Fraction)):
            return SymbolicComplex.from_rational(self.basis, value)
        raise NotRepresentableError(f'{value!r} is not an exact scalar')

    def is_zero(self, value, scale=None):
        return value.is_zero()

    def is_structural_zero(self, value):
        return value.is_zero()

    def scale_of(self, rows):
        return None

    def approximate(self, value, dps=30):
        return value.evaluate(numeric_context(dps))

    def pivot(self, rows, row_ids, col_ids, scale=None):
        """First Gaussian-rational nonzero entry, else first nonzero entry"""
        fallback = None
        for c in col_ids:
            for r in row_ids:
                value = rows[r][c]
                if value.is_zero():
                    continue
                if value.is_gaussian_rational():
                    return r, c
                if fallback is None:
                    fallback = (r, c)
        return fallback


class NumericTier:
    name = 'numeric'

    def __init__(self, precision):
        self.precision = precision
        self.ctx = numeric_context(precision + 10)
        self.zero = self.ctx.mpc(0)
        self.one = self.ctx.mpc(1)
        self.rank_tol = self.ctx.mpf(10) ** (-(precision // 2))
        self.tolerance = self.ctx.mpf(10) ** (-(precision - 10))

    def convert(self, value):
        if isinstance(value, (SymbolicComplex, SymbolicReal)):
            return self.ctx.mpc(value.evaluate(self.ctx))
        if isinstance(value, Fraction):
            return self.ctx.mpc(self.ctx.mpf(value.numerator) / value.denominator)
        return self.ctx.mpc(value)

    def is_zero(self, value, scale=None):
        return abs(value) <= self.rank_tol * (scale or 1)

    def is_structural_zero(self, value):
        return value == 0

    def scale_of(self, rows):
        biggest = self.ctx.mpf(1)
        for row in rows:
            for value in row:
                biggest = max(biggest, abs(value))
        return biggest

    def approximate(self, value, dps=30):
        return value

    def pivot(self, rows, row_ids, col_ids, scale=None):
        """Entry of largest modulus, None when everything is negligible"""
        best, choice = self.ctx.mpf(0), None
        for c in col_ids:
            for r in row_ids:
                size = abs(rows[r][c])
                if size > best:
                    best, choice = size, (r, c)
        if choice is None or best <= self.rank_tol * (scale or 1):
            return None
        return choice


def tier_of(rows):
    """Tier matching the entries of a matrix, exact when they are symbolic"""
    for row in rows:
        for value in row:
            if isinstance(value, SymbolicComplex):
                return ExactTier(value.basis)
            return NumericTier(max(MIN_PRECISION, value.context.dps - 10))
    return NumericTier(MIN_PRECISION)


# ============================================================================
# Matrix helpers
# ============================================================================

def matrix(tier, rows):
    return [[tier.convert(x) for x in row] for row in rows]


def vector(tier, values):
    return [tier.convert(x) for x in values]


def identity(tier, n):
    return [[tier.one if i == j else tier.zero for j in range(n)] for i in range(n)]


def zeros(tier, rows, cols):
    return [[tier.zero] * cols for _ in range(rows)]


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def dot(tier, xs, ys):
    total = tier.zero
    for x, y in zip(xs, ys):
        if tier.is_structural_zero(x) or tier.is_structural_zero(y):
            continue
        total = total + x * y
    return total


def matmul(tier, a, b):
    columns = transpose(b)
    return [[dot(tier, row, col) for col in columns] for row in a]


def matvec(tier, a, v):
    return [dot(tier, row, v) for row in a]


def add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(tier, a, factor):
    return [[x * factor for x in row] for row in a]


def power(tier, a, exponent):
    result = identity(tier, len(a))
    for _ in range(exponent):
        result = matmul(tier, result, a)
    return result


def is_zero_matrix(tier, a, tolerance=None):
    """Exact zero test, or max-modulus below `tolerance` times the scale"""
    if tier.name == 'exact':
        return all(x.is_zero() for row in a for x in row)
    limit = tier.tolerance if tolerance is None else tolerance
    return all(abs(x) <= limit for row in a for x in row)


def max_abs(tier, a):
    values = [abs(tier.approximate(x)) for row in a for x in row]
    return max(values) if values else 0


# ============================================================================
# Gauss-Jordan elimination
# ============================================================================

def row_reduce(tier, rows, pivot_cols=None):
    """
    Gauss-Jordan elimination with full pivoting.
    Returns the reduced rows and the (row, column) pivots in pivot order.
    """
    work = [list(row) for row in rows]
    if not work:
        return work, []
    ncols = len(work[0])
    cols = list(range(ncols)) if pivot_cols is None else list(pivot_cols)
    scale_value = tier.scale_of(work)
    free_rows = list(range(len(work)))
    pivots = []
    while free_rows and cols:
        choice = tier.pivot(work, free_rows, cols, scale_value)
        if choice is None:
            break
        r, c = choice
        pivot_row = work[r]
        pivot = pivot_row[c]
        for i in range(len(work)):
            if i == r or tier.is_structural_zero(work[i][c]):
                continue
            factor = work[i][c] / pivot
            work[i] = [
                x if tier.is_structural_zero(y) else x - factor * y
                for x, y in zip(work[i], pivot_row)
            ]
            work[i][c] = tier.zero
        free_rows.remove(r)
        cols.remove(c)
        pivots.append((r, c))
    return work, pivots


def rank(tier, rows):
    return len(row_reduce(tier, rows)[1])


def kernel(tier, rows, ncols):
    """Basis of {x : rows . x = 0}, one vector per free column"""
    if not rows:
        return [[tier.one if i == j else tier.zero for i in range(ncols)] for j in range(ncols)]
    work, pivots = row_reduce(tier, rows)
    pivot_columns = {c for _, c in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_columns:
            continue
        x = [tier.zero] * ncols
        x[free] = tier.one
        for r, c in pivots:
            if not tier.is_structural_zero(work[r][free]):
                x[c] = -(work[r][free] / work[r][c])
        basis.append(x)
    return basis


def inverse(tier, a):
    n = len(a)
    augmented = [list(row) + [tier.one if i == j else tier.zero for j in range(n)] for i, row in enumerate(a)]
    work, pivots = row_reduce(tier, augmented, pivot_cols=range(n))
    if len(pivots) < n:
        raise SingularGeneratorError('matrix is singular at the working precision')
    result = [None] * n
    for r, c in pivots:
        result[c] = [x / work[r][c] for x in work[r][n:]]
    return result


def solve(tier, a, b):
    """
    Particular solution of a . x = b (free variables set to zero) together
    with a kernel basis of a.
    """
    ncols = len(a[0]) if a else 0
    augmented = [list(row) + [value] for row, value in zip(a, b)]
    work, pivots = row_reduce(tier, augmented, pivot_cols=range(ncols))
    scale_value = tier.scale_of(augmented)
    pivot_rows = {r for r, _ in pivots}
    for i, row in enumerate(work):
        if i not in pivot_rows and not tier.is_zero(row[-1], scale_value):
            raise InconsistentSystemError(
                f'linear system is inconsistent (rank {len(pivots)} of {len(a)} equations)'
            )
    x = [tier.zero] * ncols
    for r, c in pivots:
        x[c] = work[r][-1] / work[r][c]
    return x, kernel(tier, a, ncols)


# ============================================================================
# Incremental echelon basis
# ============================================================================

class Echelon:
    """
    Basis grown one vector at a time. Each stored vector is the residual of
    the added vector against the previous ones, so stored vector j vanishes
    at the pivots of vectors 0..j-1.
    """

    def __init__(self, tier, dim):
        self.tier = tier
        self.dim = dim
        self.basis = []
        self.pivots = []

    @classmethod
    def from_vectors(cls, tier, dim, vectors):
        echelon = cls(tier, dim)
        for v in vectors:
            echelon.add(v)
        return echelon

    def __len__(self):
        return len(self.basis)

    def reduce(self, v):
        tier = self.tier
        v = list(v)
        coords = []
        for b, p in zip(self.basis, self.pivots):
            if tier.is_structural_zero(v[p]):
                coords.append(tier.zero)
                continue
            c = v[p] / b[p]
            v = [x if tier.is_structural_zero(y) else x - c * y for x, y in zip(v, b)]
            v[p] = tier.zero
            coords.append(c)
        return coords, v

    def negligible(self, residual, reference):
        if self.tier.name == 'exact':
            return all(x.is_zero() for x in residual)
        scale_value = self.tier.scale_of([reference])
        return all(self.tier.is_zero(x, scale_value) for x in residual)

    def add(self, v):
        """Append v when it is independent of the basis; returns whether it was"""
        _, residual = self.reduce(v)
        if self.negligible(residual, v):
            return False
        _, c = self.tier.pivot([residual], [0], range(self.dim), self.tier.scale_of([residual]))
        self.basis.append(residual)
        self.pivots.append(c)
        return True

    def contains(self, v):
        _, residual = self.reduce(v)
        return self.negligible(residual, v)

    def coordinates(self, v):
        """Coordinates of v in the basis, None when v lies outside the span"""
        coords, residual = self.reduce(v)
        if not self.negligible(residual, v):
            return None
        return coords

    def left_inverse(self):
        """Matrix L with L . b_j = e_j for every basis vector b_j"""
        tier = self.tier
        columns = []
        for i in range(self.dim):
            unit = [tier.one if j == i else tier.zero for j in range(self.dim)]
            columns.append(self.reduce(unit)[0])
        return transpose(columns) if columns and columns[0] else []


# ============================================================================
# Stage-wise tier fallback
# ============================================================================

@dataclass
class TierRunner:
    """
    Runs pipeline stages exactly while possible. A NotRepresentableError
    switches the rest of the pipeline to the numeric tier and is recorded
    in `notes`, unless exact computation was demanded.
    """
    config: BackendConfig
    basis: object
    notes: list = field(default_factory=list)
    downgraded: bool = False

    def __post_init__(self):
        self.exact = ExactTier(self.basis, self.config.precision)
        self.numeric = NumericTier(self.config.precision)

    @property
    def tier_name(self):
        if self.downgraded or self.config.tier == 'numeric':
            return 'numeric'
        return 'exact'

    @property
    def current(self):
        return self.numeric if self.tier_name == 'numeric' else self.exact

    def run(self, stage, func, *args, **kwargs):
        if self.tier_name == 'exact':
            try:
                result = func(self.exact, *args, **kwargs)
                logger.debug('%s: exact', stage)
                return result
            except NotRepresentableError as exc:
                if self.config.strict:
                    raise
                logger.warning('%s: falling back to the numeric tier (%s)', stage, exc)
                self.notes.append(f'{stage}: numeric fallback ({exc})')
                self.downgraded = True
        result = func(self.numeric, *args, **kwargs)
        logger.debug('%s: numeric', stage)
        return result
