"""
Simultaneous block-triangular normal form of commuting matrices.

The common generalized eigenspaces of the generators are split out one
generator at a time; inside each space a socle chain of the nilpotent parts
gives a basis in which every generator is lower triangular with a constant
diagonal.
"""

import dataclasses
import logging
from dataclasses import dataclass, replace
from fractions import Fraction

import sympy

from . import linalg
from .arith import ConstantBasis, SymbolicComplex
from .exceptions import (
    EigenClusterError, InputError, InternalInconsistencyError, NonCommutingError,
    NonInvariantSubspaceError, NotRepresentableError, SingularGeneratorError,
)
from .linalg import BackendConfig, Echelon, TierRunner

logger = logging.getLogger(__name__)


# ============================================================================
# Group specification
# ============================================================================

@dataclass(frozen=True)
class GroupSpec:
    """Commuting invertible n x n generators over R or C"""
    generators: tuple
    basis: ConstantBasis = dataclasses.field(default_factory=ConstantBasis)
    field: str = 'C'
    names: tuple = ()
    config: BackendConfig = dataclasses.field(default_factory=BackendConfig)

    def __post_init__(self):
        generators = tuple(tuple(tuple(row) for row in g) for g in self.generators)
        object.__setattr__(self, 'generators', generators)
        if not self.names:
            object.__setattr__(self, 'names', tuple(f'A{k + 1}' for k in range(len(generators))))
        if self.field not in ('R', 'C'):
            raise InputError(f"field must be R or C, got '{self.field}'")

    @property
    def n(self):
        return len(self.generators[0]) if self.generators else 0

    @property
    def p(self):
        return len(self.generators)

    def matrices(self, tier):
        return [linalg.matrix(tier, g) for g in self.generators]

    def with_generators(self, generators):
        return replace(self, generators=generators)

    def validate(self):
        """Check shapes, the field, invertibility and pairwise commutation"""
        if self.p == 0:
            raise InputError('at least one generator is required')
        n = self.n
        for name, g in zip(self.names, self.generators):
            if n == 0 or len(g) != n or any(len(row) != n for row in g):
                raise InputError(f'generator {name} is not a square {n} x {n} matrix')
        if len(self.names) != self.p:
            raise InputError('one name per generator is required')
        runner = TierRunner(replace(self.config, tier='exact-then-numeric'), self.basis)
        if self.config.tier == 'numeric':
            runner.downgraded = True
        runner.run('validation', self._validate)
        return self

    def _validate(self, tier):
        matrices = self.matrices(tier)
        if self.field == 'R':
            for name, g in zip(self.names, matrices):
                if not all(_is_real(tier, x) for row in g for x in row):
                    raise InputError(f'generator {name} is not real but the field is R')
        for name, g in zip(self.names, matrices):
            if linalg.rank(tier, g) < self.n:
                raise SingularGeneratorError(f'generator {name} is singular')
        for i in range(self.p):
            for j in range(i + 1, self.p):
                a, b = matrices[i], matrices[j]
                commutator = linalg.sub(linalg.matmul(tier, a, b), linalg.matmul(tier, b, a))
                tolerance = None
                if tier.name == 'numeric':
                    size = max(linalg.max_abs(tier, a), linalg.max_abs(tier, b), 1)
                    tolerance = tier.tolerance * size * size
                if not linalg.is_zero_matrix(tier, commutator, tolerance):
                    raise NonCommutingError(self.names[i], self.names[j])


def _is_real(tier, value):
    if tier.name == 'exact':
        return value.is_real()
    return abs(value.imag) <= tier.tolerance * max(1, abs(value))


# ============================================================================
# Eigenvalues
# ============================================================================

def is_lower_triangular(tier, a):
    return all(tier.is_structural_zero(a[i][j]) for i in range(len(a)) for j in range(i + 1, len(a)))


def is_upper_triangular(tier, a):
    return all(tier.is_structural_zero(a[i][j]) for i in range(len(a)) for j in range(i))


def _sort_key(tier, value):
    approx = tier.approximate(value)
    return (approx.real, approx.imag)


def eigenvalues(tier, a):
    """Distinct eigenvalues with algebraic multiplicities, ordered by (re, im)"""
    if is_lower_triangular(tier, a) or is_upper_triangular(tier, a):
        diagonal = [a[i][i] for i in range(len(a))]
        if tier.name == 'exact':
            return _group_exact(tier, diagonal)
        return _cluster(tier, diagonal)
    if tier.name == 'exact':
        return _exact_eigenvalues(tier, a)
    ctx = tier.ctx
    values = ctx.eig(ctx.matrix(a), left=False, right=False)
    # a defective eigenvalue of multiplicity d splits by about eps^(1/d)
    spread = 100 * ctx.mpf(10) ** (-ctx.mpf(tier.precision + 10) / len(a))
    return _cluster(tier, list(values), spread)


def _group_exact(tier, values):
    distinct = []
    for value in values:
        for entry in distinct:
            if entry[0] == value:
                entry[1] += 1
                break
        else:
            distinct.append([value, 1])
    return sorted(((v, m) for v, m in distinct), key=lambda item: _sort_key(tier, item[0]))


def _to_fraction(value):
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _exact_eigenvalues(tier, a):
    if not all(x.is_gaussian_rational() for row in a for x in row):
        raise NotRepresentableError('eigenvalues of a matrix with irrational entries')
    entries = []
    for row in a:
        entries.append([
            sympy.Rational(re.numerator, re.denominator) + sympy.I * sympy.Rational(im.numerator, im.denominator)
            for re, im in (x.gaussian_value for x in row)
        ])
    x = sympy.Symbol('x')
    polynomial = sympy.Matrix(entries).charpoly(x).as_expr()
    _, factors = sympy.factor_list(polynomial, x, gaussian=True)
    roots = []
    for factor, multiplicity in factors:
        poly = sympy.Poly(factor, x)
        if poly.degree() != 1:
            raise NotRepresentableError('characteristic polynomial does not split over the Gaussian rationals')
        lead, constant = poly.all_coeffs()
        root = sympy.expand(-constant / lead)
        re_part, im_part = root.as_real_imag()
        value = SymbolicComplex.from_rational(tier.basis, _to_fraction(re_part), _to_fraction(im_part))
        roots.append((value, multiplicity))
    return _group_multiplicities(tier, roots)


def _group_multiplicities(tier, roots):
    merged = []
    for value, multiplicity in roots:
        for entry in merged:
            if entry[0] == value:
                entry[1] += multiplicity
                break
        else:
            merged.append([value, multiplicity])
    return sorted(((v, m) for v, m in merged), key=lambda item: _sort_key(tier, item[0]))


def _cluster(tier, values, spread=None):
    ctx = tier.ctx
    values = [ctx.mpc(v) for v in values]
    scale = max([ctx.mpf(1)] + [abs(v) for v in values])
    tol = max(tier.rank_tol, spread or 0) * scale
    clusters = []
    for value in sorted(values, key=lambda v: (v.real, v.imag)):
        for cluster in clusters:
            if any(abs(value - other) <= tol for other in cluster):
                cluster.append(value)
                break
        else:
            clusters.append([value])
    centres = [(ctx.fsum(c) / len(c), len(c)) for c in clusters]
    for i in range(len(centres)):
        for j in range(i + 1, len(centres)):
            if abs(centres[i][0] - centres[j][0]) < 10 * tol:
                raise EigenClusterError(
                    f'eigenvalues {ctx.nstr(centres[i][0], 8)} and {ctx.nstr(centres[j][0], 8)} '
                    f'are too close to separate at precision {tier.precision}, retry with a higher --precision'
                )
    return sorted(centres, key=lambda item: (item[0].real, item[0].imag))


# ============================================================================
# Common generalized eigenspaces
# ============================================================================

@dataclass
class EigenSpace:
    echelon: Echelon
    eigenvalues: tuple = ()

    @property
    def dim(self):
        return len(self.echelon)


def restrict(tier, a, echelon):
    """Matrix of `a` on the invariant span of `echelon`, in its coordinates"""
    columns = []
    for b in echelon.basis:
        coords = echelon.coordinates(linalg.matvec(tier, a, b))
        if coords is None:
            raise NonInvariantSubspaceError('subspace is not invariant under a generator')
        columns.append(coords)
    return linalg.transpose(columns)


def combine(tier, vectors, coefficients):
    dim = len(vectors[0])
    out = [tier.zero] * dim
    for c, v in zip(coefficients, vectors):
        if tier.is_structural_zero(c):
            continue
        out = [x + c * y for x, y in zip(out, v)]
    return out


def common_generalized_eigenspaces(tier, generators):
    n = len(generators[0])
    units = linalg.identity(tier, n)
    spaces = [EigenSpace(Echelon.from_vectors(tier, n, units))]
    for a in generators:
        refined = []
        for space in spaces:
            d = space.dim
            local = restrict(tier, a, space.echelon)
            for mu, multiplicity in eigenvalues(tier, local):
                shifted = linalg.sub(local, linalg.scale(tier, linalg.identity(tier, d), mu))
                null = linalg.kernel(tier, linalg.power(tier, shifted, d), d)
                if len(null) != multiplicity:
                    if tier.name == 'numeric':
                        raise EigenClusterError(
                            f'generalized eigenspace of {tier.ctx.nstr(mu, 8)} has dimension {len(null)}, '
                            f'expected {multiplicity} at precision {tier.precision}, retry with a higher --precision'
                        )
                    raise InternalInconsistencyError('generalized eigenspace has the wrong dimension')
                vectors = [combine(tier, space.echelon.basis, c) for c in null]
                refined.append(EigenSpace(Echelon.from_vectors(tier, n, vectors), space.eigenvalues + (mu,)))
        spaces = refined
    return spaces


def _triangular_basis(tier, nilpotents, d):
    """Local basis in which every nilpotent is strictly lower triangular"""
    chain = Echelon(tier, d)
    layers = []
    rows = [row for nil in nilpotents for row in nil]
    current = linalg.kernel(tier, rows, d)
    while True:
        layer = [v for v in current if chain.add(v)]
        if not layer:
            raise InternalInconsistencyError('socle chain of commuting nilpotents stalled')
        layers.append(layer)
        if len(chain) == d:
            break
        annihilator = linalg.kernel(tier, chain.basis, d)
        rows = [linalg.matvec(tier, linalg.transpose(nil), c) for c in annihilator for nil in nilpotents]
        current = linalg.kernel(tier, rows, d)
    return [v for layer in reversed(layers) for v in layer]


# ============================================================================
# Normal form
# ============================================================================

@dataclass(frozen=True)
class TriangularBlock:
    """Lower triangular block with the constant diagonal `mu`"""
    mu: object
    entries: tuple

    @property
    def size(self):
        return len(self.entries)


@dataclass(frozen=True)
class NormalForm:
    P: tuple
    P_inv: tuple
    eta: tuple
    blocks: tuple
    eigenvalues: tuple
    tier: str = 'exact'

    @property
    def n(self):
        return len(self.P)

    @property
    def r(self):
        return len(self.eta)

    @property
    def starts(self):
        out, position = [], 0
        for size in self.eta:
            out.append(position)
            position += size
        return tuple(out)

    def transformed(self, k, tier):
        """Full block diagonal matrix P^-1 A_k P"""
        out = linalg.zeros(tier, self.n, self.n)
        for start, block in zip(self.starts, self.blocks[k]):
            for i, row in enumerate(block.entries):
                for j, value in enumerate(row):
                    out[start + i][start + j] = tier.convert(value)
        return out


def _freeze(rows):
    return tuple(tuple(row) for row in rows)


def _block_key(tier, item):
    space, columns = item
    return (-len(columns), tuple(_sort_key(tier, mu) for mu in space.eigenvalues))


def build_normal_form(tier, spec):
    generators = spec.matrices(tier)
    n = spec.n
    spaces = common_generalized_eigenspaces(tier, generators)
    found = []
    for space in spaces:
        d = space.dim
        nilpotents = []
        for a, mu in zip(generators, space.eigenvalues):
            local = restrict(tier, a, space.echelon)
            nilpotents.append(linalg.sub(local, linalg.scale(tier, linalg.identity(tier, d), mu)))
        local_basis = _triangular_basis(tier, nilpotents, d)
        found.append((space, [combine(tier, space.echelon.basis, v) for v in local_basis]))
    found.sort(key=lambda item: _block_key(tier, item))
    columns = [column for _, cols in found for column in cols]
    if len(columns) != n:
        raise InternalInconsistencyError('eigenspaces do not fill the space')
    P = linalg.transpose(columns)
    P_inv = linalg.inverse(tier, P)
    eta = tuple(len(cols) for _, cols in found)
    blocks = []
    for k, a in enumerate(generators):
        transformed = linalg.matmul(tier, linalg.matmul(tier, P_inv, a), P)
        if not verify_K_structure(transformed, eta, tier, invertible=True):
            raise InternalInconsistencyError(f'generator {spec.names[k]} is not block triangular after the change of basis')
        row_blocks, start = [], 0
        for space, cols in found:
            size = len(cols)
            mu = space.eigenvalues[k]
            entries = []
            for i in range(size):
                row = []
                for j in range(size):
                    if j > i:
                        row.append(tier.zero)
                    elif j == i:
                        row.append(mu)
                    else:
                        row.append(transformed[start + i][start + j])
                entries.append(tuple(row))
            row_blocks.append(TriangularBlock(mu, tuple(entries)))
            start += size
        blocks.append(tuple(row_blocks))
    logger.debug('normal form: eta=%s tier=%s', eta, tier.name)
    return NormalForm(
        P=_freeze(P),
        P_inv=_freeze(P_inv),
        eta=eta,
        blocks=tuple(blocks),
        eigenvalues=tuple(space.eigenvalues for space, _ in found),
        tier=tier.name,
    )


def normal_form(spec):
    """Normal form of a validated group, exact when the arithmetic allows"""
    runner = TierRunner(spec.config, spec.basis)
    return runner.run('normal form', build_normal_form, spec)


def verify_K_structure(matrix, eta, tier=None, invertible=False, tolerance=None):
    """
    True when `matrix` is block diagonal with blocks sized by eta, each block
    lower triangular with a constant diagonal (nonzero if invertible).
    """
    if sum(eta) != len(matrix) or any(size <= 0 for size in eta):
        return False
    tier = tier or linalg.tier_of(matrix)
    if tier.name == 'numeric':
        limit = tolerance if tolerance is not None else tier.rank_tol * tier.scale_of(matrix)

        def is_zero(x):
            return abs(x) <= limit
    else:
        def is_zero(x):
            return x.is_zero()

    owner = [k for k, size in enumerate(eta) for _ in range(size)]
    starts = [sum(eta[:k]) for k in range(len(eta))]
    for i, row in enumerate(matrix):
        for j, value in enumerate(row):
            if owner[i] != owner[j] or j > i:
                if not is_zero(value):
                    return False
    for k, start in enumerate(starts):
        mu = matrix[start][start]
        if invertible and is_zero(mu):
            return False
        for i in range(start, start + eta[k]):
            if not is_zero(matrix[i][i] - mu):
                return False
    return True
