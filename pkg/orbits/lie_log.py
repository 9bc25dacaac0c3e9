"""
Logarithms of the triangular blocks and the additive generators of g_u.

Logarithms use the principal branch of log(mu); the nilpotent part is a
finite series. The kernel of exp on the block algebra is generated by the
vectors 2*pi*i*e^(k), one per block.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .arith import SymbolicComplex, SymbolicReal, numeric_context
from .exceptions import NotInRegularRegionError, NotRepresentableError, SingularGeneratorError
from .group_closure import AdditiveGroupGens, theta

logger = logging.getLogger(__name__)

PSLQ_MAXCOEFF = 10 ** 6
PSLQ_MAXSTEPS = 10 ** 5


# ============================================================================
# Scalar logarithms
# ============================================================================

def principal_log(ctx, value):
    """log with imaginary part in (-pi, pi]; negative reals get +i*pi"""
    if abs(value.imag) <= ctx.mpf(10) ** (-(ctx.dps // 2)) * abs(value) and value.real < 0:
        return ctx.mpc(ctx.log(-value.real), +ctx.pi)
    return ctx.mpc(ctx.log(value))


def two_pi_i(tier, multiple=1):
    if tier.name == 'numeric':
        return tier.ctx.mpc(0, 2 * multiple * tier.ctx.pi)
    index = tier.basis.pi_index
    if index is None:
        raise NotRepresentableError('2*pi*i needs pi among the declared constants')
    coeffs = [0] * len(tier.basis)
    coeffs[index] = 2 * multiple
    return SymbolicComplex(SymbolicReal.zero(tier.basis), SymbolicReal(tier.basis, tuple(coeffs)))


def _recognise(basis, approximate, precision):
    """Symbolic real whose value matches approximate(ctx), verified at higher precision"""
    ctx = numeric_context(precision + 10)
    value = approximate(ctx)
    if abs(value) < ctx.mpf(10) ** (-precision):
        return SymbolicReal.zero(basis)
    relation = ctx.pslq(
        [value] + list(basis.values(ctx.dps)),
        tol=ctx.mpf(10) ** (-precision),
        maxcoeff=PSLQ_MAXCOEFF,
        maxsteps=PSLQ_MAXSTEPS,
    )
    if relation is None or relation[0] == 0:
        raise NotRepresentableError(f'{ctx.nstr(value, 15)} is not recognised over the declared constants')
    candidate = SymbolicReal(basis, tuple(Fraction(-c, relation[0]) for c in relation[1:]))
    digits = 2 * precision
    if basis.digit_limit is not None:
        digits = min(digits, basis.digit_limit)
    if digits > precision:
        check = numeric_context(digits + 10)
        if abs(approximate(check) - candidate.evaluate(check)) > check.mpf(10) ** (-(digits - 10)):
            raise NotRepresentableError(f'{ctx.nstr(value, 15)} failed verification over the declared constants')
    return candidate


def log_scalar(tier, mu, branch_shift=0):
    if tier.name == 'exact':
        if mu.is_zero():
            raise SingularGeneratorError('zero eigenvalue has no logarithm')
        if mu == tier.one:
            result = tier.zero
        else:
            precision = tier.precision

            def real_part(ctx):
                return principal_log(ctx, mu.evaluate(ctx)).real

            def imag_part(ctx):
                return principal_log(ctx, mu.evaluate(ctx)).imag

            result = SymbolicComplex(
                _recognise(tier.basis, real_part, precision),
                _recognise(tier.basis, imag_part, precision),
            )
    else:
        if mu == 0:
            raise SingularGeneratorError('zero eigenvalue has no logarithm')
        result = principal_log(tier.ctx, mu)
    if branch_shift:
        result = result + two_pi_i(tier, branch_shift)
    return result


def block_log(tier, block, branch_shift=0):
    """log(mu) I + sum_j (-1)^(j+1) (T/mu - I)^j / j"""
    size = block.size
    mu = tier.convert(block.mu)
    entries = linalg.matrix(tier, block.entries)
    unit = linalg.identity(tier, size)
    if tier.is_structural_zero(mu):
        raise SingularGeneratorError('block has a zero diagonal')
    nilpotent = linalg.sub([[x / mu for x in row] for row in entries], unit)
    series = linalg.zeros(tier, size, size)
    term = unit
    for j in range(1, size):
        term = linalg.matmul(tier, term, nilpotent)
        series = linalg.add(series, linalg.scale(tier, term, tier.convert(Fraction((-1) ** (j + 1), j))))
    return linalg.add(series, linalg.scale(tier, unit, log_scalar(tier, mu, branch_shift)))


# ============================================================================
# Logarithms of the whole group
# ============================================================================

@dataclass(frozen=True)
class LieGenerators:
    """Logarithms B_k of the generators in normal coordinates and the exp lattice"""
    logs: tuple
    lattice_normal: tuple
    lattice: tuple
    branches: tuple
    tier: str


def group_log(tier, nf, branch_shifts=None):
    n = nf.n
    logs, branches = [], []
    for k, blocks in enumerate(nf.blocks):
        shifts = branch_shifts[k] if branch_shifts else (0,) * len(blocks)
        full = linalg.zeros(tier, n, n)
        for start, block, shift in zip(nf.starts, blocks, shifts):
            part = block_log(tier, block, shift)
            for i, row in enumerate(part):
                for j, value in enumerate(row):
                    full[start + i][start + j] = value
        logs.append(tuple(tuple(row) for row in full))
        branches.append(tuple(shifts))
    factor = two_pi_i(tier)
    P = linalg.matrix(tier, nf.P)
    lattice_normal, lattice = [], []
    for start in nf.starts:
        unit = [factor if i == start else tier.zero for i in range(n)]
        lattice_normal.append(tuple(unit))
        lattice.append(tuple(linalg.matvec(tier, P, unit)))
    return LieGenerators(
        logs=tuple(logs),
        lattice_normal=tuple(lattice_normal),
        lattice=tuple(lattice),
        branches=tuple(branches),
        tier=tier.name,
    )


def exp_residual(lie, nf, precision=60):
    """Largest entry of exp(B_k) - P^-1 A_k P over all generators"""
    tier = linalg.NumericTier(precision)
    ctx = tier.ctx
    worst = ctx.mpf(0)
    for k, log_matrix in enumerate(lie.logs):
        exponential = ctx.expm(ctx.matrix(linalg.matrix(tier, log_matrix)))
        target = nf.transformed(k, tier)
        for i in range(nf.n):
            for j in range(nf.n):
                worst = max(worst, abs(exponential[i, j] - target[i][j]))
    return worst


def check_regular(tier, nf, u_normal):
    """Raise unless every block-leading coordinate of u is nonzero"""
    scale = tier.scale_of([u_normal])
    for block, start in enumerate(nf.starts):
        if tier.is_zero(u_normal[start], scale):
            raise NotInRegularRegionError(
                f'leading coordinate of block {block + 1} vanishes', block=block,
            )


def g_u_generators(tier, lie, nf, u_normal, names=None):
    """Real generators of g_u: theta(B_k u) and theta(2*pi*i pi_k(u))"""
    u = linalg.vector(tier, u_normal)
    check_regular(tier, nf, u)
    names = names or tuple(f'A{k + 1}' for k in range(len(lie.logs)))
    complex_vectors, labels = [], []
    for name, log_matrix in zip(names, lie.logs):
        complex_vectors.append(linalg.matvec(tier, linalg.matrix(tier, log_matrix), u))
        labels.append(f'log {name}')
    factor = two_pi_i(tier)
    for block, (start, size) in enumerate(zip(nf.starts, nf.eta)):
        vector = [
            factor * u[i] if start <= i < start + size else tier.zero
            for i in range(nf.n)
        ]
        complex_vectors.append(vector)
        labels.append(f'lattice block {block + 1}')
    return AdditiveGroupGens(
        vectors=tuple(tuple(theta(tier, v)) for v in complex_vectors),
        labels=tuple(labels),
        complex_vectors=tuple(tuple(v) for v in complex_vectors),
        tier=tier.name,
    )
