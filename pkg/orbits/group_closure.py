"""
Closure of a finitely generated additive subgroup of R^d.

The closure splits as V (+) Lambda: V is the largest vector subspace it
contains, Lambda a lattice in a complementary subspace W. With
M = Z^p intersected with the row space of the generator matrix, the
dimension of V is rank(U) - rank(M).
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Optional

from . import lattices, linalg
from .arith import integer_relations
from .exceptions import (
    InconsistentSystemError, InternalInconsistencyError, PropertyDHypothesisError,
)
from .linalg import BackendConfig, Echelon, NumericTier

logger = logging.getLogger(__name__)

SHORT_VECTOR_SEARCH = 6


def theta(tier, vector):
    """Real embedding (Re z_1..Re z_n, Im z_1..Im z_n)"""
    if tier.name == 'exact':
        return [z.re for z in vector] + [z.im for z in vector]
    return [z.real for z in vector] + [z.imag for z in vector]


@dataclass(frozen=True)
class AdditiveGroupGens:
    """Generators of an additive subgroup of R^d, exact or numeric"""
    vectors: tuple
    labels: tuple = ()
    complex_vectors: tuple = ()
    tier: str = 'exact'

    def __post_init__(self):
        vectors = tuple(tuple(v) for v in self.vectors)
        object.__setattr__(self, 'vectors', vectors)
        if not self.labels:
            object.__setattr__(self, 'labels', tuple(f'g{k + 1}' for k in range(len(vectors))))

    @classmethod
    def from_real_vectors(cls, vectors, labels=()):
        vectors = tuple(tuple(v) for v in vectors)
        exact = all(not hasattr(x, 'context') for v in vectors for x in v)
        return cls(vectors, labels, (), 'exact' if exact else 'numeric')

    @property
    def dimension(self):
        return len(self.vectors[0]) if self.vectors else 0

    @property
    def count(self):
        return len(self.vectors)


@dataclass(frozen=True)
class ClosureDecomposition:
    ambient_dim: int
    span_dim: int
    dim: int
    V_basis: tuple = ()
    W_basis: tuple = ()
    lattice_basis: tuple = ()
    relations: tuple = ()
    dual_vectors: tuple = ()
    tier: str = 'exact'
    tau: object = None
    min_lattice_norm: Optional[object] = None
    precision: int = 60

    @property
    def lattice_rank(self):
        return len(self.lattice_basis)

    @property
    def heuristic(self):
        return self.tier == 'heuristic'

    def contains(self, x, tol=None):
        """Membership of a real vector in V + Lambda"""
        ctx = NumericTier(self.precision).ctx
        x = [ctx.mpf(value) for value in x]
        tol = ctx.mpf(10) ** (-(self.precision // 2)) if tol is None else ctx.mpf(tol)
        size = max([ctx.mpf(1)] + [abs(value) for value in x])
        residual = list(x)
        for b in self.V_basis + self.W_basis:
            c = ctx.fsum(p * q for p, q in zip(residual, b))
            residual = [r - c * v for r, v in zip(residual, b)]
        if max([ctx.mpf(0)] + [abs(r) for r in residual]) > tol * size:
            return False
        for y in self.dual_vectors:
            c = ctx.fsum(p * q for p, q in zip(y, x))
            if abs(c - ctx.nint(c)) > tol * size:
                return False
        return True


def relation_lattice(tier, gens, config=None):
    """Integer relations among the generators themselves"""
    config = config or BackendConfig()
    if tier.name == 'exact' and gens.tier == 'exact':
        return integer_relations(list(gens.vectors), mode='exact')
    numeric = NumericTier(config.precision)
    items = [[numeric.convert(x).real for x in v] for v in gens.vectors]
    return integer_relations(items, mode='numeric', tau=config.tau, precision=config.precision)


def integer_rowspace_lattice(tier, gens, config=None):
    """Z^p intersected with the row space of U (columns = generators)"""
    config = config or BackendConfig()
    p = gens.count
    columns = [linalg.vector(tier, v) for v in gens.vectors]
    null = linalg.kernel(tier, linalg.transpose(columns), p)
    if tier.name == 'exact':
        items = [[k[i] for k in null] for i in range(p)]
        return integer_relations(items, mode='exact')
    items = [[k[i].real for k in null] for i in range(p)]
    return integer_relations(items, mode='numeric', tau=config.tau, precision=config.precision)


def _gram_schmidt(ctx, vectors, start=(), tol=None):
    """Orthonormal vectors extending `start` by the independent part of `vectors`"""
    basis = [list(b) for b in start]
    added = []
    for v in vectors:
        w = list(v)
        size = max([ctx.mpf(1)] + [abs(x) for x in w])
        for _ in range(2):
            for b in basis:
                c = ctx.fsum(x * y for x, y in zip(w, b))
                w = [x - c * y for x, y in zip(w, b)]
        norm = ctx.sqrt(ctx.fsum(x * x for x in w))
        if norm <= tol * size:
            continue
        w = [x / norm for x in w]
        basis.append(w)
        added.append(tuple(w))
    return added


def _solve_real(ctx, gram, rhs):
    tier = NumericTier(ctx.dps - 10)
    x, _ = linalg.solve(tier, [[ctx.mpc(v) for v in row] for row in gram], [ctx.mpc(v) for v in rhs])
    return [value.real for value in x]


def _shortest_norm(ctx, basis, precision):
    if not basis:
        return None
    magnification = ctx.mpf(10) ** (precision // 2)
    rows = [[int(ctx.nint(magnification * x)) for x in b] for b in basis]
    reduced = lattices.lll_rows(rows)
    candidates = [[ctx.mpf(x) / magnification for x in row] for row in reduced]
    search = candidates[:SHORT_VECTOR_SEARCH]
    best = None
    for coefficients in itertools.product((-1, 0, 1), repeat=len(search)):
        if not any(coefficients):
            continue
        combination = [ctx.fsum(c * row[i] for c, row in zip(coefficients, search)) for i in range(len(basis[0]))]
        norm = ctx.sqrt(ctx.fsum(x * x for x in combination))
        if best is None or norm < best:
            best = norm
    return best


def closure_decomposition(tier, gens, config=None):
    config = config or BackendConfig()
    d, p = gens.dimension, gens.count
    numeric = NumericTier(config.precision)
    ctx = numeric.ctx
    real_vectors = [[numeric.convert(x).real for x in v] for v in gens.vectors]
    if p == 0 or all(abs(x) == 0 for v in real_vectors for x in v):
        return ClosureDecomposition(ambient_dim=d, span_dim=0, dim=0, precision=config.precision)
    columns = [linalg.vector(tier, v) for v in gens.vectors]
    span_dim = linalg.rank(tier, columns)
    relation_lattice = integer_rowspace_lattice(tier, gens, config)
    relations = relation_lattice.basis
    dim = span_dim - len(relations)
    if dim < 0:
        raise InternalInconsistencyError('relation lattice is larger than the span')

    # geometry is computed numerically from the exact relation data
    echelon = Echelon(numeric, d)
    independent = [j for j, v in enumerate(real_vectors) if echelon.add([ctx.mpc(x) for x in v])]
    spanning = [real_vectors[j] for j in independent]
    gram = [[ctx.fsum(x * y for x, y in zip(a, b)) for b in spanning] for a in spanning]
    duals = []
    for m in relations:
        coefficients = _solve_real(ctx, gram, [ctx.mpf(m[j]) for j in independent])
        duals.append(tuple(ctx.fsum(c * v[i] for c, v in zip(coefficients, spanning)) for i in range(d)))
    tol = numeric.rank_tol
    W_basis = _gram_schmidt(ctx, duals, tol=tol)
    V_basis = _gram_schmidt(ctx, spanning, start=W_basis, tol=tol)
    if len(V_basis) != dim or len(W_basis) != len(relations):
        raise InternalInconsistencyError('closure geometry does not match the relation lattice')
    lattice_basis = []
    if duals:
        dual_gram = [[ctx.fsum(x * y for x, y in zip(a, b)) for b in duals] for a in duals]
        for i in range(len(duals)):
            unit = [ctx.mpf(int(i == j)) for j in range(len(duals))]
            coefficients = _solve_real(ctx, dual_gram, unit)
            lattice_basis.append(tuple(ctx.fsum(c * y[k] for c, y in zip(coefficients, duals)) for k in range(d)))
    decomposition = ClosureDecomposition(
        ambient_dim=d,
        span_dim=span_dim,
        dim=dim,
        V_basis=tuple(V_basis),
        W_basis=tuple(W_basis),
        lattice_basis=tuple(lattice_basis),
        relations=tuple(relations),
        dual_vectors=tuple(duals),
        tier='heuristic' if relation_lattice.heuristic else 'exact',
        tau=relation_lattice.tau,
        min_lattice_norm=_shortest_norm(ctx, lattice_basis, config.precision),
        precision=config.precision,
    )
    logger.debug('closure: span %s, relations %s, dim %s (%s)', span_dim, len(relations), dim, decomposition.tier)
    return decomposition


def density_test(tier, gens, target_dim=None, config=None):
    """True when the group is dense in a subspace of dimension target_dim"""
    decomposition = closure_decomposition(tier, gens, config)
    target = decomposition.span_dim if target_dim is None else target_dim
    return decomposition.dim == target


def property_D(tier, vectors, m, config=None):
    """
    Density of Z u_(n-m+1) + ... + Z u_p in R u_(n-m+1) + ... + R u_n for
    vectors arranged with a leading basis u_1..u_n and every later vector a
    combination with nonzero coefficients of the last m basis vectors.
    """
    vectors = [linalg.vector(tier, v) for v in vectors]
    if not vectors:
        raise PropertyDHypothesisError('no vectors given')
    n, p = len(vectors[0]), len(vectors)
    if not 0 <= m <= n:
        raise PropertyDHypothesisError(f'm must lie between 0 and {n}')
    if p < n or linalg.rank(tier, vectors[:n]) < n:
        raise PropertyDHypothesisError(f'the first {n} vectors do not form a basis')
    tail = vectors[n - m:n]
    system = linalg.transpose(tail) if tail else [[] for _ in range(n)]
    for k in range(n, p):
        if not tail:
            if not all(tier.is_zero(x, tier.scale_of([vectors[k]])) for x in vectors[k]):
                raise PropertyDHypothesisError(f'vector {k + 1} must vanish when m = 0')
            continue
        try:
            coefficients, _ = linalg.solve(tier, system, vectors[k])
        except InconsistentSystemError:
            raise PropertyDHypothesisError(
                f'vector {k + 1} is not a combination of vectors {n - m + 1}..{n}'
            ) from None
        if any(tier.is_zero(c, tier.scale_of([coefficients])) for c in coefficients):
            raise PropertyDHypothesisError(f'vector {k + 1} has a zero coefficient')
    gens = AdditiveGroupGens(tuple(tuple(v) for v in vectors[n - m:]), tier=tier.name)
    return closure_decomposition(tier, gens, config).dim == m
