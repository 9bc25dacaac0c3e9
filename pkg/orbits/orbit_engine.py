"""
Orbit analysis of a vector u under a commuting group.

The group is restricted to E(u), the smallest invariant subspace containing
u, and brought to normal form there; the closure of the orbit algebra g_u
then gives the regularity order m.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import linalg
from .exceptions import (
    InconsistentSystemError, InputError, InternalInconsistencyError, NonInvariantSubspaceError,
    NotInRegularRegionError, NotRepresentableError,
)
from .group_closure import AdditiveGroupGens, ClosureDecomposition, closure_decomposition
from .lie_log import LieGenerators, check_regular, g_u_generators, group_log
from .linalg import Echelon, NumericTier, TierRunner
from .normal_form import GroupSpec, NormalForm, build_normal_form, combine, restrict

logger = logging.getLogger(__name__)

REGULAR_SAMPLE_ATTEMPTS = 50
MAPPING_ATTEMPTS = 25


@dataclass(frozen=True)
class Hyperplane:
    """Kernel of `functional` inside E(u); `local` is the same functional in E(u) coordinates"""
    block: int
    functional: tuple
    local: tuple


@dataclass(frozen=True)
class OrbitReport:
    n: int
    field: str
    m: int
    r_u: int
    u: tuple
    E_basis: tuple = ()
    restricted: Optional[GroupSpec] = None
    normal_form: Optional[NormalForm] = None
    lie: Optional[LieGenerators] = None
    gu: Optional[AdditiveGroupGens] = None
    gu_original: tuple = ()
    closure: Optional[ClosureDecomposition] = None
    singular_locus: tuple = ()
    tier: str = 'exact'
    notes: tuple = ()

    @property
    def discrete(self):
        return self.m == 0

    @property
    def closure_is_subspace(self):
        return self.m == 2 * self.r_u

    @property
    def dense_in_ambient(self):
        return self.m == ambient_order(self.n, self.field)

    @property
    def heuristic(self):
        return self.closure is not None and self.closure.heuristic

    @property
    def classification(self):
        return classify_orbit(self)


def ambient_order(n, field):
    return n if field == 'R' else 2 * n


def classify_orbit(report):
    if report.m == 0:
        return 'discrete'
    if report.m == ambient_order(report.n, report.field):
        return 'dense_in_ambient'
    if report.m == 2 * report.r_u:
        return 'closure_is_subspace'
    return f'regular({report.m})'


# ============================================================================
# E(u) and restriction
# ============================================================================

def span_basis(tier, spec, u):
    """Echelon basis of E(u); the first vector is u itself"""
    generators = spec.matrices(tier)
    echelon = Echelon(tier, spec.n)
    u = linalg.vector(tier, u)
    if not echelon.add(u):
        return ()
    # invariance under A implies invariance under A^-1 in finite dimension
    queue = [u]
    while queue:
        vector = queue.pop(0)
        for a in generators:
            image = linalg.matvec(tier, a, vector)
            if echelon.add(image):
                queue.append(image)
    return tuple(tuple(b) for b in echelon.basis)


def orbit_span(spec, u):
    runner = TierRunner(spec.config, spec.basis)
    return runner.run('orbit span', span_basis, spec, u)


def _echelon(tier, basis):
    dim = len(basis[0])
    return Echelon.from_vectors(tier, dim, [linalg.vector(tier, b) for b in basis])


def restrict_spec(tier, spec, basis):
    """Group restricted to span(basis), in the coordinates of that basis"""
    if not basis:
        raise NonInvariantSubspaceError('cannot restrict to the zero subspace')
    echelon = _echelon(tier, basis)
    if len(echelon) != len(basis):
        raise InputError('restriction basis is not linearly independent')
    restricted = tuple(
        tuple(tuple(row) for row in restrict(tier, a, echelon))
        for a in spec.matrices(tier)
    )
    result = spec.with_generators(restricted)
    result._validate(tier)
    return result


def restrict_group(spec, basis):
    runner = TierRunner(spec.config, spec.basis)
    return runner.run('restriction', restrict_spec, spec, basis)


# ============================================================================
# Orbit order
# ============================================================================

def _orbit_algebra(tier, lie, nf, names):
    """g_u generators in the normal coordinates of E(u)"""
    P_inv = linalg.matrix(tier, nf.P_inv)
    u_normal = [row[0] for row in P_inv]
    try:
        return g_u_generators(tier, lie, nf, u_normal, names)
    except NotInRegularRegionError as exc:
        raise InternalInconsistencyError(f'u is not regular in its own span ({exc})') from exc


def original_coordinates(tier, gens, nf, basis):
    """Images in C^n of the g_u generators; numeric when the exact products leave the span"""
    try:
        P = linalg.matrix(tier, nf.P)
        E = linalg.transpose([linalg.vector(tier, b) for b in basis])
        to_original = linalg.matmul(tier, E, P)
        return tuple(
            tuple(linalg.matvec(tier, to_original, linalg.vector(tier, z))) for z in gens.complex_vectors
        )
    except NotRepresentableError:
        return original_coordinates(NumericTier(tier.precision), gens, nf, basis)


def locus_hyperplanes(tier, nf, basis):
    """Hyperplanes z_k = 0 (one per block) of E(u), mapped to C^n"""
    echelon = _echelon(tier, basis)
    left = echelon.left_inverse()
    P_inv = linalg.matrix(tier, nf.P_inv)
    hyperplanes = []
    for block, start in enumerate(nf.starts):
        local = P_inv[start]
        functional = [linalg.dot(tier, local, column) for column in linalg.transpose(left)]
        hyperplanes.append(Hyperplane(block, tuple(_normalise(tier, functional)), tuple(local)))
    return tuple(hyperplanes)


def _normalise(tier, functional):
    lead = next((x for x in functional if not tier.is_structural_zero(x)), None)
    if lead is None:
        return functional
    try:
        return [x / lead for x in functional]
    except NotRepresentableError:
        return functional


def singular_locus(nf, basis, tier=None):
    tier = tier or linalg.tier_of(nf.P)
    return locus_hyperplanes(tier, nf, basis)


def locus_is_invariant(tier, spec, hyperplane, basis):
    """True when every generator maps E(u) intersected with the hyperplane into itself"""
    phi = linalg.vector(tier, hyperplane.functional)
    vectors = [linalg.vector(tier, b) for b in basis]
    values = [linalg.dot(tier, phi, b) for b in vectors]
    pivot = next((j for j, c in enumerate(values) if not tier.is_zero(c, tier.scale_of([values]))), None)
    if pivot is None:
        return False
    for a in spec.matrices(tier):
        images = [linalg.dot(tier, phi, linalg.matvec(tier, a, b)) for b in vectors]
        ratio = images[pivot] / values[pivot]
        for image, value in zip(images, values):
            if not tier.is_zero(image - ratio * value, tier.scale_of([images])):
                return False
    return True


def _zero_report(spec, u, runner):
    closure = ClosureDecomposition(ambient_dim=0, span_dim=0, dim=0, precision=spec.config.precision)
    return OrbitReport(
        n=spec.n, field=spec.field, m=0, r_u=0, u=tuple(u), closure=closure,
        tier=runner.tier_name, notes=('u = 0: the orbit is the single point 0',),
    )


def orbit_order(spec, u):
    """Regularity order m of the orbit of u, with its supporting data"""
    u = tuple(u)
    if len(u) != spec.n:
        raise InputError(f'vector has {len(u)} coordinates, expected {spec.n}')
    runner = TierRunner(spec.config, spec.basis)
    basis = runner.run('orbit span', span_basis, spec, u)
    if not basis:
        return _zero_report(spec, u, runner)
    restricted = runner.run('restriction', restrict_spec, spec, basis)
    nf = runner.run('normal form', build_normal_form, restricted)
    lie = runner.run('logarithms', group_log, nf)
    gens = runner.run('orbit algebra', _orbit_algebra, lie, nf, spec.names)
    originals = original_coordinates(runner.current, gens, nf, basis)
    closure = runner.run('closure', closure_decomposition, gens, spec.config)
    hyperplanes = runner.run('singular locus', locus_hyperplanes, nf, basis)
    notes = list(runner.notes)
    if closure.heuristic:
        notes.append('relation lattice found numerically (heuristic)')
    if spec.field == 'R' and closure.dim > spec.n:
        notes.append(f'order {closure.dim} exceeds n = {spec.n} for a real group')
    report = OrbitReport(
        n=spec.n,
        field=spec.field,
        m=closure.dim,
        r_u=len(basis),
        u=u,
        E_basis=basis,
        restricted=restricted,
        normal_form=nf,
        lie=lie,
        gu=gens,
        gu_original=originals,
        closure=closure,
        singular_locus=hyperplanes,
        tier=runner.tier_name,
        notes=tuple(notes),
    )
    logger.info('orbit order %s (r_u=%s, %s, tier %s)', report.m, report.r_u, report.classification, report.tier)
    return report


# ============================================================================
# Maps between orbits and regular points
# ============================================================================

def group_span(tier, spec):
    """Basis of the linear span of the group, built from products of generators"""
    n = spec.n
    generators = spec.matrices(tier)
    unit = linalg.identity(tier, n)
    echelon = Echelon(tier, n * n)
    echelon.add([x for row in unit for x in row])
    span, queue = [unit], [unit]
    while queue:
        current = queue.pop(0)
        for a in generators:
            product = linalg.matmul(tier, a, current)
            if echelon.add([x for row in product for x in row]):
                span.append(product)
                queue.append(product)
    return span


def _invertible(tier, matrix):
    return linalg.rank(tier, matrix) == len(matrix)


def _solutions(tier, x, null, seed=0):
    """x, then x plus seeded random integer combinations of the kernel basis"""
    yield x
    if not null:
        return
    rng = random.Random(seed)
    for _ in range(MAPPING_ATTEMPTS):
        weights = [tier.convert(rng.randint(-9, 9)) for _ in null]
        yield [
            xi + sum((w * k[i] for w, k in zip(weights, null)), tier.zero)
            for i, xi in enumerate(x)
        ]


def mapping_matrix(tier, spec, u, v):
    u = linalg.vector(tier, u)
    v = linalg.vector(tier, v)
    basis = span_basis(tier, spec, u)
    if not basis:
        raise NotInRegularRegionError('u = 0 has no regular orbit')
    echelon = _echelon(tier, basis)
    coords = echelon.coordinates(v)
    if coords is None:
        raise NotInRegularRegionError('v does not lie in E(u)')
    restricted = restrict_spec(tier, spec, basis)
    nf = build_normal_form(tier, restricted)
    P_inv = linalg.matrix(tier, nf.P_inv)
    check_regular(tier, nf, [row[0] for row in P_inv])
    check_regular(tier, nf, linalg.matvec(tier, P_inv, coords))

    span = group_span(tier, spec)
    columns = [linalg.matvec(tier, m, u) for m in span]
    x, null = linalg.solve(tier, linalg.transpose(columns), v)
    for coefficients in _solutions(tier, x, null):
        B = linalg.zeros(tier, spec.n, spec.n)
        for c, m in zip(coefficients, span):
            if not tier.is_structural_zero(c):
                B = linalg.add(B, linalg.scale(tier, m, c))
        if _invertible(tier, B):
            break
    else:
        raise InconsistentSystemError('no invertible group element maps u to v')
    for a in spec.matrices(tier):
        commutator = linalg.sub(linalg.matmul(tier, a, B), linalg.matmul(tier, B, a))
        if not linalg.is_zero_matrix(tier, commutator, _loose(tier)):
            raise InternalInconsistencyError('mapping matrix does not commute with the group')
    return tuple(tuple(row) for row in B)


def _loose(tier):
    return tier.rank_tol if tier.name == 'numeric' else None


def map_orbit(spec, u, v):
    """Invertible B commuting with the group and mapping u to v"""
    runner = TierRunner(spec.config, spec.basis)
    return runner.run('orbit map', mapping_matrix, spec, u, v)


def regular_points(tier, spec, u, count, seed=0):
    rng = random.Random(seed)
    basis = span_basis(tier, spec, u)
    if not basis:
        return []
    restricted = restrict_spec(tier, spec, basis)
    nf = build_normal_form(tier, restricted)
    P_inv = linalg.matrix(tier, nf.P_inv)
    vectors = [linalg.vector(tier, b) for b in basis]
    points = []
    for _ in range(REGULAR_SAMPLE_ATTEMPTS * count):
        if len(points) >= count:
            break
        coefficients = [
            tier.convert(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
            for _ in range(len(basis))
        ]
        try:
            check_regular(tier, nf, linalg.matvec(tier, P_inv, coefficients))
        except NotInRegularRegionError:
            continue
        points.append(tuple(combine(tier, vectors, coefficients)))
    return points


def sample_regular_points(spec, u, count, seed=0):
    """Random points of E(u) whose block-leading coordinates are all nonzero"""
    runner = TierRunner(spec.config, spec.basis)
    return runner.run('regular points', regular_points, spec, u, count, seed)
