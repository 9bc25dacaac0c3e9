"""
Empirical orbit sampling and a box-counting dimension estimate, used as an
independent check of the analytic order.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .exceptions import InputError, InsufficientPointsError
from .linalg import NumericTier

logger = logging.getLogger(__name__)

DEFAULT_LEVELS = 8
MIN_OCCUPANCY = 3
MAX_DOUBLINGS = 64


@dataclass(frozen=True)
class OrbitCloud:
    """Points w.u for words w with every exponent in [-L, L], norm at most R"""
    n: int
    word_length: int
    radius: object
    center: tuple
    exponents: tuple
    points: tuple
    discarded: int
    precision: int

    @property
    def attempted(self):
        return len(self.points) + self.discarded

    def embedded(self):
        """Points as real float coordinates (Re z, Im z)"""
        return np.array(
            [[float(z.real) for z in x] + [float(z.imag) for z in x] for x in self.points],
            dtype=float,
        ).reshape(len(self.points), 2 * self.n)

    def embedded_center(self):
        return np.array([float(z.real) for z in self.center] + [float(z.imag) for z in self.center], dtype=float)


def _norm(ctx, vector):
    return ctx.sqrt(ctx.fsum(abs(z) ** 2 for z in vector))


def enumerate_orbit(spec, u, word_length, radius=None, radius_factor=1e6):
    if word_length < 1:
        raise InputError('word length must be at least 1')
    tier = NumericTier(spec.config.precision)
    ctx = tier.ctx
    generators = spec.matrices(tier)
    inverses = [linalg.inverse(tier, a) for a in generators]
    center = linalg.vector(tier, u)
    size = _norm(ctx, center)
    limit = ctx.mpf(radius) if radius is not None else ctx.mpf(radius_factor) * size
    if limit <= size:
        raise InputError('radius must exceed the norm of u')

    partial = [((), center)]
    for a, a_inv in zip(generators, inverses):
        extended = []
        for exponents, x in partial:
            powers = {0: x}
            forward = backward = x
            for e in range(1, word_length + 1):
                forward = linalg.matvec(tier, a, forward)
                backward = linalg.matvec(tier, a_inv, backward)
                powers[e], powers[-e] = forward, backward
            for e in range(-word_length, word_length + 1):
                extended.append((exponents + (e,), powers[e]))
        partial = extended

    kept = [(e, x) for e, x in partial if _norm(ctx, x) <= limit]
    discarded = len(partial) - len(kept)
    logger.info('sampled %s words, kept %s, discarded %s', len(partial), len(kept), discarded)
    return OrbitCloud(
        n=spec.n,
        word_length=word_length,
        radius=limit,
        center=tuple(center),
        exponents=tuple(e for e, _ in kept),
        points=tuple(tuple(x) for _, x in kept),
        discarded=discarded,
        precision=spec.config.precision,
    )


def export_cloud(cloud, stream):
    """Write the header line then one line of real coordinates per point"""
    stream.write(f'# n={cloud.n} L={cloud.word_length} discarded={cloud.discarded}\n')
    for row in cloud.embedded():
        stream.write(' '.join(format(value, '.17g') for value in row) + '\n')


# ============================================================================
# Box counting
# ============================================================================

@dataclass(frozen=True)
class BoxDimension:
    estimate: float
    residual: float
    scales: tuple
    counts: tuple
    radius: float
    points_used: int


def _occupied(window, radius, side):
    indices = np.floor((window + radius) / side).astype(np.int64)
    return len(np.unique(indices, axis=0))


def box_dimension(points, center, scales=None, radius=None, min_points=100, levels=DEFAULT_LEVELS):
    """
    Slope of log(occupied boxes) against log(1/side) inside the square
    window of half-width `radius` around `center`.

    Without explicit scales the window starts at |center|/4 and doubles
    until it holds min_points points; sides 2r/2^k are then used while the
    mean box occupancy stays at least 3 (two levels at minimum).
    """
    points = np.asarray(points, dtype=float)
    center = np.asarray(center, dtype=float)
    offsets = points - center if len(points) else np.zeros((0, len(center)))
    distance = np.max(np.abs(offsets), axis=1) if len(offsets) else np.zeros(0)

    if scales is not None:
        chosen = sorted((float(s) for s in scales), reverse=True)
        radius = float(radius) if radius is not None else chosen[0]
    else:
        if radius is None:
            radius = float(np.linalg.norm(center)) / 4 or 1.0
            for _ in range(MAX_DOUBLINGS):
                inside = int(np.sum(distance < radius))
                if inside >= min_points or inside == len(points):
                    break
                radius *= 2
        radius = float(radius)
        chosen = [2 * radius / 2 ** k for k in range(levels)]
    window = offsets[distance < radius]
    if len(window) < max(min_points, 1):
        raise InsufficientPointsError(len(window), max(min_points, 1))

    counts = [_occupied(window, radius, side) for side in chosen]
    if scales is None:
        keep = 2
        while keep < len(chosen) and len(window) / counts[keep] >= MIN_OCCUPANCY:
            keep += 1
        chosen, counts = chosen[:keep], counts[:keep]

    x = np.log(1 / np.array(chosen))
    y = np.log(np.array(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    logger.debug('box counts %s at sides %s', counts, chosen)
    return BoxDimension(
        estimate=float(slope),
        residual=residual,
        scales=tuple(chosen),
        counts=tuple(counts),
        radius=radius,
        points_used=len(window),
    )


@dataclass(frozen=True)
class OracleVerdict:
    analytic_m: int
    estimate: Optional[float]
    residual: Optional[float]
    verdict: str
    detail: str = ''


def oracle_compare(report, cloud, tolerance=0.5, **options):
    """Compare an analytic order with the box-counting estimate of a cloud"""
    m = getattr(report, 'm', report)
    try:
        result = box_dimension(cloud.embedded(), cloud.embedded_center(), **options)
    except InsufficientPointsError as exc:
        return OracleVerdict(m, None, None, 'inconclusive', str(exc))
    verdict = 'consistent' if abs(result.estimate - m) <= tolerance else 'inconsistent'
    return OracleVerdict(m, result.estimate, result.residual, verdict)


def word_inverse_residual(spec, cloud):
    """Largest |w^-1 (w.u) - u| over the cloud, relative to |u|"""
    tier = NumericTier(cloud.precision)
    ctx = tier.ctx
    inverses = [linalg.inverse(tier, a) for a in spec.matrices(tier)]
    generators = spec.matrices(tier)
    center = [ctx.mpc(z) for z in cloud.center]
    worst = ctx.mpf(0)
    for exponents, point in zip(cloud.exponents, cloud.points):
        x = list(point)
        for e, a, a_inv in zip(exponents, generators, inverses):
            step = a_inv if e > 0 else a
            for _ in itertools.repeat(None, abs(e)):
                x = linalg.matvec(tier, step, x)
        worst = max(worst, _norm(ctx, [p - q for p, q in zip(x, center)]))
    return worst / _norm(ctx, center)
