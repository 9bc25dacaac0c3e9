"""
Shared groups and document paths for the orbits tests.
"""

from pathlib import Path

from orbits import linalg
from orbits.arith import ConstantBasis, q_decompose
from orbits.linalg import ExactTier
from orbits.normal_form import GroupSpec

DATA_DIR = Path(__file__).resolve().parent / 'data'

# A = I + E41, B = I + E42 acting on C^4
UNIPOTENT_PAIR = (
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]],
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 0, 1]],
)
DIAGONAL = ([[2, 0], [0, 3]],)
ROTATION = [[0, -1], [1, 0]]

REAL_SHIFTS = ('1', '2', '3')
COMPLEX_SHIFTS = ('1', '2', 'i', '1 + i')
SCALES = ('1', '2', 'sqrt2')


def data_path(name):
    return str(DATA_DIR / name)


def read_data(name):
    return (DATA_DIR / name).read_text()


def unipotent_pair(**kwargs):
    basis = ConstantBasis.standard('sqrt2', 'pi')
    return GroupSpec(UNIPOTENT_PAIR, basis=basis, field='R', names=('A', 'B'), **kwargs)


def _unimodular(rng, n):
    lower = [[1 if i == j else (rng.choice((-1, 0, 1)) if i > j else 0) for j in range(n)] for i in range(n)]
    upper = [[1 if i == j else (rng.choice((-1, 0, 1)) if i < j else 0) for j in range(n)] for i in range(n)]
    return lower, upper


def random_commuting_group(rng, basis, field='R', n=None, p=None, shifts=None, scales=SCALES, **kwargs):
    """
    Generators Q (a_k I + b_k L) Q^-1 sharing one lower triangular L with
    distinct diagonal entries in {0, 1, 2}, so every generator is
    diagonalisable with positive or non-real eigenvalues.
    """
    tier = ExactTier(basis)
    n = n or rng.randint(1, 3)
    p = p or rng.randint(1, 3)
    shifts = shifts or (REAL_SHIFTS if field == 'R' else COMPLEX_SHIFTS)
    diagonal = rng.sample((0, 1, 2), n)
    L = [[diagonal[i] if i == j else (rng.choice((-1, 0, 1)) if i > j else 0) for j in range(n)] for i in range(n)]
    lower, upper = _unimodular(rng, n)
    Q = linalg.matmul(tier, linalg.matrix(tier, lower), linalg.matrix(tier, upper))
    Q_inv = linalg.inverse(tier, Q)
    unit = linalg.identity(tier, n)
    generators = []
    for _ in range(p):
        a = q_decompose(rng.choice(shifts), basis)
        b = q_decompose(rng.choice(scales), basis)
        inner = linalg.add(linalg.scale(tier, unit, a), linalg.scale(tier, linalg.matrix(tier, L), b))
        generators.append(linalg.matmul(tier, linalg.matmul(tier, Q, inner), Q_inv))
    u = tuple(rng.randint(-2, 2) for _ in range(n))
    return GroupSpec(tuple(generators), basis=basis, field=field, **kwargs), u
