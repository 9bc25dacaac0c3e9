"""
Tests for the two arithmetic tiers, elimination and stage-wise fallback.
"""

from fractions import Fraction

from django.test import SimpleTestCase

from orbits import linalg
from orbits.arith import ConstantBasis, SymbolicReal, q_decompose
from orbits.exceptions import (
    InconsistentSystemError, InputError, NotRepresentableError, SingularGeneratorError, ThresholdError,
)
from orbits.linalg import BackendConfig, Echelon, ExactTier, NumericTier, TierRunner


class BackendConfigTest(SimpleTestCase):
    """Tests for BackendConfig"""

    def test_defaults(self):
        config = BackendConfig()
        self.assertEqual(config.precision, 60)
        self.assertEqual(config.tier, 'exact-then-numeric')
        self.assertFalse(config.strict)

    def test_low_precision_rejected(self):
        with self.assertRaises(InputError):
            BackendConfig(precision=20)

    def test_permissive_threshold_rejected(self):
        with self.assertRaises(ThresholdError):
            BackendConfig(tau=1e-4)

    def test_unknown_tier(self):
        with self.assertRaises(InputError):
            BackendConfig(tier='fast')


class ExactEliminationTest(SimpleTestCase):
    """Tests for exact rank, kernel, inverse and solve"""

    def setUp(self):
        self.basis = ConstantBasis.standard('sqrt2')
        self.tier = ExactTier(self.basis)

    def m(self, rows):
        return linalg.matrix(self.tier, [[q_decompose(x, self.basis) for x in row] for row in rows])

    def test_rank_with_irrational_entries(self):
        a = self.m([['1', 'sqrt2'], ['2', '2*sqrt2']])
        self.assertEqual(linalg.rank(self.tier, a), 1)

    def test_kernel(self):
        a = self.m([['1', 'sqrt2']])
        (vector,) = linalg.kernel(self.tier, a, 2)
        self.assertEqual(vector[0], q_decompose('-sqrt2', self.basis))
        self.assertEqual(vector[1], self.tier.one)

    def test_inverse(self):
        a = self.m([['2', '1'], ['1', '1']])
        product = linalg.matmul(self.tier, a, linalg.inverse(self.tier, a))
        self.assertEqual(product, linalg.identity(self.tier, 2))

    def test_singular_inverse(self):
        with self.assertRaises(SingularGeneratorError):
            linalg.inverse(self.tier, self.m([['1', '2'], ['2', '4']]))

    def test_solve_with_kernel(self):
        a = self.m([['1', '1']])
        x, null = linalg.solve(self.tier, a, [self.tier.convert(3)])
        self.assertEqual(linalg.dot(self.tier, a[0], x), self.tier.convert(3))
        self.assertEqual(len(null), 1)

    def test_inconsistent_system(self):
        a = self.m([['1', '0'], ['1', '0']])
        with self.assertRaises(InconsistentSystemError):
            linalg.solve(self.tier, a, [self.tier.convert(1), self.tier.convert(2)])

    def test_numbers_outside_the_span(self):
        with self.assertRaises(NotRepresentableError):
            self.tier.convert(1.5)


class NumericEliminationTest(SimpleTestCase):
    """Tests for the numeric tier"""

    def test_rank_uses_tolerance(self):
        tier = NumericTier(40)
        tiny = tier.ctx.mpf(10) ** -30
        a = linalg.matrix(tier, [[1, 2], [2, 4 + tiny]])
        self.assertEqual(linalg.rank(tier, a), 1)

    def test_inverse(self):
        tier = NumericTier(40)
        a = linalg.matrix(tier, [[2, 1], [1, 1]])
        product = linalg.matmul(tier, a, linalg.inverse(tier, a))
        difference = linalg.sub(product, linalg.identity(tier, 2))
        self.assertTrue(linalg.is_zero_matrix(tier, difference))

    def test_symbolic_values_convert(self):
        basis = ConstantBasis.standard('sqrt2')
        tier = NumericTier(40)
        value = tier.convert(SymbolicReal.constant(basis, 'sqrt2'))
        self.assertLess(abs(value - tier.ctx.sqrt(2)), tier.ctx.mpf(10) ** -38)


class EchelonTest(SimpleTestCase):
    """Tests for Echelon"""

    def setUp(self):
        self.tier = ExactTier(ConstantBasis())

    def v(self, *values):
        return linalg.vector(self.tier, values)

    def test_independence(self):
        echelon = Echelon(self.tier, 3)
        self.assertTrue(echelon.add(self.v(1, 1, 0)))
        self.assertTrue(echelon.add(self.v(0, 1, 1)))
        self.assertFalse(echelon.add(self.v(1, 2, 1)))
        self.assertEqual(len(echelon), 2)

    def test_first_vector_is_kept(self):
        echelon = Echelon.from_vectors(self.tier, 2, [self.v(2, 3)])
        self.assertEqual(echelon.basis[0], self.v(2, 3))

    def test_coordinates(self):
        echelon = Echelon.from_vectors(self.tier, 3, [self.v(1, 0, 0), self.v(0, 0, 1)])
        coords = echelon.coordinates(self.v(2, 0, 5))
        self.assertEqual(coords, self.v(2, 5))
        self.assertIsNone(echelon.coordinates(self.v(0, 1, 0)))

    def test_left_inverse(self):
        vectors = [self.v(1, 1, 0), self.v(0, 0, 1)]
        echelon = Echelon.from_vectors(self.tier, 3, vectors)
        left = echelon.left_inverse()
        for j, b in enumerate(echelon.basis):
            image = linalg.matvec(self.tier, left, b)
            self.assertEqual(image, [self.tier.one if i == j else self.tier.zero for i in range(2)])


def _exact_only(tier, value):
    if tier.name == 'exact':
        raise NotRepresentableError('not in the span')
    return tier.name


class TierRunnerTest(SimpleTestCase):
    """Tests for TierRunner"""

    def test_exact_stage_stays_exact(self):
        runner = TierRunner(BackendConfig(), ConstantBasis())
        self.assertEqual(runner.run('stage', lambda tier: tier.name), 'exact')
        self.assertEqual(runner.tier_name, 'exact')

    def test_fallback_records_note(self):
        runner = TierRunner(BackendConfig(), ConstantBasis())
        self.assertEqual(runner.run('eigenvalues', _exact_only, Fraction(1)), 'numeric')
        self.assertEqual(runner.tier_name, 'numeric')
        self.assertEqual(len(runner.notes), 1)
        self.assertIn('eigenvalues', runner.notes[0])

    def test_later_stages_stay_numeric(self):
        runner = TierRunner(BackendConfig(), ConstantBasis())
        runner.run('first', _exact_only, 1)
        self.assertEqual(runner.run('second', lambda tier: tier.name), 'numeric')

    def test_strict_mode_reraises(self):
        runner = TierRunner(BackendConfig(tier='exact'), ConstantBasis())
        with self.assertRaises(NotRepresentableError):
            runner.run('stage', _exact_only, 1)

    def test_numeric_preference(self):
        runner = TierRunner(BackendConfig(tier='numeric'), ConstantBasis())
        self.assertEqual(runner.run('stage', lambda tier: tier.name), 'numeric')
