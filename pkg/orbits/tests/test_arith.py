"""
Tests for scalar arithmetic: constants, the scalar grammar and integer relations.
"""

from fractions import Fraction

from django.test import SimpleTestCase

from orbits.arith import (
    ONE, Constant, ConstantBasis, SymbolicComplex, SymbolicReal, default_threshold,
    evaluate, format_scalar, integer_relations, numeric_context, q_decompose,
)
from orbits.exceptions import (
    InputError, NotRepresentableError, ScalarSyntaxError, ThresholdError, UnknownConstantError,
)


class ConstantTest(SimpleTestCase):
    """Tests for Constant"""

    def test_decimal_constant_digits(self):
        constant = Constant('x', '1.41421356')
        self.assertEqual(constant.digits, 9)

    def test_expression_constant_has_no_digit_limit(self):
        self.assertIsNone(Constant('s', 'sqrt(2)').digits)

    def test_expression_evaluates(self):
        ctx = numeric_context(40)
        value = Constant('l', 'log(3/2)').evaluate(ctx)
        self.assertLess(abs(value - ctx.log(ctx.mpf(3) / 2)), ctx.mpf(10) ** -35)

    def test_rejects_unreadable_value(self):
        with self.assertRaises(InputError):
            Constant('x', 'tan(1)')

    def test_rejects_reserved_name(self):
        with self.assertRaises(InputError):
            Constant('i', '2')


class ConstantBasisTest(SimpleTestCase):
    """Tests for ConstantBasis"""

    def test_standard_names(self):
        basis = ConstantBasis.standard('pi', 'sqrt2', 'log3')
        self.assertEqual(basis.names, ('1', 'pi', 'sqrt2', 'log3'))
        self.assertEqual(basis.pi_index, 1)

    def test_first_constant_must_be_one(self):
        with self.assertRaises(InputError):
            ConstantBasis((Constant('pi', 'pi'),))

    def test_duplicate_names_rejected(self):
        with self.assertRaises(InputError):
            ConstantBasis.declare([('a', '2'), ('a', '3')])

    def test_zero_constant_rejected(self):
        with self.assertRaises(InputError):
            ConstantBasis.declare([('z', '0.0')])

    def test_unknown_name(self):
        with self.assertRaises(UnknownConstantError):
            ConstantBasis.standard('pi').index('sqrt2')

    def test_digit_limit_uses_decimal_constants(self):
        basis = ConstantBasis.declare([('a', '1.2345'), ('pi', 'pi')])
        self.assertEqual(basis.digit_limit, 5)


class SymbolicArithmeticTest(SimpleTestCase):
    """Tests for SymbolicReal and SymbolicComplex"""

    def setUp(self):
        self.basis = ConstantBasis.standard('sqrt2', 'pi')

    def test_rational_scaling(self):
        root = SymbolicReal.constant(self.basis, 'sqrt2')
        self.assertEqual((root * 3).coeffs, (0, 3, 0))
        self.assertEqual((root / 2).coeffs, (0, Fraction(1, 2), 0))

    def test_product_of_irrationals_leaves_span(self):
        root = SymbolicReal.constant(self.basis, 'sqrt2')
        pi = SymbolicReal.constant(self.basis, 'pi')
        with self.assertRaises(NotRepresentableError):
            root * pi

    def test_proportional_quotient_is_rational(self):
        pi = SymbolicReal.constant(self.basis, 'pi')
        self.assertEqual((pi * 4) / (pi * 2), SymbolicReal.rational(self.basis, 2))

    def test_gaussian_division(self):
        one_plus_i = SymbolicComplex.from_rational(self.basis, 1, 1)
        quotient = SymbolicComplex.one(self.basis) / one_plus_i
        self.assertEqual(quotient.gaussian_value, (Fraction(1, 2), Fraction(-1, 2)))

    def test_division_by_imaginary_constant(self):
        two_pi_i = SymbolicComplex(SymbolicReal.zero(self.basis), SymbolicReal.constant(self.basis, 'pi', 2))
        quotient = two_pi_i / two_pi_i
        self.assertEqual(quotient, SymbolicComplex.one(self.basis))


class ScalarGrammarTest(SimpleTestCase):
    """Tests for q_decompose and format_scalar"""

    def setUp(self):
        self.basis = ConstantBasis.standard('pi', 'sqrt2')

    def test_mixed_literal(self):
        value = q_decompose('1/2*pi - 1/3 i', self.basis)
        self.assertEqual(value.re.coeffs, (0, Fraction(1, 2), 0))
        self.assertEqual(value.im.coeffs, (Fraction(-1, 3), 0, 0))

    def test_constant_over_integer(self):
        value = q_decompose('pi/2', self.basis)
        self.assertEqual(value.re.coeffs, (0, Fraction(1, 2), 0))

    def test_imaginary_constant_forms(self):
        spaced = q_decompose('2*pi i', self.basis)
        joined = q_decompose('2*pii', self.basis)
        self.assertEqual(spaced, joined)
        self.assertEqual(spaced.im.coeffs, (0, 2, 0))

    def test_bare_unit(self):
        self.assertEqual(q_decompose('-i', self.basis).im.coeffs, (-1, 0, 0))

    def test_unknown_constant(self):
        with self.assertRaises(UnknownConstantError):
            q_decompose('3*e', self.basis)

    def test_malformed_literals(self):
        for literal in ('', '1/0', '2 *', '1 + + 2', 'pi/0'):
            with self.subTest(literal=literal):
                with self.assertRaises(ScalarSyntaxError):
                    q_decompose(literal, self.basis)

    def test_printing_reads_back(self):
        for literal in ('0', 'i', '3 - sqrt2', '1/2*pi - 1/3 i', '-2*sqrt2 i'):
            with self.subTest(literal=literal):
                value = q_decompose(literal, self.basis)
                self.assertEqual(q_decompose(format_scalar(value), self.basis), value)

    def test_canonical_printing(self):
        value = q_decompose('1/2*pi - 1/3 i', self.basis)
        self.assertEqual(format_scalar(value), '1/2*pi - 1/3 i')


class EvaluateTest(SimpleTestCase):
    """Tests for evaluate"""

    def test_value_matches_numeric(self):
        basis = ConstantBasis.standard('sqrt2')
        value = evaluate(q_decompose('1 + sqrt2 i', basis), 50)
        ctx = numeric_context(60)
        self.assertLess(abs(ctx.mpf(value.imag) - ctx.sqrt(2)), ctx.mpf(10) ** -48)

    def test_minimum_precision(self):
        basis = ConstantBasis()
        with self.assertRaises(InputError):
            evaluate(SymbolicComplex.one(basis), 10)


class IntegerRelationsTest(SimpleTestCase):
    """Tests for integer_relations"""

    def test_exact_relation(self):
        basis = ConstantBasis.standard('sqrt2')
        values = [q_decompose(text, basis) for text in ('1', 'sqrt2', '2 + 3*sqrt2')]
        lattice = integer_relations(values, mode='exact')
        self.assertEqual(lattice.basis, ((2, 3, -1),))
        self.assertFalse(lattice.heuristic)

    def test_exact_independent_values(self):
        basis = ConstantBasis.standard('sqrt2')
        values = [q_decompose(text, basis) for text in ('1', 'sqrt2')]
        self.assertEqual(integer_relations(values, mode='exact').rank, 0)

    def test_rational_inputs(self):
        lattice = integer_relations([Fraction(1, 2), Fraction(1, 3)], mode='exact')
        self.assertEqual(lattice.basis, ((2, -3),))

    def test_numeric_relation_is_heuristic(self):
        ctx = numeric_context(70)
        values = [ctx.mpf(1), ctx.sqrt(2), 1 + 2 * ctx.sqrt(2)]
        lattice = integer_relations(values, mode='numeric', precision=60)
        self.assertTrue(lattice.heuristic)
        self.assertEqual(lattice.rank, 1)
        relation = lattice.basis[0]
        self.assertIn(tuple(relation), [(1, 2, -1), (-1, -2, 1)])

    def test_numeric_independent(self):
        ctx = numeric_context(70)
        values = [ctx.mpf(1), ctx.sqrt(2), +ctx.pi]
        self.assertEqual(integer_relations(values, mode='numeric', precision=60).rank, 0)

    def test_threshold_bound(self):
        with self.assertRaises(ThresholdError):
            integer_relations([1.0, 2.0], mode='numeric', tau=1e-3)

    def test_default_threshold(self):
        ctx = numeric_context(70)
        self.assertEqual(default_threshold(60), ctx.mpf(10) ** -50)

    def test_one_is_implicit(self):
        self.assertEqual(ConstantBasis().constants, (ONE,))
