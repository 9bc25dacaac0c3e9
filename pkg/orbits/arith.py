"""
Exact scalar tower and arbitrary precision backend.

Scalars are rational combinations over a declared basis of real constants
whose first entry is always 1. Anything that leaves that span raises
NotRepresentableError so that callers can redo the step numerically.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from mpmath import MPContext

from . import lattices
from .exceptions import (
    InputError, NotRepresentableError, ScalarSyntaxError, ThresholdError,
    UnknownConstantError,
)

logger = logging.getLogger(__name__)

MIN_PRECISION = 30
MAX_THRESHOLD = 1e-5

NAME_RE = re.compile(r'[A-Za-z_][A-Za-z0-9_]*')
RATIONAL_RE = re.compile(r'(\d+)(?:\s*/\s*(\d+))?')
POSINT_RE = re.compile(r'\d+')
DECIMAL_RE = re.compile(r'^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$')
EXPRESSION_RE = re.compile(
    r'^(pi|e|sqrt|log|exp|cos|sin)(?:\(\s*(\d+)(?:\s*/\s*(\d+))?\s*\))?$'
)
STANDARD_NAME_RE = re.compile(r'^(pi|e|sqrt|log|exp|cos|sin)(\d+)?$')


@lru_cache(maxsize=None)
def numeric_context(dps):
    """Private mpmath context working with `dps` decimal digits"""
    ctx = MPContext()
    ctx.dps = dps
    return ctx


def default_threshold(precision):
    ctx = numeric_context(precision + 10)
    return ctx.mpf(10) ** (-(precision - 10))


# ============================================================================
# Constant basis
# ============================================================================

@dataclass(frozen=True)
class Constant:
    """A declared real constant: a decimal literal or a named expression"""
    name: str
    value: str
    description: str = ''

    def __post_init__(self):
        if self.name != '1' and (not NAME_RE.fullmatch(self.name) or self.name == 'i'):
            raise InputError(f"invalid constant name '{self.name}'")
        value = self.value.strip()
        object.__setattr__(self, 'value', value)
        if DECIMAL_RE.match(value):
            return
        match = EXPRESSION_RE.match(value)
        if not match:
            raise InputError(f"constant '{self.name}': cannot read value '{value}'")
        func, num, _ = match.groups()
        if (func in ('pi', 'e')) != (num is None):
            raise InputError(f"constant '{self.name}': malformed expression '{value}'")

    @property
    def digits(self):
        """Significant digits of a decimal declaration, None for expressions"""
        if not DECIMAL_RE.match(self.value):
            return None
        mantissa = re.split('[eE]', self.value)[0]
        return len(mantissa.replace('.', '').lstrip('+-0')) or 1

    def evaluate(self, ctx):
        if DECIMAL_RE.match(self.value):
            return ctx.mpf(self.value)
        func, num, den = EXPRESSION_RE.match(self.value).groups()
        if func == 'pi':
            return +ctx.pi
        if func == 'e':
            return +ctx.e
        arg = ctx.mpf(int(num)) / int(den or 1)
        functions = {
            'sqrt': ctx.sqrt, 'log': ctx.log, 'exp': ctx.exp,
            'cos': ctx.cos, 'sin': ctx.sin,
        }
        return functions[func](arg)


ONE = Constant('1', '1', 'rational unit')


@dataclass(frozen=True)
class ConstantBasis:
    """
    Ordered constants asserted to be linearly independent over the rationals.
    The assertion is recorded in reports, never verified.
    """
    constants: tuple = (ONE,)

    def __post_init__(self):
        object.__setattr__(self, 'constants', tuple(self.constants))
        if not self.constants or self.constants[0] != ONE:
            raise InputError('the first constant of a basis must be 1')
        names = [c.name for c in self.constants]
        if len(set(names)) != len(names):
            raise InputError('constant names must be unique')
        ctx = numeric_context(MIN_PRECISION)
        for constant in self.constants:
            value = constant.evaluate(ctx)
            if not ctx.isfinite(value) or value == 0:
                raise InputError(f"constant '{constant.name}' must be finite and nonzero")

    @classmethod
    def declare(cls, declarations):
        """Build a basis from (name, value[, description]) tuples, 1 excluded"""
        constants = [ONE]
        for declaration in declarations:
            constants.append(Constant(*declaration))
        return cls(tuple(constants))

    @classmethod
    def standard(cls, *names):
        """Basis from conventional names such as pi, e, sqrt2, log3, cos1"""
        declarations = []
        for name in names:
            match = STANDARD_NAME_RE.match(name)
            if not match:
                raise InputError(f"'{name}' is not a standard constant name")
            func, arg = match.groups()
            value = func if arg is None else f'{func}({arg})'
            declarations.append((name, value))
        return cls.declare(declarations)

    def __len__(self):
        return len(self.constants)

    @property
    def names(self):
        return tuple(c.name for c in self.constants)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise UnknownConstantError(name) from None

    @property
    def pi_index(self):
        for position, constant in enumerate(self.constants):
            if constant.value == 'pi':
                return position
        return None

    @property
    def digit_limit(self):
        limits = [c.digits for c in self.constants[1:] if c.digits is not None]
        return min(limits) if limits else None

    def values(self, dps):
        return _basis_values(self, dps)


@lru_cache(maxsize=256)
def _basis_values(basis, dps):
    ctx = numeric_context(dps)
    return tuple(c.evaluate(ctx) for c in basis.constants)


# ============================================================================
# Symbolic scalars
# ============================================================================

def _check_basis(left, right):
    if left != right:
        raise InputError('scalars are declared over different constant bases')


@dataclass(frozen=True)
class SymbolicReal:
    """Rational combination sum(coeffs[j] * constant[j])"""
    basis: ConstantBasis
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != len(self.basis):
            raise InputError('coefficient vector does not match the constant basis')
        object.__setattr__(self, 'coeffs', coeffs)

    @classmethod
    def zero(cls, basis):
        return cls(basis, (0,) * len(basis))

    @classmethod
    def rational(cls, basis, value):
        return cls(basis, (Fraction(value),) + (0,) * (len(basis) - 1))

    @classmethod
    def constant(cls, basis, name, factor=1):
        coeffs = [0] * len(basis)
        coeffs[basis.index(name)] = Fraction(factor)
        return cls(basis, tuple(coeffs))

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self):
        return not any(self.coeffs[1:])

    @property
    def rational_value(self):
        if not self.is_rational():
            raise NotRepresentableError(f'{self} is not rational')
        return self.coeffs[0]

    def _coerce(self, other):
        if isinstance(other, SymbolicReal):
            _check_basis(self.basis, other.basis)
            return other
        if isinstance(other, (int, Fraction)):
            return SymbolicReal.rational(self.basis, other)
        return None

    def scaled(self, factor):
        return SymbolicReal(self.basis, tuple(c * factor for c in self.coeffs))

    def __neg__(self):
        return self.scaled(-1)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return SymbolicReal(self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational():
            return self.scaled(other.coeffs[0])
        if self.is_rational():
            return other.scaled(self.coeffs[0])
        raise NotRepresentableError(f'product of {self} and {other} leaves the declared span')

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError('division by a zero scalar')
        if other.is_rational():
            return self.scaled(1 / other.coeffs[0])
        # proportional operands give a rational quotient
        lead = next(j for j, c in enumerate(other.coeffs) if c)
        ratio = self.coeffs[lead] / other.coeffs[lead]
        if all(a == ratio * b for a, b in zip(self.coeffs, other.coeffs)):
            return SymbolicReal.rational(self.basis, ratio)
        raise NotRepresentableError(f'quotient of {self} by {other} leaves the declared span')

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def evaluate(self, ctx):
        values = self.basis.values(ctx.dps)
        total = ctx.mpf(0)
        for coeff, value in zip(self.coeffs, values):
            if coeff:
                total += ctx.mpf(coeff.numerator) / coeff.denominator * value
        return total

    def __str__(self):
        return format_scalar(SymbolicComplex(self, SymbolicReal.zero(self.basis)))


@dataclass(frozen=True)
class SymbolicComplex:
    re: SymbolicReal
    im: SymbolicReal

    def __post_init__(self):
        _check_basis(self.re.basis, self.im.basis)

    @classmethod
    def from_rational(cls, basis, re=0, im=0):
        return cls(SymbolicReal.rational(basis, re), SymbolicReal.rational(basis, im))

    @classmethod
    def from_real(cls, value):
        return cls(value, SymbolicReal.zero(value.basis))

    @classmethod
    def zero(cls, basis):
        return cls.from_rational(basis)

    @classmethod
    def one(cls, basis):
        return cls.from_rational(basis, 1)

    @property
    def basis(self):
        return self.re.basis

    def is_zero(self):
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_real(self):
        return self.im.is_zero()

    def is_gaussian_rational(self):
        return self.re.is_rational() and self.im.is_rational()

    @property
    def gaussian_value(self):
        return self.re.rational_value, self.im.rational_value

    def conjugate(self):
        return SymbolicComplex(self.re, -self.im)

    def _coerce(self, other):
        if isinstance(other, SymbolicComplex):
            _check_basis(self.basis, other.basis)
            return other
        if isinstance(other, SymbolicReal):
            _check_basis(self.basis, other.basis)
            return SymbolicComplex.from_real(other)
        if isinstance(other, (int, Fraction)):
            return SymbolicComplex.from_rational(self.basis, other)
        return None

    def __neg__(self):
        return SymbolicComplex(-self.re, -self.im)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return SymbolicComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return SymbolicComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, other.re, other.im
        return SymbolicComplex(_product(a, c) - _product(b, d), _product(a, d) + _product(b, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError('division by a zero scalar')
        if other.is_gaussian_rational():
            c, d = other.gaussian_value
            norm = c * c + d * d
            return self * SymbolicComplex.from_rational(self.basis, c / norm, -d / norm)
        if other.im.is_zero():
            return SymbolicComplex(self.re / other.re, self.im / other.re)
        if other.re.is_zero():
            return SymbolicComplex(self.im / other.im, -(self.re / other.im))
        raise NotRepresentableError(f'quotient of {self} by {other} leaves the declared span')

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def evaluate(self, ctx):
        return ctx.mpc(self.re.evaluate(ctx), self.im.evaluate(ctx))

    def __str__(self):
        return format_scalar(self)


def _product(left, right):
    # zero factors never leave the span
    if left.is_zero() or right.is_zero():
        return SymbolicReal.zero(left.basis)
    return left * right


# ============================================================================
# Grammar: parsing and printing
# ============================================================================

def _format_fraction(value):
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def _terms(value, imaginary):
    for name, coeff in zip(value.basis.names, value.coeffs):
        if not coeff:
            continue
        magnitude = abs(coeff)
        if name == '1':
            text = '' if imaginary and magnitude == 1 else _format_fraction(magnitude)
        elif magnitude == 1:
            text = name
        else:
            text = f'{_format_fraction(magnitude)}*{name}'
        if imaginary:
            text = f'{text} i' if text else 'i'
        yield coeff < 0, text


def format_scalar(value):
    """Print a scalar in the input grammar, e.g. '1/2*pi - 1/3 i'"""
    terms = list(_terms(value.re, False)) + list(_terms(value.im, True))
    if not terms:
        return '0'
    negative, text = terms[0]
    out = ('-' if negative else '') + text
    for negative, text in terms[1:]:
        out += (' - ' if negative else ' + ') + text
    return out


class _ScalarParser:
    def __init__(self, text, basis):
        self.text = text
        self.basis = basis
        self.pos = 0

    def error(self, message):
        return ScalarSyntaxError(f"{message} in scalar '{self.text}' at position {self.pos}")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ''

    def parse(self):
        re_coeffs = [Fraction(0)] * len(self.basis)
        im_coeffs = [Fraction(0)] * len(self.basis)
        sign = 1
        if self.peek() in ('+', '-'):
            sign = -1 if self.peek() == '-' else 1
            self.pos += 1
        while True:
            coeff, index, imaginary = self.term()
            target = im_coeffs if imaginary else re_coeffs
            target[index] += sign * coeff
            char = self.peek()
            if not char:
                break
            if char not in ('+', '-'):
                raise self.error(f"unexpected '{char}'")
            sign = -1 if char == '-' else 1
            self.pos += 1
        return SymbolicComplex(
            SymbolicReal(self.basis, tuple(re_coeffs)),
            SymbolicReal(self.basis, tuple(im_coeffs)),
        )

    def term(self):
        coeff = Fraction(1)
        index = 0
        imaginary = False
        seen = False
        self.skip()
        match = RATIONAL_RE.match(self.text, self.pos)
        if match:
            numerator, denominator = match.groups()
            if denominator is not None and int(denominator) == 0:
                raise self.error('malformed rational')
            coeff = Fraction(int(numerator), int(denominator or 1))
            self.pos = match.end()
            seen = True
            if self.peek() == '*':
                self.pos += 1
                self.skip()
                if not NAME_RE.match(self.text, self.pos):
                    raise self.error("expected a constant name after '*'")
        self.skip()
        match = NAME_RE.match(self.text, self.pos)
        if match:
            index, imaginary = self.identifier(match.group())
            self.pos = match.end()
            seen = True
        if self.peek() == '/':
            self.pos += 1
            self.skip()
            match = POSINT_RE.match(self.text, self.pos)
            if not seen or not match or int(match.group()) == 0:
                raise self.error('malformed rational')
            coeff /= int(match.group())
            self.pos = match.end()
        if not imaginary:
            self.skip()
            match = NAME_RE.match(self.text, self.pos)
            if match and match.group() == 'i':
                imaginary = True
                self.pos = match.end()
                seen = True
        if not seen:
            raise self.error('expected a term')
        return coeff, index, imaginary

    def identifier(self, word):
        names = self.basis.names
        if word in names:
            return names.index(word), False
        if word == 'i':
            return 0, True
        if word.endswith('i') and word[:-1] in names:
            return names.index(word[:-1]), True
        raise UnknownConstantError(word)


def q_decompose(literal, basis):
    """Parse a scalar literal into its coefficients over `basis`"""
    if not literal or not literal.strip():
        raise ScalarSyntaxError('empty scalar literal')
    return _ScalarParser(literal, basis).parse()


parse_scalar = q_decompose


# ============================================================================
# Evaluation and integer relations
# ============================================================================

def evaluate(value, q):
    """Value of a symbolic scalar rounded to q significant digits"""
    if q < MIN_PRECISION:
        raise InputError(f'precision must be at least {MIN_PRECISION} digits')
    guard = numeric_context(q + 10)
    target = numeric_context(q)
    result = value.evaluate(guard)
    if isinstance(value, SymbolicReal):
        return target.mpf(result)
    return target.mpc(target.mpf(result.real), target.mpf(result.imag))


@dataclass(frozen=True)
class RelationLattice:
    """Integer basis of the relations sum(s_i v_i) = 0"""
    basis: tuple
    heuristic: bool = False
    tau: object = None

    @property
    def rank(self):
        return len(self.basis)


def _components(value):
    if isinstance(value, SymbolicComplex):
        return [value.re, value.im]
    if isinstance(value, (list, tuple)):
        out = []
        for item in value:
            out.extend(_components(item))
        return out
    if hasattr(value, '_mpc_') or isinstance(value, complex):
        return [value.real, value.imag]
    return [value]


def integer_relations(values, mode='exact', tau=None, precision=60):
    """
    Basis of {s : sum(s_i * v_i) = 0}. Each value may be a scalar or a
    vector of scalars; complex values contribute their real and imaginary
    parts. Exact mode needs symbolic inputs over one basis, numeric mode
    returns LLL candidates flagged heuristic.
    """
    items = [_components(v) for v in values]
    count = len(items)
    if count == 0:
        return RelationLattice(())
    if mode == 'exact':
        return RelationLattice(_exact_relations(items))
    if mode != 'numeric':
        raise InputError(f"unknown relation mode '{mode}'")
    threshold = default_threshold(precision) if tau is None else tau
    if threshold >= MAX_THRESHOLD:
        raise ThresholdError(f'threshold {threshold} is too permissive (must be below 1e-5)')
    return RelationLattice(_numeric_relations(items, threshold, precision), True, threshold)


def _exact_relations(items):
    width = len(items[0])
    if any(len(item) != width for item in items):
        raise InputError('values have different numbers of components')
    rows = []
    basis = None
    for component in range(width):
        entries = [item[component] for item in items]
        for entry in entries:
            if not isinstance(entry, SymbolicReal):
                if isinstance(entry, (int, Fraction)):
                    continue
                raise NotRepresentableError('exact relations need symbolic inputs')
            if basis is None:
                basis = entry.basis
            _check_basis(basis, entry.basis)
        size = len(basis) if basis is not None else 1
        for j in range(size):
            row = []
            for entry in entries:
                if isinstance(entry, SymbolicReal):
                    row.append(entry.coeffs[j])
                else:
                    row.append(Fraction(entry) if j == 0 else Fraction(0))
            rows.append(row)
    return lattices.integer_kernel(rows, len(items))


def _to_mpf(ctx, value):
    if isinstance(value, SymbolicReal):
        return value.evaluate(ctx)
    if isinstance(value, Fraction):
        return ctx.mpf(value.numerator) / value.denominator
    return ctx.mpf(value)


def _numeric_relations(items, threshold, precision):
    count = len(items)
    ctx = numeric_context(precision + 10)
    columns = [[_to_mpf(ctx, c) for c in item] for item in items]
    width = max(len(column) for column in columns)
    columns = [column + [ctx.mpf(0)] * (width - len(column)) for column in columns]
    if width == 0:
        return lattices.identity(count)
    magnification = ctx.mpf(10) ** (precision - 15)
    rows = [
        [int(i == k) for k in range(count)]
        + [int(ctx.nint(magnification * value)) for value in columns[i]]
        for i in range(count)
    ]
    threshold = ctx.mpf(threshold)

    def residual(relation):
        worst = ctx.mpf(0)
        for c in range(width):
            worst = max(worst, abs(ctx.fsum(s * columns[i][c] for i, s in enumerate(relation))))
        return worst

    accepted = [
        row[:count] for row in lattices.lll_rows(rows)
        if any(row[:count]) and residual(row[:count]) < threshold
    ]
    saturated = lattices.saturate(accepted, count)
    if all(residual(vector) < threshold for vector in saturated):
        return saturated
    logger.debug('saturated relation lattice failed the residual test, keeping LLL candidates')
    return lattices.hnf_rows(accepted, count)
