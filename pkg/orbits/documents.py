"""
Plain-text input documents and structured reports.

An input document has the sections [field], [constants], [generators],
[vectors] and [options]. Matrices are written on one line with rows
separated by ';' and entries by ','. Lines starting with '#' are comments.
"""

import dataclasses
import hashlib
import re
from dataclasses import dataclass

from .arith import ONE, Constant, ConstantBasis, format_scalar, q_decompose
from .exceptions import InputError, OrbitRegError
from .normal_form import GroupSpec

SECTIONS = ('field', 'constants', 'generators', 'vectors', 'options')
SECTION_RE = re.compile(r'^\[(\w+)\]$')
ASSIGNMENT_RE = re.compile(r'^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$')


@dataclass(frozen=True)
class InputDocument:
    field: str = 'C'
    basis: ConstantBasis = dataclasses.field(default_factory=ConstantBasis)
    generators: tuple = ()
    vectors: tuple = ()
    options: tuple = ()

    @property
    def generator_names(self):
        return tuple(name for name, _ in self.generators)

    @property
    def option_dict(self):
        return dict(self.options)

    def group(self, config):
        return GroupSpec(
            generators=tuple(matrix for _, matrix in self.generators),
            basis=self.basis,
            field=self.field,
            names=self.generator_names,
            config=config,
        )

    def vector(self, name):
        for vector_name, values in self.vectors:
            if vector_name == name:
                return values
        raise InputError(f"no vector named '{name}'")


def _error(line_number, message):
    return InputError(f'line {line_number}: {message}')


def _split_sections(text):
    sections = {}
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        match = SECTION_RE.match(line)
        if match:
            current = match.group(1).lower()
            if current not in SECTIONS:
                raise _error(number, f"unknown section '[{current}]'")
            if current in sections:
                raise _error(number, f"section '[{current}]' appears twice")
            sections[current] = []
            continue
        if current is None:
            raise _error(number, 'content before the first section')
        sections[current].append((number, line))
    return sections


def _parse_entries(text, basis, number):
    try:
        return tuple(q_decompose(entry, basis) for entry in text.split(','))
    except OrbitRegError as exc:
        raise _error(number, str(exc)) from exc


def parse_document(text, require_generators=True):
    """Parse an input document; closure inputs carry vectors only"""
    sections = _split_sections(text)

    field_lines = sections.get('field', [])
    field_value = 'C'
    if field_lines:
        number, value = field_lines[0]
        if len(field_lines) > 1 or value.upper() not in ('R', 'C'):
            raise _error(number, 'field must be a single R or C')
        field_value = value.upper()

    declarations = []
    for number, line in sections.get('constants', []):
        match = ASSIGNMENT_RE.match(line)
        if not match:
            raise _error(number, 'expected name = value')
        name, rest = match.groups()
        value, _, description = rest.partition('|')
        try:
            declarations.append(Constant(name, value.strip(), description.strip()))
        except OrbitRegError as exc:
            raise _error(number, str(exc)) from exc
    try:
        basis = ConstantBasis((ONE,) + tuple(declarations))
    except OrbitRegError as exc:
        raise InputError(f'constants: {exc}') from exc

    generators = []
    for number, line in sections.get('generators', []):
        match = ASSIGNMENT_RE.match(line)
        name, body = match.groups() if match else (f'A{len(generators) + 1}', line)
        rows = tuple(_parse_entries(row, basis, number) for row in body.split(';'))
        if any(len(row) != len(rows) for row in rows):
            raise _error(number, f'generator {name} is not square')
        generators.append((name, rows))
    if require_generators and not generators:
        raise InputError('at least one generator is required')
    names = [name for name, _ in generators]
    if len(set(names)) != len(names):
        raise InputError('generator names must be unique')

    vectors = []
    for number, line in sections.get('vectors', []):
        match = ASSIGNMENT_RE.match(line)
        name, body = match.groups() if match else (f'u{len(vectors) + 1}', line)
        vectors.append((name, _parse_entries(body, basis, number)))

    options = []
    for number, line in sections.get('options', []):
        match = ASSIGNMENT_RE.match(line)
        if not match:
            raise _error(number, 'expected option = value')
        options.append((match.group(1).lower(), match.group(2).strip()))

    return InputDocument(
        field=field_value,
        basis=basis,
        generators=tuple(generators),
        vectors=tuple(vectors),
        options=tuple(options),
    )


def _format_row(values):
    return ', '.join(format_value(v) for v in values)


def format_matrix(rows):
    return '; '.join(_format_row(row) for row in rows)


def print_document(document):
    lines = ['[field]', document.field, '', '[constants]']
    for constant in document.basis.constants[1:]:
        suffix = f' | {constant.description}' if constant.description else ''
        lines.append(f'{constant.name} = {constant.value}{suffix}')
    lines += ['', '[generators]']
    lines += [f'{name} = {format_matrix(matrix)}' for name, matrix in document.generators]
    lines += ['', '[vectors]']
    lines += [f'{name} = {_format_row(values)}' for name, values in document.vectors]
    lines += ['', '[options]']
    lines += [f'{key} = {value}' for key, value in document.options]
    return '\n'.join(lines) + '\n'


def input_digest(text):
    return 'sha256:' + hashlib.sha256(text.encode('utf-8')).hexdigest()


# ============================================================================
# Reports
# ============================================================================

def format_value(value, digits=20):
    """Exact scalars in the input grammar, numeric ones as decimals"""
    if hasattr(value, 're') and hasattr(value, 'im'):
        return format_scalar(value)
    if hasattr(value, 'coeffs'):
        return str(value)
    ctx = getattr(value, 'context', None)
    if ctx is None:
        return str(value)
    if hasattr(value, 'imag'):
        real, imag = value.real, value.imag
        if imag == 0:
            return ctx.nstr(real, digits)
        if real == 0:
            return f'{ctx.nstr(imag, digits)} i'
        sign = '-' if imag < 0 else '+'
        return f'{ctx.nstr(real, digits)} {sign} {ctx.nstr(abs(imag), digits)} i'
    return ctx.nstr(value, digits)


@dataclass
class Report:
    """Ordered key = value lines grouped under [section] headers"""
    header: list = dataclasses.field(default_factory=list)
    sections: list = dataclasses.field(default_factory=list)

    def add(self, key, value):
        target = self.sections[-1][1] if self.sections else self.header
        target.append((key, value))

    def section(self, title):
        self.sections.append((title, []))

    def render(self):
        lines = [f'{key} = {value}' for key, value in self.header]
        for title, entries in self.sections:
            lines += ['', f'[{title}]']
            lines += [f'{key} = {value}' for key, value in entries]
        return '\n'.join(lines) + '\n'


def start_report(command, document, digest, version):
    report = Report()
    report.add('command', command)
    report.add('tool_version', version)
    report.add('input_digest', digest)
    report.add('field', document.field)
    report.section('assumptions')
    report.add('constants', ', '.join(
        f'{c.name} = {c.value}' for c in document.basis.constants[1:]
    ) or 'none')
    report.add('independence', 'declared, not verified')
    return report


def add_orbit_report(report, name, result):
    report.section(f'vector {name}')
    report.add('order', result.m)
    report.add('classification', result.classification)
    report.add('discrete', str(result.discrete).lower())
    report.add('closure_is_subspace', str(result.closure_is_subspace).lower())
    report.add('dense_in_ambient', str(result.dense_in_ambient).lower())
    report.add('r_u', result.r_u)
    report.add('tier', result.tier)
    if result.closure is not None:
        report.add('closure_tier', result.closure.tier)
        report.add('lattice_rank', result.closure.lattice_rank)
        if result.closure.min_lattice_norm is not None:
            report.add('min_lattice_norm', format_value(result.closure.min_lattice_norm))
    if result.E_basis:
        report.add('E_basis', format_matrix(result.E_basis))
    if result.normal_form is not None:
        report.add('eta', ', '.join(str(size) for size in result.normal_form.eta))
    if result.gu is not None:
        for label, vector in zip(result.gu.labels, result.gu_original):
            report.add(f'g_u[{label}]', _format_row(vector))
    for hyperplane in result.singular_locus:
        report.add(f'singular_locus[block {hyperplane.block + 1}]', _format_row(hyperplane.functional))
    if result.notes:
        report.add('notes', '; '.join(result.notes))


def add_normal_form(report, names, nf):
    report.section('normal form')
    report.add('tier', nf.tier)
    report.add('eta', ', '.join(str(size) for size in nf.eta))
    report.add('P', format_matrix(nf.P))
    report.add('P_inv', format_matrix(nf.P_inv))
    for name, blocks in zip(names, nf.blocks):
        for index, block in enumerate(blocks):
            report.add(f'{name}[block {index + 1}]', format_matrix(block.entries))


def add_closure(report, closure, labels):
    report.section('closure')
    report.add('generators', ', '.join(labels))
    report.add('ambient_dim', closure.ambient_dim)
    report.add('span_dim', closure.span_dim)
    report.add('dim', closure.dim)
    report.add('lattice_rank', closure.lattice_rank)
    report.add('tier', closure.tier)
    report.add('relations', format_matrix(closure.relations) if closure.relations else 'none')
    for index, vector in enumerate(closure.V_basis):
        report.add(f'V[{index + 1}]', _format_row(vector))
    for index, vector in enumerate(closure.lattice_basis):
        report.add(f'lattice[{index + 1}]', _format_row(vector))
    if closure.min_lattice_norm is not None:
        report.add('min_lattice_norm', format_value(closure.min_lattice_norm))
