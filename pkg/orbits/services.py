"""
Services for the orbits module.
Option resolution, the analysis pipeline behind each command and the run archive.
"""

import logging
import os

from django.conf import settings

from . import documents
from .documents import add_closure, add_normal_form, add_orbit_report, start_report
from .exceptions import InputError
from .forms import AnalysisOptionsForm
from .group_closure import AdditiveGroupGens, closure_decomposition
from .linalg import TierRunner
from .models import AnalysisRecord
from .normal_form import normal_form
from .orbit_engine import orbit_order
from .sampler import enumerate_orbit, export_cloud, oracle_compare, word_inverse_residual

logger = logging.getLogger(__name__)

OPTION_NAMES = (
    'precision', 'tau', 'tier', 'strict_exact', 'word_length', 'radius', 'radius_factor', 'min_points',
)
TRUE_WORDS = ('1', 'true', 'yes', 'on')
FALSE_WORDS = ('0', 'false', 'no', 'off', '')


# ============================================================================
# Option Resolution
# ============================================================================

def default_options():
    defaults = getattr(settings, 'ORBITREG', {})
    return {
        'precision': defaults.get('PRECISION', 60),
        'tau': defaults.get('TAU'),
        'tier': defaults.get('TIER', 'exact-then-numeric'),
        'strict_exact': False,
        'word_length': defaults.get('WORD_LENGTH', 20),
        'radius': None,
        'radius_factor': defaults.get('RADIUS_FACTOR', 1e6),
        'min_points': defaults.get('MIN_POINTS', 100),
    }


def _as_bool(name, value):
    if isinstance(value, bool):
        return value
    word = str(value).strip().lower()
    if word in TRUE_WORDS:
        return True
    if word in FALSE_WORDS:
        return False
    raise InputError(f"{name}: expected a boolean, got '{value}'")


def resolve_options(flags=None, file_options=None, environ=None):
    """
    Merge option sources, highest first: command flags, ORBITREG_<NAME>
    environment variables, the document's [options] section, settings.
    Returns a bound and validated AnalysisOptionsForm.
    """
    environ = os.environ if environ is None else environ
    merged = default_options()
    for name, value in (file_options or {}).items():
        name = name.replace('-', '_')
        if name not in OPTION_NAMES:
            raise InputError(f"unknown option '{name}'")
        merged[name] = value
    for name in OPTION_NAMES:
        value = environ.get(f'ORBITREG_{name.upper()}')
        if value is not None:
            merged[name] = value
    for name, value in (flags or {}).items():
        if value is not None:
            merged[name] = value

    merged['strict_exact'] = _as_bool('strict_exact', merged['strict_exact'])
    data = {name: value for name, value in merged.items() if value is not None}
    form = AnalysisOptionsForm(data=data)
    if not form.is_valid():
        raise InputError(f'invalid options: {form.error_text()}')
    return form


# ============================================================================
# Analysis Service
# ============================================================================

class AnalysisService:
    """Runs one command over a parsed input document"""

    def __init__(self, document, digest, options):
        self.document = document
        self.digest = digest
        self.options = options.cleaned_data
        self.config = options.to_config()
        self.version = getattr(settings, 'ORBITREG', {}).get('TOOL_VERSION', '0')

    @classmethod
    def from_text(cls, text, flags=None, environ=None, require_generators=True):
        document = documents.parse_document(text, require_generators=require_generators)
        options = resolve_options(flags, document.option_dict, environ)
        return cls(document, documents.input_digest(text), options)

    def _report(self, command):
        report = start_report(command, self.document, self.digest, self.version)
        report.add('precision', self.config.precision)
        report.add('tier_preference', self.config.tier)
        return report

    def _vectors(self, names=None):
        if names:
            return [(name, self.document.vector(name)) for name in names]
        if not self.document.vectors:
            raise InputError('the document declares no vectors')
        return list(self.document.vectors)

    def analyze(self, names=None):
        """Orbit order, classification and singular locus of each vector, in input order"""
        group = self.document.group(self.config)
        group.validate()
        report = self._report('analyze')
        results = []
        for name, vector in self._vectors(names):
            result = orbit_order(group, vector)
            add_orbit_report(report, name, result)
            results.append((name, result))
        logger.info('analyzed %s vectors', len(results))
        return report.render(), results

    def normal_form(self):
        group = self.document.group(self.config).validate()
        nf = normal_form(group)
        report = self._report('normal_form')
        add_normal_form(report, group.names, nf)
        return report.render(), nf

    def closure(self):
        """Closure of the additive group generated by the document's real vectors"""
        vectors = self._vectors()
        for name, values in vectors:
            if any(not value.im.is_zero() for value in values):
                raise InputError(f'vector {name} is not real')
        gens = AdditiveGroupGens(
            tuple(tuple(values) for _, values in vectors),
            labels=tuple(name for name, _ in vectors),
        )
        runner = TierRunner(self.config, self.document.basis)
        decomposition = runner.run('closure', closure_decomposition, gens, self.config)
        report = self._report('closure')
        add_closure(report, decomposition, gens.labels)
        if runner.notes:
            report.add('notes', '; '.join(runner.notes))
        return report.render(), decomposition

    def sample(self, name=None, export=None):
        """Sample the orbit of one vector and compare its box dimension with the analytic order"""
        group = self.document.group(self.config)
        group.validate()
        name, vector = self._vectors([name] if name else None)[0]
        result = orbit_order(group, vector)
        cloud = enumerate_orbit(
            group,
            vector,
            self.options['word_length'],
            radius=self.options.get('radius'),
            radius_factor=self.options.get('radius_factor') or 1e6,
        )
        if export is not None:
            export_cloud(cloud, export)
        verdict = oracle_compare(result, cloud, min_points=self.options['min_points'])
        report = self._report('sample')
        add_orbit_report(report, name, result)
        report.section('sample')
        report.add('word_length', cloud.word_length)
        report.add('radius', documents.format_value(cloud.radius, 10))
        report.add('points', len(cloud.points))
        report.add('discarded', cloud.discarded)
        report.add('inverse_residual', documents.format_value(word_inverse_residual(group, cloud), 5))
        report.add('estimate', 'none' if verdict.estimate is None else f'{verdict.estimate:.4f}')
        report.add('fit_residual', 'none' if verdict.residual is None else f'{verdict.residual:.4f}')
        report.add('verdict', verdict.verdict)
        if verdict.detail:
            report.add('detail', verdict.detail)
        return report.render(), verdict


# ============================================================================
# Analysis Log Service
# ============================================================================

class AnalysisLogService:
    """Service for archiving analysis results"""

    @staticmethod
    def log(command, digest, text, vector_name='', result=None, metadata=None):
        """Create an analysis record"""
        fields = {}
        if result is not None:
            tier = 'heuristic' if result.heuristic else result.tier
            fields = {
                'order': result.m,
                'classification': result.classification,
                'tier': tier,
            }
        return AnalysisRecord.objects.create(
            command=command,
            input_digest=digest,
            vector_name=vector_name,
            report=text,
            metadata=metadata or {},
            **fields
        )
