"""
Tests for the orbits management commands, option resolution and the run archive.
"""

import os
import tempfile
from io import StringIO

from django.apps import apps
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from orbits.exceptions import InputError
from orbits.models import AnalysisRecord
from orbits.services import AnalysisLogService, AnalysisService, resolve_options

from .fixtures import data_path, read_data


def run(command, *args, **options):
    out, err = StringIO(), StringIO()
    call_command(command, *args, stdout=out, stderr=err, **options)
    return out.getvalue(), err.getvalue()


def section(text, title):
    """Lines of one [title] section of a rendered report"""
    lines = text.splitlines()
    start = lines.index(f'[{title}]') + 1
    end = next((i for i in range(start, len(lines)) if lines[i].startswith('[')), len(lines))
    return dict(line.split(' = ', 1) for line in lines[start:end] if ' = ' in line)


class ResolveOptionsTest(SimpleTestCase):
    """Tests for resolve_options"""

    def test_settings_defaults(self):
        form = resolve_options(environ={})
        self.assertEqual(form.cleaned_data['precision'], 60)
        self.assertEqual(form.cleaned_data['tier'], 'exact-then-numeric')
        self.assertEqual(form.cleaned_data['word_length'], 20)

    def test_precedence(self):
        file_options = {'precision': '70'}
        environ = {'ORBITREG_PRECISION': '80'}
        self.assertEqual(resolve_options(None, file_options, {}).cleaned_data['precision'], 70)
        self.assertEqual(resolve_options(None, file_options, environ).cleaned_data['precision'], 80)
        flags = {'precision': 90}
        self.assertEqual(resolve_options(flags, file_options, environ).cleaned_data['precision'], 90)

    def test_strict_exact_from_environment(self):
        form = resolve_options(environ={'ORBITREG_STRICT_EXACT': 'yes'})
        self.assertEqual(form.cleaned_data['tier'], 'exact')
        self.assertTrue(form.to_config().strict)

    def test_unknown_file_option(self):
        with self.assertRaises(InputError):
            resolve_options(file_options={'colour': 'blue'}, environ={})

    def test_invalid_values(self):
        for options in ({'precision': '10'}, {'tau': '0.01'}, {'radius_factor': '1'}, {'tier': 'fast'}):
            with self.subTest(options=options):
                with self.assertRaises(InputError):
                    resolve_options(file_options=options, environ={})

    def test_bad_boolean(self):
        with self.assertRaises(InputError):
            resolve_options(environ={'ORBITREG_STRICT_EXACT': 'maybe'})


class AnalysisServiceTest(SimpleTestCase):
    """Tests for AnalysisService"""

    def test_report_is_deterministic(self):
        text = read_data('unipotent_pair.orb')
        first, _ = AnalysisService.from_text(text, environ={}).analyze()
        second, _ = AnalysisService.from_text(text, environ={}).analyze()
        self.assertEqual(first, second)

    def test_vectors_in_input_order(self):
        _, results = AnalysisService.from_text(read_data('unipotent_pair.orb'), environ={}).analyze()
        self.assertEqual([name for name, _ in results], ['rational', 'irrational', 'zero'])
        self.assertEqual([result.m for _, result in results], [0, 1, 0])

    def test_closure_rejects_complex_vectors(self):
        text = '[vectors]\nz = 1, i\n'
        service = AnalysisService.from_text(text, environ={}, require_generators=False)
        with self.assertRaises(InputError):
            service.closure()


class AnalyzeCommandTest(TestCase):
    """Tests for the analyze command"""

    def test_unipotent_pair(self):
        out, _ = run('analyze', data_path('unipotent_pair.orb'))
        irrational = section(out, 'vector irrational')
        self.assertEqual(irrational['order'], '1')
        self.assertEqual(irrational['classification'], 'regular(1)')
        self.assertEqual(irrational['tier'], 'exact')
        self.assertEqual(section(out, 'vector rational')['classification'], 'discrete')
        self.assertEqual(section(out, 'assumptions')['independence'], 'declared, not verified')
        self.assertIn('input_digest = sha256:', out)

    def test_selected_vector(self):
        out, _ = run('analyze', data_path('unipotent_pair.orb'), vector=['irrational'])
        self.assertIn('[vector irrational]', out)
        self.assertNotIn('[vector rational]', out)

    def test_dense_orbit_notes(self):
        out, err = run('analyze', data_path('dense.orb'))
        self.assertEqual(section(out, 'vector u')['classification'], 'dense_in_ambient')
        self.assertEqual(section(out, 'vector u')['closure_tier'], 'heuristic')
        self.assertIn('numeric fallback', err)

    def test_strict_exact_fails_with_tier_error(self):
        with self.assertRaises(CommandError) as caught:
            run('analyze', data_path('dense.orb'), strict_exact=True)
        self.assertEqual(caught.exception.returncode, 3)

    def test_non_commuting_generators(self):
        with self.assertRaises(CommandError) as caught:
            run('analyze', data_path('noncommuting.orb'))
        self.assertEqual(caught.exception.returncode, 2)
        self.assertIn('do not commute', str(caught.exception))

    def test_missing_file(self):
        with self.assertRaises(CommandError) as caught:
            run('analyze', data_path('missing.orb'))
        self.assertEqual(caught.exception.returncode, 2)

    def test_precision_flag(self):
        out, _ = run('analyze', data_path('diagonal.orb'), precision=80)
        self.assertIn('precision = 80', out)

    def test_record(self):
        run('analyze', data_path('unipotent_pair.orb'), record=True)
        records = AnalysisRecord.objects.order_by('id')
        self.assertEqual(records.count(), 3)
        irrational = records.get(vector_name='irrational')
        self.assertEqual(irrational.order, 1)
        self.assertEqual(irrational.classification, 'regular(1)')
        self.assertEqual(irrational.tier, AnalysisRecord.Tier.EXACT)
        self.assertEqual(str(irrational), 'irrational: order 1 (regular(1))')


class OtherCommandsTest(SimpleTestCase):
    """Tests for the normal_form, closure and sample commands"""

    def test_normal_form(self):
        out, _ = run('normal_form', data_path('diagonal.orb'))
        nf = section(out, 'normal form')
        self.assertEqual(nf['eta'], '1, 1')
        self.assertEqual(nf['P'], '1, 0; 0, 1')
        self.assertEqual(nf['tier'], 'exact')

    def test_closure(self):
        out, _ = run('closure', data_path('irrational_line.orb'))
        closure = section(out, 'closure')
        self.assertEqual(closure['dim'], '1')
        self.assertEqual(closure['span_dim'], '2')
        self.assertEqual(closure['relations'], '0, 0, 1')
        self.assertEqual(closure['generators'], 'x, y, t')

    def test_sample(self):
        out, err = run('sample', data_path('scalar_two.orb'))
        sample = section(out, 'sample')
        self.assertEqual(sample['verdict'], 'consistent')
        self.assertEqual(sample['word_length'], '50')
        self.assertIn('consistent', err)

    def test_sample_export(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'cloud.txt')
            run('sample', data_path('scalar_two.orb'), word_length=4, export=path)
            with open(path, encoding='utf-8') as handle:
                lines = handle.read().splitlines()
        self.assertEqual(lines[0], '# n=1 L=4 discarded=0')
        self.assertEqual(len(lines), 10)

    def test_sample_export_to_missing_directory(self):
        with self.assertRaises(CommandError) as caught:
            run('sample', data_path('scalar_two.orb'), export='/nonexistent/dir/cloud.txt')
        self.assertEqual(caught.exception.returncode, 2)


class AnalysisLogServiceTest(TestCase):
    """Tests for AnalysisLogService"""

    def test_log_without_result(self):
        record = AnalysisLogService.log('closure', 'sha256:abc', 'dim = 1\n', metadata={'dim': 1})
        self.assertIsNone(record.order)
        self.assertEqual(record.metadata, {'dim': 1})
        self.assertEqual(str(record), 'closure sha256:abc')


class InstalledAppsTest(SimpleTestCase):
    """Tests for the project app registry"""

    def test_only_the_orbits_app(self):
        self.assertTrue(apps.is_installed('orbits'))
        self.assertFalse(apps.is_installed('django.contrib.auth'))
        self.assertFalse(apps.is_installed('django.contrib.contenttypes'))
