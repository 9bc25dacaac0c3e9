"""
Shared plumbing for the orbits management commands: input reading, option
flags and the translation of library errors into exit codes.
"""

import logging

from django.core.management.base import BaseCommand, CommandError

from ...exceptions import (
    InputError, InternalInconsistencyError, PreconditionError, TierError,
)
from ...services import AnalysisService

logger = logging.getLogger('orbits.commands')

EXIT_PRECONDITION = 2
EXIT_TIER = 3


class OrbitCommand(BaseCommand):
    require_generators = True

    def add_arguments(self, parser):
        parser.add_argument('path', help='Input document')
        parser.add_argument('--precision', type=int, help='Working precision in decimal digits')
        parser.add_argument('--tau', type=float, help='Numeric relation threshold, below 1e-5')
        parser.add_argument(
            '--strict-exact',
            action='store_true',
            default=None,
            help='Fail instead of falling back to the numeric tier',
        )

    def flags(self, options):
        return {
            'precision': options.get('precision'),
            'tau': options.get('tau'),
            'strict_exact': options.get('strict_exact'),
        }

    def load(self, options):
        try:
            with open(options['path'], encoding='utf-8') as handle:
                text = handle.read()
        except OSError as exc:
            raise CommandError(f'cannot read {options["path"]}: {exc}', returncode=EXIT_PRECONDITION)
        return self.guarded(
            AnalysisService.from_text,
            text,
            flags=self.flags(options),
            require_generators=self.require_generators,
        )

    def guarded(self, func, *args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (InputError, PreconditionError) as exc:
            raise CommandError(f'{type(exc).__name__}: {exc}', returncode=EXIT_PRECONDITION)
        except TierError as exc:
            raise CommandError(f'{type(exc).__name__}: {exc}', returncode=EXIT_TIER)
        except InternalInconsistencyError as exc:
            logger.error('internal inconsistency: %s', exc)
            raise CommandError(f'{type(exc).__name__}: {exc}')

    def emit(self, text, notes=()):
        self.stdout.write(text, ending='')
        for note in notes:
            self.stderr.write(self.style.WARNING(note))
