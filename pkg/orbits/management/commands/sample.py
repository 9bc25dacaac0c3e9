from django.core.management.base import CommandError

from ._base import EXIT_PRECONDITION, OrbitCommand


class Command(OrbitCommand):
    help = 'Sample an orbit and compare its box dimension with the analytic order'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--word-length', type=int, help='Largest absolute exponent per generator')
        parser.add_argument('--radius', type=float, help='Discard points with larger norm')
        parser.add_argument('--vector', help='Vector to sample, the first one by default')
        parser.add_argument('--export', help='Write the sampled points to this file')

    def flags(self, options):
        flags = super().flags(options)
        flags.update(word_length=options.get('word_length'), radius=options.get('radius'))
        return flags

    def handle(self, *args, **options):
        service = self.load(options)
        if not options.get('export'):
            text, verdict = self.guarded(service.sample, options.get('vector'))
        else:
            try:
                with open(options['export'], 'w', encoding='utf-8') as stream:
                    text, verdict = self.guarded(service.sample, options.get('vector'), stream)
            except OSError as exc:
                raise CommandError(f'cannot write {options["export"]}: {exc}', returncode=EXIT_PRECONDITION)
        self.emit(text)
        style = self.style.SUCCESS if verdict.verdict == 'consistent' else self.style.WARNING
        self.stderr.write(style(f'sampler verdict: {verdict.verdict}'))
