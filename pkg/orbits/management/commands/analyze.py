from ...services import AnalysisLogService
from ._base import OrbitCommand


class Command(OrbitCommand):
    help = 'Regularity order and classification of the orbit of each input vector'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--vector', action='append', help='Analyse only the named vector')
        parser.add_argument('--record', action='store_true', help='Archive one record per vector')

    def handle(self, *args, **options):
        service = self.load(options)
        text, results = self.guarded(service.analyze, options.get('vector'))
        notes = [f'{name}: {note}' for name, result in results for note in result.notes]
        self.emit(text, notes)
        if options.get('record'):
            for name, result in results:
                AnalysisLogService.log('analyze', service.digest, text, name, result)
            self.stderr.write(self.style.SUCCESS(f'recorded {len(results)} analyses'))
