from ._base import OrbitCommand


class Command(OrbitCommand):
    help = 'Simultaneous block triangular normal form of the generators'

    def handle(self, *args, **options):
        service = self.load(options)
        text, _ = self.guarded(service.normal_form)
        self.emit(text)
