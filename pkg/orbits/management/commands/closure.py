from ._base import OrbitCommand


class Command(OrbitCommand):
    help = 'Closure of the additive group generated by the real vectors of the input'
    require_generators = False

    def handle(self, *args, **options):
        service = self.load(options)
        text, _ = self.guarded(service.closure)
        self.emit(text)
