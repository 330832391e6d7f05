from pathlib import Path

from django.core.management.base import BaseCommand

from archives.arguments import command_errors
from archives.service import decompress_bytes


class Command(BaseCommand):
    help = "Restore the original bytes from a container written by compress."

    def add_arguments(self, parser):
        parser.add_argument('input', type=Path)
        parser.add_argument('output', type=Path)

    def handle(self, *args, **options):
        with command_errors():
            container = options['input'].read_bytes()
            data = decompress_bytes(container)
            options['output'].write_bytes(data)
        if options['verbosity'] > 1:
            self.stdout.write(f"{len(container)} -> {len(data)} bytes")
