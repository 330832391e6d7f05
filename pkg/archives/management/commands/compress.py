import json
from pathlib import Path

from django.core.management.base import BaseCommand

from archives.arguments import add_coding_arguments, command_errors, options_from
from archives.service import compress_bytes, strip_punctuation


class Command(BaseCommand):
    help = "Compress a file into a container and print its stats as JSON."

    def add_arguments(self, parser):
        parser.add_argument('input', type=Path)
        parser.add_argument('output', type=Path)
        add_coding_arguments(parser)
        parser.add_argument('--strip-punct', action='store_true',
                            help="Drop punctuation and collapse whitespace before coding.")

    def handle(self, *args, **options):
        with command_errors():
            coding = options_from(options)
            data = options['input'].read_bytes()
            if options['strip_punct']:
                data = strip_punctuation(data)
            container, stats = compress_bytes(data, coding)
            options['output'].write_bytes(container)
        self.stdout.write(json.dumps(stats))
