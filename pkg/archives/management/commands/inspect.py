from pathlib import Path

from django.core.management.base import BaseCommand

from archives.arguments import add_coding_arguments, command_errors, options_from
from diagnostics.traces import trace_model, write_trace_csv


class Command(BaseCommand):
    help = "Write the per-position model trace of a text as CSV."

    def add_arguments(self, parser):
        parser.add_argument('input', type=Path)
        parser.add_argument('--output', type=Path, default=None,
                            help="CSV destination; standard output when omitted.")
        add_coding_arguments(parser, mode=False)

    def handle(self, *args, **options):
        with command_errors():
            coding = options_from(options)
            data = options['input'].read_bytes()
            records = trace_model(data, coding.coding_variant, coding.engine, coding.field)
            if options['output'] is None:
                write_trace_csv(records, self.stdout)
            else:
                with options['output'].open('w', newline='') as stream:
                    write_trace_csv(records, stream)
