from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand
from django.utils import timezone

from archives.arguments import command_errors
from headers.header import Engine, Mode
from sweeps.reports import store_run, write_report
from sweeps.runner import GRID_FAMILIES, POINT_FAMILIES, SweepConfig, run_sweep


class Command(BaseCommand):
    help = "Compress every corpus file over a grid of weight functions, with static and backward baselines."

    def add_arguments(self, parser):
        parser.add_argument('corpus', type=Path, help="A file or a directory of files.")

        group = parser.add_argument_group('Sweep')
        group.add_argument('--family', choices=[*GRID_FAMILIES, *POINT_FAMILIES], default='poly')
        group.add_argument('--grid', nargs='+', default=[],
                           help="Parameter values (k, l or j); interp also accepts 'all'.")
        group.add_argument('--engine', choices=Engine.values, default=Engine.HUFFMAN)
        group.add_argument('--mode', choices=Mode.values, default=Mode.EXACT)
        group.add_argument('--fast-bits', type=int, default=None)
        group.add_argument('--strip-punct', action='store_true',
                           help="Drop punctuation and collapse whitespace before coding.")
        group.add_argument('--threads', type=int, default=None,
                           help="Worker processes, one file each at a time (default WACODE_THREADS).")

        group = parser.add_argument_group('Report')
        group.add_argument('--format', choices=['csv', 'json'], default='csv')
        group.add_argument('--output', default=None,
                           help="Report path, '-' for standard output (default under WACODE_REPORT_DIR).")
        group.add_argument('--no-store', action='store_true', help="Do not record the run in the database.")

    def handle(self, *args, **options):
        with command_errors():
            grid = [value for token in options['grid'] for value in token.split(',')]
            config = SweepConfig(
                family=options['family'],
                grid=grid,
                engine=options['engine'],
                mode=options['mode'],
                fast_bits=options['fast_bits'],
                strip_punct=options['strip_punct'],
            )
            rows = run_sweep(options['corpus'], config, options['threads'])
            fmt = options['format']
            output = options['output']
            if output == '-':
                write_report(rows, self.stdout, fmt, config)
            else:
                if output is None:
                    stamp = timezone.now().strftime('%Y%m%dT%H%M%S')
                    output = Path(settings.WACODE_REPORT_DIR) / f"sweep-{config.family}-{stamp}.{fmt}"
                output = Path(output)
                output.parent.mkdir(parents=True, exist_ok=True)
                with output.open('w', newline='') as stream:
                    write_report(rows, stream, fmt, config)
                if options['verbosity'] > 0:
                    self.stderr.write(f"wrote {len(rows)} rows to {output}")
            if not options['no_store']:
                run = store_run(options['corpus'], config, rows)
                if options['verbosity'] > 1:
                    self.stderr.write(f"stored as sweep run {run.pk}")
        failed = sum(1 for row in rows if row.error)
        if failed and options['verbosity'] > 0:
            self.stderr.write(f"{failed} of {len(rows)} rows failed; see the error column")
