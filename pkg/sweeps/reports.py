"""Sweep reports as CSV or JSON; the layout is described in docs/REPORT.md."""
import csv
import json
import logging

from django.db import transaction
from django.utils import timezone

from .models import SweepResult, SweepRun

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
COLUMNS = [
    'file', 'method', 'family', 'param', 'engine', 'mode', 'n',
    'net_bits', 'header_bits', 'net_ratio', 'combined_ratio', 'runtime', 'error',
]
RATIO_COLUMNS = ('net_ratio', 'combined_ratio')


def _cell(column, value):
    if value is None:
        return ''
    if column in RATIO_COLUMNS:
        return f"{value:.6f}"
    return str(value)


def write_csv(rows, stream):
    writer = csv.writer(stream)
    writer.writerow(COLUMNS)
    for row in rows:
        values = row.as_dict()
        writer.writerow([_cell(column, values[column]) for column in COLUMNS])
    return len(rows)


def write_json(rows, stream, config=None):
    document = {
        'schema_version': SCHEMA_VERSION,
        'config': {
            'family': config.family,
            'grid': config.grid,
            'engine': str(config.engine),
            'mode': str(config.mode),
            'fast_bits': config.fast_bits,
            'strip_punct': config.strip_punct,
        } if config is not None else None,
        'rows': [
            {column: (round(value, 6) if column in RATIO_COLUMNS and value is not None else value)
             for column, value in row.as_dict().items()}
            for row in rows
        ],
    }
    stream.write(json.dumps(document, indent=2) + "\n")
    return len(rows)



def write_report(rows, stream, fmt='csv', config=None):
    if fmt == 'json':
        return write_json(rows, stream, config)
    return write_csv(rows, stream)


@transaction.atomic
def store_run(corpus, config, rows):
    """Persist a finished sweep as one SweepRun and its SweepResult rows."""
    run = SweepRun.objects.create(
        corpus=str(corpus),
        family=config.family,
        grid=config.grid,
        engine=config.engine,
        mode=config.mode,
        fast_bits=config.fast_bits,
        strip_punct=config.strip_punct,
        schema_version=SCHEMA_VERSION,
        status='completed',
        finished_at=timezone.now(),
    )
    SweepResult.objects.bulk_create([
        SweepResult(
            run=run,
            file=row.file,
            method=row.method,
            family=row.family,
            param=row.param,
            n=row.n,
            net_bits=row.net_bits,
            header_bits=row.header_bits,
            net_ratio=row.net_ratio,
            combined_ratio=row.combined_ratio,
            runtime=row.runtime,
            error=row.error,
        )
        for row in rows
    ])
    logger.info("stored sweep run %s with %d rows", run.pk, len(rows))
    return run
