"""Parameter sweeps over a corpus: one compression per (file, weight function), baselines included."""
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import django
from django.conf import settings

from archives.service import CompressOptions, compress_bytes, strip_punctuation
from headers.header import Engine, Mode
from weights.exceptions import CodingError, ParameterError
from weights.trajectory import Variant

logger = logging.getLogger(__name__)

GRID_FAMILIES = {'poly': 'poly:{}', 'exp': 'exp:{}', 'interp': 'interp:{}'}
POINT_FAMILIES = ('const', 'pos', 'exp2')
BASELINES = (Variant.STATIC, Variant.BACKWARD)


@dataclass
class SweepConfig:
    family: str
    grid: list = field(default_factory=list)
    engine: str = Engine.HUFFMAN
    mode: str = Mode.EXACT
    fast_bits: int | None = None
    strip_punct: bool = False

    def __post_init__(self):
        self.grid = [str(value).strip() for value in self.grid if str(value).strip()]
        if self.family in GRID_FAMILIES:
            if not self.grid:
                raise ParameterError(f"the {self.family} family needs --grid values")
        elif self.family in POINT_FAMILIES:
            self.grid = []
        else:
            raise ParameterError(f"unknown sweep family {self.family!r}")
        # Fails early on a bad engine/mode/precision combination.
        CompressOptions(engine=self.engine, mode=self.mode, fast_bits=self.fast_bits)

    def points(self, n):
        """(param, g token) for every grid point; interp accepts 'all' for j = 1..n."""
        if self.family in POINT_FAMILIES:
            return [('', self.family)]
        values = self.grid
        if self.family == 'interp' and values == ['all']:
            values = [str(j) for j in range(1, n + 1)]
        return [(value, GRID_FAMILIES[self.family].format(value)) for value in values]


@dataclass
class SweepRow:
    file: str
    method: str
    family: str
    param: str
    engine: str
    mode: str
    n: int | None = None
    net_bits: int | None = None
    header_bits: int | None = None
    net_ratio: float | None = None
    combined_ratio: float | None = None
    runtime: float = 0.0
    error: str = ''

    def as_dict(self):
        return asdict(self)


def corpus_files(path):
    """Every file under ``path`` (or ``path`` itself), in a stable order."""
    path = os.fspath(path)
    if os.path.isfile(path):
        return [path]
    if not os.path.isdir(path):
        raise ParameterError(f"corpus {path} does not exist")
    files = []
    for root, dirs, names in os.walk(path):
        dirs.sort()
        files.extend(os.path.join(root, name) for name in sorted(names))
    if not files:
        raise ParameterError(f"corpus {path} holds no files")
    return files


def _measure(name, data, config, method, family, param, g):
    row = SweepRow(name, method, family, param, config.engine, config.mode)
    started = time.perf_counter()
    try:
        options = CompressOptions(engine=config.engine, variant=method, g=g,
                                  mode=config.mode, fast_bits=config.fast_bits)
        _container, stats = compress_bytes(data, options)
    except CodingError as exc:
        logger.warning("%s %s %s: %s", name, method, g or '', exc)
        row.error = f"{type(exc).__name__}: {exc}"
    else:
        row.n = stats['n']
        row.net_bits = stats['net_bits']
        row.header_bits = stats['header_bits']
        row.net_ratio = stats['net_ratio']
        row.combined_ratio = stats['combined_ratio']
    row.runtime = round(time.perf_counter() - started, 6)
    return row


def sweep_file(path, config, name=None):
    """Rows for one file: the two baselines, then every grid point."""
    name = name or os.path.basename(path)
    try:
        with open(path, 'rb') as stream:
            data = stream.read()
    except OSError as exc:
        logger.warning("%s: cannot read: %s", name, exc)
        return [SweepRow(name, '', config.family, '', config.engine, config.mode, error=f"OSError: {exc}")]
    if config.strip_punct:
        data = strip_punctuation(data)
    rows = [_measure(name, data, config, baseline, baseline.value, '', None) for baseline in BASELINES]
    for param, g in config.points(len(data)):
        rows.append(_measure(name, data, config, Variant.WEIGHTED, config.family, param, g))
    logger.info("%s: %d rows in %.3fs", name, len(rows), sum(row.runtime for row in rows))
    return rows


def run_sweep(corpus, config, threads=None):
    """Sweep every corpus file, across up to WACODE_THREADS worker processes; rows come back in corpus order."""
    files = corpus_files(corpus)
    root = os.fspath(corpus)
    names = [os.path.relpath(path, root) if os.path.isdir(root) else os.path.basename(path) for path in files]
    workers = max(1, min(threads or settings.WACODE_THREADS, len(files)))
    logger.info("sweeping %d files (%s, grid %s) on %d processes", len(files), config.family, config.grid, workers)
    if workers == 1:
        per_file = [sweep_file(path, config, name) for path, name in zip(files, names)]
    else:
        # Workers started without fork need the app registry before importing the coders.
        with ProcessPoolExecutor(max_workers=workers, initializer=django.setup) as executor:
            per_file = list(executor.map(sweep_file, files, [config] * len(files), names))
    return [row for rows in per_file for row in rows]
