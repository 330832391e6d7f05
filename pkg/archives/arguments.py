"""Argument groups and error translation shared by the management commands."""
from contextlib import contextmanager

from django.core.management.base import CommandError

from headers.header import Engine, Mode
from weights.exceptions import CodingError
from weights.trajectory import Variant

from .service import USAGE_ERRORS, CompressOptions

USAGE_EXIT = 2
DATA_EXIT = 3


def add_coding_arguments(parser, mode=True):
    group = parser.add_argument_group('Coding')
    group.add_argument('--engine', choices=Engine.values, default=Engine.HUFFMAN,
                       help="Entropy coder back end.")
    group.add_argument('--variant', choices=Variant.values, default=Variant.WEIGHTED,
                       help="How the model evolves along the text.")
    group.add_argument('--g', dest='g', default=None,
                       help="Weight function: const, pos, poly:k, exp:l, exp2 or interp:j (weighted defaults to pos).")
    if mode:
        group.add_argument('--mode', choices=Mode.values, default=Mode.EXACT,
                           help="Arithmetic coder arithmetic: exact rationals or a streaming 62-bit register.")
    group.add_argument('--fast-bits', type=int, default=None,
                       help="Compute weights as binary floats with this many mantissa bits (>= 64).")
    return group


def options_from(parsed):
    return CompressOptions(
        engine=parsed['engine'],
        variant=parsed['variant'],
        g=parsed['g'],
        mode=parsed.get('mode') or Mode.EXACT,
        fast_bits=parsed['fast_bits'],
    )


@contextmanager
def command_errors():
    """Map library and I/O errors onto the command exit codes."""
    try:
        yield
    except USAGE_ERRORS as exc:
        raise CommandError(str(exc), returncode=USAGE_EXIT) from exc
    except CodingError as exc:
        raise CommandError(str(exc), returncode=DATA_EXIT) from exc
    except OSError as exc:
        raise CommandError(f"{exc.filename or 'I/O'}: {exc.strerror or exc}", returncode=USAGE_EXIT) from exc
