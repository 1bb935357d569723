"""
Command line entry point::

    dcck <command> [--config FILE] [options]

Errors are reported on a single ``error: <ErrorClass>: <message>`` line
and exit with status 1.
"""
import argparse
import logging
import sys
import typing as typ

from .commands import COMMAND_KEYS, COMMANDS
from .config import describe_keys, load_config
from ..errors import DcckException

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def _epilog(command: str) -> str:
    keys = describe_keys(COMMAND_KEYS[command])
    if not keys:
        return 'This command reads no configuration keys.'
    return 'configuration keys:\n' + keys


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='dcck', description='Train convolutional networks and split or merge their kernels.')
    parser.add_argument('-v', '--verbose', action='store_true', help='Log at DEBUG level.')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(
            name, help=help_text, description=help_text, epilog=_epilog(name),
            formatter_class=argparse.RawDescriptionHelpFormatter)
        sub.add_argument('--config', help='Run configuration file (section.key = value lines).')
        return sub

    add('train', 'Train the configured architecture from scratch.')

    split = add('split', 'Split the kernels of one convolution in a checkpoint.')
    split.add_argument('--layer', type=int, required=True, help='Index of the convolution.')
    split.add_argument('--mode', choices=('noise', 'rotate', 'both'),
                       help='Overrides split.mode.')
    split.add_argument('--sigma-noise', type=float, help='Overrides split.sigma_noise.')
    split.add_argument('--sigma-angle', type=float, help='Overrides split.sigma_angle.')
    split.add_argument('--in', dest='input', required=True, help='Checkpoint to read.')
    split.add_argument('--out', dest='output', required=True, help='Checkpoint to write.')

    merge = add('merge', 'Merge the kernels of one convolution in a checkpoint by k-means.')
    merge.add_argument('--layer', type=int, required=True, help='Index of the convolution.')
    merge.add_argument('--k', type=int, help='Kernels to keep; overrides merge.k.')
    merge.add_argument('--variant', choices=('nearest_filter', 'centroid'),
                       help='Overrides merge.weight_variant.')
    merge.add_argument('--bias-variant', choices=('matched', 'cluster_mean'),
                       help='Overrides merge.bias_variant.')
    merge.add_argument('--in', dest='input', required=True, help='Checkpoint to read.')
    merge.add_argument('--out', dest='output', required=True, help='Checkpoint to write.')

    dcck = add('dcck', 'Run the full split / merge schedule.')
    dcck.add_argument('--in', dest='input',
                      help='Start from this checkpoint instead of training from scratch.')

    evaluate = add('eval', 'Report the accuracy of a checkpoint.')
    evaluate.add_argument('--in', dest='input', required=True, help='Checkpoint to evaluate.')
    evaluate.add_argument('--part', choices=('test', 'validation', 'train'), default='test',
                          help='Data split to evaluate on (default: test).')

    export = add('export-kernels', 'Write the kernels of a convolution as a PGM mosaic.')
    export.add_argument('--in', dest='input', required=True, help='Checkpoint to read.')
    export.add_argument('--layer', type=int, required=True, help='Index of the convolution.')
    export.add_argument('--out', dest='output', required=True, help='PGM file to write.')
    return parser


def _one_line(error: BaseException) -> str:
    message = ' '.join(str(error).split())
    return 'error: {0}: {1}'.format(type(error).__name__, message)


def main(argv: typ.Optional[typ.Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format=LOG_FORMAT, stream=sys.stderr)
    try:
        config = load_config(args.config)
        return COMMANDS[args.command](config, args)
    except (DcckException, OSError) as e:
        logging.getLogger(__name__).debug('Command %s failed', args.command, exc_info=True)
        print(_one_line(e), file=sys.stderr)
        return 1
