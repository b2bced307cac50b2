import argparse
import sys
import traceback

import numpy as np

from misc.Logger import Logger
from misc.errors import UsageError, DataError, DivergenceError
from file_managers import AppConfig
from nn.tensor import TensorOps
from commands import COMMANDS


"""
Set numpy settings
"""
np.set_printoptions(suppress=True)



"""
Override default exception hook
"""
sys._excepthook = sys.excepthook
def exception_hook(exctype, value, tb):
    trace = ''.join(traceback.format_exception(exctype, value, tb))
    Logger.get_logger('core').exception(trace)
    sys.exit(1)
sys.excepthook = exception_hook



class ArgParser(argparse.ArgumentParser):
    """ Usage errors raise instead of exiting with argparse's status 2 """

    def error(self, message):
        raise UsageError(f'{self.prog}: {message}')


def int_list(text):
    try:
        return [ int(v) for v in text.split(',') if v.strip() ]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma separated integers, got "{text}"')


"""
Flags, grouped by the subcommands that take them. dest is the RunConfig field.
"""
COMMON_FLAGS = [
    ('--scale',         dict(dest='scale', type=int, help='upscaling factor: 2, 3 or 4')),
    ('--seed',          dict(dest='seed', type=int)),
    ('--out-dir',       dict(dest='out_dir')),
    ('--precision',     dict(dest='precision', choices=[ 'standard', 'extended' ])),
    ('--threads',       dict(dest='threads', type=int, help='threads for the convolution kernels')),
    ('--deterministic', dict(dest='deterministic', action=argparse.BooleanOptionalAction)),
]

CMD_FLAGS = {
    'prepare' : [
        ('--manifest',      dict(dest='manifest')),
        ('--cache-dir',     dict(dest='cache_dir')),
        ('--patch',         dict(dest='patch', type=int)),
        ('--stride',        dict(dest='stride', type=int)),
        ('--val-fraction',  dict(dest='val_fraction', type=float)),
        ('--quantize-lr',   dict(dest='quantize_lr', action=argparse.BooleanOptionalAction)),
        ('--workers',       dict(dest='workers', type=int)),
    ],
    'train' : [
        ('--cache-dir',     dict(dest='cache_dir')),
        ('--weights',       dict(dest='weights')),
        ('--n-blocks',      dict(dest='n_blocks', type=int)),
        ('--epochs',        dict(dest='epochs', type=int)),
        ('--batch-size',    dict(dest='batch_size', type=int)),
        ('--lr',            dict(dest='lr', type=float)),
        ('--patience',      dict(dest='patience', type=int)),
        ('--plateau-factor',dict(dest='plateau_factor', type=float)),
        ('--min-lr',        dict(dest='min_lr', type=float)),
        ('--prefetch',      dict(dest='prefetch', type=int)),
        ('--feat-act',      dict(dest='feat_act', action=argparse.BooleanOptionalAction)),
        ('--resume',        dict(dest='resume', action='store_true', default=None)),
    ],
    'sr' : [
        ('--weights',       dict(dest='weights')),
        ('--input',         dict(dest='input', required=True)),
        ('--output',        dict(dest='output', required=True)),
        ('--bicubic-only',  dict(dest='bicubic_only', action='store_true', default=None)),
    ],
    'eval' : [
        ('--weights',       dict(dest='weights')),
        ('--manifest',      dict(dest='manifest')),
        ('--shave',         dict(dest='shave', type=int, help='border pixels excluded from metrics (default: scale)')),
        ('--bicubic-only',  dict(dest='bicubic_only', action='store_true', default=None)),
        ('--quantize-lr',   dict(dest='quantize_lr', action=argparse.BooleanOptionalAction)),
        ('--workers',       dict(dest='workers', type=int)),
    ],
    'bench' : [
        ('--weights',       dict(dest='weights')),
        ('--manifest',      dict(dest='manifest')),
        ('--images',        dict(dest='images', nargs='+')),
        ('--n-blocks',      dict(dest='n_blocks', type=int)),
        ('--scales',        dict(dest='bench_scales', type=int_list)),
        ('--reps',          dict(dest='bench_reps', type=int)),
        ('--warmup',        dict(dest='bench_warmup', type=int)),
        ('--unpin',         dict(dest='bench_unpin', action='store_true', default=None)),
    ],
    'ablate' : [
        ('--cache-dir',     dict(dest='cache_dir')),
        ('--blocks',        dict(dest='blocks_list', type=int_list)),
        ('--epochs',        dict(dest='epochs', type=int)),
        ('--batch-size',    dict(dest='batch_size', type=int)),
        ('--lr',            dict(dest='lr', type=float)),
        ('--prefetch',      dict(dest='prefetch', type=int)),
    ],
    'features' : [
        ('--weights',       dict(dest='weights')),
        ('--input',         dict(dest='input', required=True)),
    ],
}

CMD_HELP = {
    'prepare'  : 'build the patch cache from a manifest',
    'train'    : 'train a model from the patch cache',
    'sr'       : 'upscale one PNG image',
    'eval'     : 'PSNR / SSIM on the test split',
    'bench'    : 'inference latency per scale',
    'ablate'   : 'train and score models over RFR block counts',
    'features' : 'write intermediate feature maps of one image',
}


class App():

    logger = Logger.get_logger(__name__)

    def __init__(self, argv=None):
        self.argv = sys.argv[1:] if argv is None else list(argv)


    @staticmethod
    def build_parser():
        parser = ArgParser(prog='srfrn', description='Single image super-resolution with RFR blocks')
        parser.add_argument('--config', default='config.json', help='JSON config file (created with defaults if missing)')
        parser.add_argument('--verbose', action='store_true', help='debug output from every module on stderr')

        subparsers = parser.add_subparsers(dest='command', required=True, parser_class=ArgParser)
        for name, flags in CMD_FLAGS.items():
            sub = subparsers.add_parser(name, help=CMD_HELP[name])
            for flag, kwargs in COMMON_FLAGS + flags:
                kwargs = dict(kwargs)
                if kwargs.get('action') not in ('store_true', ) and 'default' not in kwargs:
                    kwargs['default'] = None

                sub.add_argument(flag, **kwargs)

        return parser


    def resolve(self):
        """ Parses the command line. Returns (command name, RunConfig) """
        args = App.build_parser().parse_args(self.argv)

        Logger.set_verbose(args.verbose)

        AppConfig.load_config_file(args.config)
        AppConfig.check_config_file()

        overrides = { k: v for k, v in vars(args).items() if k not in ('command', 'config', 'verbose') }
        return args.command, AppConfig.resolve(overrides)


    def run(self):
        """ Runs the command and returns the process exit status """
        try:
            command, config = self.resolve()
            App.logger.debug(f'Running {command}')

            with TensorOps.configure(config.threads, config.deterministic):
                COMMANDS[command].run(config)
        except (UsageError, DataError, DivergenceError) as e:
            App.logger.error(f'{type(e).__name__}: {e}')
            App.logger.debug(traceback.format_exc())
            return e.exit_code

        return 0
