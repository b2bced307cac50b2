import dataclasses
import json
import os

from misc.Logger import Logger
from misc.errors import UsageError


@dataclasses.dataclass
class RunConfig():
    """
    Fully resolved settings of one command run. Defaults are the published
    training protocol, so running with no flags reproduces it.
    """

    scale          : int   = 2
    n_blocks       : int   = 6
    epochs         : int   = 50
    batch_size     : int   = 24
    lr             : float = 1e-3
    patience       : int   = 10
    plateau_factor : float = 0.5
    rel_threshold  : float = 1e-4
    min_lr         : float = 1e-6
    patch          : int   = 48
    stride         : int   = 48
    seed           : int   = 0
    deterministic  : bool  = True
    shave          : int   = -1        # -1: shave `scale` pixels
    quantize_lr    : bool  = True
    val_fraction   : float = 0.05
    workers        : int   = 1
    threads        : int   = 1
    prefetch       : int   = 2
    precision      : str   = 'standard'
    feat_act       : bool  = False
    bicubic_only   : bool  = False
    bench_warmup   : int   = 3
    bench_reps     : int   = 10
    bench_scales   : list  = dataclasses.field(default_factory=lambda: [ 2, 3, 4 ])
    bench_unpin    : bool  = False
    blocks_list    : list  = dataclasses.field(default_factory=lambda: [ 1, 2, 3, 4, 5, 6, 7 ])
    manifest       : str   = ''
    weights        : str   = ''
    resume         : bool  = False
    out_dir        : str   = 'out'
    cache_dir      : str   = ''
    input          : str   = ''
    output         : str   = ''
    images         : list  = dataclasses.field(default_factory=list)

    @staticmethod
    def field_names():
        return [ f.name for f in dataclasses.fields(RunConfig) ]


    @staticmethod
    def from_dict(values):
        known = { k: v for k, v in values.items() if k in RunConfig.field_names() }
        return RunConfig(**known)


    @property
    def shave_px(self):
        return self.scale if self.shave < 0 else self.shave


    @property
    def cache_path(self):
        return self.cache_dir if self.cache_dir else os.path.join(self.out_dir, f'cache_x{self.scale}')


    def validate(self):
        def check(cond, msg):
            if not cond:
                raise UsageError(msg)

        check(self.scale in (2, 3, 4),                f'scale must be 2, 3 or 4, got {self.scale}')
        check(1 <= self.n_blocks <= 7,                f'n_blocks must be in 1..7, got {self.n_blocks}')
        check(self.epochs >= 1,                       f'epochs must be >= 1, got {self.epochs}')
        check(self.batch_size >= 1,                   f'batch_size must be >= 1, got {self.batch_size}')
        check(self.lr > 0,                            f'lr must be positive, got {self.lr}')
        check(self.patience >= 1,                     f'patience must be >= 1, got {self.patience}')
        check(0 < self.plateau_factor < 1,            f'plateau_factor must be in (0, 1), got {self.plateau_factor}')
        check(0 < self.min_lr <= self.lr,             f'min_lr must be in (0, lr], got {self.min_lr}')
        check(self.patch >= 3,                        f'patch must be >= 3, got {self.patch}')
        check(self.patch % self.scale == 0,           f'patch {self.patch} is not divisible by scale {self.scale}')
        check(self.stride >= 1,                       f'stride must be >= 1, got {self.stride}')
        check(self.seed >= 0,                         f'seed must be >= 0, got {self.seed}')
        check(0 <= self.val_fraction < 1,             f'val_fraction must be in [0, 1), got {self.val_fraction}')
        check(self.workers >= 1 and self.threads >= 1, 'workers and threads must be >= 1')
        check(self.prefetch >= 0,                     f'prefetch must be >= 0, got {self.prefetch}')
        check(self.precision in ('standard', 'extended'), f'precision must be standard or extended, got {self.precision}')
        check(self.bench_reps >= 1,                   f'bench_reps must be >= 1, got {self.bench_reps}')
        check(self.bench_warmup >= 0,                 f'bench_warmup must be >= 0, got {self.bench_warmup}')
        check(all(s in (2, 3, 4) for s in self.bench_scales), f'bench scales must be 2, 3 or 4, got {self.bench_scales}')
        check(len(self.blocks_list) > 0 and all(1 <= n <= 7 for n in self.blocks_list), f'blocks_list must be in 1..7, got {self.blocks_list}')

        return self


    def header(self, **extra):
        """ Run header: every resolved setting plus any extra entries """
        header = dataclasses.asdict(self)
        header.update(extra)
        return header


class _AppConfig():

    logger = Logger.get_logger(__name__)

    pathname = 'config.json'
    cfg = dataclasses.asdict(RunConfig())

    @staticmethod
    def load_config_file(pathname='config.json'):
        _AppConfig.pathname = pathname

        try:
            with open(pathname) as f:
                _AppConfig.cfg = json.load(f)
        except (FileNotFoundError, json.decoder.JSONDecodeError):
            _AppConfig.logger.info(f'Writing default config to {pathname}')

            # Write default
            with open(pathname, 'w') as f:
                json.dump(dataclasses.asdict(RunConfig()), f, indent=4)

            with open(pathname) as f:
                _AppConfig.cfg = json.load(f)


    @staticmethod
    def check_config_file():
        defaults = dataclasses.asdict(RunConfig())
        for key, value in defaults.items():
            if not key in _AppConfig.cfg:
                _AppConfig.update_value(key, value)


    @staticmethod
    def update_value(key, value):
        _AppConfig.cfg[key] = value

        with open(_AppConfig.pathname, 'w') as f:
            json.dump(_AppConfig.cfg, f, indent=4)


    @staticmethod
    def resolve(overrides=None):
        """ defaults <- config file <- `overrides` (CLI flags that were given) """
        values = dict(_AppConfig.cfg)
        values.update({ k: v for k, v in (overrides or {}).items() if v is not None })

        try:
            return RunConfig.from_dict(values).validate()
        except TypeError as e:
            raise UsageError(f'Bad config: {e}') from e


AppConfig = _AppConfig()
