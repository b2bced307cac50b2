import os

from misc.Logger import Logger
from misc.errors import DataError, UsageError
from nn.model import SrfrnModel
from nn.trainer import Trainer
from file_managers import PatchCache, WeightsManager


class TrainCmd():

    logger = Logger.get_logger(__name__)

    @staticmethod
    def weights_pathname(config):
        return config.weights if config.weights else os.path.join(config.out_dir, f'srfrn_x{config.scale}.bin')


    @staticmethod
    def load_pairs(config):
        """ (train pairs, val pairs) from the patch cache, after checking it matches `config` """
        cache = PatchCache(config.cache_path)
        index = cache.read_index()

        if int(index.get('scale', -1)) != config.scale:
            raise UsageError(f'Patch cache {cache.dirname} holds x{index.get("scale")} pairs, requested x{config.scale}')

        train_pairs = cache.load_pairs('train')
        val_pairs   = cache.load_pairs('val')

        if len(train_pairs) == 0:
            raise DataError(f'Patch cache {cache.dirname} has no training pairs')

        if len(val_pairs) == 0:
            TrainCmd.logger.warning('No validation pairs; validating on the training pairs')

        return train_pairs, val_pairs


    @staticmethod
    def new_model(config, n_blocks=None):
        n_blocks = config.n_blocks if n_blocks is None else n_blocks
        return SrfrnModel(n_blocks, config.precision, config.feat_act).init_params(config.seed)


    @staticmethod
    def run(config):
        train_pairs, val_pairs = TrainCmd.load_pairs(config)

        weights_pathname = TrainCmd.weights_pathname(config)
        log_pathname     = os.path.join(config.out_dir, f'train_x{config.scale}.csv')

        meta  = {}
        extra = {}
        if config.resume:
            checkpoint = Trainer.checkpoint_pathname(weights_pathname)
            if not os.path.isfile(checkpoint):
                raise UsageError(f'Nothing to resume: {checkpoint} does not exist')

            model = WeightsManager.load_weights(checkpoint)
            meta  = WeightsManager.load_state(checkpoint, model)
            extra = { 'weights_digest': WeightsManager.digest(checkpoint) }
            model.feat_act = bool(meta.get('feat_act', config.feat_act))

            if int(meta.get('scale', config.scale)) != config.scale:
                raise UsageError(f'{checkpoint} was trained for x{meta["scale"]}, requested x{config.scale}')
        else:
            model = TrainCmd.new_model(config)

        header = config.header(
            param_count = model.total_params,
            train_pairs = len(train_pairs),
            val_pairs   = len(val_pairs),
            **extra,
        )

        for key, value in header.items():
            TrainCmd.logger.debug(f'# {key}: {value}')

        trainer = Trainer(model, train_pairs, val_pairs, config, weights_pathname, log_pathname, header)
        if meta:
            trainer.restore(meta)

        best_val = trainer.run()
        digest   = WeightsManager.digest(weights_pathname)

        TrainCmd.logger.info(f'Best val_loss={best_val:.6f}; weights {weights_pathname} ({digest})')
        return weights_pathname
