import os

from misc.Logger import Logger
from nn.model import SrfrnModel
from nn.trainer import Trainer, validate
from file_managers import CsvReport, WeightsManager

from .train_cmd import TrainCmd


class AblateCmd():
    """
    Trains one model per RFR block count under the same budget and seed and
    reports its parameter count and best validation PSNR.
    """

    COLUMNS = [ 'n_blocks', 'param_count', 'val_psnr' ]

    logger = Logger.get_logger(__name__)

    @staticmethod
    def run(config):
        train_pairs, val_pairs = TrainCmd.load_pairs(config)
        eval_pairs = val_pairs if len(val_pairs) > 0 else train_pairs

        header = config.header(train_pairs=len(train_pairs), val_pairs=len(val_pairs))
        for key, value in header.items():
            AblateCmd.logger.debug(f'# {key}: {value}')

        report  = CsvReport(os.path.join(config.out_dir, f'ablate_x{config.scale}.csv'), AblateCmd.COLUMNS, header)
        run_dir = os.path.join(config.out_dir, 'ablate')

        rows    = []
        digests = {}
        for n_blocks in config.blocks_list:
            AblateCmd.logger.info(f'n_blocks={n_blocks}: {SrfrnModel.param_count(n_blocks)} parameters')

            weights_pathname = os.path.join(run_dir, f'srfrn_x{config.scale}_n{n_blocks}.bin')
            log_pathname     = os.path.join(run_dir, f'train_x{config.scale}_n{n_blocks}.csv')

            model   = TrainCmd.new_model(config, n_blocks)
            trainer = Trainer(model, train_pairs, val_pairs, config, weights_pathname, log_pathname, header)
            trainer.run()
            digests[f'weights_digest_n{n_blocks}'] = WeightsManager.digest(weights_pathname)

            best = WeightsManager.load_weights(weights_pathname)
            best.feat_act = model.feat_act
            _, val_psnr = validate(best, eval_pairs, config.batch_size, config.threads)

            row = [ n_blocks, SrfrnModel.param_count(n_blocks), val_psnr ]
            report.append(row)
            rows.append(row)

            AblateCmd.logger.info(f'n_blocks={n_blocks}: val PSNR {val_psnr:.3f} dB')

        # Digests of the trained weight files behind the rows
        CsvReport(report.pathname, AblateCmd.COLUMNS, { **header, **digests }, append=True)
        return rows
