import math
import os
import time

import numpy as np

from misc.Logger import Logger
from misc.errors import DataError, DivergenceError
from imaging.metrics import psnr
from data.batches import batch_iter, from_network, Prefetcher
from file_managers.weights_mgr import WeightsManager
from file_managers.report_mgr import CsvReport

from .tensor import TensorOps
from .optim import l1_loss, Adam, AdamConfig, PlateauSchedule, plateau_update


def train_epoch(model, batches, optimizer, deterministic=True, threads=1, on_step=None):
    """
    One pass over `batches`: forward, L1, backward and an Adam step on every
    layer per batch. Returns the mean batch loss.

    `on_step(loss)` is called after every optimizer step.
    """
    losses = []

    with TensorOps.configure(threads, deterministic):
        for ilr, hr in batches:
            model.zero_grad()

            i_frc, tape = model.forward(ilr)
            loss, grad  = l1_loss(i_frc, hr)
            if not math.isfinite(loss):
                raise DivergenceError(f'training loss is {loss} at step {optimizer.t + 1}')

            model.backward(tape, grad)
            optimizer.step(model.layers())

            losses.append(loss)
            if on_step is not None:
                on_step(loss)

    if len(losses) == 0:
        raise DataError('train_epoch: no batches')

    return float(np.mean(losses))


def validate(model, pairs, batch_size=24, threads=1):
    """
    Mean L1 loss (network range) and mean PSNR (dB, [0, 255] range) of the
    model over `pairs`, in inference mode.
    """
    if len(pairs) == 0:
        raise DataError('validate: no validation pairs')

    loss_sum = 0.0
    psnrs    = []

    with TensorOps.configure(threads, True):
        for ilr, hr in batch_iter(pairs, batch_size, precision=model.precision, shuffle=False):
            pred = model.infer(ilr)
            loss, _ = l1_loss(pred, hr)
            loss_sum += loss*ilr.shape[0]

            pred_px = np.clip(from_network(pred.data[:, 0]), 0, 255)
            hr_px   = from_network(hr.data[:, 0])
            psnrs  += [ psnr(p, h) for p, h in zip(pred_px, hr_px) ]

    val_loss = loss_sum/len(pairs)
    if not math.isfinite(val_loss):
        raise DivergenceError(f'validation loss is {val_loss}')

    return val_loss, float(np.mean(psnrs))


class Trainer():
    """
    Epoch loop. Keeps the best-validation weights at `weights_pathname` and
    the latest epoch's checkpoint at `<weights_pathname>.last`; both carry the
    optimizer state sidecar so a run can be resumed.
    """

    COLUMNS = [ 'epoch', 'train_loss', 'val_loss', 'lr', 'wall_seconds' ]

    # Optimizer steps between progress lines
    LOG_EVERY = 50

    logger = Logger.get_logger(__name__)

    def __init__(self, model, train_pairs, val_pairs, config, weights_pathname, log_pathname, header=None):
        self.model       = model
        self.train_pairs = train_pairs
        self.val_pairs   = val_pairs
        self.config      = config

        self.weights_pathname = weights_pathname
        self.last_pathname    = f'{weights_pathname}.last'
        self.log_pathname     = log_pathname
        self.header           = header or {}

        self.optimizer = Adam(AdamConfig(lr=config.lr))
        self.schedule  = PlateauSchedule(
            lr            = config.lr,
            patience      = config.patience,
            factor        = config.plateau_factor,
            min_lr        = config.min_lr,
            rel_threshold = config.rel_threshold,
        )

        self.epoch       = 0
        self.best_val    = math.inf
        self.step_losses = []


    def __meta(self):
        return {
            'scale'     : self.config.scale,
            'n_blocks'  : self.model.n_blocks,
            'precision' : self.model.precision,
            'feat_act'  : self.model.feat_act,
            'seed'      : self.config.seed,
            'epoch'     : self.epoch,
            't'         : self.optimizer.t,
            'lr'        : self.optimizer.lr,
            'best_val'  : self.best_val,
            'schedule'  : self.schedule.state(),
        }


    def __save(self, pathname):
        digest = WeightsManager.save_weights(self.model, pathname)
        WeightsManager.save_state(pathname, self.__meta(), self.model)
        return digest


    def restore(self, meta):
        """ Picks the run up from a checkpoint's sidecar """
        self.epoch        = int(meta.get('epoch', 0))
        self.best_val     = float(meta.get('best_val', math.inf))
        self.optimizer.t  = int(meta.get('t', 0))
        self.optimizer.lr = float(meta.get('lr', self.config.lr))

        if 'schedule' in meta:
            self.schedule = PlateauSchedule(**meta['schedule'])

        Trainer.logger.info(f'Resuming after epoch {self.epoch}: t={self.optimizer.t}  lr={self.optimizer.lr:g}')


    def __on_step(self, loss):
        self.step_losses.append(loss)

        step = self.optimizer.t
        Trainer.logger.info_debug(step % Trainer.LOG_EVERY == 0, f'step {step}  loss={loss:.6f}')


    def __val_pairs(self):
        return self.val_pairs if len(self.val_pairs) > 0 else self.train_pairs


    def run(self):
        """
        Trains up to `config.epochs` epochs. Returns the best validation loss.
        """
        config = self.config
        resumed = self.epoch > 0

        report = CsvReport(self.log_pathname, Trainer.COLUMNS, self.header, append=resumed)

        if not resumed:
            # Epoch 0 is the untrained model; it seeds the plateau schedule
            val_loss, val_psnr = validate(self.model, self.__val_pairs(), config.batch_size, config.threads)
            plateau_update(self.schedule, val_loss)
            self.best_val = val_loss

            Trainer.logger.info(f'epoch 0  val_loss={val_loss:.6f}  val_psnr={val_psnr:.3f}')
            self.__save(self.weights_pathname)

        while self.epoch < config.epochs:
            epoch = self.epoch + 1
            t_start = time.perf_counter()

            batches = batch_iter(self.train_pairs, config.batch_size, config.seed, epoch, self.model.precision)
            train_loss = train_epoch(
                self.model, Prefetcher(batches, config.prefetch), self.optimizer,
                config.deterministic, config.threads, self.__on_step
            )

            val_loss, val_psnr = validate(self.model, self.__val_pairs(), config.batch_size, config.threads)
            lr = self.optimizer.lr

            self.optimizer.lr = plateau_update(self.schedule, val_loss)
            wall_seconds = time.perf_counter() - t_start

            self.epoch = epoch
            report.append([ epoch, train_loss, val_loss, lr, wall_seconds ])

            is_best = val_loss < self.best_val
            if is_best:
                self.best_val = val_loss
                self.__save(self.weights_pathname)

            self.__save(self.last_pathname)

            Trainer.logger.info(
                f'epoch {epoch}  train_loss={train_loss:.6f}  val_loss={val_loss:.6f}  val_psnr={val_psnr:.3f}  '
                f'lr={lr:g}  {wall_seconds:.1f}s{"  *" if is_best else ""}'
            )

            if self.optimizer.lr != lr:
                Trainer.logger.info(f'lr reduced to {self.optimizer.lr:g}')

        return self.best_val


    @staticmethod
    def checkpoint_pathname(weights_pathname):
        """ Checkpoint to resume from: the latest epoch if present, else the best weights """
        last = f'{weights_pathname}.last'
        return last if os.path.isfile(last) else weights_pathname
