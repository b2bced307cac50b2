import dataclasses
import math

import numpy as np

from misc.errors import DivergenceError, ShapeError, UsageError

from .tensor import Tensor


def l1_loss(pred, target):
    """
    Pixel-mean absolute error and its gradient w.r.t. `pred`.

    The subgradient of |0| is taken as 0.
    """
    if pred.shape != target.shape:
        raise ShapeError('shape', pred.shape, target.shape, 'l1_loss')

    diff  = pred.data - np.asarray(target.data, dtype=pred.dtype)
    count = diff.size

    loss = float(np.abs(diff).sum(dtype=np.float64)/count)
    grad = (np.sign(diff)/count).astype(pred.dtype, copy=False)

    return loss, Tensor.wrap(grad)


@dataclasses.dataclass
class AdamConfig():

    lr      : float = 1e-3
    beta1   : float = 0.9
    beta2   : float = 0.999
    epsilon : float = 1e-8

    def __post_init__(self):
        if not self.lr > 0:
            raise UsageError(f'lr must be positive, got {self.lr}')

        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise UsageError(f'betas must be in [0, 1), got {self.beta1}, {self.beta2}')


def adam_step(layer, config, t):
    """
    One bias-corrected Adam update of every parameter tensor of `layer`,
    using the moment slots stored on the layer. `t` is the 1-based step.
    """
    bc1 = 1.0 - config.beta1**t
    bc2 = 1.0 - config.beta2**t

    for name, param, grad in layer.params():
        m, v = layer.slots[name]

        m *= config.beta1
        m += (1.0 - config.beta1)*grad

        v *= config.beta2
        v += (1.0 - config.beta2)*(grad*grad)

        m_hat = m/bc1
        v_hat = v/bc2
        param -= config.lr*m_hat/(np.sqrt(v_hat) + config.epsilon)

    return layer


class Adam():

    def __init__(self, config=None, t=0):
        self.config = config if config is not None else AdamConfig()
        self.t      = t


    @property
    def lr(self):
        return self.config.lr


    @lr.setter
    def lr(self, lr):
        self.config.lr = lr


    def step(self, layers):
        self.t += 1
        for layer in layers:
            adam_step(layer, self.config, self.t)


@dataclasses.dataclass
class PlateauSchedule():
    """
    Scales lr by `factor` once validation loss has not improved by more than
    `rel_threshold` (relative) for `patience` consecutive epochs.
    """

    lr            : float = 1e-3
    patience      : int   = 10
    factor        : float = 0.5
    min_lr        : float = 1e-6
    rel_threshold : float = 1e-4
    best_val      : float = math.inf
    stale_count   : int   = 0

    DivergenceError = DivergenceError

    def __post_init__(self):
        if not 0 < self.factor < 1:
            raise UsageError(f'plateau factor must be in (0, 1), got {self.factor}')

        if self.patience < 1:
            raise UsageError(f'patience must be >= 1, got {self.patience}')

        self.lr = max(self.lr, self.min_lr)


    def update(self, val_loss):
        if not math.isfinite(val_loss):
            raise DivergenceError(f'validation loss is {val_loss}')

        if val_loss < self.best_val*(1 - self.rel_threshold):
            self.best_val    = val_loss
            self.stale_count = 0
            return self.lr

        self.stale_count += 1
        if self.stale_count >= self.patience:
            self.lr = max(self.lr*self.factor, self.min_lr)
            self.stale_count = 0

        return self.lr


    def state(self):
        return dataclasses.asdict(self)


def plateau_update(schedule, val_loss):
    """ Feeds one epoch's validation loss to `schedule`; returns the lr to use next """
    return schedule.update(val_loss)
