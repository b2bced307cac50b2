from .tensor import Tensor, TensorOps
from .model import ConvLayer, RfrBlock, SrfrnModel, Tape
from .optim import AdamConfig, Adam, PlateauSchedule, l1_loss, adam_step, plateau_update
