import dataclasses

import numpy as np

from misc.Logger import Logger
from misc.errors import DataError, ShapeError, UsageError

from .tensor import Tensor, TensorOps


class ConvLayer():
    """
    One 3x3 convolution: parameters, gradient buffers and the two Adam
    moment buffers per parameter tensor.
    """

    def __init__(self, in_ch, out_ch, precision=Tensor.STANDARD):
        dtype = Tensor.DTYPES[precision]

        self.in_ch  = in_ch
        self.out_ch = out_ch

        self.weights = np.zeros((out_ch, in_ch, 3, 3), dtype=dtype)
        self.bias    = np.zeros((out_ch, ), dtype=dtype)

        self.grad_weights = np.zeros_like(self.weights)
        self.grad_bias    = np.zeros_like(self.bias)

        # name -> [ first moment, second moment ]
        self.slots = {
            'weights' : [ np.zeros_like(self.weights), np.zeros_like(self.weights) ],
            'bias'    : [ np.zeros_like(self.bias),    np.zeros_like(self.bias)    ],
        }


    @property
    def param_count(self):
        return self.weights.size + self.bias.size


    def params(self):
        """ (name, parameter, gradient) triples, updated in place by the optimizer """
        return [
            ('weights', self.weights, self.grad_weights),
            ('bias',    self.bias,    self.grad_bias),
        ]


    def init(self, rng):
        std = np.sqrt(2.0/(self.in_ch*9))
        self.weights[...] = rng.normal(0.0, std, size=self.weights.shape)
        self.bias[...]    = 0


    def zero_grad(self):
        self.grad_weights[...] = 0
        self.grad_bias[...]    = 0


    def forward(self, x):
        return TensorOps.conv2d_forward(x, self.weights, self.bias)


    def backward(self, x, grad_out):
        grad_in, grad_w, grad_b = TensorOps.conv2d_backward(x, self.weights, grad_out)

        self.grad_weights += grad_w.astype(self.grad_weights.dtype, copy=False)
        self.grad_bias    += grad_b.astype(self.grad_bias.dtype, copy=False)

        return grad_in


@dataclasses.dataclass
class BlockRecord():

    r_prev : Tensor
    z1     : Tensor
    a1     : Tensor
    z2     : Tensor
    a2     : Tensor
    z3     : Tensor


class RfrBlock():
    """
    Three 64->64 convolutions, each followed by Leaky ReLU; the third
    layer's activation is summed with the first layer's.
    """

    CHANNELS = 64
    SLOPE    = 0.1

    def __init__(self, precision=Tensor.STANDARD):
        self.layers = [ ConvLayer(RfrBlock.CHANNELS, RfrBlock.CHANNELS, precision) for _ in range(3) ]
        self.slope  = RfrBlock.SLOPE


    @property
    def param_count(self):
        return sum(layer.param_count for layer in self.layers)


    def forward(self, r_prev):
        """
        Returns (R_n, record). No activation follows the fusion.
        """
        if r_prev.shape[1] != RfrBlock.CHANNELS:
            raise ShapeError('channels', RfrBlock.CHANNELS, r_prev.shape[1], 'RfrBlock')

        conv1, conv2, conv3 = self.layers

        z1 = conv1.forward(r_prev); a1 = TensorOps.leaky_relu_forward(z1, self.slope)
        z2 = conv2.forward(a1);     a2 = TensorOps.leaky_relu_forward(z2, self.slope)
        z3 = conv3.forward(a2);     a3 = TensorOps.leaky_relu_forward(z3, self.slope)

        return TensorOps.add(a3, a1), BlockRecord(r_prev, z1, a1, z2, a2, z3)


    def backward(self, record, grad_out):
        conv1, conv2, conv3 = self.layers

        # Fusion routes the same gradient to the 3rd and the 1st layer paths
        g_z3 = TensorOps.leaky_relu_backward(record.z3, grad_out, self.slope)
        g_a2 = conv3.backward(record.a2, g_z3)

        g_z2 = TensorOps.leaky_relu_backward(record.z2, g_a2, self.slope)
        g_a1 = TensorOps.add(conv2.backward(record.a1, g_z2), grad_out)

        g_z1 = TensorOps.leaky_relu_backward(record.z1, g_a1, self.slope)
        return conv1.backward(record.r_prev, g_z1)


def rfr_forward(block, r_prev):
    return block.forward(r_prev)[0]


@dataclasses.dataclass
class Tape():
    """
    Activation record of one forward pass.
    """

    i_ilr  : Tensor
    f1_pre : Tensor
    f1     : Tensor
    f2_pre : Tensor
    f2     : Tensor
    blocks : list
    r_n    : Tensor
    i_c    : Tensor

    def activation_signs(self):
        """
        Sign pattern of every Leaky ReLU input recorded on the tape. Two
        forward passes with equal patterns lie on the same linear piece.
        """
        signs = []
        if self.f1 is not self.f1_pre: signs.append(self.f1_pre.data >= 0)
        if self.f2 is not self.f2_pre: signs.append(self.f2_pre.data >= 0)

        for record in self.blocks:
            signs += [ record.z1.data >= 0, record.z2.data >= 0, record.z3.data >= 0 ]

        return np.concatenate([ s.ravel() for s in signs ]) if signs else np.zeros(0, dtype=bool)


class SrfrnModel():
    """
    feat1 (1->64) -> feat2 (64->64) -> n RFR blocks -> recon (64->1), plus the
    global skip from the interpolated input to the output.
    """

    CHANNELS = 64

    logger = Logger.get_logger(__name__)

    class TapeError(DataError, RuntimeError):
        pass

    def __init__(self, n_blocks=6, precision=Tensor.STANDARD, feat_act=False):
        SrfrnModel.check_n_blocks(n_blocks)

        self.n_blocks  = int(n_blocks)
        self.precision = precision
        self.feat_act  = bool(feat_act)
        self.slope     = RfrBlock.SLOPE

        self.feat1  = ConvLayer(1, SrfrnModel.CHANNELS, precision)
        self.feat2  = ConvLayer(SrfrnModel.CHANNELS, SrfrnModel.CHANNELS, precision)
        self.blocks = [ RfrBlock(precision) for _ in range(self.n_blocks) ]
        self.recon  = ConvLayer(SrfrnModel.CHANNELS, 1, precision)


    @staticmethod
    def check_n_blocks(n_blocks):
        if isinstance(n_blocks, bool) or int(n_blocks) != n_blocks or n_blocks < 1:
            raise UsageError(f'n_blocks must be a positive integer, got {n_blocks}')


    @staticmethod
    def param_count(n_blocks):
        SrfrnModel.check_n_blocks(n_blocks)

        c = SrfrnModel.CHANNELS
        feat  = (1*c*9 + c) + (c*c*9 + c)
        block = 3*(c*c*9 + c)
        recon = c*9 + 1

        return feat + n_blocks*block + recon


    @property
    def total_params(self):
        return sum(layer.param_count for layer in self.layers())


    def layers(self):
        """ Every ConvLayer, in weight file order """
        layers = [ self.feat1, self.feat2 ]
        for block in self.blocks:
            layers += block.layers

        return layers + [ self.recon ]


    def flops(self, height, width):
        """ Multiply-add count x2 of one forward pass on a single image """
        return 2*sum(layer.out_ch*layer.in_ch*9 for layer in self.layers())*height*width


    def init_params(self, seed):
        rng = np.random.default_rng(seed)
        for layer in self.layers():
            layer.init(rng)

        return self


    def zero_grad(self):
        for layer in self.layers():
            layer.zero_grad()


    def zero_recon(self):
        self.recon.weights[...] = 0
        self.recon.bias[...]    = 0
        return self


    def forward(self, i_ilr):
        """
        Returns (I_FRC, tape) for an interpolated single-channel batch.
        """
        if i_ilr.shape[1] != 1:
            raise ShapeError('channels', 1, i_ilr.shape[1], 'SrfrnModel.forward')

        if i_ilr.shape[2] < 3 or i_ilr.shape[3] < 3:
            raise ShapeError('spatial size', '>= 3x3', i_ilr.shape[2:], 'SrfrnModel.forward')

        i_ilr = i_ilr.astype(self.precision)

        f1_pre = self.feat1.forward(i_ilr)
        f1     = TensorOps.leaky_relu_forward(f1_pre, self.slope) if self.feat_act else f1_pre

        f2_pre = self.feat2.forward(f1)
        f2     = TensorOps.leaky_relu_forward(f2_pre, self.slope) if self.feat_act else f2_pre

        r_n     = f2
        records = []
        for block in self.blocks:
            r_n, record = block.forward(r_n)
            records.append(record)

        i_c   = self.recon.forward(r_n)
        i_frc = TensorOps.add(i_ilr, i_c)

        return i_frc, Tape(i_ilr, f1_pre, f1, f2_pre, f2, records, r_n, i_c)


    def infer(self, i_ilr):
        return self.forward(i_ilr)[0]


    def backward(self, tape, grad_i_frc):
        """
        Accumulates dL/dW, dL/dB into every layer and returns dL/d(I_ILR).
        """
        if tape is None:
            raise SrfrnModel.TapeError('backward called without a forward tape')

        if grad_i_frc.shape != tape.i_ilr.shape:
            raise ShapeError('grad shape', tape.i_ilr.shape, grad_i_frc.shape, 'SrfrnModel.backward')

        grad_i_frc = grad_i_frc.astype(self.precision)

        g = self.recon.backward(tape.r_n, grad_i_frc)
        for block, record in zip(reversed(self.blocks), reversed(tape.blocks)):
            g = block.backward(record, g)

        if self.feat_act:
            g = TensorOps.leaky_relu_backward(tape.f2_pre, g, self.slope)
        g = self.feat2.backward(tape.f1, g)

        if self.feat_act:
            g = TensorOps.leaky_relu_backward(tape.f1_pre, g, self.slope)
        g = self.feat1.backward(tape.i_ilr, g)

        # Global skip passes the output gradient straight to the input
        return TensorOps.add(g, grad_i_frc)
