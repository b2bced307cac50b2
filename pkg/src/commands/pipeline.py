"""
Steps shared by the commands: Y plane loading, LR synthesis, upscaling
through the network and weight loading with the scale check.
"""
import os

import numpy as np

from misc.Logger import Logger
from misc.errors import UsageError
from imaging import PngIO, rgb_to_y, bicubic_resize, modcrop
from imaging.color import to_u8
from data.batches import pack, from_network
from file_managers.weights_mgr import WeightsManager


logger = Logger.get_logger(__name__)


def image_id(index, pathname):
    return f'{index:05d}-{os.path.splitext(os.path.basename(pathname))[0]}'


def load_y(pathname):
    """ 8-bit luma plane of a PNG, as float samples """
    return to_u8(rgb_to_y(PngIO.load(pathname))).astype(np.float64)


def shave(plane, px):
    height, width = plane.shape
    return plane[px:height - px, px:width - px]


def synthesize_lr(hr, scale, quantize=True):
    """ Modcropped HR plane and its bicubic-downscaled LR plane """
    hr = modcrop(hr, scale)
    height, width = hr.shape

    lr = bicubic_resize(hr, width//scale, height//scale)
    if quantize:
        lr = to_u8(lr).astype(np.float64)

    return hr, lr


def upscale(model, lr, scale):
    """
    LR plane -> HR plane in [0, 255], not clipped. Without a model this is
    the bicubic baseline.
    """
    height, width = lr.shape
    ilr = bicubic_resize(lr, width*scale, height*scale)
    if model is None:
        return ilr

    out = model.infer(pack([ ilr ], model.precision))
    return from_network(out.data[0, 0])


def load_model(pathname, scale=None):
    """
    Loads a weight file and applies its sidecar settings. The sidecar scale
    is checked against `scale` unless `scale` is None.
    """
    if not pathname:
        raise UsageError('No weight file given (--weights)')

    model = WeightsManager.load_weights(pathname)
    meta  = WeightsManager.load_state(pathname)

    if scale is not None:
        if 'scale' not in meta:
            logger.warning(f'{pathname} has no scale metadata; assuming x{scale}')
        elif int(meta['scale']) != scale:
            raise UsageError(f'{pathname} was trained for x{meta["scale"]}, requested x{scale}')

    model.feat_act = bool(meta.get('feat_act', False))

    logger.debug(f'Loaded {pathname}: n_blocks={model.n_blocks} precision={model.precision}')
    return model
