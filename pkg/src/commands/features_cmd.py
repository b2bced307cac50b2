import os

import numpy as np

from misc.Logger import Logger
from misc.errors import UsageError
from misc.utils import Utils
from imaging import ImageU8, PngIO, rgb_to_y, bicubic_resize
from data.batches import pack

from .pipeline import load_model


class FeaturesCmd():
    """
    Writes the intermediate maps of one forward pass as 8-bit PNGs: the
    interpolated input, the channel mean of the extracted features and of
    every block output, the predicted residual and the output. Each map is
    stretched to its own min..max range.
    """

    logger = Logger.get_logger(__name__)

    @staticmethod
    def normalize(plane):
        lo, hi = float(np.min(plane)), float(np.max(plane))
        if hi - lo <= 0:
            return np.zeros(plane.shape, dtype=np.uint8)

        return np.round(255*(plane - lo)/(hi - lo)).astype(np.uint8)


    @staticmethod
    @Utils.benchmark(f'{__name__}')
    def feature_maps(model, lr, scale):
        """ Ordered (name, plane) list for an LR Y plane in [0, 255] """
        height, width = lr.shape
        ilr = bicubic_resize(lr, width*scale, height*scale)

        i_frc, tape = model.forward(pack([ ilr ], model.precision))

        # R_k is the next block's input; the last one is kept on the tape as r_n
        block_outs = [ record.r_prev for record in tape.blocks[1:] ] + [ tape.r_n ]

        maps  = [ ('ilr', tape.i_ilr.data[0, 0]), ('f2', tape.f2.data[0].mean(axis=0)) ]
        maps += [ (f'r{k + 1}', r.data[0].mean(axis=0)) for k, r in enumerate(block_outs) ]
        maps += [ ('residual', tape.i_c.data[0, 0]), ('output', i_frc.data[0, 0]) ]

        return maps


    @staticmethod
    def run(config):
        if not config.input:
            raise UsageError('features needs --input')

        model = load_model(config.weights, config.scale)
        lr    = rgb_to_y(PngIO.load(config.input))

        out_dir = os.path.join(config.out_dir, 'features')
        os.makedirs(out_dir, exist_ok=True)

        written = []
        for i, (name, plane) in enumerate(FeaturesCmd.feature_maps(model, lr, config.scale)):
            pathname = os.path.join(out_dir, f'{i:02d}_{name}.png')
            PngIO.save(ImageU8(FeaturesCmd.normalize(plane)), pathname)
            written.append(pathname)

        FeaturesCmd.logger.info(f'Wrote {len(written)} feature maps to {out_dir}')
        return written
