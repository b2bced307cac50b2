import os

from misc.Logger import Logger
from misc.errors import UsageError
from misc.utils import Utils
from imaging import ImageU8, PngIO, ycbcr_from_rgb, y_merge_back
from imaging.color import to_u8

from .pipeline import load_model, upscale


class SrCmd():
    """
    Upscales one PNG. Only the Y channel goes through the network; color
    images get their chroma bicubic-upsampled and merged back.
    """

    logger = Logger.get_logger(__name__)

    @staticmethod
    @Utils.benchmark(f'{__name__}')
    def super_resolve(model, img, scale):
        if img.is_gray:
            y_sr = upscale(model, img.pixels[:, :, 0].astype(float), scale)
            return ImageU8(to_u8(y_sr))

        y, cb, cr = ycbcr_from_rgb(img.pixels)
        y_sr = upscale(model, y, scale)
        return y_merge_back(y_sr, cb, cr)


    @staticmethod
    def run(config):
        if not config.input or not config.output:
            raise UsageError('sr needs --input and --output')

        model = None if config.bicubic_only else load_model(config.weights, config.scale)
        img   = PngIO.load(config.input)

        out = SrCmd.super_resolve(model, img, config.scale)

        dirname = os.path.dirname(config.output)
        if dirname:
            os.makedirs(dirname, exist_ok=True)

        PngIO.save(out, config.output)

        SrCmd.logger.info(f'{config.input} ({img.width}x{img.height}) -> {config.output} ({out.width}x{out.height})')
        return out
