import dataclasses
import struct
import zlib

import numpy as np
import png

from misc.Logger import Logger
from misc.errors import DataError


@dataclasses.dataclass
class ImageU8():
    """
    8-bit image, pixels stored (height, width, channels) with 1 or 3 channels.
    """

    pixels : np.ndarray

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim == 2:
            pixels = pixels[:, :, None]

        if pixels.ndim != 3 or pixels.shape[2] not in (1, 3):
            raise DataError(f'ImageU8 expects 1 or 3 channels, got shape {pixels.shape}')

        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise DataError(f'ImageU8 dimensions must be positive, got {pixels.shape[:2]}')

        self.pixels = np.ascontiguousarray(pixels, dtype=np.uint8)


    @property
    def width(self):
        return self.pixels.shape[1]


    @property
    def height(self):
        return self.pixels.shape[0]


    @property
    def channels(self):
        return self.pixels.shape[2]


    @property
    def is_gray(self):
        return self.channels == 1


class PngIO():

    logger = Logger.get_logger(__name__)

    class FormatError(DataError):
        pass

    class BitDepthError(DataError):
        pass

    @staticmethod
    def load(pathname):
        """
        Decodes an 8-bit (or lower, rescaled to 8-bit) gray or RGB PNG.
        Alpha is dropped, palettes are expanded. Deeper samples are rejected.
        """
        try:
            width, height, rows, meta = png.Reader(filename=pathname).asDirect()

            if meta['bitdepth'] > 8:
                raise PngIO.BitDepthError(f'{pathname}: {meta["bitdepth"]}-bit samples are not supported')

            # Materialize inside the try so a truncated stream never yields a partial image
            pixels = np.vstack([ np.asarray(row, dtype=np.uint16) for row in rows ])
        except (png.Error, zlib.error, struct.error, EOFError, ValueError, OSError) as e:
            raise PngIO.FormatError(f'{pathname}: {e}') from e

        planes = meta['planes']
        if pixels.shape != (height, width*planes):
            raise PngIO.FormatError(f'{pathname}: expected {height} rows of {width*planes} samples, got {pixels.shape}')

        pixels = pixels.reshape(height, width, planes)
        if meta['alpha']:
            pixels = pixels[:, :, :-1]

        if meta['bitdepth'] < 8:
            pixels = pixels*255//(2**meta['bitdepth'] - 1)

        PngIO.logger.debug(f'Loaded {pathname}: {width}x{height}x{pixels.shape[2]}')
        return ImageU8(pixels.astype(np.uint8))


    @staticmethod
    def save(img, pathname):
        writer = png.Writer(width=img.width, height=img.height, greyscale=img.is_gray, bitdepth=8)
        rows = img.pixels.reshape(img.height, img.width*img.channels)

        with open(pathname, 'wb') as f:
            writer.write(f, rows.tolist())

        PngIO.logger.debug(f'Saved {pathname}: {img.width}x{img.height}x{img.channels}')
