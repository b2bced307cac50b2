import dataclasses

import numpy as np

from misc.errors import DataError
from imaging.resample import bicubic_resize
from imaging.color import to_u8


@dataclasses.dataclass(frozen=True)
class PatchSource():

    image_id : str
    y        : int
    x        : int
    variant  : int


@dataclasses.dataclass
class PatchPair():
    """
    Interpolated LR patch and its HR ground truth, both m x m, [0, 255] range.
    """

    ilr    : np.ndarray
    hr     : np.ndarray
    source : PatchSource = None

    def __post_init__(self):
        if self.ilr.shape != self.hr.shape:
            raise DataError(f'PatchPair ilr {self.ilr.shape} and hr {self.hr.shape} differ')

    @property
    def m(self):
        return self.hr.shape[0]


def extract_patches(hr, m, stride):
    """
    Grid-aligned m x m patches whose top-left corners are multiples of
    `stride`. Returns (y, x, patch) triples in row-major corner order.
    """
    height, width = hr.shape

    if m < 1 or stride < 1:
        raise DataError(f'patch size and stride must be positive, got m={m} stride={stride}')

    if m > min(height, width):
        raise DataError(f'patch size {m} exceeds image {width}x{height}')

    return [
        (y, x, hr[y:y + m, x:x + m])
        for y in range(0, height - m + 1, stride)
        for x in range(0, width - m + 1, stride)
    ]


def make_pair(hr_patch, scale, source=None, quantize=False):
    """
    Downscales the HR patch by `scale` and interpolates it back to size.
    With `quantize` the LR patch is rounded to 8-bit, as if stored on disk.
    """
    hr_patch = np.asarray(hr_patch, dtype=np.float64)
    height, width = hr_patch.shape

    if height % scale or width % scale:
        raise DataError(f'patch {width}x{height} is not divisible by scale {scale}')

    lr = bicubic_resize(hr_patch, width//scale, height//scale)
    if quantize:
        lr = to_u8(lr).astype(np.float64)

    ilr = bicubic_resize(lr, width, height)
    return PatchPair(ilr, hr_patch.copy(), source)
