"""
BT.601 studio-range YCbCr conversion for 8-bit RGB.
"""
import numpy as np

from .png_io import ImageU8
from .resample import bicubic_resize


# Rows produce Y, Cb, Cr from R, G, B in [0, 255]
YCBCR_MATRIX = np.array([
    [  65.481, 128.553,  24.966 ],
    [ -37.797, -74.203, 112.000 ],
    [ 112.000, -93.786, -18.214 ],
])/255.0

YCBCR_OFFSET = np.array([ 16.0, 128.0, 128.0 ])

RGB_MATRIX = np.linalg.inv(YCBCR_MATRIX)


def ycbcr_from_rgb(pixels):
    """ (H, W, 3) RGB samples -> Y, Cb, Cr float planes """
    rgb = np.asarray(pixels, dtype=np.float64)
    ycc = rgb @ YCBCR_MATRIX.T + YCBCR_OFFSET
    return ycc[:, :, 0].copy(), ycc[:, :, 1].copy(), ycc[:, :, 2].copy()


def rgb_from_ycbcr(y, cb, cr):
    """ Y, Cb, Cr planes -> (H, W, 3) float RGB, not clipped """
    ycc = np.stack([ y, cb, cr ], axis=-1) - YCBCR_OFFSET
    return ycc @ RGB_MATRIX.T


def rgb_to_y(img):
    """
    Luma plane of an ImageU8. Gray images pass through as their own samples.
    """
    if img.is_gray:
        return img.pixels[:, :, 0].astype(np.float64)

    return ycbcr_from_rgb(img.pixels)[0]


def to_u8(samples):
    return np.clip(np.round(samples), 0, 255).astype(np.uint8)


def y_merge_back(y_sr, cb, cr):
    """
    Rebuilds an RGB ImageU8 from a super-resolved Y plane and low resolution
    chroma planes, which are bicubic-upsampled to the Y plane size.
    """
    height, width = y_sr.shape
    cb_up = bicubic_resize(cb, width, height)
    cr_up = bicubic_resize(cr, width, height)

    return ImageU8(to_u8(rgb_from_ycbcr(y_sr, cb_up, cr_up)))
