"""
Separable bicubic resampling with the Keys cubic convolution kernel.

Source coordinates are center aligned, src = (dst + 0.5)*(in/out) - 0.5;
taps falling outside the image replicate the edge sample. The same routine
is used for up- and down-scaling, without a prefilter.
"""
import numpy as np

from misc.errors import DataError


KEYS_A = -0.5


def keys_kernel(x, a=KEYS_A):
    x  = np.abs(np.asarray(x, dtype=np.float64))
    x2 = x*x
    x3 = x2*x

    near = (a + 2)*x3 - (a + 3)*x2 + 1
    far  = a*x3 - 5*a*x2 + 8*a*x - 4*a

    return np.where(x <= 1, near, np.where(x < 2, far, 0.0))


def keys_weights(phi, a=KEYS_A):
    """ Weights of the taps at offsets -1, 0, 1, 2 for fractional offset `phi` """
    return keys_kernel(np.array([ 1 + phi, phi, 1 - phi, 2 - phi ]), a)


def resize_matrix(n_in, n_out, a=KEYS_A):
    """ (n_out, n_in) matrix applying the 1-D resampling along one axis """
    dst  = np.arange(n_out, dtype=np.float64)
    src  = (dst + 0.5)*(n_in/n_out) - 0.5
    base = np.floor(src)

    taps    = base[:, None] + np.arange(-1, 3)[None, :]
    weights = keys_kernel(src[:, None] - taps, a)
    idxs    = np.clip(taps, 0, n_in - 1).astype(np.int64)

    mat  = np.zeros((n_out, n_in))
    rows = np.repeat(np.arange(n_out), 4)
    np.add.at(mat, (rows, idxs.ravel()), weights.ravel())

    return mat


def bicubic_resize(plane, out_w, out_h):
    plane = np.asarray(plane, dtype=np.float64)
    if plane.ndim != 2:
        raise DataError(f'bicubic_resize expects a 2-D plane, got shape {plane.shape}')

    if out_w < 1 or out_h < 1:
        raise DataError(f'bicubic_resize output must be at least 1x1, got {out_w}x{out_h}')

    in_h, in_w = plane.shape
    if (in_w, in_h) == (out_w, out_h):
        return plane.copy()

    return resize_matrix(in_h, out_h) @ plane @ resize_matrix(in_w, out_w).T


def modcrop(plane, scale):
    """ Crops bottom/right rows and columns so both sides divide by `scale` """
    height, width = plane.shape[:2]
    height -= height % scale
    width  -= width % scale

    if height == 0 or width == 0:
        raise DataError(f'modcrop of {plane.shape[1]}x{plane.shape[0]} at scale {scale} leaves an empty image')

    return plane[:height, :width]
