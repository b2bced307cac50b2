import math

import numpy as np
import scipy.signal

from misc.errors import DataError, ShapeError


PEAK = 255.0

SSIM_WINDOW = 11
SSIM_SIGMA  = 1.5
SSIM_K1     = 0.01
SSIM_K2     = 0.03


def psnr(a, b, shave=0):
    """
    10*log10(255^2/MSE) after removing `shave` pixels from every border.
    Identical planes give +inf.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)

    if a.shape != b.shape:
        raise ShapeError('plane size', a.shape, b.shape, 'psnr')

    if shave < 0 or 2*shave >= min(a.shape):
        raise DataError(f'psnr shave {shave} leaves nothing of a {a.shape[1]}x{a.shape[0]} plane')

    if shave > 0:
        a = a[shave:-shave, shave:-shave]
        b = b[shave:-shave, shave:-shave]

    mse = np.mean((a - b)**2)
    if mse == 0:
        return math.inf

    return float(10*np.log10(PEAK**2/mse))


def gaussian_window(size=SSIM_WINDOW, sigma=SSIM_SIGMA):
    coords = np.arange(size) - size//2
    g = np.exp(-(coords**2)/(2*sigma**2))
    g /= g.sum()
    return np.outer(g, g)


def ssim(a, b):
    """
    Mean SSIM over every valid (fully inside the image) 11x11 Gaussian
    window position.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)

    if a.shape != b.shape:
        raise ShapeError('plane size', a.shape, b.shape, 'ssim')

    if min(a.shape) < SSIM_WINDOW:
        raise DataError(f'ssim needs at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {a.shape[1]}x{a.shape[0]}')

    c1 = (SSIM_K1*PEAK)**2
    c2 = (SSIM_K2*PEAK)**2

    window = gaussian_window()
    def filt(x):
        return scipy.signal.convolve2d(x, window, mode='valid')

    mu_a = filt(a)
    mu_b = filt(b)

    mu_aa = mu_a*mu_a
    mu_bb = mu_b*mu_b
    mu_ab = mu_a*mu_b

    var_a  = filt(a*a) - mu_aa
    var_b  = filt(b*b) - mu_bb
    cov_ab = filt(a*b) - mu_ab

    ssim_map = ((2*mu_ab + c1)*(2*cov_ab + c2))/((mu_aa + mu_bb + c1)*(var_a + var_b + c2))
    return float(np.mean(ssim_map))
