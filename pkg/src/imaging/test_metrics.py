"""
Tests for PSNR and SSIM.
"""

################################################################################
# Tests
################################################################################

import math

import numpy as np
import pytest

from misc.errors import DataError, ShapeError
from imaging.metrics import psnr, ssim


# psnr ------------------------------------------------------------------------

def test_psnr_identical(rng):
    a = rng.uniform(0, 255, (8, 8))
    assert psnr(a, a) == math.inf


def test_psnr_unit_mse():
    a = np.zeros((4, 4))
    b = np.ones((4, 4))
    assert psnr(a, b) == pytest.approx(48.1308, abs=1e-4)


def test_psnr_symmetric(rng):
    a = rng.uniform(0, 255, (10, 12))
    b = rng.uniform(0, 255, (10, 12))
    assert psnr(a, b) == psnr(b, a)


def test_psnr_falls_with_noise(make_plane, rng):
    plane = make_plane(32, 32)
    noise = rng.standard_normal(plane.shape)

    scores = [ psnr(plane + sigma*noise, plane) for sigma in [ 1, 4, 16 ] ]
    assert scores[0] > scores[1] > scores[2]


def test_psnr_shave_ignores_border():
    a = np.zeros((10, 10))
    b = a.copy()
    b[0, :] = 255
    b[:, -1] = 255

    assert psnr(a, b, shave=1) == math.inf
    assert psnr(a, b) < math.inf


def test_psnr_errors():
    with pytest.raises(ShapeError):
        psnr(np.zeros((4, 4)), np.zeros((4, 5)))

    with pytest.raises(DataError):
        psnr(np.zeros((4, 4)), np.zeros((4, 4)), shave=2)

    with pytest.raises(DataError):
        psnr(np.zeros((4, 4)), np.zeros((4, 4)), shave=-1)


# ssim ------------------------------------------------------------------------

def test_ssim_identical(make_plane):
    plane = make_plane(24, 24)
    assert ssim(plane, plane) == pytest.approx(1.0, abs=1e-12)


def test_ssim_inverted(make_plane):
    plane = make_plane(24, 24, 1)
    assert ssim(plane, 255 - plane) < 1


def test_ssim_constant_planes():
    a = np.full((16, 16), 100.0)
    assert ssim(a, a) == pytest.approx(1.0, abs=1e-12)


def test_ssim_symmetric(make_plane, rng):
    a = make_plane(20, 20)
    b = a + rng.normal(0, 5, a.shape)
    assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-12)


def test_ssim_bounded(make_plane, rng):
    a = make_plane(20, 20, 2)
    b = rng.uniform(0, 255, a.shape)
    assert -1 <= ssim(a, b) < 1


def test_ssim_errors():
    with pytest.raises(DataError):
        ssim(np.zeros((10, 20)), np.zeros((10, 20)))

    with pytest.raises(ShapeError):
        ssim(np.zeros((12, 12)), np.zeros((12, 13)))
