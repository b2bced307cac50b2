import numpy as np
import pytest

from nn.tensor import Tensor, TensorOps
from nn.model import SrfrnModel
from file_managers.config_mgr import RunConfig


# Every kernel result is checked for NaN/Inf during tests
Tensor.check_finite = True


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def kernel_settings():
    """ Restores kernel settings a test may have changed """
    settings = (TensorOps.BAND_ELEMS, TensorOps.threads, TensorOps.deterministic)
    yield
    TensorOps.BAND_ELEMS, TensorOps.threads, TensorOps.deterministic = settings


@pytest.fixture
def tiny_model():
    """ 2-block model in extended precision, seeded """
    return SrfrnModel(2, Tensor.EXTENDED).init_params(7)


@pytest.fixture
def run_config(tmp_path):
    """ Small-budget config writing everything under tmp_path """
    return RunConfig(
        scale      = 2,
        n_blocks   = 1,
        epochs     = 2,
        batch_size = 4,
        patch      = 12,
        stride     = 12,
        prefetch   = 0,
        out_dir    = str(tmp_path / 'out'),
    )


def smooth_plane(height, width, seed=0):
    """ Band-limited test image in [0, 255], like a natural photo at low resolution """
    rng = np.random.default_rng(seed)
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)

    plane = 128.0 + np.zeros((height, width))
    for _ in range(6):
        fy, fx = rng.uniform(0.02, 0.25, size=2)
        phase  = rng.uniform(0, 2*np.pi)
        plane += rng.uniform(10, 25)*np.sin(fy*y + fx*x + phase)

    return np.clip(plane, 0, 255)


@pytest.fixture
def make_plane():
    return smooth_plane
