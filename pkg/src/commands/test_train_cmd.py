"""
Tests for the train command on a freshly prepared cache.
"""

################################################################################
# Tests
################################################################################

import dataclasses
import os

import numpy as np
import pytest

from misc.errors import UsageError
from imaging.metrics import psnr
from nn.trainer import validate
from file_managers import CsvReport, PatchCache, WeightsManager
from commands import PrepareCmd, TrainCmd

from .conftest import write_png


def test_train_smoke(config):
    PrepareCmd.run(config)
    weights = TrainCmd.run(config)

    assert weights == os.path.join(config.out_dir, 'srfrn_x2.bin')
    assert WeightsManager.load_weights(weights).n_blocks == 1
    assert WeightsManager.load_state(weights)['scale'] == 2

    header, data = CsvReport.read(os.path.join(config.out_dir, 'train_x2.csv'))
    assert list(data['epoch']) == [ 1, 2 ]
    assert header['train_pairs'] == '64'
    assert header['val_pairs'] == '32'


def test_train_resume(config):
    PrepareCmd.run(config)
    weights = TrainCmd.run(config)
    checkpoint_digest = WeightsManager.digest(weights + '.last')

    TrainCmd.run(dataclasses.replace(config, epochs=3, resume=True))

    header, data = CsvReport.read(os.path.join(config.out_dir, 'train_x2.csv'))
    assert list(data['epoch']) == [ 1, 2, 3 ]
    assert header['epochs'] == '3'
    assert header['weights_digest'] == checkpoint_digest


def test_resume_without_checkpoint(config):
    PrepareCmd.run(config)
    with pytest.raises(UsageError):
        TrainCmd.run(dataclasses.replace(config, resume=True))


def test_cache_scale_mismatch(config):
    PrepareCmd.run(config)
    with pytest.raises(UsageError):
        TrainCmd.load_pairs(dataclasses.replace(config, scale=3, cache_dir=config.cache_path))


def test_no_cache(config):
    with pytest.raises(PatchCache.CacheError):
        TrainCmd.run(config)


def textured_plane(size, seed):
    """ Flat regions with hard edges plus mid-frequency stripes, in [0, 255] """
    rng  = np.random.default_rng(seed)
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)

    plane = np.full((size, size), rng.uniform(60, 190))
    for _ in range(10):
        y0, x0 = rng.uniform(0, size, 2)
        half   = rng.uniform(6, 24, 2)
        value  = rng.uniform(0, 255)
        if rng.uniform() < 0.5:
            inside = (abs(y - y0) < half[0]) & (abs(x - x0) < half[1])
        else:
            inside = (y - y0)**2 + (x - x0)**2 < half[0]**2
        plane[inside] = value

    fy, fx = rng.uniform(0.3, 0.9, 2)*rng.choice([ -1, 1 ], 2)
    plane += 15*np.sin(fy*y + fx*x + rng.uniform(0, 2*np.pi))

    return np.clip(plane, 0, 255)


@pytest.mark.slow
def test_training_beats_bicubic(run_config, tmp_path):
    """Two blocks trained at x2 on eight images gain on bicubic for held-out patches."""
    (tmp_path / 'tex').mkdir()

    lines = []
    for i in range(10):
        write_png(tmp_path / 'tex' / f'{i}.png', [ textured_plane(96, 100 + i) ])
        lines.append(f'tex/{i}.png\t{"train" if i < 8 else "val"}')

    manifest = tmp_path / 'tex.tsv'
    manifest.write_text('\n'.join(lines) + '\n')

    config = dataclasses.replace(run_config,
        manifest   = str(manifest),
        n_blocks   = 2,
        epochs     = 12,
        batch_size = 24,
        patch      = 24,
        stride     = 24,
        threads    = 2,
        workers    = 2,
    )

    PrepareCmd.run(config)
    _, held = TrainCmd.load_pairs(config)
    assert len(held) == 2*8*16

    model = WeightsManager.load_weights(TrainCmd.run(config))
    _, trained_psnr = validate(model, held, config.batch_size, config.threads)

    bicubic_psnr = np.mean([ psnr(np.clip(p.ilr, 0, 255), p.hr) for p in held ])
    assert trained_psnr - bicubic_psnr >= 0.3
