import dataclasses

import numpy as np
import pytest

from imaging import ImageU8, PngIO
from imaging.color import to_u8
from file_managers import WeightsManager
from nn.model import SrfrnModel


# name, split, size, dataset
IMAGES = [
    ('a', 'train', 24, 'default'),
    ('b', 'train', 24, 'default'),
    ('c', 'val',   24, 'default'),
    ('d', 'test',  36, 'SetA'),
    ('e', 'test',  36, 'SetB'),
]


def write_png(pathname, planes):
    pixels = np.stack(planes, axis=-1) if len(planes) > 1 else planes[0]
    PngIO.save(ImageU8(to_u8(pixels)), str(pathname))
    return str(pathname)


@pytest.fixture
def dataset(tmp_path, make_plane):
    """ Small RGB images on disk and a manifest listing them """
    (tmp_path / 'img').mkdir()

    lines = []
    for i, (name, split, size, group) in enumerate(IMAGES):
        planes = [ make_plane(size, size, 3*i + c) for c in range(3) ]
        write_png(tmp_path / 'img' / f'{name}.png', planes)
        lines.append(f'img/{name}.png\t{split}\t{group}')

    manifest = tmp_path / 'manifest.tsv'
    manifest.write_text('\n'.join(lines) + '\n')
    return str(manifest)


@pytest.fixture
def config(run_config, dataset):
    return dataclasses.replace(run_config, manifest=dataset, workers=2)


@pytest.fixture
def zero_weights(tmp_path):
    """ x2 weight file whose network output equals its interpolated input """
    pathname = str(tmp_path / 'zero.bin')
    model = SrfrnModel(2).init_params(0).zero_recon()

    WeightsManager.save_weights(model, pathname)
    WeightsManager.save_state(pathname, { 'scale': 2, 'n_blocks': 2 })
    return pathname
