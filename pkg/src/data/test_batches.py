"""
Tests for batch assembly and the background prefetcher.
"""

################################################################################
# Tests
################################################################################

import numpy as np
import pytest

from misc.errors import DataError
from nn.tensor import Tensor
from data.batches import batch_iter, to_network, from_network, Prefetcher
from data.patches import PatchPair


def numbered_pairs(n, m=4):
    """ Pair i is filled with the value i, so batches reveal their order """
    return [ PatchPair(np.full((m, m), float(i)), np.full((m, m), float(i))) for i in range(n) ]


def batch_ids(batches):
    return [ list(np.rint(from_network(hr.data[:, 0, 0, 0])).astype(int)) for _, hr in batches ]


# batch_iter ------------------------------------------------------------------

def test_batch_sizes():
    batches = list(batch_iter(numbered_pairs(100), 24))
    assert [ ilr.shape[0] for ilr, _ in batches ] == [ 24, 24, 24, 24, 4 ]
    assert all(ilr.shape[1:] == (1, 4, 4) for ilr, _ in batches)


def test_batch_permutation():
    ids = sum(batch_ids(batch_iter(numbered_pairs(30), 7, seed=3)), [])
    assert sorted(ids) == list(range(30))
    assert ids != list(range(30))


def test_batch_seeded():
    pairs = numbered_pairs(30)
    assert batch_ids(batch_iter(pairs, 8, seed=1, epoch=2)) == batch_ids(batch_iter(pairs, 8, seed=1, epoch=2))
    assert batch_ids(batch_iter(pairs, 8, seed=1, epoch=2)) != batch_ids(batch_iter(pairs, 8, seed=1, epoch=3))


def test_batch_unshuffled():
    assert batch_ids(batch_iter(numbered_pairs(5), 2, shuffle=False)) == [ [ 0, 1 ], [ 2, 3 ], [ 4 ] ]


def test_batch_precision():
    ilr, _ = next(batch_iter(numbered_pairs(2), 2, precision=Tensor.EXTENDED))
    assert ilr.data.dtype == np.float64


def test_batch_errors():
    with pytest.raises(DataError):
        batch_iter([], 4)

    with pytest.raises(DataError):
        batch_iter(numbered_pairs(2), 0)


def test_network_range():
    np.testing.assert_allclose(to_network([ 0, 255 ]), [ 0, 1 ])
    np.testing.assert_allclose(from_network(to_network([ 3.0, 128.5 ])), [ 3.0, 128.5 ])


# Prefetcher ------------------------------------------------------------------

@pytest.mark.parametrize('depth', [ 0, 1, 3 ])
def test_prefetch_order(depth):
    assert list(Prefetcher(iter(range(20)), depth)) == list(range(20))


def test_prefetch_forwards_errors():
    def failing():
        yield 1
        yield 2
        raise DataError('bad patch')

    seen = []
    with pytest.raises(DataError, match='bad patch'):
        for item in Prefetcher(failing(), 2):
            seen.append(item)

    assert seen == [ 1, 2 ]


def test_prefetch_early_exit():
    """Breaking out of the loop stops the producer thread."""
    for item in Prefetcher(iter(range(1000)), 2):
        if item == 3:
            break
