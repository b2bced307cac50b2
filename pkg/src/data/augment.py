"""
The 8 symmetries of the square. Variant v = 2*k + f is a rotation by k*90
degrees counter-clockwise, followed by a horizontal flip when f == 1.
"""
import numpy as np


N_VARIANTS = 8


def apply_variant(plane, variant):
    if not 0 <= variant < N_VARIANTS:
        raise ValueError(f'variant must be in 0..7, got {variant}')

    out = np.rot90(plane, variant//2)
    if variant % 2:
        out = np.fliplr(out)

    return np.ascontiguousarray(out)


def invert_variant(plane, variant):
    if not 0 <= variant < N_VARIANTS:
        raise ValueError(f'variant must be in 0..7, got {variant}')

    out = np.fliplr(plane) if variant % 2 else plane
    return np.ascontiguousarray(np.rot90(out, -(variant//2)))


def augment_x8(plane):
    """ All 8 variants, in variant order. Duplicates are kept. """
    return [ apply_variant(plane, v) for v in range(N_VARIANTS) ]
