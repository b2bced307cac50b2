import json
import os
import struct

import numpy as np

from misc.Logger import Logger
from misc.errors import DataError
from misc.utils import Utils
from nn.model import SrfrnModel
from nn.tensor import Tensor


class WeightsManager():
    """
    Weight file, little-endian:

        8 bytes   magic "SRFRNW01"
        u32       n_blocks
        u32       precision tag (32 or 64, bits per float)
        per layer in order feat1, feat2, blocks[0].layers[0..2], ..., recon:
            u32 out_ch, u32 in_ch, out*in*9 floats, out floats

    No padding between records. Training state that a resumed run needs
    (scale, optimizer step, lr, schedule, Adam moments) is kept beside the
    weight file in `<file>.meta.json` and `<file>.optim.npz`.
    """

    MAGIC = b'SRFRNW01'

    PRECISION_TAGS = {
        Tensor.STANDARD : 32,
        Tensor.EXTENDED : 64,
    }

    logger = Logger.get_logger(__name__)

    class FormatError(DataError):
        pass

    class TruncationError(DataError):
        pass

    @staticmethod
    def __float_dtype(tag):
        return np.dtype('<f4') if tag == 32 else np.dtype('<f8')


    @staticmethod
    def to_bytes(model):
        tag   = WeightsManager.PRECISION_TAGS[model.precision]
        dtype = WeightsManager.__float_dtype(tag)

        chunks = [ WeightsManager.MAGIC, struct.pack('<II', model.n_blocks, tag) ]
        for layer in model.layers():
            chunks.append(struct.pack('<II', layer.out_ch, layer.in_ch))
            chunks.append(layer.weights.astype(dtype).tobytes())
            chunks.append(layer.bias.astype(dtype).tobytes())

        return b''.join(chunks)


    @staticmethod
    def from_bytes(data, source='<bytes>'):
        if len(data) < 8 or data[:8] != WeightsManager.MAGIC:
            raise WeightsManager.FormatError(f'{source}: bad magic {bytes(data[:8])!r}')

        if len(data) < 16:
            raise WeightsManager.TruncationError(f'{source}: header truncated')

        n_blocks, tag = struct.unpack_from('<II', data, 8)
        if tag not in WeightsManager.PRECISION_TAGS.values():
            raise WeightsManager.FormatError(f'{source}: unknown precision tag {tag}')

        if n_blocks < 1:
            raise WeightsManager.FormatError(f'{source}: n_blocks must be positive, got {n_blocks}')

        precision = Tensor.STANDARD if tag == 32 else Tensor.EXTENDED
        dtype     = WeightsManager.__float_dtype(tag)
        model     = SrfrnModel(n_blocks, precision)

        offset = 16
        for i, layer in enumerate(model.layers()):
            if offset + 8 > len(data):
                raise WeightsManager.TruncationError(f'{source}: layer {i} record missing (header says {n_blocks} blocks)')

            out_ch, in_ch = struct.unpack_from('<II', data, offset)
            offset += 8

            if (out_ch, in_ch) != (layer.out_ch, layer.in_ch):
                raise WeightsManager.FormatError(
                    f'{source}: layer {i} is {out_ch}x{in_ch}, expected {layer.out_ch}x{layer.in_ch}')

            n_w = out_ch*in_ch*9
            n_b = out_ch
            size = (n_w + n_b)*dtype.itemsize
            if offset + size > len(data):
                raise WeightsManager.TruncationError(f'{source}: layer {i} data truncated')

            layer.weights[...] = np.frombuffer(data, dtype=dtype, count=n_w, offset=offset).reshape(layer.weights.shape)
            layer.bias[...]    = np.frombuffer(data, dtype=dtype, count=n_b, offset=offset + n_w*dtype.itemsize)
            offset += size

        if offset != len(data):
            raise WeightsManager.FormatError(f'{source}: {len(data) - offset} trailing bytes after {n_blocks} blocks')

        return model


    @staticmethod
    def save_weights(model, pathname):
        data = WeightsManager.to_bytes(model)

        dirname = os.path.dirname(pathname)
        if dirname:
            os.makedirs(dirname, exist_ok=True)

        tmp_pathname = f'{pathname}.tmp'
        with open(tmp_pathname, 'wb') as f:
            f.write(data)

        os.replace(tmp_pathname, pathname)

        digest = Utils.git_digest(data)
        WeightsManager.logger.debug(f'Saved {pathname} ({len(data)} bytes, {digest})')
        return digest


    @staticmethod
    def load_weights(pathname):
        try:
            with open(pathname, 'rb') as f:
                data = f.read()
        except OSError as e:
            raise DataError(f'Cannot read weights {pathname}: {e}') from e

        return WeightsManager.from_bytes(data, pathname)


    @staticmethod
    def save_state(pathname, meta, model=None):
        """
        Writes the sidecar metadata, and the Adam moments of `model` if given.
        """
        with open(f'{pathname}.meta.json', 'w') as f:
            json.dump(meta, f, indent=4)

        if model is None:
            return

        moments = {}
        for i, layer in enumerate(model.layers()):
            for name, (m, v) in layer.slots.items():
                moments[f'{i}_{name}_m'] = m
                moments[f'{i}_{name}_v'] = v

        with open(f'{pathname}.optim.npz', 'wb') as f:
            np.savez(f, **moments)


    @staticmethod
    def load_state(pathname, model=None):
        """
        Returns the sidecar metadata ({} when absent). Restores Adam moments
        into `model` when a moments file exists.
        """
        meta_pathname = f'{pathname}.meta.json'
        if not os.path.isfile(meta_pathname):
            return {}

        try:
            with open(meta_pathname) as f:
                meta = json.load(f)
        except json.decoder.JSONDecodeError as e:
            raise WeightsManager.FormatError(f'{meta_pathname}: {e}') from e

        optim_pathname = f'{pathname}.optim.npz'
        if model is None or not os.path.isfile(optim_pathname):
            return meta

        with np.load(optim_pathname) as moments:
            for i, layer in enumerate(model.layers()):
                for name, slot in layer.slots.items():
                    slot[0][...] = moments[f'{i}_{name}_m']
                    slot[1][...] = moments[f'{i}_{name}_v']

        return meta


    @staticmethod
    def digest(pathname):
        return Utils.file_digest(pathname)
