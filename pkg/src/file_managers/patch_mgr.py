import json
import os
import struct

import numpy as np

from misc.Logger import Logger
from misc.errors import DataError
from misc.utils import Utils
from data.patches import PatchPair, PatchSource


class PatchCache():
    """
    Directory of pair files, one subdirectory per split:

        <dir>/cache.json
        <dir>/<split>/{image}_{variant}_{y}_{x}.pair

    A pair file is u32 m followed by the ilr and hr planes as m*m
    little-endian f32 each.
    """

    INDEX_FILE = 'cache.json'
    SUFFIX     = '.pair'

    logger = Logger.get_logger(__name__)

    class CacheError(DataError):
        pass

    def __init__(self, dirname):
        self.dirname = dirname


    @staticmethod
    def pair_name(source):
        return f'{source.image_id}_{source.variant}_{source.y}_{source.x}{PatchCache.SUFFIX}'


    @staticmethod
    def parse_name(filename):
        stem = filename[:-len(PatchCache.SUFFIX)]

        # image ids may themselves contain underscores
        image_id, variant, y, x = stem.rsplit('_', 3)
        return PatchSource(image_id, int(y), int(x), int(variant))


    @staticmethod
    def to_bytes(pair):
        m = pair.m
        return struct.pack('<I', m) + pair.ilr.astype('<f4').tobytes() + pair.hr.astype('<f4').tobytes()


    @staticmethod
    def from_bytes(data, source=None):
        if len(data) < 4:
            raise PatchCache.CacheError('pair file shorter than its header')

        m, = struct.unpack_from('<I', data, 0)
        if len(data) != 4 + 2*m*m*4:
            raise PatchCache.CacheError(f'pair file is {len(data)} bytes, expected {4 + 2*m*m*4} for m={m}')

        planes = np.frombuffer(data, dtype='<f4', offset=4).astype(np.float64).reshape(2, m, m)
        return PatchPair(planes[0].copy(), planes[1].copy(), source)


    def split_dir(self, split):
        return os.path.join(self.dirname, split)


    def exists(self):
        return os.path.isfile(os.path.join(self.dirname, PatchCache.INDEX_FILE))


    def write_pairs(self, split, pairs):
        dirname = self.split_dir(split)
        os.makedirs(dirname, exist_ok=True)

        for pair in pairs:
            if pair.source is None:
                raise PatchCache.CacheError('pair has no source coordinates')

            with open(os.path.join(dirname, PatchCache.pair_name(pair.source)), 'wb') as f:
                f.write(PatchCache.to_bytes(pair))

        return len(pairs)


    def write_index(self, index):
        os.makedirs(self.dirname, exist_ok=True)
        with open(os.path.join(self.dirname, PatchCache.INDEX_FILE), 'w') as f:
            json.dump(index, f, indent=4)


    def read_index(self):
        pathname = os.path.join(self.dirname, PatchCache.INDEX_FILE)
        if not os.path.isfile(pathname):
            raise PatchCache.CacheError(f'No patch cache at {self.dirname}; run prepare first')

        try:
            with open(pathname) as f:
                return json.load(f)
        except json.decoder.JSONDecodeError as e:
            raise PatchCache.CacheError(f'{pathname}: {e}') from e


    def filenames(self, split):
        dirname = self.split_dir(split)
        if not os.path.isdir(dirname):
            return []

        return sorted(name for name in os.listdir(dirname) if name.endswith(PatchCache.SUFFIX))


    def load_pairs(self, split):
        """ Every pair of `split`, in file name order """
        pairs = []
        for name in self.filenames(split):
            with open(os.path.join(self.split_dir(split), name), 'rb') as f:
                data = f.read()

            try:
                source = PatchCache.parse_name(name)
            except ValueError as e:
                raise PatchCache.CacheError(f'{name}: unexpected pair file name') from e

            try:
                pairs.append(PatchCache.from_bytes(data, source))
            except PatchCache.CacheError as e:
                raise PatchCache.CacheError(f'{name}: {e}') from e

        PatchCache.logger.debug(f'Loaded {len(pairs)} {split} pairs from {self.dirname}')
        return pairs


    def digest(self, split):
        """ Digest over the names and contents of every pair file of `split` """
        digests = []
        for name in self.filenames(split):
            digests.append(f'{name} {Utils.file_digest(os.path.join(self.split_dir(split), name))}')

        return Utils.git_digest('\n'.join(digests).encode('utf-8'))
