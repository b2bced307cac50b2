import concurrent.futures
import os
import shutil

from misc.Logger import Logger
from misc.errors import DataError
from misc.utils import Utils
from data import augment_x8, extract_patches, make_pair, PatchSource
from file_managers import ManifestManager, PatchCache, CsvReport

from .pipeline import image_id, load_y


class PrepareCmd():
    """
    Manifest -> patch cache. Each train/val image is augmented 8 ways,
    cut into grid patches and turned into (ilr, hr) pairs.
    """

    SPLITS  = ( 'train', 'val' )
    COLUMNS = [ 'split', 'images_in', 'images_failed', 'augmented', 'patches_out', 'digest' ]

    logger = Logger.get_logger(__name__)

    @staticmethod
    def image_pairs(pathname, img_id, config):
        hr = load_y(pathname)

        pairs = []
        for variant, plane in enumerate(augment_x8(hr)):
            if config.patch > min(plane.shape):
                continue

            for y, x, patch in extract_patches(plane, config.patch, config.stride):
                source = PatchSource(img_id, y, x, variant)
                pairs.append(make_pair(patch, config.scale, source, config.quantize_lr))

        return pairs


    @staticmethod
    def __prepare_split(cache, split, entries, config):
        ids = [ image_id(i, p) for i, p in zip(entries.index, entries['path']) ]

        def work(args):
            pathname, img_id = args
            try:
                return PrepareCmd.image_pairs(pathname, img_id, config)
            except DataError as e:
                PrepareCmd.logger.warning(Utils.get_traceback(e, f'Skipping {pathname}'))
                return None

        failed  = []
        n_ok    = 0
        n_pairs = 0

        with concurrent.futures.ThreadPoolExecutor(config.workers) as pool:
            for pathname, pairs in zip(entries['path'], pool.map(work, zip(entries['path'], ids))):
                if pairs is None:
                    failed.append(pathname)
                    continue

                if len(pairs) == 0:
                    PrepareCmd.logger.warning(f'{pathname} is smaller than a {config.patch}px patch')

                n_ok    += 1
                n_pairs += cache.write_pairs(split, pairs)

        return n_ok, failed, n_pairs


    @staticmethod
    def run(config):
        manifest = ManifestManager.load(config.manifest, config.scale)
        manifest = manifest.with_val_fallback(config.val_fraction, config.seed)

        if manifest.count('train') == 0:
            raise DataError(f'{config.manifest} lists no training images')

        cache = PatchCache(config.cache_path)
        header = config.header(cache=cache.dirname)

        for key, value in header.items():
            PrepareCmd.logger.debug(f'# {key}: {value}')

        rows  = []
        index = { 'scale': config.scale, 'patch': config.patch, 'stride': config.stride, 'counts': {} }

        total_failed = 0
        total_images = 0

        for split in PrepareCmd.SPLITS:
            entries = manifest.split(split)

            # Stale pair files would leak into the digest
            shutil.rmtree(cache.split_dir(split), ignore_errors=True)
            os.makedirs(cache.split_dir(split), exist_ok=True)

            n_ok, failed, n_pairs = PrepareCmd.__prepare_split(cache, split, entries, config)

            total_images += len(entries)
            total_failed += len(failed)

            digest = cache.digest(split)
            rows.append([ split, len(entries), len(failed), 8*n_ok, n_pairs, digest ])
            index['counts'][split] = n_pairs

            PrepareCmd.logger.info(
                f'{split}: {len(entries)} images in, {8*n_ok} augmented, {n_pairs} patches out'
                + (f', {len(failed)} failed: {failed}' if failed else '')
            )

        if total_failed == total_images:
            raise DataError('No image in the manifest could be read')

        cache.write_index(index)

        report = CsvReport(os.path.join(config.out_dir, f'prepare_x{config.scale}.csv'), PrepareCmd.COLUMNS, header)
        report.write_rows(rows)

        return rows
