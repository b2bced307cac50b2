import concurrent.futures
import os
import time

import numpy as np

from misc.Logger import Logger
from misc.errors import DataError
from imaging import psnr, ssim
from imaging.color import to_u8
from file_managers import ManifestManager, CsvReport, WeightsManager

from .pipeline import image_id, load_model, load_y, shave, synthesize_lr, upscale


class EvalCmd():
    """
    PSNR / SSIM of the network (or of plain bicubic upsampling) on the test
    split, measured on the Y channel with `shave` border pixels excluded.
    One row per image, then one mean row per dataset.
    """

    COLUMNS = [ 'image', 'dataset', 'scale', 'psnr_db', 'ssim', 'infer_ms' ]

    logger = Logger.get_logger(__name__)

    @staticmethod
    def evaluate_plane(model, hr, scale, shave_px, quantize=True):
        """ Returns (psnr, ssim, infer_ms) of one HR Y plane """
        hr, lr = synthesize_lr(hr, scale, quantize)

        t_start = time.perf_counter()
        sr = upscale(model, lr, scale)
        infer_ms = 1000*(time.perf_counter() - t_start)

        sr = to_u8(sr).astype(np.float64)
        return psnr(sr, hr, shave_px), ssim(shave(sr, shave_px), shave(hr, shave_px)), infer_ms


    @staticmethod
    def dataset_means(rows):
        means = {}
        for row in rows:
            means.setdefault(row[1], []).append(row)

        return [
            [ f'mean:{dataset}', dataset, group[0][2],
              float(np.mean([ r[3] for r in group ])),
              float(np.mean([ r[4] for r in group ])),
              float(np.mean([ r[5] for r in group ])) ]
            for dataset, group in means.items()
        ]


    @staticmethod
    def run(config):
        manifest = ManifestManager.load(config.manifest, config.scale)
        entries  = manifest.split('test')

        if len(entries) == 0:
            raise DataError(f'{config.manifest} lists no test images')

        # Baseline mode must not touch the weight file
        if config.bicubic_only:
            model  = None
            digest = 'bicubic'
        else:
            model  = load_model(config.weights, config.scale)
            digest = WeightsManager.digest(config.weights)

        header = config.header(weights_digest=digest)
        for key, value in header.items():
            EvalCmd.logger.debug(f'# {key}: {value}')

        def work(args):
            i, pathname, dataset = args
            hr = load_y(pathname)
            p, s, ms = EvalCmd.evaluate_plane(model, hr, config.scale, config.shave_px, config.quantize_lr)
            return [ image_id(i, pathname), dataset, config.scale, p, s, ms ]

        jobs = list(zip(entries.index, entries['path'], entries['dataset']))
        with concurrent.futures.ThreadPoolExecutor(config.workers) as pool:
            rows = list(pool.map(work, jobs))

        means = EvalCmd.dataset_means(rows)
        for row in means:
            EvalCmd.logger.info(f'{row[1]} x{row[2]}: PSNR {row[3]:.2f} dB  SSIM {row[4]:.4f}  ({row[5]:.1f} ms)')

        mode = 'bicubic' if config.bicubic_only else 'srfrn'
        report = CsvReport(os.path.join(config.out_dir, f'eval_{mode}_x{config.scale}.csv'), EvalCmd.COLUMNS, header)
        report.write_rows(rows + means)

        return rows, means
