import os

import numpy as np

from misc.Logger import Logger
from misc.errors import DataError
from misc.utils import Utils
from imaging import bicubic_resize, modcrop
from imaging.color import to_u8
from data.batches import pack
from file_managers import ManifestManager, CsvReport, WeightsManager

from .pipeline import image_id, load_model, load_y, synthesize_lr, upscale
from .train_cmd import TrainCmd


class BenchCmd():
    """
    Latency per image and scale at a fixed HR output size. `net` times the
    network forward on a prepared input tensor; `e2e` adds the bicubic
    upsampling, tensor packing and 8-bit conversion.
    """

    # Divisible by every scale, so one HR size serves 2, 3 and 4
    HR_MULTIPLE = 12

    COLUMNS = [
        'image', 'scale', 'n_blocks', 'width', 'height',
        'net_mean_ms', 'net_median_ms', 'net_std_ms',
        'e2e_mean_ms', 'e2e_median_ms', 'e2e_std_ms',
    ]

    logger = Logger.get_logger(__name__)

    @staticmethod
    def image_paths(config):
        if config.images:
            return list(config.images)

        if not config.manifest:
            raise DataError('bench needs --images or a manifest with test images')

        return list(ManifestManager.load(config.manifest).split('test')['path'])


    @staticmethod
    def __stats(times_ms):
        stats = Utils.time_stats(times_ms)
        std   = None if np.isnan(stats['std_ms']) else stats['std_ms']
        return [ stats['mean_ms'], stats['median_ms'], std ]


    @staticmethod
    def time_plane(model, hr, scale, reps, warmup):
        """ (net stats, e2e stats) for one HR plane, each [ mean, median, std or None ] """
        _, lr = synthesize_lr(hr, scale)

        height, width = lr.shape
        ilr = pack([ bicubic_resize(lr, width*scale, height*scale) ], model.precision)

        net_ms = Utils.profile(reps, model.infer, ilr, warmup=warmup)
        e2e_ms = Utils.profile(reps, lambda: to_u8(upscale(model, lr, scale)), warmup=warmup)

        return BenchCmd.__stats(net_ms), BenchCmd.__stats(e2e_ms)


    @staticmethod
    def run(config):
        paths = BenchCmd.image_paths(config)
        if len(paths) == 0:
            raise DataError('No images to benchmark')

        if config.weights:
            # One weight file is timed at every bench scale
            model  = load_model(config.weights)
            digest = WeightsManager.digest(config.weights)
        else:
            # Latency does not depend on the weight values
            BenchCmd.logger.info(f'No weights given; timing a seeded n_blocks={config.n_blocks} model')
            model  = TrainCmd.new_model(config)
            digest = 'random-init'

        header = config.header(weights_digest=digest, pinned=not config.bench_unpin)
        for key, value in header.items():
            BenchCmd.logger.debug(f'# {key}: {value}')

        planes = [ (image_id(i, p), modcrop(load_y(p), BenchCmd.HR_MULTIPLE)) for i, p in enumerate(paths) ]

        rows = []
        for scale in config.bench_scales:
            for img_id, hr in planes:
                net, e2e = BenchCmd.time_plane(model, hr, scale, config.bench_reps, config.bench_warmup)
                rows.append([ img_id, scale, model.n_blocks, hr.shape[1], hr.shape[0] ] + net + e2e)

            scale_rows = [ r for r in rows if r[1] == scale ]
            BenchCmd.logger.info(
                f'x{scale}: net {np.mean([ r[5] for r in scale_rows ]):.1f} ms  '
                f'e2e {np.mean([ r[8] for r in scale_rows ]):.1f} ms  (mean over {len(scale_rows)} images)'
            )

        report = CsvReport(os.path.join(config.out_dir, 'bench.csv'), BenchCmd.COLUMNS, header)
        report.write_rows(rows)

        return rows
