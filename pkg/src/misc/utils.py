import hashlib
import time

import numpy as np

from misc.Logger import Logger


class Utils():

    logger = Logger.get_logger('core')

    @staticmethod
    def get_traceback(e, msg):
        traceback_str = ''
        traceback_str += f'{msg}: {type(e).__name__} due to "{e}"\n'

        tb_curr = e.__traceback__
        while tb_curr != None:
            traceback_str += f'    File "{tb_curr.tb_frame.f_code.co_filename}", line {tb_curr.tb_lineno} in {tb_curr.tb_frame.f_code.co_name}\n'
            tb_curr = tb_curr.tb_next

        return traceback_str


    @staticmethod
    def benchmark(cls_name):
        def decorator(func):
            def wrap_func(*args, **kwargs):
                t1 = time.perf_counter()
                result = func(*args, **kwargs)
                t2 = time.perf_counter()

                Utils.logger.debug(f'    | {cls_name}.{func.__name__} executed in {1000*(t2 - t1):.2f} ms')
                return result

            return wrap_func

        return decorator


    @staticmethod
    def profile(num, func, *args, warmup=0, **kwargs):
        """
        Times `num` calls of `func` after `warmup` untimed calls.

        Returns the per-call wall times in milliseconds.
        """
        for _ in range(warmup):
            func(*args, **kwargs)

        data = []
        for _ in range(num):
            t1 = time.perf_counter()
            func(*args, **kwargs)
            data.append(1000*(time.perf_counter() - t1))

        return np.asarray(data)


    @staticmethod
    def time_stats(times_ms):
        """
        mean / median / std of a list of timings. std is only defined
        for more than one sample and is NaN otherwise.
        """
        times_ms = np.asarray(times_ms, dtype=np.float64)
        return {
            'mean_ms'   : float(np.mean(times_ms)),
            'median_ms' : float(np.median(times_ms)),
            'std_ms'    : float(np.std(times_ms, ddof=1)) if times_ms.shape[0] > 1 else float('nan'),
        }


    @staticmethod
    def git_digest(data: bytes) -> str:
        # Same digest `git hash-object` gives for a blob
        sha = hashlib.sha1()
        sha.update(f'blob {len(data)}\0'.encode('ascii'))
        sha.update(data)
        return sha.hexdigest()


    @staticmethod
    def file_digest(pathname):
        with open(pathname, 'rb') as f:
            return Utils.git_digest(f.read())


class MathUtils():

    @staticmethod
    def moving_avg(a, window):
        # Thanks https://stackoverflow.com/a/52219082
        a = np.asarray(a, dtype=np.float64)
        shape = a.shape[:-1] + (a.shape[-1] - window + 1, window)
        strides = a.strides + (a.strides[-1],)
        rolling = np.lib.stride_tricks.as_strided(a, shape=shape, strides=strides)
        return np.mean(rolling, axis=-1)
