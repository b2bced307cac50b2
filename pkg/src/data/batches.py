import queue
import threading

import numpy as np

from misc.Logger import Logger
from misc.errors import DataError
from nn.tensor import Tensor


def to_network(plane):
    """ [0, 255] samples -> [0, 1] network range """
    return np.asarray(plane, dtype=np.float64)/255.0


def from_network(samples):
    return np.asarray(samples, dtype=np.float64)*255.0


def pack(planes, precision=Tensor.STANDARD):
    """ Equal-size planes -> (B, 1, H, W) tensor in network range """
    stack = np.stack([ to_network(p) for p in planes ])[:, None, :, :]
    return Tensor.wrap(stack.astype(Tensor.DTYPES[precision]))


def batch_iter(pairs, batch_size=24, seed=0, epoch=0, precision=Tensor.STANDARD, shuffle=True):
    """
    (ilr, hr) tensor batches over `pairs`. The order is a permutation seeded
    by (seed, epoch); the last batch may be short.
    """
    if len(pairs) == 0:
        raise DataError('batch_iter: no patch pairs')

    if batch_size < 1:
        raise DataError(f'batch_iter: batch size must be positive, got {batch_size}')

    if shuffle:
        order = np.random.default_rng([ seed, epoch ]).permutation(len(pairs))
    else:
        order = np.arange(len(pairs))

    def gen():
        for start in range(0, len(order), batch_size):
            chunk = [ pairs[i] for i in order[start:start + batch_size] ]
            yield pack([ p.ilr for p in chunk ], precision), pack([ p.hr for p in chunk ], precision)

    return gen()


class Prefetcher():
    """
    Runs a batch iterator on a background thread, keeping at most `depth`
    batches ready. depth == 0 iterates inline.
    """

    logger = Logger.get_logger(__name__)

    __DONE = object()

    def __init__(self, iterable, depth=2):
        self.__iterable = iterable
        self.__depth    = depth


    def __iter__(self):
        if self.__depth <= 0:
            yield from self.__iterable
            return

        q = queue.Queue(maxsize=self.__depth)
        stop = threading.Event()

        def put(item):
            while not stop.is_set():
                try:
                    q.put(item, timeout=0.1)
                    return True
                except queue.Full:
                    continue

            return False

        def producer():
            try:
                for item in self.__iterable:
                    if not put(item):
                        return
            except Exception as e:
                Prefetcher.logger.debug(f'Producer failed: {type(e).__name__}')
                put(e)
                return

            put(Prefetcher.__DONE)

        thread = threading.Thread(target=producer, name='prefetch', daemon=True)
        thread.start()

        try:
            while True:
                item = q.get()
                if item is Prefetcher.__DONE:
                    break

                if isinstance(item, Exception):
                    raise item

                yield item
        finally:
            stop.set()
            thread.join()
