import contextlib
import concurrent.futures

import numpy as np

from misc.errors import ShapeError


class Tensor():
    """
    Rank-4 array in (batch, channels, height, width) layout.

    The buffer is C-contiguous and read-only once wrapped. Kernels never
    mutate their inputs; they always hand back a new tensor.
    """

    STANDARD = 'standard'
    EXTENDED = 'extended'

    DTYPES = {
        STANDARD : np.float32,
        EXTENDED : np.float64,
    }

    ShapeError = ShapeError

    # Set by the test suite; every kernel result is then checked for NaN/Inf
    check_finite = False

    def __init__(self, data, precision=None):
        if isinstance(data, Tensor):
            data = data.data

        if precision is None:
            is_f64 = isinstance(data, np.ndarray) and data.dtype == np.float64
            precision = Tensor.EXTENDED if is_f64 else Tensor.STANDARD

        if precision not in Tensor.DTYPES:
            raise ValueError(f'Unknown precision "{precision}"')

        data = np.array(data, dtype=Tensor.DTYPES[precision], order='C', copy=True)
        if data.ndim != 4:
            raise ShapeError('rank', 4, data.ndim, 'Tensor')

        data.flags.writeable = False
        self.__data = data


    @staticmethod
    def wrap(data):
        """
        Wraps a freshly computed array without copying. The caller gives up
        ownership of `data`.
        """
        if data.ndim != 4:
            raise ShapeError('rank', 4, data.ndim, 'Tensor')

        if data.dtype not in (np.float32, np.float64):
            raise ValueError(f'Unsupported dtype {data.dtype}')

        if Tensor.check_finite:
            assert np.all(np.isfinite(data)), 'kernel produced NaN/Inf'

        tensor = Tensor.__new__(Tensor)
        data = np.ascontiguousarray(data)
        data.flags.writeable = False
        tensor.__data = data
        return tensor


    @staticmethod
    def zeros(shape, precision=STANDARD):
        return Tensor.wrap(np.zeros(shape, dtype=Tensor.DTYPES[precision]))


    @property
    def data(self):
        return self.__data


    @property
    def shape(self):
        return self.__data.shape


    @property
    def dtype(self):
        return self.__data.dtype


    @property
    def precision(self):
        return Tensor.EXTENDED if self.__data.dtype == np.float64 else Tensor.STANDARD


    @property
    def size(self):
        return self.__data.size


    def numpy(self):
        """ Writable copy of the buffer """
        return self.__data.copy()


    def astype(self, precision):
        if precision == self.precision:
            return self

        return Tensor(self.__data, precision)


    def __neg__(self):
        return Tensor.wrap(-self.__data)


    def __repr__(self):
        return f'Tensor(shape={self.shape}, precision={self.precision})'


class TensorOps():
    """
    3x3 / stride 1 / zero-pad 1 convolution kernels, Leaky ReLU and
    elementwise add.

    The fast convolution path materializes im2col columns one row band at a
    time so the column matrix stays under `BAND_ELEMS` elements. Bands may be
    processed by a thread pool (`threads` > 1); reductions across bands are
    then summed in band order whenever `deterministic` is set.
    """

    BAND_ELEMS    = 1 << 23
    threads       = 1
    deterministic = True

    @staticmethod
    @contextlib.contextmanager
    def configure(threads=None, deterministic=None):
        prev = (TensorOps.threads, TensorOps.deterministic)

        if threads is not None:       TensorOps.threads = max(1, int(threads))
        if deterministic is not None: TensorOps.deterministic = bool(deterministic)

        try:
            yield
        finally:
            TensorOps.threads, TensorOps.deterministic = prev


    @staticmethod
    def pad(x):
        return np.pad(x, ((0, 0), (0, 0), (1, 1), (1, 1)), mode='constant')


    @staticmethod
    def check_conv_args(x, weights, bias=None):
        batch, channels, height, width = x.shape

        if weights.ndim != 4:
            raise ShapeError('kernel rank', 4, weights.ndim, 'conv2d')

        out_ch, in_ch, k_h, k_w = weights.shape
        if (k_h, k_w) != (3, 3):
            raise ShapeError('kernel size', (3, 3), (k_h, k_w), 'conv2d')

        if in_ch != channels:
            raise ShapeError('in_ch', channels, in_ch, 'conv2d')

        if bias is not None and np.shape(bias) != (out_ch, ):
            raise ShapeError('bias length', out_ch, np.shape(bias), 'conv2d')

        if height == 0 or width == 0:
            raise ShapeError('spatial size', '>= 1x1', (height, width), 'conv2d')


    @staticmethod
    def bands(batch, channels, height, width):
        rows = max(1, TensorOps.BAND_ELEMS // max(1, channels*9*batch*width))
        return [ (y0, min(height, y0 + rows)) for y0 in range(0, height, rows) ]


    @staticmethod
    def im2col_band(xp, y0, y1):
        """
        Columns for output rows [y0, y1) of an already padded input.
        Rows of the result are ordered (c, dy, dx), columns (b, y, x).
        """
        batch, channels = xp.shape[:2]
        width = xp.shape[3] - 2
        rows  = y1 - y0

        cols = np.empty((channels, 9, batch, rows, width), dtype=xp.dtype)
        for dy in range(3):
            for dx in range(3):
                cols[:, 3*dy + dx] = xp[:, :, y0 + dy:y1 + dy, dx:dx + width].transpose(1, 0, 2, 3)

        return cols.reshape(channels*9, batch*rows*width)


    @staticmethod
    def im2col(x):
        x = x.data if isinstance(x, Tensor) else np.asarray(x)
        if x.ndim != 4:
            raise ShapeError('rank', 4, x.ndim, 'im2col')

        return TensorOps.im2col_band(TensorOps.pad(x), 0, x.shape[2])


    @staticmethod
    def matmul(a, b):
        a = np.asarray(a)
        b = np.asarray(b)

        if a.ndim != 2 or b.ndim != 2:
            raise ShapeError('rank', 2, (a.ndim, b.ndim), 'matmul')

        if a.shape[1] != b.shape[0]:
            raise ShapeError('inner dimension', a.shape[1], b.shape[0], 'matmul')

        return a @ b


    @staticmethod
    def __map_bands(func, bands):
        """
        Runs `func` over bands, yielding results in band order.
        """
        if TensorOps.threads <= 1 or len(bands) == 1:
            for band in bands:
                yield func(band)
            return

        with concurrent.futures.ThreadPoolExecutor(TensorOps.threads) as pool:
            futures = [ pool.submit(func, band) for band in bands ]

            if TensorOps.deterministic:
                for future in futures:
                    yield future.result()
            else:
                for future in concurrent.futures.as_completed(futures):
                    yield future.result()


    @staticmethod
    def conv2d_forward(x, weights, bias):
        TensorOps.check_conv_args(x, np.asarray(weights), bias)

        xd = x.data
        w  = np.asarray(weights, dtype=xd.dtype)
        b  = np.asarray(bias, dtype=xd.dtype)

        batch, channels, height, width = xd.shape
        out_ch = w.shape[0]

        w_mat = w.reshape(out_ch, channels*9)
        xp    = TensorOps.pad(xd)
        out   = np.empty((batch, out_ch, height, width), dtype=xd.dtype)

        def band_fwd(band):
            y0, y1 = band
            cols = TensorOps.im2col_band(xp, y0, y1)
            out[:, :, y0:y1, :] = (w_mat @ cols).reshape(out_ch, batch, y1 - y0, width).transpose(1, 0, 2, 3)

        # Bands write disjoint rows, order does not matter here
        for _ in TensorOps.__map_bands(band_fwd, TensorOps.bands(batch, channels, height, width)):
            pass

        out += b[None, :, None, None]
        return Tensor.wrap(out)


    @staticmethod
    def conv2d_backward(x, weights, grad_output):
        TensorOps.check_conv_args(x, np.asarray(weights))

        xd = x.data
        w  = np.asarray(weights, dtype=xd.dtype)

        batch, channels, height, width = xd.shape
        out_ch = w.shape[0]

        if grad_output.shape != (batch, out_ch, height, width):
            raise ShapeError('grad_output shape', (batch, out_ch, height, width), grad_output.shape, 'conv2d_backward')

        gd    = np.asarray(grad_output.data, dtype=xd.dtype)
        w_mat = w.reshape(out_ch, channels*9)
        xp    = TensorOps.pad(xd)

        def band_bwd(band):
            y0, y1 = band
            rows = y1 - y0

            cols   = TensorOps.im2col_band(xp, y0, y1)
            g_band = gd[:, :, y0:y1, :].transpose(1, 0, 2, 3).reshape(out_ch, batch*rows*width)

            grad_w    = g_band @ cols.T
            grad_cols = (w_mat.T @ g_band).reshape(channels, 9, batch, rows, width)
            return y0, y1, grad_w, grad_cols

        grad_w  = np.zeros((out_ch, channels*9), dtype=xd.dtype)
        grad_xp = np.zeros_like(xp)

        for y0, y1, band_w, band_cols in TensorOps.__map_bands(band_bwd, TensorOps.bands(batch, channels, height, width)):
            grad_w += band_w

            # col2im: scatter the columns back onto the padded input
            for dy in range(3):
                for dx in range(3):
                    grad_xp[:, :, y0 + dy:y1 + dy, dx:dx + width] += band_cols[:, 3*dy + dx].transpose(1, 0, 2, 3)

        grad_bias  = gd.sum(axis=(0, 2, 3))
        grad_input = grad_xp[:, :, 1:height + 1, 1:width + 1].copy()

        return Tensor.wrap(grad_input), grad_w.reshape(w.shape), grad_bias


    @staticmethod
    def conv2d_naive(x, weights, bias):
        """
        Direct window-by-window convolution. Slow; serves as the oracle for
        the im2col path.
        """
        TensorOps.check_conv_args(x, np.asarray(weights), bias)

        xd = x.data
        w  = np.asarray(weights, dtype=xd.dtype)
        b  = np.asarray(bias, dtype=xd.dtype)

        batch, _, height, width = xd.shape
        xp  = TensorOps.pad(xd)
        out = np.empty((batch, w.shape[0], height, width), dtype=xd.dtype)

        for y in range(height):
            for x_ in range(width):
                window = xp[:, :, y:y + 3, x_:x_ + 3]
                out[:, :, y, x_] = np.tensordot(window, w, axes=([1, 2, 3], [1, 2, 3])) + b

        return Tensor.wrap(out)


    @staticmethod
    def leaky_relu_forward(x, slope=0.1):
        if not 0 < slope < 1:
            raise ValueError(f'slope must be in (0, 1), got {slope}')

        xd = x.data
        return Tensor.wrap(np.maximum(xd*slope, xd))


    @staticmethod
    def leaky_relu_backward(x, grad_out, slope=0.1):
        if x.shape != grad_out.shape:
            raise ShapeError('shape', x.shape, grad_out.shape, 'leaky_relu_backward')

        g = np.asarray(grad_out.data, dtype=x.dtype)

        # x == 0 takes the positive branch
        return Tensor.wrap(np.where(x.data >= 0, g, g*slope))


    @staticmethod
    def add(a, b):
        if a.shape != b.shape:
            raise ShapeError('shape', a.shape, b.shape, 'add')

        if a.dtype != b.dtype:
            raise ShapeError('precision', a.precision, b.precision, 'add')

        return Tensor.wrap(a.data + b.data)
