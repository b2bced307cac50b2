from .png_io import ImageU8, PngIO
from .color import rgb_to_y, ycbcr_from_rgb, rgb_from_ycbcr, y_merge_back
from .resample import bicubic_resize, keys_kernel, keys_weights, modcrop
from .metrics import psnr, ssim
