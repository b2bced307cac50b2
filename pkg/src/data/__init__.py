from .augment import augment_x8, apply_variant, invert_variant, N_VARIANTS
from .patches import PatchPair, PatchSource, extract_patches, make_pair
from .batches import batch_iter, to_network, from_network, Prefetcher
from .manifest import Manifest
