from .config_mgr import AppConfig, RunConfig
from .weights_mgr import WeightsManager
from .manifest_mgr import ManifestManager
from .patch_mgr import PatchCache
from .report_mgr import CsvReport
