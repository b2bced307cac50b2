log_debug = {
    'core'           : False,
    'app'            : False,
    'config_mgr'     : False,
    'weights_mgr'    : False,
    'manifest_mgr'   : False,
    'patch_mgr'      : False,
    'report_mgr'     : False,
    'model'          : False,
    'trainer'        : True,
    'png_io'         : False,
    'batches'        : False,
    'pipeline'       : False,
    'prepare_cmd'    : True,
    'train_cmd'      : True,
    'sr_cmd'         : False,
    'eval_cmd'       : True,
    'bench_cmd'      : True,
    'ablate_cmd'     : True,
    'features_cmd'   : False,
}
