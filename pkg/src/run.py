# Everything is put under __main__ so the packages can be imported
#  without running a command
if __name__ == '__main__':
    import os, sys
    import multiprocessing

    is_win = sys.platform.startswith('win')
    is_exe = getattr(sys, 'frozen', False) and hasattr(sys, '_MEIPASS')

    if is_win and is_exe:
        # See: https://stackoverflow.com/a/27694505
        multiprocessing.freeze_support()

    # Benchmarks run the BLAS on one thread unless asked not to. This has to
    #  happen before numpy is first imported.
    if 'bench' in sys.argv[1:] and '--unpin' not in sys.argv[1:]:
        for var in [ 'OMP_NUM_THREADS', 'OPENBLAS_NUM_THREADS', 'MKL_NUM_THREADS' ]:
            os.environ[var] = '1'

    from misc.Logger import Logger
    from app import App

    Logger.get_logger('core').debug('Starting app')
    sys.exit(App(sys.argv[1:]).run())
