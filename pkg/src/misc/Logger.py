import os
import logging
import logging.handlers
import traceback

from misc.debug import log_debug


class Logger(logging.getLoggerClass()):
    """
    Per-module logger. Writes to stderr at the level picked by `log_debug`
    and to `<LOG_DIR>/<name>.log` at INFO, rolling the file over past
    `MAX_BYTES`.
    """

    LOG_DIR   = os.environ.get('SRFRN_LOG_DIR', 'logs')
    MAX_BYTES = 1024*1024
    BACKUPS   = 3

    unlisted = []
    verbose  = False

    def __init__(self, name, level=logging.NOTSET):
        super().__init__(name, level=logging.DEBUG)
        formatter = logging.Formatter('%(levelname)s  %(asctime)s   [ %(name)s : %(threadName)s ] %(message)s')

        self.name = name

        self.sh = logging.StreamHandler()
        self.sh.setFormatter(formatter)
        self.sh.setLevel(logging.INFO)
        self.addHandler(self.sh)

        self.fh = logging.handlers.RotatingFileHandler(
            os.path.join(Logger.LOG_DIR, f'{name}.log'), maxBytes=Logger.MAX_BYTES, backupCount=Logger.BACKUPS, delay=True)
        self.fh.setFormatter(formatter)
        self.fh.setLevel(logging.INFO)
        self.addHandler(self.fh)


    def __del__(self):
        self.sh.close(); self.removeHandler(self.sh)
        self.fh.close(); self.removeHandler(self.fh)


    def exception(self, msg):
        msg = msg.strip()
        msg += '\n' + traceback.format_exc()
        self.error(msg)


    def info_debug(self, flag, msg):
        """ INFO message shown only when `flag` holds and this logger's debug switch is on """
        if flag and log_debug.get(self.name, False):
            self.info(msg)


    def __stream_level(self):
        if Logger.verbose or log_debug.get(self.name, False):
            return logging.DEBUG

        return logging.INFO


    @staticmethod
    def set_verbose(verbose):
        """ Turns DEBUG output on stderr on or off for every logger made so far and later """
        Logger.verbose = bool(verbose)

        for logger in logging.Logger.manager.loggerDict.values():
            if isinstance(logger, Logger):
                logger.sh.setLevel(logger.__stream_level())


    @staticmethod
    def get_logger(name):
        name = name.split('.')[-1]

        logger = logging.getLogger(name)
        if name not in log_debug and name not in Logger.unlisted:
            Logger.unlisted.append(name)
            Logger.get_logger('core').debug(f'Logger "{name}" not in log_debug. Adding to unlisted.')

        logger.sh.setLevel(logger.__stream_level())
        return logger


os.makedirs(Logger.LOG_DIR, exist_ok=True)
logging.setLoggerClass(Logger)
