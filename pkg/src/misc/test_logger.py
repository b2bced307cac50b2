"""
Tests for the per-module logger switches.
"""

################################################################################
# Tests
################################################################################

import logging

from misc.Logger import Logger
from misc.debug import log_debug


def test_info_debug_follows_switch(caplog, monkeypatch):
    logger = Logger.get_logger('trainer')
    caplog.set_level(logging.INFO)

    monkeypatch.setitem(log_debug, 'trainer', True)
    logger.info_debug(True, 'shown')
    logger.info_debug(False, 'flag off')

    monkeypatch.setitem(log_debug, 'trainer', False)
    logger.info_debug(True, 'switch off')

    messages = [ r.getMessage() for r in caplog.records if r.name == 'trainer' ]
    assert messages == [ 'shown' ]


def test_info_debug_unlisted(caplog):
    logger = Logger.get_logger('not_in_table')
    caplog.set_level(logging.INFO)

    logger.info_debug(True, 'never')
    assert not any(r.name == 'not_in_table' for r in caplog.records)
