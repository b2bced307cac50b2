"""
Tests for run settings and the config file layer.
"""

################################################################################
# Tests
################################################################################

import dataclasses
import json

import pytest

from misc.errors import UsageError
from file_managers.config_mgr import RunConfig, AppConfig, _AppConfig


@pytest.fixture
def config_file(tmp_path, monkeypatch):
    """ Points the app config at a scratch file and restores it afterwards """
    monkeypatch.setattr(_AppConfig, 'pathname', _AppConfig.pathname)
    monkeypatch.setattr(_AppConfig, 'cfg', dict(_AppConfig.cfg))
    return str(tmp_path / 'config.json')


# RunConfig -------------------------------------------------------------------

def test_defaults_validate():
    config = RunConfig().validate()

    assert (config.n_blocks, config.epochs, config.batch_size, config.lr) == (6, 50, 24, 1e-3)
    assert config.shave_px == config.scale


@pytest.mark.parametrize('field, value', [
    ('scale',          5),
    ('n_blocks',       0),
    ('n_blocks',       8),
    ('lr',             0.0),
    ('plateau_factor', 1.0),
    ('patch',          50),     # not divisible by 3
    ('precision',      'half'),
    ('bench_scales',   [ 2, 8 ]),
    ('blocks_list',    []),
    ('seed',           -1),
])
def test_validation_rejects(field, value):
    config = RunConfig(scale=3)
    with pytest.raises(UsageError):
        dataclasses.replace(config, **{ field: value }).validate()


def test_shave_and_cache_path():
    config = RunConfig(scale=3, shave=0, out_dir='runs')
    assert config.shave_px == 0
    assert config.cache_path.replace('\\', '/') == 'runs/cache_x3'
    assert RunConfig(cache_dir='elsewhere').cache_path == 'elsewhere'


def test_header_extra():
    header = RunConfig(seed=9).header(git='abc')
    assert header['seed'] == 9
    assert header['git'] == 'abc'


def test_from_dict_ignores_unknown():
    assert RunConfig.from_dict({ 'epochs': 3, 'window_geometry': [ 0, 0 ] }).epochs == 3


# AppConfig -------------------------------------------------------------------

def test_missing_file_gets_defaults(config_file):
    AppConfig.load_config_file(config_file)

    with open(config_file) as f:
        assert json.load(f) == dataclasses.asdict(RunConfig())


def test_missing_keys_filled(config_file):
    with open(config_file, 'w') as f:
        json.dump({ 'epochs': 7 }, f)

    AppConfig.load_config_file(config_file)
    AppConfig.check_config_file()

    with open(config_file) as f:
        saved = json.load(f)

    assert saved['epochs'] == 7
    assert saved['batch_size'] == 24


def test_resolve_precedence(config_file):
    with open(config_file, 'w') as f:
        json.dump({ 'epochs': 7, 'seed': 4 }, f)

    AppConfig.load_config_file(config_file)
    config = AppConfig.resolve({ 'epochs': 2, 'seed': None })

    assert config.epochs == 2
    assert config.seed == 4
    assert config.batch_size == 24


def test_resolve_bad_value(config_file):
    AppConfig.load_config_file(config_file)
    with pytest.raises(UsageError):
        AppConfig.resolve({ 'scale': 6 })
