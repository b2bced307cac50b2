"""
Tests for manifest file parsing.
"""

################################################################################
# Tests
################################################################################

import os

import pytest

from misc.errors import DataError
from file_managers.manifest_mgr import ManifestManager


def write(tmp_path, text, name='list.tsv'):
    pathname = tmp_path / name
    pathname.write_text(text)
    return str(pathname)


def test_load(tmp_path):
    pathname = write(tmp_path,
        '# training images\n'
        'a.png\ttrain\n'
        'b.png\tTest\tSet5\n'
        '\n'
        f'{tmp_path}/c.png\tval\tBSD\n'
    )
    manifest = ManifestManager.load(pathname, scale=3)

    assert len(manifest) == 3
    assert manifest.scale == 3
    assert list(manifest.entries['split'])   == [ 'train', 'test', 'val' ]
    assert list(manifest.entries['dataset']) == [ 'default', 'Set5', 'BSD' ]
    assert manifest.entries['path'][0] == os.path.normpath(str(tmp_path / 'a.png'))


def test_relative_to_manifest_dir(tmp_path):
    (tmp_path / 'lists').mkdir()
    pathname = write(tmp_path, '../img/x.png\ttrain\n', 'lists/m.tsv')

    manifest = ManifestManager.load(pathname)
    assert manifest.entries['path'][0] == os.path.normpath(str(tmp_path / 'img' / 'x.png'))


def test_duplicate_paths(tmp_path):
    with pytest.raises(ManifestManager.FormatError):
        ManifestManager.load(write(tmp_path, 'a.png\ttrain\na.png\ttest\n'))


def test_unknown_split(tmp_path):
    with pytest.raises(ManifestManager.FormatError):
        ManifestManager.load(write(tmp_path, 'a.png\ttraining\n'))


def test_missing_split(tmp_path):
    with pytest.raises(ManifestManager.FormatError):
        ManifestManager.load(write(tmp_path, 'a.png\n'))


def test_missing_file(tmp_path):
    with pytest.raises(DataError):
        ManifestManager.load(str(tmp_path / 'none.tsv'))


def test_save_reload(tmp_path):
    manifest = ManifestManager.load(write(tmp_path, 'a.png\ttrain\tX\nb.png\tval\n'))
    ManifestManager.save(manifest, str(tmp_path / 'copy.tsv'))

    again = ManifestManager.load(str(tmp_path / 'copy.tsv'))
    assert again.entries.equals(manifest.entries)


def test_hash_inside_path(tmp_path):
    pathname = write(tmp_path,
        '  # indented comment\n'
        'img/set#1/a.png\ttrain\tBSD\n'
        'b.png\ttest\tSet#5\n'
    )
    manifest = ManifestManager.load(pathname)

    assert len(manifest) == 2
    assert manifest.entries['path'][0] == os.path.normpath(str(tmp_path / 'img' / 'set#1' / 'a.png'))
    assert list(manifest.entries['dataset']) == [ 'BSD', 'Set#5' ]


def test_only_comments(tmp_path):
    manifest = ManifestManager.load(write(tmp_path, '# nothing yet\n\n'))
    assert len(manifest) == 0
