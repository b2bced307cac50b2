import csv
import io
import os

import pandas as pd

from misc.Logger import Logger
from misc.errors import DataError
from data.manifest import Manifest


class ManifestManager():
    """
    Manifest files: one image per line, tab separated `path  split  dataset`.
    Lines whose first non-blank character is '#' are comments. Relative
    paths are taken relative to the manifest's directory.
    """

    logger = Logger.get_logger(__name__)

    class FormatError(DataError):
        pass

    @staticmethod
    def load(pathname, scale=2):
        if not os.path.isfile(pathname):
            raise DataError(f'Manifest {pathname} does not exist')

        # Only whole-line comments; '#' inside a path is kept
        with open(pathname) as f:
            records = [ line for line in f if not line.lstrip().startswith('#') ]

        try:
            entries = pd.read_csv(
                io.StringIO(''.join(records)), sep='\t', header=None, names=Manifest.COLUMNS, dtype=str,
                keep_default_na=False, skip_blank_lines=True, quoting=csv.QUOTE_NONE
            )
        except pd.errors.EmptyDataError:
            entries = pd.DataFrame(columns=Manifest.COLUMNS, dtype=str)
        except pd.errors.ParserError as e:
            raise ManifestManager.FormatError(f'{pathname}: {e}') from e

        # Short records leave trailing columns as NaN
        entries = entries.fillna('')

        if (entries['path'] == '').any() or (entries['split'] == '').any():
            bad = entries.index[(entries['path'] == '') | (entries['split'] == '')].tolist()
            raise ManifestManager.FormatError(f'{pathname}: missing path or split on records {bad}')

        entries['path']    = entries['path'].str.strip()
        entries['split']   = entries['split'].str.strip().str.lower()
        entries['dataset'] = entries['dataset'].str.strip().replace('', 'default')

        bad_splits = sorted(set(entries['split']) - set(Manifest.SPLITS))
        if bad_splits:
            raise ManifestManager.FormatError(f'{pathname}: unknown split tags {bad_splits}')

        dupes = entries['path'][entries['path'].duplicated()].tolist()
        if dupes:
            raise ManifestManager.FormatError(f'{pathname}: duplicate paths {dupes}')

        base = os.path.dirname(os.path.abspath(pathname))
        entries['path'] = [ p if os.path.isabs(p) else os.path.normpath(os.path.join(base, p)) for p in entries['path'] ]

        ManifestManager.logger.debug(
            f'{pathname}: ' + ', '.join(f'{tag}={int((entries["split"] == tag).sum())}' for tag in Manifest.SPLITS))

        return Manifest(entries.reset_index(drop=True), scale)


    @staticmethod
    def save(manifest, pathname):
        manifest.entries[Manifest.COLUMNS].to_csv(pathname, sep='\t', header=False, index=False)
