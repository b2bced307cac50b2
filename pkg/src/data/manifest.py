import dataclasses

import numpy as np
import pandas as pd


@dataclasses.dataclass
class Manifest():
    """
    Image list with one split tag (train / val / test) and dataset name per
    image. `entries` has the columns path, split, dataset.
    """

    COLUMNS = [ 'path', 'split', 'dataset' ]
    SPLITS  = ( 'train', 'val', 'test' )

    entries : pd.DataFrame
    scale   : int = 2

    def __len__(self):
        return len(self.entries)


    def split(self, tag):
        return self.entries[self.entries['split'] == tag]


    def count(self, tag):
        return int((self.entries['split'] == tag).sum())


    def with_val_fallback(self, fraction, seed):
        """
        When there are no val entries, moves a seeded `fraction` (at least
        one image) of the train entries to val.
        """
        if self.count('val') > 0 or self.count('train') < 2:
            return self

        entries   = self.entries.copy()
        train_idx = entries.index[entries['split'] == 'train'].to_numpy()

        n_val  = max(1, int(round(fraction*train_idx.shape[0])))
        picked = np.random.default_rng(seed).choice(train_idx, size=n_val, replace=False)
        entries.loc[np.sort(picked), 'split'] = 'val'

        return Manifest(entries, self.scale)
