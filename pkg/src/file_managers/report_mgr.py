import os

import pandas as pd

from misc.Logger import Logger


class CsvReport():
    """
    CSV file that starts with a run header of `# key: value` lines, followed
    by a column row and data rows. Rows are flushed as they are appended, so
    a partially finished run still leaves a readable file. Reopening with
    `append=True` and a header replaces the header lines and keeps the rows.
    """

    logger = Logger.get_logger(__name__)

    def __init__(self, pathname, columns, header=None, append=False):
        self.pathname = pathname
        self.columns  = list(columns)

        dirname = os.path.dirname(pathname)
        if dirname:
            os.makedirs(dirname, exist_ok=True)

        if append and os.path.isfile(pathname):
            header_lines, data = CsvReport.read(pathname)
            if list(data.columns) != self.columns:
                CsvReport.logger.warning(f'{pathname}: columns differ from {self.columns}, starting a new file')
            else:
                self.__rows = len(data)
                if header is not None:
                    self.__replace_header(header)
                return

        with open(pathname, 'w') as f:
            for key, value in (header or {}).items():
                f.write(f'# {key}: {value}\n')

            f.write(','.join(self.columns) + '\n')

        self.__rows = 0


    def __replace_header(self, header):
        """ Rewrites the `# key: value` lines, keeping the column row and data rows as written """
        with open(self.pathname) as f:
            lines = f.readlines()

        body = [ line for line in lines if not line.startswith('# ') ]
        with open(self.pathname, 'w') as f:
            for key, value in header.items():
                f.write(f'# {key}: {value}\n')

            f.writelines(body)


    def __len__(self):
        return self.__rows


    def append(self, row):
        self.write_rows([ row ])


    def write_rows(self, rows):
        if len(rows) == 0:
            return

        data = pd.DataFrame(rows, columns=self.columns)
        data.to_csv(self.pathname, mode='a', header=False, index=False)
        self.__rows += len(rows)


    @staticmethod
    def read_header(pathname):
        header = {}
        with open(pathname) as f:
            for line in f:
                if not line.startswith('# '):
                    break

                key, _, value = line[2:].rstrip('\n').partition(': ')
                header[key] = value

        return header


    @staticmethod
    def read(pathname):
        """ Returns (header dict, data frame) """
        header = CsvReport.read_header(pathname)
        data   = pd.read_csv(pathname, skiprows=len(header))
        return header, data
