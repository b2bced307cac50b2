"""
Tests for CSV reports with a run header.
"""

################################################################################
# Tests
################################################################################

from file_managers.report_mgr import CsvReport


def test_header_and_rows(tmp_path):
    pathname = str(tmp_path / 'out' / 'r.csv')
    report = CsvReport(pathname, [ 'epoch', 'loss' ], { 'seed': 3, 'scale': 2 })
    report.append([ 1, 0.5 ])
    report.write_rows([ [ 2, 0.25 ], [ 3, 0.125 ] ])

    assert len(report) == 3
    header, data = CsvReport.read(pathname)
    assert header == { 'seed': '3', 'scale': '2' }
    assert list(data['epoch']) == [ 1, 2, 3 ]
    assert list(data['loss']) == [ 0.5, 0.25, 0.125 ]


def test_no_header(tmp_path):
    pathname = str(tmp_path / 'r.csv')
    CsvReport(pathname, [ 'a' ]).append([ 'x' ])

    header, data = CsvReport.read(pathname)
    assert header == {}
    assert list(data['a']) == [ 'x' ]


def test_append_continues(tmp_path):
    pathname = str(tmp_path / 'r.csv')
    CsvReport(pathname, [ 'a', 'b' ], { 'k': 'v' }).append([ 1, 2 ])

    report = CsvReport(pathname, [ 'a', 'b' ], append=True)
    assert len(report) == 1
    report.append([ 3, 4 ])

    header, data = CsvReport.read(pathname)
    assert header == { 'k': 'v' }
    assert list(data['a']) == [ 1, 3 ]


def test_append_other_columns_restarts(tmp_path):
    pathname = str(tmp_path / 'r.csv')
    CsvReport(pathname, [ 'a' ]).append([ 1 ])

    report = CsvReport(pathname, [ 'b', 'c' ], append=True)
    assert len(report) == 0
    _, data = CsvReport.read(pathname)
    assert list(data.columns) == [ 'b', 'c' ]


def test_append_replaces_header(tmp_path):
    pathname = str(tmp_path / 'r.csv')
    CsvReport(pathname, [ 'a', 'b' ], { 'epochs': 2 }).append([ 1, 0.1 ])

    report = CsvReport(pathname, [ 'a', 'b' ], { 'epochs': 3, 'weights_digest': 'abc' }, append=True)
    assert len(report) == 1
    report.append([ 2, 0.2 ])

    header, data = CsvReport.read(pathname)
    assert header == { 'epochs': '3', 'weights_digest': 'abc' }
    assert list(data['a']) == [ 1, 2 ]
    assert list(data['b']) == [ 0.1, 0.2 ]
