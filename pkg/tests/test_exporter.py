import json

import pandas as pd
import pytest

from evaluation.scoring import ablation_table
from pipeline.exporter import BATCH_COLUMNS, rows_to_frame, write_report, write_rows

ROWS = [
    {'net': 'a', 'pins': 2, 'mode': 'x', 'best': 5.0, 'mean': 5.0, 'stddev': 0.0,
     'fitness': 1 / 6, 'runtime': 0.01, 'particle': '1 2 0 0.1667'},
]


def test_frame_has_stable_columns():
    frame = rows_to_frame([{'net': 'a', 'best': 1.0}])
    assert list(frame.columns) == BATCH_COLUMNS


def test_write_rows_csv_and_json(tmp_path):
    csv_path = write_rows(ROWS, str(tmp_path / 'out.csv'), {'seed': 1})
    assert pd.read_csv(csv_path)['best'].tolist() == [5.0]
    json_path = write_rows(ROWS, str(tmp_path / 'out.json'), {'seed': 1})
    data = json.loads(open(json_path, encoding='utf-8').read())
    assert data['config'] == {'seed': 1}
    assert data['rows'][0]['particle'] == '1 2 0 0.1667'


def test_write_rows_excel(tmp_path):
    path = write_rows(ROWS, str(tmp_path / 'out.xlsx'), {'seed': 1, 'mode': 'x'})
    sheets = pd.read_excel(path, sheet_name=None)
    assert set(sheets) == {'results', 'config'}
    assert sheets['results']['net'].tolist() == ['a']


def test_unsupported_suffix(tmp_path):
    with pytest.raises(ValueError):
        write_rows(ROWS, str(tmp_path / 'out.txt'))


def test_write_report_formats(tmp_path, unit_square, quick_config):
    report = ablation_table([unit_square], {'a': quick_config()}, repeats=1)
    xlsx = write_report(report, str(tmp_path / 'r.xlsx'))
    assert set(pd.read_excel(xlsx, sheet_name=None)) == {'summary', 'stats', 'runs'}
    csv = write_report(report, str(tmp_path / 'r.csv'))
    assert pd.read_csv(csv)['config'].tolist() == ['a']
    data = json.loads(open(write_report(report, str(tmp_path / 'r.json')), encoding='utf-8').read())
    assert data['summary'][0]['imp_pct'] == 0.0
