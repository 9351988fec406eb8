"""Utilities to export run results and ablation reports.

Batch runs produce a list of row dicts (one per net); ablations produce an
`evaluation.scoring.Report`. Both are written through pandas, to CSV, JSON
or Excel (`openpyxl`) depending on the output suffix.
"""

import json
from pathlib import Path
from typing import Dict, List

import pandas as pd

BATCH_COLUMNS = ['net', 'pins', 'mode', 'best', 'mean', 'stddev', 'fitness', 'runtime', 'particle']


def rows_to_frame(rows: List[Dict]) -> pd.DataFrame:
    """DataFrame of batch rows with the expected columns in a stable order."""
    df = pd.DataFrame(rows)
    for c in BATCH_COLUMNS:
        if c not in df.columns:
            df[c] = ''
    return df[BATCH_COLUMNS]


def rows_to_excel(rows: List[Dict], out_path: str, config: Dict = None) -> str:
    """Write batch rows (and the config echo, if given) to an Excel file."""
    with pd.ExcelWriter(out_path, engine='openpyxl') as writer:
        rows_to_frame(rows).to_excel(writer, sheet_name='results', index=False)
        if config:
            pd.DataFrame(sorted(config.items()), columns=['parameter', 'value']).to_excel(
                writer, sheet_name='config', index=False)
    return out_path


def report_to_excel(report, out_path: str) -> str:
    """Write an ablation report: summary, per-net stats and raw runs sheets."""
    with pd.ExcelWriter(out_path, engine='openpyxl') as writer:
        report.summary.to_excel(writer, sheet_name='summary', index=False)
        report.stats.to_excel(writer, sheet_name='stats', index=False)
        report.runs.to_excel(writer, sheet_name='runs', index=False)
    return out_path


def write_rows(rows: List[Dict], out_path: str, config: Dict = None) -> str:
    suffix = Path(out_path).suffix.lower()
    if suffix == '.xlsx':
        return rows_to_excel(rows, out_path, config)
    if suffix == '.csv':
        rows_to_frame(rows).to_csv(out_path, index=False)
    elif suffix == '.json':
        Path(out_path).write_text(json.dumps({'config': config, 'rows': rows}, indent=2), encoding='utf-8')
    else:
        raise ValueError(f'unsupported output format {suffix!r} (use .csv, .json or .xlsx)')
    return out_path


def write_report(report, out_path: str, include_timing: bool = True) -> str:
    suffix = Path(out_path).suffix.lower()
    if suffix == '.xlsx':
        return report_to_excel(report, out_path)
    if suffix == '.csv':
        Path(out_path).write_text(report.to_csv('summary'), encoding='utf-8')
    elif suffix == '.json':
        Path(out_path).write_text(report.to_json(include_timing), encoding='utf-8')
    else:
        raise ValueError(f'unsupported output format {suffix!r} (use .csv, .json or .xlsx)')
    return out_path
