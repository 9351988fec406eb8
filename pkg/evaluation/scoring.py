"""Multi-run statistics and ablation reports.

An ablation runs `run_many` for every (net, config) pair and reports, per
config, the mean improvement over a baseline config:

    imp% = (baseline_mean - config_mean) / baseline_mean * 100

averaged across nets. The raw per-run lengths are kept in the report so the
percentages can always be recomputed from them.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd

from pipeline.encoding import Net
from pipeline.engine import RunConfig, run_many

logger = logging.getLogger(__name__)

RUN_COLUMNS = ['net', 'pins', 'config', 'run', 'seed', 'length', 'runtime']
STATS_COLUMNS = ['net', 'pins', 'config', 'best', 'mean', 'stddev', 'runtime']
SUMMARY_COLUMNS = ['config', 'mode', 'stage_plan', 'mutation_points', 'mean_length', 'imp_pct']


def improvement(baseline: float, value: float) -> float:
    """Percent improvement of `value` over `baseline` (positive = shorter)."""
    if baseline == 0:
        return 0.0
    return (baseline - value) / baseline * 100.0


def stats_from_runs(runs: pd.DataFrame) -> pd.DataFrame:
    if runs.empty:
        return pd.DataFrame(columns=STATS_COLUMNS)
    grouped = runs.groupby(['net', 'pins', 'config'], sort=False)
    stats = grouped.agg(
        best=('length', 'min'),
        mean=('length', 'mean'),
        stddev=('length', lambda s: float(s.std(ddof=0))),
        runtime=('runtime', 'mean'),
    ).reset_index()
    return stats[STATS_COLUMNS]


def summarize(runs: pd.DataFrame, configs: Mapping[str, Dict], baseline: str,
              include: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """Per-config mean length and improvement over `baseline`, from raw runs."""
    names = list(include) if include is not None else list(configs)
    if runs.empty:
        return pd.DataFrame(columns=SUMMARY_COLUMNS)
    means = runs.groupby(['net', 'config'], sort=False)['length'].mean().unstack('config')
    rows = []
    for name in names:
        per_net = [improvement(means.loc[net, baseline], means.loc[net, name]) for net in means.index]
        cfg = configs[name]
        rows.append({
            'config': name,
            'mode': cfg['mode'],
            'stage_plan': cfg['stage_plan'],
            'mutation_points': cfg['mutation_points'],
            'mean_length': float(means[name].mean()),
            'imp_pct': float(sum(per_net) / len(per_net)),
        })
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


@dataclass
class Report:
    runs: pd.DataFrame
    stats: pd.DataFrame
    summary: pd.DataFrame
    configs: Dict[str, Dict]
    baseline: str
    repeats: int
    rows: List[str] = field(default_factory=list)

    def recompute_summary(self) -> pd.DataFrame:
        return summarize(self.runs, self.configs, self.baseline, include=self.rows)

    def to_dict(self, include_timing: bool = True) -> Dict:
        runs = self.runs if include_timing else self.runs.drop(columns=['runtime'])
        stats = self.stats if include_timing else self.stats.drop(columns=['runtime'])
        return {
            'baseline': self.baseline,
            'repeats': self.repeats,
            'configs': self.configs,
            'summary': self.summary.to_dict(orient='records'),
            'stats': stats.to_dict(orient='records'),
            'runs': runs.to_dict(orient='records'),
        }

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2)

    def to_csv(self, which: str = 'summary') -> str:
        return getattr(self, which).to_csv(index=False)


def ablation_table(
    nets: Sequence[Net],
    configs: Mapping[str, RunConfig],
    repeats: int,
    baseline: Union[str, Tuple[str, RunConfig], None] = None,
    threads: int = 1,
) -> Report:
    """Compare named configs on every net.

    `baseline` is either the name of one of `configs` (default: the first) or
    an extra (name, config) pair that is run as a reference but left out of
    the summary rows.
    """
    if not configs:
        raise ValueError('ablation needs at least one config')
    rows = list(configs)
    all_configs = dict(configs)
    if baseline is None:
        baseline_name = rows[0]
    elif isinstance(baseline, str):
        if baseline not in configs:
            raise ValueError(f'baseline {baseline!r} is not one of {rows}')
        baseline_name = baseline
    else:
        baseline_name, baseline_cfg = baseline
        all_configs[baseline_name] = baseline_cfg

    records = []
    for net in nets:
        for name, cfg in all_configs.items():
            stats = run_many(net, cfg, repeats, threads=threads)
            for i, (length, runtime) in enumerate(zip(stats.lengths, stats.runtimes)):
                records.append({
                    'net': net.name, 'pins': net.n, 'config': name, 'run': i,
                    'seed': cfg.seed + i, 'length': length, 'runtime': runtime,
                })
            logger.info('%s / %s: best %.3f mean %.3f sd %.3f',
                        net.name, name, stats.best, stats.mean, stats.stddev)

    runs = pd.DataFrame(records, columns=RUN_COLUMNS)
    echo = {name: cfg.to_dict() for name, cfg in all_configs.items()}
    return Report(
        runs=runs,
        stats=stats_from_runs(runs),
        summary=summarize(runs, echo, baseline_name, include=rows),
        configs=echo,
        baseline=baseline_name,
        repeats=repeats,
        rows=rows,
    )


def format_summary(report: Report) -> str:
    """Readable summary table of an ablation report."""
    if report.summary.empty:
        return '(no nets)'
    lines = [f'{"config":<10} {"mode":<5} {"plan":<16} {"k":>2} {"mean":>12} {"imp":>8}']
    for row in report.summary.itertuples(index=False):
        lines.append(f'{row.config:<10} {row.mode:<5} {row.stage_plan:<16} {row.mutation_points:>2} '
                     f'{row.mean_length:>12.3f} {row.imp_pct:>7.2f}%')
    lines.append(f'baseline: {report.baseline}, repeats: {report.repeats}')
    return '\n'.join(lines)
