"""Compare engine results against the brute-force search-space optimum.

For small nets the best tree in the particle search space is known exactly
(`oracle.best_in_space_xsmt`), so a run either recovers it, misses it, or
(which would be a bug) beats it.
"""

import math
from typing import Dict, List, Sequence

from evaluation.oracle import best_in_space_xsmt
from pipeline.encoding import Net
from pipeline.engine import RunConfig, run

TOLERANCE = 1e-9


def exact_match(a: float, b: float, tol: float = TOLERANCE) -> bool:
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)


def evaluate_recovery(nets: Sequence[Net], cfg: RunConfig, threads: int = 1) -> Dict:
    """Run the engine once per net and compare with the search-space optimum.

    Returns counts and per-net rows: `exact_hits` runs reached the optimum,
    `below` runs reported a length under it (must stay 0).
    """
    report = {'runs': len(nets), 'exact_hits': 0, 'below': 0, 'rows': []}
    for net in nets:
        result = run(net, cfg, threads=threads)
        target = best_in_space_xsmt(result.net, cfg.mode)
        row = {'net': net.name, 'pins': net.n, 'found': result.best_length, 'optimum': target}
        if exact_match(result.best_length, target):
            row['exact'] = True
            report['exact_hits'] += 1
        else:
            row['exact'] = False
            row['gap'] = result.best_length - target
            if result.best_length < target - TOLERANCE:
                report['below'] += 1
        report['rows'].append(row)

    report['rate'] = report['exact_hits'] / max(1, report['runs'])
    return report


def missed(report: Dict) -> List[Dict]:
    return [row for row in report['rows'] if not row['exact']]
