"""Topology Inspector

Compares the edge sets of routed trees. Several runs frequently end on
different topologies of (nearly) the same length; this tool lists the shared
and differing edges of two particles over one net.

Usage (quick):
  python -m evaluation.topology_inspector --net nets.txt --name n1 --a "1 2 3 ..." --b "1 3 2 ..."
"""
import argparse
import json
from typing import Dict, List, Sequence

from pipeline.encoding import Particle, parse
from pipeline.geometry import tree_length


def compare_topologies(p: Particle, q: Particle) -> Dict:
    """Shared and differing edges (pin pairs, choices ignored) of p and q."""
    a = set(p.edge_keys())
    b = set(q.edge_keys())
    union = a | b
    return {
        'shared': sorted(a & b),
        'only_p': sorted(a - b),
        'only_q': sorted(b - a),
        'jaccard': (len(a & b) / len(union)) if union else 1.0,
    }


def distinct_topologies(results: Sequence, tolerance: float = 0.005) -> List[Dict]:
    """Distinct best edge sets among runs within `tolerance` of the best length.

    `results` are RunResult objects of the same net. Each entry reports the
    edge set, its best length and how many runs produced it.
    """
    if not results:
        return []
    shortest = min(r.best_length for r in results)
    groups: Dict[tuple, Dict] = {}
    for r in results:
        if r.best_length > shortest * (1.0 + tolerance):
            continue
        key = tuple(r.best.edge_keys())
        entry = groups.setdefault(key, {'edges': list(key), 'length': r.best_length, 'runs': 0})
        entry['runs'] += 1
        entry['length'] = min(entry['length'], r.best_length)
    return sorted(groups.values(), key=lambda e: (e['length'], e['edges']))


def pretty_print(report: Dict):
    print("Topology comparison report")
    print("=" * 40)
    print(f"  Shared edges: {len(report['shared'])} | Jaccard: {report['jaccard']:.3f}")
    if report['only_p']:
        print("  Only in A:")
        for u, v in report['only_p']:
            print(f"    - ({u}, {v})")
    if report['only_q']:
        print("  Only in B:")
        for u, v in report['only_q']:
            print(f"    - ({u}, {v})")
    for label in ('length_a', 'length_b'):
        if label in report:
            print(f"  {label}: {report[label]:.3f}")


def main(argv=None):
    from pipeline.netfile import load_netfile

    p = argparse.ArgumentParser()
    p.add_argument('--net', required=True, help='Net file')
    p.add_argument('--name', help='Net name inside the file (default: first net)')
    p.add_argument('--a', required=True, help='First particle string')
    p.add_argument('--b', required=True, help='Second particle string')
    p.add_argument('--json', action='store_true', help='Output JSON instead of pretty text')
    args = p.parse_args(argv)

    nets = load_netfile(args.net)
    net = next((n for n in nets if n.name == args.name), None) if args.name else (nets[0] if nets else None)
    if net is None:
        p.error(f'net {args.name!r} not found in {args.net}')

    a = parse(args.a, net.n)
    b = parse(args.b, net.n)
    report = compare_topologies(a, b)
    report['length_a'] = tree_length(net, a)
    report['length_b'] = tree_length(net, b)

    if args.json:
        print(json.dumps(report, indent=2))
    else:
        pretty_print(report)


if __name__ == '__main__':
    main()
