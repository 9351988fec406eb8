#!/usr/bin/env python
"""Command-line runner: net files → Steiner trees, reports and pictures.

Subcommands:
  solve    route every net of a file once and print the best tree
  batch    repeated runs per net with best/mean/stddev statistics
  ablate   compare configs (stage plans x modes x mutation points)
  sweep    compare every stage plan of a given depth
  oracle   brute-force reference lengths for small nets
  render   SVG picture of a routed tree
  gen      write a seeded random benchmark suite

Every subcommand echoes its effective config and seed so a run can be
repeated exactly. Exit codes: 0 ok, 1 usage, 2 input error, 3 internal
invariant violation.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from pipeline.encoding import InvalidTreeError, RoutingMode, evaluate, parse, restore_pin_order, serialize
from pipeline.engine import RunConfig, StagePlan, default_seed, default_threads, run, run_many
from pipeline.netfile import load_netfile

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3


class CliParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f'{self.prog}: error: {message}', file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def add_run_flags(p: argparse.ArgumentParser, single_mode: bool = True, plan_depth: bool = True):
    if single_mode:
        p.add_argument('--mode', default='x', help='rect, x or x2 (default x)')
        p.add_argument('--k', type=int, default=2, help='mutation points (default 2)')
    p.add_argument('--pop', type=int, default=50, help='swarm size (default 50)')
    p.add_argument('--iters', type=int, default=500, help='iterations (default 500)')
    p.add_argument('--seed', type=int, default=default_seed(), help='seed (default $STEINER_SEED or 1)')
    p.add_argument('--stages', default='E,PS,E,PS', help='stage plan, e.g. "E,PS,E,PS" or "CM6"')
    if plan_depth:
        p.add_argument('--depth', type=int, default=4, help='depth used to resolve CM aliases (default 4)')
    p.add_argument('--inherit-from-guide', action='store_true',
                   help='E-crossover common edges take the guide\'s PS choice')
    p.add_argument('--no-mst-elite', action='store_true', help='do not seed the swarm with the MST')


def config_from_args(args, **overrides) -> RunConfig:
    values = dict(
        population=args.pop,
        evaluations=args.iters,
        seed=args.seed,
        inherit_from_guide=args.inherit_from_guide,
        mst_elite=not args.no_mst_elite,
    )
    if 'mode' not in overrides:
        values['mode'] = RoutingMode.parse(args.mode)
    if 'mutation_points' not in overrides:
        values['mutation_points'] = args.k
    if 'stage_plan' not in overrides:
        values['stage_plan'] = StagePlan.parse(args.stages, depth=getattr(args, 'depth', 4))
    values.update(overrides)
    return RunConfig(**values)


def echo(command: str, config: Dict):
    print(f'# {command} config: {json.dumps(config, sort_keys=True)}')


def select_nets(path: str, name: Optional[str] = None):
    nets = load_netfile(path)
    if name is not None:
        nets = [n for n in nets if n.name == name]
        if not nets:
            raise ValueError(f'net {name!r} not found in {path}')
    return nets


def cmd_solve(args) -> int:
    cfg = config_from_args(args)
    echo('solve', cfg.to_dict())
    print(f'[1] Loading nets from {args.netfile}...')
    nets = select_nets(args.netfile, args.name)
    print(f'  ✓ Loaded {len(nets)} net(s).')

    print(f'[2] Routing ({cfg.mode.value}, plan {cfg.stage_plan.label})...')
    results = []
    for net in nets:
        r = run(net, cfg, threads=args.threads)
        particle = restore_pin_order(net, r.net, r.best)
        results.append((net, r, particle))
        print(f'  ✓ {net.name}: length {r.best_length:.4f} fitness {r.fitness:.6f}')
        print(f'    particle: {serialize(particle)}')

    if args.out:
        payload = {
            'config': cfg.to_dict(),
            'results': [{
                'net': net.name,
                'pins': [list(p) for p in net.pins],
                'length': r.best_length,
                'fitness': r.fitness,
                'particle': serialize(particle),
                'history': list(r.history),
                'wall_time': r.wall_time,
            } for net, r, particle in results],
        }
        Path(args.out).write_text(json.dumps(payload, indent=2), encoding='utf-8')
        print(f'  ✓ Wrote {args.out}')
    return EXIT_OK


def cmd_batch(args) -> int:
    from pipeline.exporter import write_rows

    cfg = config_from_args(args)
    config = dict(cfg.to_dict(), repeats=args.repeats)
    echo('batch', config)
    nets = select_nets(args.netfile, args.name)
    rows: List[Dict] = []
    print(f'{"net":<12} {"pins":>5} {"best":>12} {"mean":>12} {"stddev":>10}')
    for net in nets:
        stats = run_many(net, cfg, args.repeats, threads=args.threads)
        best = min(stats.results, key=lambda r: r.best_length)
        rows.append({
            'net': net.name, 'pins': net.n, 'mode': cfg.mode.value,
            'best': stats.best, 'mean': stats.mean, 'stddev': stats.stddev,
            'fitness': best.fitness, 'runtime': sum(stats.runtimes) / len(stats.runtimes),
            'particle': serialize(restore_pin_order(net, best.net, best.best)),
        })
        print(f'{net.name:<12} {net.n:>5} {stats.best:>12.3f} {stats.mean:>12.3f} {stats.stddev:>10.3f}')
    if args.out:
        write_rows(rows, args.out, config)
        print(f'  ✓ Wrote {args.out}')
    return EXIT_OK


def _write_report(report, out: Optional[str]):
    from evaluation.scoring import format_summary
    from pipeline.exporter import write_report

    print(format_summary(report))
    if out:
        write_report(report, out)
        print(f'  ✓ Wrote {out}')


def cmd_ablate(args) -> int:
    from evaluation.scoring import ablation_table

    plans = args.plan or ['E,PS,E,PS']
    modes = args.mode or ['x']
    ks = args.k or [2]
    configs = {}
    for mode in modes:
        for plan in plans:
            for k in ks:
                cfg = config_from_args(args, mode=RoutingMode.parse(mode),
                                       stage_plan=StagePlan.parse(plan, depth=args.depth),
                                       mutation_points=k)
                configs[f'{cfg.mode.value}|{cfg.stage_plan.label}|k{k}'] = cfg
    if args.baseline and args.baseline not in configs:
        raise ValueError(f'baseline {args.baseline!r} is not one of {list(configs)}')
    echo('ablate', {name: c.to_dict() for name, c in configs.items()})
    nets = select_nets(args.netfile)
    report = ablation_table(nets, configs, args.repeats, baseline=args.baseline, threads=args.threads)
    _write_report(report, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    from evaluation.scoring import ablation_table

    mode = RoutingMode.parse(args.mode)
    configs = {name: config_from_args(args, mode=mode, stage_plan=plan)
               for name, plan in StagePlan.enumerate(args.depth)}
    baseline = ('RSMT', config_from_args(args, mode=RoutingMode.RECTILINEAR,
                                          stage_plan=StagePlan.parse('PS')))
    echo('sweep', {name: c.to_dict() for name, c in list(configs.items()) + [baseline]})
    nets = select_nets(args.netfile)
    report = ablation_table(nets, configs, args.repeats, baseline=baseline, threads=args.threads)
    _write_report(report, args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    from evaluation.oracle import best_in_space_xsmt, exact_rsmt
    from pipeline.encoding import mst_spanning_tree

    mode = RoutingMode.parse(args.mode)
    if not (args.exact_rsmt or args.best_in_space or args.mst):
        args.exact_rsmt = True
    echo('oracle', {'mode': mode.value, 'exact_rsmt': args.exact_rsmt,
                    'best_in_space': args.best_in_space, 'mst': args.mst})
    for net in select_nets(args.netfile, args.name):
        parts = [f'{net.name}:']
        if args.exact_rsmt:
            parts.append(f'exact_rsmt={exact_rsmt(net):g}')
        if args.best_in_space:
            parts.append(f'best_in_space[{mode.value}]={best_in_space_xsmt(net, mode):.4f}')
        if args.mst:
            mst = evaluate(net, mst_spanning_tree(net, mode))
            parts.append(f'mst[{mode.value}]={mst.length:.4f}')
        print(' '.join(parts))
    return EXIT_OK


def cmd_render(args) -> int:
    from tools.svg_render import render_svg

    nets = select_nets(args.netfile, args.name)
    net = nets[0]
    if args.particle:
        echo('render', {'net': net.name, 'particle': args.particle})
        particle = parse(args.particle, net.n)
    else:
        cfg = config_from_args(args)
        echo('render', dict(cfg.to_dict(), net=net.name))
        result = run(net, cfg, threads=args.threads)
        particle = restore_pin_order(net, result.net, result.best)
        print(f'# particle: {serialize(particle)}')
    svg = render_svg(net, particle)
    if args.out:
        Path(args.out).write_text(svg, encoding='utf-8')
        print(f'  ✓ Wrote {args.out}')
    else:
        print(svg)
    return EXIT_OK


def cmd_gen(args) -> int:
    from tools.suite_generator import suite_text

    sizes = [int(s) for s in args.sizes.split(',') if s.strip()]
    lo, hi = (int(v) for v in args.coord_range.split(','))
    text = suite_text(sizes, args.nets_per_size, (lo, hi), args.seed)
    if args.out:
        Path(args.out).write_text(text, encoding='utf-8')
        print(f'# gen config: sizes={sizes} nets_per_size={args.nets_per_size} '
              f'coord_range={lo},{hi} seed={args.seed}')
        print(f'  ✓ Wrote {args.out}')
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> CliParser:
    parser = CliParser(prog='pipeline_runner', description='Steiner tree construction by discrete PSO')
    parser.add_argument('--verbose', action='store_true', help='debug logging')
    parser.add_argument('--threads', type=int, default=default_threads(),
                        help='worker cap; results do not depend on it')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', help='route every net once')
    p.add_argument('netfile')
    p.add_argument('--name', help='only this net')
    p.add_argument('--out', help='write results as JSON')
    add_run_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser('batch', help='repeated runs with statistics')
    p.add_argument('netfile')
    p.add_argument('--name', help='only this net')
    p.add_argument('--repeats', type=int, default=20)
    p.add_argument('--out', help='.csv, .json or .xlsx')
    add_run_flags(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser('ablate', help='compare configurations')
    p.add_argument('netfile')
    p.add_argument('--plan', action='append', help='stage plan (repeatable)')
    p.add_argument('--mode', action='append', help='routing mode (repeatable)')
    p.add_argument('--k', action='append', type=int, help='mutation points (repeatable)')
    p.add_argument('--baseline', help='config name used as baseline (default: first)')
    p.add_argument('--repeats', type=int, default=10)
    p.add_argument('--out', help='.csv, .json or .xlsx')
    add_run_flags(p, single_mode=False)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser('sweep', help='all stage plans of one depth')
    p.add_argument('netfile')
    p.add_argument('--depth', type=int, default=4, help='number of stages (2^depth plans)')
    p.add_argument('--repeats', type=int, default=10)
    p.add_argument('--out', help='.csv, .json or .xlsx')
    add_run_flags(p, plan_depth=False)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('oracle', help='brute-force reference lengths')
    p.add_argument('netfile')
    p.add_argument('--name', help='only this net')
    p.add_argument('--mode', default='x')
    p.add_argument('--exact-rsmt', action='store_true')
    p.add_argument('--best-in-space', action='store_true')
    p.add_argument('--mst', action='store_true')
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser('render', help='SVG of a routed tree')
    p.add_argument('netfile')
    p.add_argument('--name', help='net to render (default: first)')
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--particle', help='particle string')
    group.add_argument('--solve', action='store_true', help='route the net first')
    p.add_argument('--out', help='SVG output path (default stdout)')
    add_run_flags(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser('gen', help='seeded random suite')
    p.add_argument('--sizes', default='8,9,10,20,50,70,100')
    p.add_argument('--nets-per-size', type=int, default=1)
    p.add_argument('--coord-range', default='0,100')
    p.add_argument('--seed', type=int, default=default_seed())
    p.add_argument('--out', help='net file path (default stdout)')
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s')
    if args.threads < 1:
        parser.error('--threads must be >= 1')
    try:
        return args.func(args)
    except InvalidTreeError as e:
        print(f'internal error: {e}', file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError) as e:
        print(f'error: {e}', file=sys.stderr)
        return EXIT_INPUT


if __name__ == '__main__':
    raise SystemExit(main())
