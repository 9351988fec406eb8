"""Seeded synthetic benchmark suites.

Stands in for external benchmark circuits: nets of the requested sizes with
uniform integer pin coordinates, reproducible from the seed alone.
"""

from typing import List, Sequence, Tuple

import numpy as np

from pipeline.encoding import Net
from pipeline.netfile import serialize_netfile


def random_net(name: str, size: int, coord_range: Tuple[int, int], rng: np.random.Generator) -> Net:
    lo, hi = coord_range
    if hi < lo:
        raise ValueError(f'empty coordinate range [{lo}, {hi}]')
    capacity = (hi - lo + 1) ** 2
    if size > capacity:
        raise ValueError(f'cannot place {size} distinct pins in [{lo}, {hi}]^2')
    seen = set()
    points = []
    while len(points) < size:
        x, y = (int(v) for v in rng.integers(lo, hi + 1, size=2))
        if (x, y) not in seen:
            seen.add((x, y))
            points.append((x, y))
    return Net.from_points(name, points)


def generate_random_suite(
    sizes: Sequence[int],
    nets_per_size: int,
    coord_range: Tuple[int, int],
    seed: int,
) -> List[Net]:
    """nets_per_size nets for every size, named r<size>_<k>."""
    if nets_per_size < 1:
        raise ValueError(f'nets_per_size must be >= 1, got {nets_per_size}')
    for size in sizes:
        if size < 2:
            raise ValueError(f'net size must be >= 2, got {size}')
    if len(set(sizes)) != len(sizes):
        raise ValueError(f'sizes must not repeat, got {list(sizes)}')
    rng = np.random.default_rng(seed)
    return [
        random_net(f'r{size}_{k}', size, coord_range, rng)
        for size in sizes
        for k in range(nets_per_size)
    ]


def suite_text(sizes: Sequence[int], nets_per_size: int, coord_range: Tuple[int, int], seed: int) -> str:
    nets = generate_random_suite(sizes, nets_per_size, coord_range, seed)
    header = (f'generated: sizes={",".join(map(str, sizes))} nets_per_size={nets_per_size} '
              f'coord_range={coord_range[0]},{coord_range[1]} seed={seed}')
    return serialize_netfile(nets, header=header)
