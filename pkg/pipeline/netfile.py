"""Plain-text net files.

Format:

    # comment
    net <name> <n>
    <x> <y>
    ... (n pin lines)

Blank lines and `#` comments are ignored anywhere. Pins repeated within a
net are dropped with a warning.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

from pipeline.encoding import Net

logger = logging.getLogger(__name__)


class NetFileError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f'line {line}: {message}')
        self.line = line


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def parse_netfile(text: str) -> List[Net]:
    """Parse net file text into nets, raising NetFileError with a line number."""
    lines = _content_lines(text)
    nets: List[Net] = []
    dropped = 0
    i = 0
    while i < len(lines):
        number, line = lines[i]
        parts = line.split()
        if parts[0] != 'net':
            raise NetFileError(number, f'expected "net <name> <n>", got {line!r}')
        if len(parts) != 3:
            raise NetFileError(number, f'malformed header {line!r}')
        name = parts[1]
        if any(n.name == name for n in nets):
            raise NetFileError(number, f'net name {name!r} is repeated')
        try:
            count = int(parts[2])
        except ValueError:
            raise NetFileError(number, f'pin count {parts[2]!r} is not an integer') from None
        if count < 2:
            raise NetFileError(number, f'net {name!r} declares {count} pins, need at least 2')

        points = []
        j = i + 1
        while j < len(lines) and len(points) < count:
            pin_number, pin_line = lines[j]
            fields = pin_line.split()
            if fields[0] == 'net':
                break
            if len(fields) != 2:
                raise NetFileError(pin_number, f'expected "<x> <y>", got {pin_line!r}')
            try:
                points.append((int(fields[0]), int(fields[1])))
            except ValueError:
                raise NetFileError(pin_number, f'non-integer coordinate in {pin_line!r}') from None
            j += 1
        if len(points) != count:
            raise NetFileError(number, f'net {name!r} declares {count} pins but has {len(points)}')
        try:
            net = Net.from_points(name, points)
        except ValueError as e:
            raise NetFileError(number, str(e)) from None
        dropped += net.duplicates_dropped
        nets.append(net)
        i = j

    if dropped:
        logger.warning('dropped %d duplicate pin(s) while reading %d net(s)', dropped, len(nets))
    return nets


def serialize_netfile(nets: Iterable[Net], header: Optional[str] = None) -> str:
    out = []
    if header:
        out.extend(f'# {line}' for line in header.splitlines())
    for net in nets:
        out.append(f'net {net.name} {net.n}')
        out.extend(f'{p.x} {p.y}' for p in net.pins)
    return '\n'.join(out) + '\n' if out else ''


def load_netfile(path) -> List[Net]:
    return parse_netfile(Path(path).read_text(encoding='utf-8'))
