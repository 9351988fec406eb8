"""SVG rendering of a routed tree.

Pins are drawn as circles, routed segments as lines (diagonals in a second
colour) and the routed length as a caption. Output is deterministic for a
given net and particle.
"""

import xml.etree.ElementTree as ET

from pipeline.encoding import InvalidTreeError, Net, Particle, validate
from pipeline.geometry import Orientation, Point, expand_edge, tree_length

CANVAS = 400
MARGIN = 20
COLORS = {
    Orientation.H: '#1f77b4',
    Orientation.V: '#1f77b4',
    Orientation.D45: '#d62728',
    Orientation.D135: '#d62728',
}


def _fmt(v: float) -> str:
    return f'{v:.2f}'


def _endpoints(seg):
    if seg.orientation is Orientation.H:
        return Point(seg.lo, seg.line_key), Point(seg.hi, seg.line_key)
    if seg.orientation is Orientation.V:
        return Point(seg.line_key, seg.lo), Point(seg.line_key, seg.hi)
    if seg.orientation is Orientation.D45:
        return Point(seg.lo, seg.lo + seg.line_key), Point(seg.hi, seg.hi + seg.line_key)
    return Point(seg.lo, seg.line_key - seg.lo), Point(seg.hi, seg.line_key - seg.hi)


def render_svg(net: Net, particle: Particle) -> str:
    """Return SVG 1.1 text for `particle` routed over `net`."""
    if not validate(net, particle):
        raise InvalidTreeError(f'cannot render: particle is not a spanning tree of net {net.name!r}')
    xs = [p.x for p in net.pins]
    ys = [p.y for p in net.pins]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    scale = (CANVAS - 2 * MARGIN) / span
    x0, y0 = min(xs), min(ys)

    def tx(p: Point):
        # SVG y grows downwards
        return MARGIN + (p.x - x0) * scale, CANVAS - MARGIN - (p.y - y0) * scale

    height = CANVAS + MARGIN
    root = ET.Element('svg', {
        'xmlns': 'http://www.w3.org/2000/svg',
        'version': '1.1',
        'width': str(CANVAS),
        'height': str(height),
        'viewBox': f'0 0 {CANVAS} {height}',
    })
    wires = ET.SubElement(root, 'g', {'stroke-width': '2'})
    for edge in particle.edges:
        for seg in expand_edge(net.pin(edge.u), net.pin(edge.v), edge.choice):
            (ax, ay), (bx, by) = (tx(p) for p in _endpoints(seg))
            ET.SubElement(wires, 'line', {
                'x1': _fmt(ax), 'y1': _fmt(ay), 'x2': _fmt(bx), 'y2': _fmt(by),
                'stroke': COLORS[seg.orientation],
            })
    pins = ET.SubElement(root, 'g', {'fill': '#000000'})
    for i, p in enumerate(net.pins, start=1):
        cx, cy = tx(p)
        circle = ET.SubElement(pins, 'circle', {'cx': _fmt(cx), 'cy': _fmt(cy), 'r': '4'})
        ET.SubElement(circle, 'title').text = f'pin {i} ({p.x}, {p.y})'
    caption = ET.SubElement(root, 'text', {'x': str(MARGIN), 'y': str(height - 6), 'font-size': '12'})
    caption.text = f'{net.name}: length {tree_length(net, particle):.3f}'
    return ET.tostring(root, encoding='unicode')


def write_svg(net: Net, particle: Particle, path) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(render_svg(net, particle))
