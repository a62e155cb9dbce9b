"""
Report, table and curve emitters (CSV, JSON, SVG)
"""

import csv
import io
import json
import logging
import sys

from domain import ParameterError
from harness import VerificationReport

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
REPORT_HEADER = ['sample_index', 'kind', 'seed', 'r', 'value', 'upper_slack', 'pass']
REPORT_FORMATS = ('csv', 'json')
TABLE_FORMATS = ('csv', 'json', 'svg')

SVG_WIDTH = 640
SVG_HEIGHT = 480
SVG_MARGIN = 60
SVG_TICKS = 5


def fmt17(x: float) -> str:
    return f"{x:.17g}"


def fmt_text(x: float) -> str:
    return f"{x:.15g}"


def _csv_text(header: list[str], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def report_to_csv(report: VerificationReport) -> str:
    rows = [
        [s.sample_index, s.spec.kind.value, '' if s.spec.seed is None else s.spec.seed,
         fmt17(s.r), fmt17(s.value), fmt17(s.upper_slack), 'true' if s.passed else 'false']
        for s in report.samples
    ]
    return _csv_text(REPORT_HEADER, rows)


def report_to_json(report: VerificationReport) -> str:
    # json writes floats with the shortest repr that round-trips
    return json.dumps(report.to_dict(), indent=2) + '\n'


def table_to_csv(header: list[str], rows: list[tuple]) -> str:
    return _csv_text(header, [[fmt17(v) if isinstance(v, float) else v for v in row] for row in rows])


def table_to_json(header: list[str], rows: list[tuple], name: str) -> str:
    payload = {
        'schema_version': SCHEMA_VERSION,
        'table': name,
        'columns': header,
        'rows': [dict(zip(header, row)) for row in rows],
    }
    return json.dumps(payload, indent=2) + '\n'


def curve_to_svg(points: list[tuple[float, float]], x_label: str, y_label: str, title: str = '') -> str:
    """Self-contained SVG: one polyline, labelled axes and a few ticks."""
    if not points:
        raise ParameterError("cannot draw an empty curve")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_min, x_max = min(xs), max(xs)
    y_min, y_max = min(0.0, min(ys)), max(ys)
    if x_max == x_min:
        x_max = x_min + 1.0
    if y_max == y_min:
        y_max = y_min + 1.0
    plot_w = SVG_WIDTH - 2 * SVG_MARGIN
    plot_h = SVG_HEIGHT - 2 * SVG_MARGIN

    def sx(x):
        return SVG_MARGIN + (x - x_min) / (x_max - x_min) * plot_w

    def sy(y):
        return SVG_HEIGHT - SVG_MARGIN - (y - y_min) / (y_max - y_min) * plot_h

    left, right = SVG_MARGIN, SVG_WIDTH - SVG_MARGIN
    top, bottom = SVG_MARGIN, SVG_HEIGHT - SVG_MARGIN
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line x1="{left}" y1="{bottom}" x2="{left}" y2="{top}" stroke="black"/>',
    ]
    for k in range(SVG_TICKS + 1):
        xv = x_min + (x_max - x_min) * k / SVG_TICKS
        yv = y_min + (y_max - y_min) * k / SVG_TICKS
        parts.append(f'<line x1="{sx(xv):.2f}" y1="{bottom}" x2="{sx(xv):.2f}" y2="{bottom + 5}" stroke="black"/>')
        parts.append(f'<text x="{sx(xv):.2f}" y="{bottom + 20}" font-size="12" text-anchor="middle">{xv:.4g}</text>')
        parts.append(f'<line x1="{left - 5}" y1="{sy(yv):.2f}" x2="{left}" y2="{sy(yv):.2f}" stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{sy(yv) + 4:.2f}" font-size="12" text-anchor="end">{yv:.4g}</text>')
    polyline = ' '.join(f'{sx(x):.3f},{sy(y):.3f}' for x, y in points)
    parts.extend([
        f'<polyline fill="none" stroke="steelblue" stroke-width="2" points="{polyline}"/>',
        f'<text x="{(left + right) / 2:.1f}" y="{SVG_HEIGHT - 15}" font-size="14" text-anchor="middle">{x_label}</text>',
        f'<text x="18" y="{(top + bottom) / 2:.1f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 18 {(top + bottom) / 2:.1f})">{y_label}</text>',
    ])
    if title:
        parts.append(f'<text x="{(left + right) / 2:.1f}" y="30" font-size="16" text-anchor="middle">{title}</text>')
    parts.append('</svg>')
    return '\n'.join(parts) + '\n'


def write_output(text: str, path: str | None) -> None:
    """Write to path, or to stdout when path is None or '-'."""
    if path is None or path == '-':
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info(f"Wrote {path}")


def emit_report(report: VerificationReport, fmt: str = 'csv', path: str | None = None) -> None:
    if fmt not in REPORT_FORMATS:
        raise ParameterError(f"reports are emitted as {' or '.join(REPORT_FORMATS)}, not {fmt}")
    write_output(report_to_csv(report) if fmt == 'csv' else report_to_json(report), path)


def emit_table(header: list[str], rows: list[tuple], fmt: str = 'csv', path: str | None = None,
               name: str = 'table', title: str = '') -> None:
    """Emit a table; the svg format draws the first column against the second."""
    if fmt not in TABLE_FORMATS:
        raise ParameterError(f"unknown output format {fmt}")
    if fmt == 'csv':
        text = table_to_csv(header, rows)
    elif fmt == 'json':
        text = table_to_json(header, rows, name)
    else:
        text = curve_to_svg([(float(row[0]), float(row[1])) for row in rows], header[0], header[1], title)
    write_output(text, path)
