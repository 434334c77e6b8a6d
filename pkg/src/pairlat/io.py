"""Deterministic file output: CSV with round-trip floats, JSON sidecars, and
SVG drawings rendered from CSV text only."""

import csv
import io
import json
import os
import tempfile
from html import escape

import numpy as np


def fmt(x):
    """17 significant digits, enough to round-trip a double."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (complex, np.complexfloating)):
        return f"{fmt(x.real)}{'+' if x.imag >= 0 or np.isnan(x.imag) else '-'}{fmt(abs(x.imag))}j"
    if isinstance(x, str):
        return x
    v = float(x)
    if v == 0.0:
        v = 0.0  # drop the sign of negative zero
    return "%.17g" % v


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    return obj


def json_text(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"


def atomic_write(path, text):
    """Write ``text`` to a temporary file next to ``path`` and rename it over."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


# --------------------------------------------------------------------------
# SVG
# --------------------------------------------------------------------------

WIDTH, HEIGHT, PAD = 640, 420, 56


def _scale(lo, hi, a, b):
    if hi == lo:
        hi, lo = lo + 0.5, lo - 0.5
    return lambda v: a + (v - lo) * (b - a) / (hi - lo)


def _frame(title, xlabel, ylabel, xr, yr):
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{PAD}" y="{PAD / 2}" width="{WIDTH - 1.5 * PAD}" height="{HEIGHT - 1.5 * PAD}" '
        'fill="none" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="16" text-anchor="middle">{escape(title)}</text>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 8}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" '
        f'transform="rotate(-90 14 {HEIGHT / 2})">{escape(ylabel)}</text>',
        f'<text x="{PAD}" y="{HEIGHT - PAD + 16}" text-anchor="start">{xr[0]:.4g}</text>',
        f'<text x="{WIDTH - PAD / 2}" y="{HEIGHT - PAD + 16}" text-anchor="end">{xr[1]:.4g}</text>',
        f'<text x="{PAD - 4}" y="{HEIGHT - PAD}" text-anchor="end">{yr[0]:.4g}</text>',
        f'<text x="{PAD - 4}" y="{PAD / 2 + 10}" text-anchor="end">{yr[1]:.4g}</text>',
    ]
    return parts


def _axes(xs, ys):
    xr = (float(np.min(xs)), float(np.max(xs)))
    yr = (float(np.min(ys)), float(np.max(ys)))
    sx = _scale(*xr, PAD, WIDTH - PAD / 2)
    sy = _scale(*yr, HEIGHT - PAD, PAD / 2)
    return xr, yr, sx, sy


def svg_xy(text, x, y, title="", style="line", group=None):
    """Line or scatter drawing of columns ``x`` and ``y`` of a CSV text.

    With ``group`` set, one polyline is drawn per distinct value of that column.
    """
    header, rows = read_csv(text)
    ix, iy = header.index(x), header.index(y)
    ig = header.index(group) if group else None
    xs = np.array([float(r[ix]) for r in rows])
    ys = np.array([float(r[iy]) for r in rows])
    xr, yr, sx, sy = _axes(xs, ys)
    out = _frame(title, x, y, xr, yr)
    if style == "scatter":
        for a, b in zip(xs, ys):
            out.append(f'<circle cx="{sx(a):.2f}" cy="{sy(b):.2f}" r="1.2" fill="black"/>')
    else:
        keys = [None] if ig is None else list(dict.fromkeys(r[ig] for r in rows))
        for k in keys:
            sel = [i for i, r in enumerate(rows) if ig is None or r[ig] == k]
            pts = " ".join(f"{sx(xs[i]):.2f},{sy(ys[i]):.2f}" for i in sel)
            out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def svg_matrix(text, title="", xlabel="", ylabel=""):
    """Grayscale heat map of a matrix CSV whose header row holds the column
    coordinates and whose first column holds the row coordinates."""
    header, rows = read_csv(text)
    cols = np.array([float(v) for v in header[1:]])
    rvals = np.array([float(r[0]) for r in rows])
    data = np.array([[float(v) for v in r[1:]] for r in rows])
    xr = (float(cols.min()), float(cols.max()))
    yr = (float(rvals.min()), float(rvals.max()))
    out = _frame(title, xlabel, ylabel, xr, yr)
    lo, hi = float(data.min()), float(data.max())
    span = hi - lo if hi > lo else 1.0
    cw = (WIDTH - 1.5 * PAD) / len(cols)
    ch = (HEIGHT - 1.5 * PAD) / len(rvals)
    for i in range(len(rvals)):
        for j in range(len(cols)):
            g = int(round(255 * (1 - (data[i, j] - lo) / span)))
            y0 = HEIGHT - PAD - (i + 1) * ch
            out.append(f'<rect x="{PAD + j * cw:.2f}" y="{y0:.2f}" width="{cw + 0.05:.2f}" '
                       f'height="{ch + 0.05:.2f}" fill="rgb({g},{g},{g})"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
