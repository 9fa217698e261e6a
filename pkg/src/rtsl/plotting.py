"""SVG output: a dependency-free polyline emitter plus report figures.

emit_svg writes a minimal standalone chart by string assembly, so its
bytes depend on nothing but the input rows.  The richer report figures
use matplotlib's SVG backend pinned to deterministic output (fixed hash
salt, no embedded date).
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np
import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "rtsl"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)


def _coord(v):
    return format(float(v), ".2f")


def _tick_label(v):
    return format(float(v), ".5g")


def emit_svg(rows, style=None):
    """Standalone SVG chart: axes, ticks, one polyline, optional error bars.

    rows: (x, y) or (x, y, err) tuples, at least two, all finite.
    Deterministic: identical input yields identical bytes.
    """
    rows = [tuple(float(v) for v in row) for row in rows]
    if len(rows) < 2:
        raise ValueError("need at least 2 rows")
    bad = [i for i, row in enumerate(rows) if not all(np.isfinite(v) for v in row)]
    if bad:
        raise ValueError("non-finite values in rows " + ", ".join(str(i) for i in bad))
    opts = {
        "width": 640.0,
        "height": 420.0,
        "margin": 64.0,
        "stroke": "#1f6fb4",
        "title": "",
        "xlabel": "x",
        "ylabel": "y",
    }
    if style:
        opts.update(style)
    width, height, margin = opts["width"], opts["height"], opts["margin"]
    xs = [row[0] for row in rows]
    ys = [row[1] for row in rows]
    errs = [row[2] if len(row) > 2 else 0.0 for row in rows]
    x0, x1 = min(xs), max(xs)
    y0 = min(y - e for y, e in zip(ys, errs))
    y1 = max(y + e for y, e in zip(ys, errs))
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5

    def sx(x):
        return margin + (x - x0) / (x1 - x0) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_coord(width)}" '
        f'height="{_coord(height)}" viewBox="0 0 {_coord(width)} {_coord(height)}">',
        f'<rect x="0" y="0" width="{_coord(width)}" height="{_coord(height)}" fill="#ffffff"/>',
    ]
    axis = '<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#222222" stroke-width="1"/>'
    parts.append(axis.format(_coord(margin), _coord(height - margin), _coord(width - margin), _coord(height - margin)))
    parts.append(axis.format(_coord(margin), _coord(margin), _coord(margin), _coord(height - margin)))
    for t in np.linspace(x0, x1, 5):
        px = sx(t)
        parts.append(
            f'<line x1="{_coord(px)}" y1="{_coord(height - margin)}" x2="{_coord(px)}" '
            f'y2="{_coord(height - margin + 5)}" stroke="#222222" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_coord(px)}" y="{_coord(height - margin + 18)}" font-size="11" '
            f'text-anchor="middle" font-family="sans-serif">{escape(_tick_label(t))}</text>'
        )
    for t in np.linspace(y0, y1, 5):
        py = sy(t)
        parts.append(
            f'<line x1="{_coord(margin - 5)}" y1="{_coord(py)}" x2="{_coord(margin)}" '
            f'y2="{_coord(py)}" stroke="#222222" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_coord(margin - 8)}" y="{_coord(py + 4)}" font-size="11" '
            f'text-anchor="end" font-family="sans-serif">{escape(_tick_label(t))}</text>'
        )
    for x, y, e in zip(xs, ys, errs):
        if e > 0:
            parts.append(
                f'<line x1="{_coord(sx(x))}" y1="{_coord(sy(y - e))}" x2="{_coord(sx(x))}" '
                f'y2="{_coord(sy(y + e))}" stroke="{opts["stroke"]}" stroke-width="1" opacity="0.6"/>'
            )
    points = " ".join(f"{_coord(sx(x))},{_coord(sy(y))}" for x, y in zip(xs, ys))
    parts.append(
        f'<polyline points="{points}" fill="none" stroke="{opts["stroke"]}" stroke-width="1.5"/>'
    )
    if opts["title"]:
        parts.append(
            f'<text x="{_coord(width / 2)}" y="{_coord(margin - 20)}" font-size="14" '
            f'text-anchor="middle" font-family="sans-serif">{escape(str(opts["title"]))}</text>'
        )
    parts.append(
        f'<text x="{_coord(width / 2)}" y="{_coord(height - 12)}" font-size="12" '
        f'text-anchor="middle" font-family="sans-serif">{escape(str(opts["xlabel"]))}</text>'
    )
    parts.append(
        f'<text x="14" y="{_coord(height / 2)}" font-size="12" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 14 {_coord(height / 2)})">'
        f'{escape(str(opts["ylabel"]))}</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_figure(fig, path):
    """Write a figure as deterministic SVG (no timestamp, fixed salt)."""
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def curve_figure(energies, means, errs, title="Lyapunov exponent estimate"):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.errorbar(energies, means, yerr=errs, fmt="o-", ms=2.5, lw=1.0, capsize=2, color="#1f6fb4")
    ax.axhline(0.0, color="#999999", lw=0.8)
    ax.set_xlabel("energy")
    ax.set_ylabel("estimate")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def histogram_figure(edges, counts, title="Truncation spectrum"):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.stairs(counts, edges, fill=True, color="#1f6fb4", alpha=0.7)
    ax.set_xlabel("energy")
    ax.set_ylabel("count")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def decay_figure(eigenvalues, rates, references, title="Eigenvector decay rates"):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(eigenvalues, rates, "o", ms=3.5, color="#1f6fb4", label="fitted rate")
    ax.plot(eigenvalues, references, "-", lw=1.2, color="#c25b1e", label="reference exponent")
    ax.set_xlabel("eigenvalue")
    ax.set_ylabel("rate")
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig
