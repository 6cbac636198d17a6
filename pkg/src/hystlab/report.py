"""Artifact emission: deterministic CSV tables, self-contained SVG line
charts, and the per-run manifest."""
from __future__ import annotations

import csv
import subprocess
from pathlib import Path

import numpy as np

__all__ = ["fmt", "write_csv", "svg_line_chart", "write_manifest"]


def fmt(x) -> str:
    """Floats with 17 significant digits; everything else via str()."""
    if isinstance(x, bool):
        return str(x)
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])
    return path


def _ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    span = hi - lo
    step = 10.0 ** np.floor(np.log10(span / n))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= n:
            step *= mult
            break
    first = np.ceil(lo / step) * step
    return np.arange(first, hi + 0.5 * step, step)


def svg_line_chart(path, title: str, xlabel: str, ylabel: str, series,
                   width: int = 720, height: int = 460) -> Path:
    """Static SVG polyline chart; `series` is a list of (label, x, y)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pad_l, pad_r, pad_t, pad_b = 64, 16, 36, 48
    xs = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s[2], dtype=float) for s in series])
    x_lo, x_hi = float(np.min(xs)), float(np.max(xs))
    y_lo, y_hi = float(np.min(ys)), float(np.max(ys))
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    y_pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    def px(x):
        return pad_l + (x - x_lo) / (x_hi - x_lo) * (width - pad_l - pad_r)

    def py(y):
        return height - pad_b - (y - y_lo) / (y_hi - y_lo) * (height - pad_t - pad_b)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width/2:.1f}" y="20" text-anchor="middle" '
           f'font-family="sans-serif" font-size="14">{title}</text>']
    # axes
    out.append(f'<line x1="{pad_l}" y1="{height-pad_b}" x2="{width-pad_r}" '
               f'y2="{height-pad_b}" stroke="black"/>')
    out.append(f'<line x1="{pad_l}" y1="{pad_t}" x2="{pad_l}" y2="{height-pad_b}" '
               f'stroke="black"/>')
    for tx in _ticks(x_lo, x_hi):
        out.append(f'<line x1="{px(tx):.1f}" y1="{height-pad_b}" x2="{px(tx):.1f}" '
                   f'y2="{height-pad_b+5}" stroke="black"/>')
        out.append(f'<text x="{px(tx):.1f}" y="{height-pad_b+18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{tx:.4g}</text>')
    for ty in _ticks(y_lo, y_hi):
        out.append(f'<line x1="{pad_l-5}" y1="{py(ty):.1f}" x2="{pad_l}" '
                   f'y2="{py(ty):.1f}" stroke="black"/>')
        out.append(f'<text x="{pad_l-8}" y="{py(ty)+4:.1f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{ty:.4g}</text>')
    out.append(f'<text x="{(pad_l+width-pad_r)/2:.1f}" y="{height-10}" '
               f'text-anchor="middle" font-family="sans-serif" font-size="12">{xlabel}</text>')
    out.append(f'<text x="16" y="{(pad_t+height-pad_b)/2:.1f}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12" '
               f'transform="rotate(-90 16 {(pad_t+height-pad_b)/2:.1f})">{ylabel}</text>')
    for i, (label, sx, sy) in enumerate(series):
        pts = " ".join(f"{px(float(x)):.2f},{py(float(y)):.2f}" for x, y in zip(sx, sy))
        color = colors[i % len(colors)]
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"/>')
        out.append(f'<text x="{width-pad_r-8}" y="{pad_t+16*(i+1)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="12" fill="{color}">{label}</text>')
    out.append("</svg>")
    path.write_text("\n".join(out))
    return path


def _git_describe() -> str:
    try:
        r = subprocess.run(["git", "describe", "--always", "--dirty"],
                           capture_output=True, text=True, timeout=5)
        if r.returncode == 0:
            return r.stdout.strip()
    except Exception:
        pass
    return "unknown"


def write_manifest(run_dir, config_text: str, artifacts) -> Path:
    from . import __version__
    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    lines = [f"hystlab {__version__}", f"build {_git_describe()}", "", "[config]"]
    lines += config_text.rstrip("\n").splitlines()
    lines += ["", "[artifacts]"]
    lines += [str(Path(a).name) for a in artifacts]
    path = run_dir / "manifest.txt"
    path.write_text("\n".join(lines) + "\n")
    return path
