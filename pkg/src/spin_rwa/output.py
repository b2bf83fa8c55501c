"""CSV and SVG writers for probability time series."""
from __future__ import annotations

import io
import os
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import TimeSeries
from .scenarios import ResonanceProfile
from .spin import m_label


@contextmanager
def _open_text(destination):
    """Yield a text stream for a path or pass an open stream through."""
    if hasattr(destination, "write"):
        yield destination
        return
    path = Path(destination)
    try:
        handle = open(path, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc
    with handle:
        yield handle


def _num(x: float) -> str:
    return format(float(x), ".17g")


def csv_header(series: TimeSeries) -> list[str]:
    return ["tau"] + [f"p_m={m_label(tm)}" for tm in series.spin.substates()]


def emit_csv(series: TimeSeries, destination) -> None:
    """Write ``tau,p_m=...`` rows at 17 significant digits, ``\\n`` line ends."""
    with _open_text(destination) as out:
        out.write(",".join(csv_header(series)) + "\n")
        for tau, row in zip(series.taus, series.probabilities):
            out.write(",".join([_num(tau), *map(_num, row)]) + "\n")


def csv_text(series: TimeSeries) -> str:
    buf = io.StringIO()
    emit_csv(series, buf)
    return buf.getvalue()


def read_csv(source) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Parse an emitted CSV back into ``(header, taus, probabilities)``."""
    text = source.read() if hasattr(source, "read") else Path(source).read_text(encoding="utf-8")
    lines = text.splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, data[:, 0], data[:, 1:]


def emit_profile_csv(profile: ResonanceProfile, destination) -> None:
    with _open_text(destination) as out:
        out.write("omega,peak_transfer\n")
        for w, p in zip(profile.omegas, profile.peak_transfer):
            out.write(f"{_num(w)},{_num(p)}\n")


# Caption order: green, orange, blue, red, yellow, brown, light blue,
# purple, light blue, green.
DEFAULT_COLORS = (
    "#2ca02c", "#ff7f0e", "#1f77b4", "#d62728", "#e6c619",
    "#8c564b", "#7fbfff", "#9467bd", "#7fbfff", "#2ca02c",
)
DEFAULT_DASHES = (
    "8 3 2 3", "", "6 4", "2 3", "12 5", "4 2", "", "8 3 2 3", "6 4", "2 3",
)


@dataclass(frozen=True)
class SvgStyle:
    width: int = 640
    height: int = 400
    margin: int = 56
    stroke_width: float = 1.5
    colors: tuple[str, ...] = DEFAULT_COLORS
    dashes: tuple[str, ...] = DEFAULT_DASHES
    title: str | None = None


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(series: TimeSeries, style: SvgStyle | dict | None = None) -> str:
    """Standalone SVG with one polyline per substate over ``tau in [0, n_periods]``."""
    if len(series) == 0:
        raise ValueError("cannot plot an empty series")
    if style is None:
        style = SvgStyle()
    elif isinstance(style, dict):
        style = SvgStyle(**style)
    w, h, pad = style.width, style.height, style.margin
    plot_w, plot_h = w - 2 * pad - 90, h - 2 * pad
    tau_max = float(series.taus[-1]) or 1.0

    def x(tau):
        return pad + plot_w * tau / tau_max

    def y(p):
        return pad + plot_h * (1.0 - p)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]
    if style.title:
        parts.append(f'<text x="{w / 2:.1f}" y="{pad / 2:.1f}" text-anchor="middle">'
                     f'{_escape(style.title)}</text>')
    # axes and ticks
    parts.append(f'<g class="axes" stroke="black" stroke-width="1" fill="none">'
                 f'<path d="M{x(0):.2f},{y(1):.2f} V{y(0):.2f} H{x(tau_max):.2f}"/></g>')
    ticks = ['<g class="ticks" text-anchor="middle">']
    for frac in np.linspace(0.0, 1.0, 5):
        tau = frac * tau_max
        ticks.append(f'<line x1="{x(tau):.2f}" y1="{y(0):.2f}" x2="{x(tau):.2f}" '
                     f'y2="{y(0) + 4:.2f}" stroke="black"/>')
        ticks.append(f'<text x="{x(tau):.2f}" y="{y(0) + 18:.2f}">{tau:g}</text>')
    for p in (0.0, 0.25, 0.5, 0.75, 1.0):
        ticks.append(f'<line x1="{x(0) - 4:.2f}" y1="{y(p):.2f}" x2="{x(0):.2f}" '
                     f'y2="{y(p):.2f}" stroke="black"/>')
        ticks.append(f'<text x="{x(0) - 8:.2f}" y="{y(p) + 4:.2f}" text-anchor="end">{p:g}</text>')
    ticks.append("</g>")
    parts.extend(ticks)
    parts.append(f'<text x="{x(tau_max / 2):.2f}" y="{h - pad / 4:.2f}" '
                 f'text-anchor="middle">tau = t/T</text>')
    parts.append(f'<text x="{pad / 3:.2f}" y="{y(0.5):.2f}" text-anchor="middle" '
                 f'transform="rotate(-90 {pad / 3:.2f} {y(0.5):.2f})">|C_m|^2</text>')

    # curves
    parts.append('<g class="curves" fill="none">')
    for idx, twice_m in enumerate(series.spin.substates()):
        color = style.colors[idx % len(style.colors)]
        dash = style.dashes[idx % len(style.dashes)]
        pts = " ".join(f"{x(t):.3f},{y(p):.3f}"
                       for t, p in zip(series.taus, series.probabilities[:, idx]))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(f'<polyline data-m="{m_label(twice_m)}" stroke="{color}" '
                     f'stroke-width="{style.stroke_width:g}"{dash_attr} points="{pts}"/>')
    parts.append("</g>")

    # legend
    parts.append('<g class="legend">')
    lx = pad + plot_w + 16
    for idx, twice_m in enumerate(series.spin.substates()):
        ly = pad + 16 * idx
        color = style.colors[idx % len(style.colors)]
        dash = style.dashes[idx % len(style.dashes)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" '
                     f'stroke-width="{style.stroke_width:g}"{dash_attr}/>')
        parts.append(f'<text x="{lx + 30}" y="{ly + 4}">m = {_m_fraction(twice_m)}</text>')
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _m_fraction(twice_m: int) -> str:
    return str(twice_m // 2) if twice_m % 2 == 0 else f"{twice_m}/2"


def emit_svg(series: TimeSeries, destination, style: SvgStyle | dict | None = None) -> None:
    svg = render_svg(series, style)
    with _open_text(destination) as out:
        out.write(svg)


def output_dir() -> Path | None:
    """Default output directory from ``SPIN_RWA_OUTPUT_DIR``, if set."""
    value = os.environ.get("SPIN_RWA_OUTPUT_DIR")
    return Path(value) if value else None


def resolve_output(path: str | os.PathLike | None, default_name: str | None = None) -> Path | None:
    """Relative paths land in ``SPIN_RWA_OUTPUT_DIR`` when it is set.

    With no explicit path, ``default_name`` is used inside that directory;
    without the variable the result is None (write to stdout).
    """
    base = output_dir()
    if path is None:
        return base / default_name if base is not None and default_name else None
    path = Path(path)
    if base is not None and not path.is_absolute():
        return base / path
    return path

