"""Self-contained SVG rendering of step Hamiltonians with optional reference curves.

Plain string assembly, no plotting dependency: steps come out as horizontal
segments, the reference as a sampled polyline, axes with a handful of ticks.
Output is deterministic for identical inputs.
"""

import math

import numpy as np

from .closedforms import HamiltonianFunction

_W, _H = 720, 460
_ML, _MR, _MT, _MB = 64, 16, 20, 44


def _fmt(x):
    return f"{x:.2f}"


def _ticks(lo, hi, n=6):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if raw <= m * mag:
            step = m * mag
            break
    t0 = math.ceil(lo / step) * step
    out = []
    t = t0
    while t <= hi + 1e-9 * step:
        out.append(round(t, 12))
        t += step
    return out


def render_svg(step, reference=None, path=None, title="", log_y=False,
               n_ref_samples=400):
    """Render a StepHamiltonian's h11 profile (and an optional reference curve).

    Parameters
    ----------
    step : StepHamiltonian
    reference : callable t -> h11, HamiltonianFunction, or None
    path : write the document here when given
    log_y : plot log10(h11) on the vertical axis

    Returns the SVG document as a string.
    """
    if step.n_steps == 0:
        raise ValueError("cannot render an empty step Hamiltonian")
    s = step.step_length
    t_max = step.n_steps * s
    h = np.asarray(step.h11, dtype=float)

    if reference is None:
        ref_fn = None
    elif isinstance(reference, HamiltonianFunction):
        ref_fn = reference.h11
    elif callable(reference):
        ref_fn = reference
    else:
        raise TypeError("reference must be callable, HamiltonianFunction, or None")
    ref_t = ref_y = None
    if ref_fn is not None:
        lo = 1e-9 * t_max if getattr(reference, "domain_open", False) else 0.0
        ref_t = np.linspace(lo, t_max, n_ref_samples)
        ref_y = np.asarray(ref_fn(ref_t), dtype=float)

    ys = [h]
    if ref_y is not None:
        ys.append(ref_y)
    y_all = np.concatenate(ys)
    if log_y:
        y_all = np.log10(np.maximum(y_all, 1e-300))
        h_plot = np.log10(np.maximum(h, 1e-300))
        ref_plot = np.log10(np.maximum(ref_y, 1e-300)) if ref_y is not None else None
    else:
        h_plot = h
        ref_plot = ref_y
    y_lo, y_hi = float(np.min(y_all)), float(np.max(y_all))
    pad = 0.05 * (y_hi - y_lo or 1.0)
    y_lo -= pad
    y_hi += pad

    def X(t):
        return _ML + (t / t_max) * (_W - _ML - _MR)

    def Y(y):
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_W // 2}" y="14" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{title}</text>'
        )
    # axes
    parts.append(
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" '
        'stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" '
        'stroke="black" stroke-width="1"/>'
    )
    for t in _ticks(0.0, t_max):
        x = X(t)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_H - _MB}" x2="{_fmt(x)}" '
            f'y2="{_H - _MB + 4}" stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_H - _MB + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="10">{t:g}</text>'
        )
    for y in _ticks(y_lo, y_hi):
        yy = Y(y)
        parts.append(
            f'<line x1="{_ML - 4}" y1="{_fmt(yy)}" x2="{_ML}" y2="{_fmt(yy)}" '
            'stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_ML - 6}" y="{_fmt(yy + 3)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="10">{y:g}</text>'
        )
    parts.append(
        f'<text x="{(_ML + _W - _MR) // 2}" y="{_H - 8}" text-anchor="middle" '
        'font-family="sans-serif" font-size="11">t</text>'
    )
    ylabel = "log10 h11" if log_y else "h11"
    parts.append(
        f'<text x="12" y="{(_MT + _H - _MB) // 2}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11" '
        f'transform="rotate(-90 12 {(_MT + _H - _MB) // 2})">{ylabel}</text>'
    )
    # reference curve under the steps
    if ref_plot is not None:
        pts = " ".join(f"{_fmt(X(t))},{_fmt(Y(y))}" for t, y in zip(ref_t, ref_plot))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="#e6821e" '
            'stroke-width="1.6"/>'
        )
    # horizontal step segments
    for n in range(step.n_steps):
        y = _fmt(Y(h_plot[n]))
        parts.append(
            f'<line x1="{_fmt(X(n * s))}" y1="{y}" x2="{_fmt(X((n + 1) * s))}" '
            f'y2="{y}" stroke="black" stroke-width="1.8"/>'
        )
    parts.append("</svg>")
    doc = "\n".join(parts) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(doc)
    return doc
