"""Deterministic CSV, JSON and SVG renderings of trajectories."""

from __future__ import annotations

import json

from .integrator import Trajectory

COLUMNS = (
    "t", "P", "B", "M", "Y", "F", "pi", "R_B", "T_B", "I_B", "i_B", "T_P", "I_P", "i_P",
    "ihat_P", "ihat_B", "attractiveness", "B_star", "W", "L", "l", "p_M", "D_M", "m_B",
    "lambda_M", "lawlessness", "integrity",
)


def fmt(x: float) -> str:
    s = format(x, ".9g")
    # normalise negative zero
    return "0" if s == "-0" else s


def rows(traj: Trajectory) -> list[list[float]]:
    out = []
    for s in traj.samples:
        st, aux = s.state, s.aux
        values = {"t": s.t, "P": st.P, "B": st.B, "M": st.M,
                  "ihat_P": st.ihat_P, "ihat_B": st.ihat_B, **aux.as_dict()}
        out.append([values[c] for c in COLUMNS])
    return out


def to_csv(traj: Trajectory) -> str:
    lines = [",".join(COLUMNS)]
    lines += [",".join(fmt(v) for v in row) for row in rows(traj)]
    return "\n".join(lines) + "\n"


def to_json(traj: Trajectory) -> str:
    doc = {
        "name": traj.name,
        "config": {"dt": traj.config.dt, "method": traj.config.method,
                   "sample_interval": traj.config.sample_interval},
        "columns": list(COLUMNS),
        "samples": [{c: float(fmt(v)) for c, v in zip(COLUMNS, row)} for row in rows(traj)],
    }
    return json.dumps(doc, indent=1) + "\n"


def _polyline(xs, ys, x0, y0, w, h, tmax, color):
    pts = " ".join(f"{x0 + w * x / tmax:.2f},{y0 + h * (1 - y):.2f}" for x, y in zip(xs, ys))
    return f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'


def to_svg(traj: Trajectory) -> str:
    """Two stacked line charts: population fractions and the two indices."""
    t = traj.times
    N = traj.samples[0].params.N
    tmax = float(t[-1]) or 1.0
    W, H, pad, ph = 640, 480, 50, 170
    panels = [
        ("population fraction", [("P", traj.series("P") / N, "#2E86AB"),
                                 ("B", traj.series("B") / N, "#E74C3C"),
                                 ("M", traj.series("M") / N, "#374151")]),
        ("index", [("lawlessness", traj.series("lawlessness"), "#A23B72"),
                   ("integrity", traj.series("integrity"), "#6A994E")]),
    ]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
             f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">',
             f'<rect width="{W}" height="{H}" fill="white"/>',
             f'<text x="{pad}" y="20" font-size="14">{traj.name}</text>']
    for i, (ylabel, lines) in enumerate(panels):
        y0 = 35 + i * (ph + 50)
        pw = W - 2 * pad
        parts.append(f'<rect x="{pad}" y="{y0}" width="{pw}" height="{ph}" fill="none" stroke="#999"/>')
        parts.append(f'<text x="8" y="{y0 + ph / 2:.0f}">{ylabel}</text>')
        parts.append(f'<text x="{pad - 10}" y="{y0 + 4}" text-anchor="end">1</text>')
        parts.append(f'<text x="{pad - 10}" y="{y0 + ph + 4}" text-anchor="end">0</text>')
        parts.append(f'<text x="{pad}" y="{y0 + ph + 15}">0</text>')
        parts.append(f'<text x="{pad + pw}" y="{y0 + ph + 15}" text-anchor="end">{fmt(tmax)} months</text>')
        for j, (label, ys, color) in enumerate(lines):
            parts.append(_polyline(t, ys, pad, y0, pw, ph, tmax, color))
            parts.append(f'<text x="{pad + 10 + 90 * j}" y="{y0 + 14}" fill="{color}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
