"""
SVG 1.1 snapshots of a trace, one file per step.

The markup is written by hand with fixed number formatting, so a given
trace always renders to the same bytes.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .scenario import from_dict
from .trace import Trace

PX_PER_UNIT = 40.0
MAX_WIDTH_PX = 1000.0

STYLE = {
    "env": 'fill="#fbfbf8" stroke="#333333" stroke-width="1"',
    "static": 'fill="#7a7a7a" stroke="#404040" stroke-width="1"',
    "static_unknown": 'fill="#d6d6d6" stroke="#a0a0a0" stroke-width="1" stroke-dasharray="4 3"',
    "zone": 'fill="#f2a65a" fill-opacity="0.35" stroke="#d9731a" stroke-width="1.2" fill-rule="evenodd"',
    "object": 'fill="#3b6fb6" fill-opacity="0.85" stroke="#1d3f73" stroke-width="1"',
    "robot": 'fill="#2e9e5b" stroke="#145c33" stroke-width="1"',
    "path": 'fill="none" stroke="#2e9e5b" stroke-width="1.5" stroke-dasharray="5 3"',
    "target": 'fill="none" stroke="#c0392b" stroke-width="2"',
    "goal": 'fill="none" stroke="#8e44ad" stroke-width="2"',
    "text": 'font-family="monospace" font-size="12" fill="#222222"',
}


def _fmt(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Canvas:
    def __init__(self, bounds):
        self.xmin, self.ymin, self.xmax, self.ymax = bounds
        w = self.xmax - self.xmin
        self.scale = min(PX_PER_UNIT, MAX_WIDTH_PX / w)
        self.width = w * self.scale
        self.height = (self.ymax - self.ymin) * self.scale + 20.0

    def pt(self, x, y) -> str:
        return f"{_fmt((x - self.xmin) * self.scale)},{_fmt((self.ymax - y) * self.scale)}"

    def ring(self, pts) -> str:
        return "M" + " L".join(self.pt(x, y) for x, y in pts) + " Z"

    def polygon(self, pts, style: str) -> str:
        return f'<path d="{self.ring(pts)}" {style}/>'


def render_step(trace: Trace, t: int, sc=None) -> str:
    """SVG document for step ``t`` of the trace."""
    sc = from_dict(trace.scenario) if sc is None else sc
    rec = trace.steps[t]
    cv = _Canvas(sc.bounds)
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(cv.width)}" '
        f'height="{_fmt(cv.height)}" viewBox="0 0 {_fmt(cv.width)} {_fmt(cv.height)}">',
        f"<title>{escape(sc.name or 'scenario')} step {t}</title>",
        cv.polygon([(cv.xmin, cv.ymin), (cv.xmax, cv.ymin), (cv.xmax, cv.ymax), (cv.xmin, cv.ymax)], STYLE["env"]),
    ]
    known = set(rec.get("known_static", []))
    for i, s in enumerate(sc.static):
        out.append(cv.polygon(s.vertices, STYLE["static" if i in known else "static_unknown"]))
    for z in rec["zones"]:
        d = cv.ring(z["exterior"]) + "".join(" " + cv.ring(h) for h in z["holes"])
        out.append(f'<path d="{d}" {STYLE["zone"]}/>')
    specs = {o.id: o for o in sc.objects}
    for o in rec["objects"]:
        fp = specs[o["id"]].footprint
        out.append(cv.polygon(fp.placed((o["x"], o["y"])), STYLE["object"]))

    pos = trace.positions()[: t + 1]
    if len(pos) > 1:
        pts = " ".join(cv.pt(x, y) for x, y in pos)
        out.append(f'<polyline points="{pts}" {STYLE["path"]}/>')
    gx, gy = sc.robot.goal
    r = max(cv.scale * 0.25, 4.0)
    gp = cv.pt(gx, gy).split(",")
    out.append(f'<circle cx="{gp[0]}" cy="{gp[1]}" r="{_fmt(r)}" {STYLE["goal"]}/>')
    x, y = rec["robot"]
    if sc.robot.footprint is None:
        rp = cv.pt(x, y).split(",")
        out.append(f'<circle cx="{rp[0]}" cy="{rp[1]}" r="4" {STYLE["robot"]}/>')
    else:
        out.append(cv.polygon(sc.robot.footprint.placed((x, y)), STYLE["robot"]))
    plan = rec["plan"]
    label = f"t={t}"
    if plan is not None:
        qx, qy = plan["target"]
        qp = cv.pt(qx, qy).split(",")
        qx_px, qy_px = float(qp[0]), float(qp[1])
        out.append(
            f'<path d="M{_fmt(qx_px - 5)},{_fmt(qy_px - 5)} L{_fmt(qx_px + 5)},{_fmt(qy_px + 5)} '
            f'M{_fmt(qx_px - 5)},{_fmt(qy_px + 5)} L{_fmt(qx_px + 5)},{_fmt(qy_px - 5)}" {STYLE["target"]}/>'
        )
        label += f"  mode={plan['mode']}  speed={plan['speed']:.3f}"
    elif trace.terminal is not None and t == len(trace.steps) - 1:
        label += f"  outcome={trace.terminal['outcome']}"
    if rec["collisions"]:
        label += "  collision=" + ",".join(c["id"] for c in rec["collisions"])
    out.append(f'<text x="4" y="{_fmt(cv.height - 6)}" {STYLE["text"]}>{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def parse_range(spec: str, n_steps: int) -> range:
    """'a..b' (inclusive), 'a' or 'all' into a step range clipped to the trace."""
    spec = spec.strip()
    if spec == "all":
        return range(n_steps)
    if ".." in spec:
        a, b = spec.split("..", 1)
        lo = int(a) if a else 0
        hi = int(b) if b else n_steps - 1
    else:
        lo = hi = int(spec)
    if lo < 0 or hi < lo or hi >= n_steps:
        raise ValueError(f"step range {spec!r} outside 0..{n_steps - 1}")
    return range(lo, hi + 1)


def render_svg(trace: Trace, steps, out_dir) -> list[Path]:
    """Write ``step_NNNN.svg`` for each requested step; returns the paths.

    Raises
    ------
    OSError
        The output directory cannot be created or written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if isinstance(steps, str):
        steps = parse_range(steps, len(trace.steps))
    width = max(4, int(math.log10(max(len(trace.steps), 1))) + 1)
    sc = from_dict(trace.scenario)
    paths = []
    for t in steps:
        p = out_dir / f"step_{t:0{width}d}.svg"
        p.write_text(render_step(trace, t, sc))
        paths.append(p)
    return paths
