"""Dotted-chart rendering of a modeling session as a standalone SVG.

One row per model element, ordered by first appearance; one dot per event,
colored by what the event did (create, move, delete, name). Time runs left
to right and the last event of the session is pinned to the right edge, so
a session that used the whole window fills the whole width.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

from .eventlog import EventClass, EventLog


def _default_colors() -> dict[str, str]:
    return {
        "create": "green",
        "move": "blue",
        "delete": "red",
        "name": "orange",
    }


@dataclass
class PPMChartSpec:
    """Geometry and palette for a chart. Times are seconds, sizes pixels."""

    window: float = 3600.0
    width: float = 1200.0
    height: float | None = None  # None: rows * row_height
    row_height: float = 20.0
    colors: dict[str, str] = field(default_factory=_default_colors)


_CLASS_KEY = {
    EventClass.CREATE: "create",
    EventClass.MOVE: "move",
    EventClass.DELETE: "delete",
    EventClass.OTHER: "name",
}


def _num(value: float) -> str:
    return f"{value:.2f}"


def render_ppmchart(log: EventLog, spec: PPMChartSpec | None = None) -> str:
    if spec is None:
        spec = PPMChartSpec()
    if not log.events:
        raise ValueError("cannot chart an empty session")
    if log.has_reconnects():
        raise ValueError("expand reconnect events before charting")

    t_first = log.events[0].timestamp
    t_last = log.events[-1].timestamp
    span = (t_last - t_first).total_seconds()
    if span > spec.window:
        raise ValueError(
            f"session spans {span:.0f}s but the window is {spec.window:.0f}s; "
            "pass a larger window"
        )

    # Row per object, in order of first appearance.
    row_of: dict[str, int] = {}
    for ev in log.events:
        if ev.object_id not in row_of:
            row_of[ev.object_id] = len(row_of)

    rows = len(row_of)
    height = spec.height if spec.height is not None else rows * spec.row_height

    def x_of(ts) -> float:
        return spec.width * (1.0 - (t_last - ts).total_seconds() / spec.window)

    dots: dict[str, list[str]] = {obj: [] for obj in row_of}
    first_x: dict[str, float] = {}
    for ev in log.events:
        x = x_of(ev.timestamp)
        obj = ev.object_id
        if obj not in first_x:
            first_x[obj] = x
        y = (row_of[obj] + 0.5) * (height / rows)
        color = spec.colors[_CLASS_KEY[ev.event_class]]
        title = f"{ev.seq} {ev.kind.value}"
        dots[obj].append(
            f'    <circle cx="{_num(x)}" cy="{_num(y)}" r="3" '
            f"fill={quoteattr(color)}><title>{escape(title)}</title></circle>"
        )

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(spec.width)}" '
        f'height="{_num(height)}" viewBox="0 0 {_num(spec.width)} {_num(height)}">',
        f'  <rect width="{_num(spec.width)}" height="{_num(height)}" fill="white"/>',
    ]
    for obj, row in row_of.items():
        y = (row + 0.5) * (height / rows)
        lines.append(f"  <g class=\"row\" data-object={quoteattr(obj)}>")
        lines.append(
            f'    <line x1="{_num(first_x[obj])}" y1="{_num(y)}" '
            f'x2="{_num(spec.width)}" y2="{_num(y)}" stroke="#ddd"/>'
        )
        lines.extend(dots[obj])
        lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
