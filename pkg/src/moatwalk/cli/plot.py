"""Rendering of walk exports and moat components.

Two inputs are recognised by content: walk JSONL (lines starting with ``{``)
and moat CSV (header ``a,b[,c],norm,bfs_depth``, optionally preceded by ``#``
comment lines). Three-dimensional points are drawn projected onto the plane
orthogonal to (1, 1, 1).
"""

import io
from math import sqrt
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np
from matplotlib import rc_context
from matplotlib.figure import Figure

from moatwalk.common.errors import ParseError
from moatwalk.common.models import MoatPoints, Path
from moatwalk.walk.export import read_walk_jsonl

PLOT_MODES = ("2d-svg", "3d-csv")

# fixed salt so element ids, and therefore the SVG bytes, repeat across runs
_SVG_RC = {"svg.hashsalt": "moatwalk", "svg.fonttype": "none"}

_U = (1 / sqrt(2), -1 / sqrt(2), 0.0)
_V = (1 / sqrt(6), 1 / sqrt(6), -2 / sqrt(6))
_MOAT_HEADERS = {
    "a,b,norm,bfs_depth": 2,
    "a,b,c,norm,bfs_depth": 3,
}

PlotInput = Union[MoatPoints, List[Path]]


def project(point: Sequence[int]) -> Tuple[float, float]:
    """Coordinates of ``point`` in an orthonormal basis of the plane x + y + z = 0."""
    if len(point) == 2:
        return float(point[0]), float(point[1])
    u = sum(p * e for p, e in zip(point, _U))
    v = sum(p * e for p, e in zip(point, _V))
    return u, v


def _parse_moat_csv(lines: List[Tuple[int, str]]) -> MoatPoints:
    header_no, header = lines[0]
    dimension = _MOAT_HEADERS.get(header.replace(" ", ""))
    if dimension is None:
        raise ParseError(f"unrecognised header {header!r}", header_no)

    width = dimension + 2
    points = []
    for lineno, text in lines[1:]:
        fields = text.split(",")
        if len(fields) != width:
            raise ParseError(f"expected {width} columns, got {len(fields)}", lineno)
        try:
            values = [int(f) for f in fields]
        except ValueError as e:
            raise ParseError(f"non-integer field in {text!r}", lineno) from e
        points.append(tuple(values[:dimension]))
    return MoatPoints(dimension=dimension, points=points)


def load_plot_input(lines: Iterable[str]) -> PlotInput:
    """Parse a walk export into paths, or a moat CSV into :class:`MoatPoints`."""
    raw = list(lines)
    meaningful = [
        (i, text.strip())
        for i, text in enumerate(raw, start=1)
        if text.strip() and not text.lstrip().startswith("#")
    ]
    if not meaningful or meaningful[0][1].startswith("{"):
        return read_walk_jsonl(raw)
    return _parse_moat_csv(meaningful)


def render_figure(data: PlotInput) -> Figure:
    """Draw walk paths as lines (id ``path-<index>``) or moat members as dots."""
    fig = Figure(figsize=(8, 8))
    ax = fig.subplots()
    ax.axhline(0.0, color="gray", linewidth=0.5)
    ax.axvline(0.0, color="gray", linewidth=0.5)

    if isinstance(data, MoatPoints):
        if data.points:
            xy = np.array([project(p) for p in data.points])
            ax.scatter(xy[:, 0], xy[:, 1], s=6, color="black", gid="moat-members")
        if data.dimension == 2:
            ax.set_xlabel("a")
            ax.set_ylabel("b")
    else:
        for path in data:
            if len(path.steps) < 2:
                continue
            xy = np.array([project(p) for p in path.points])
            ax.plot(xy[:, 0], xy[:, 1], color="black", linewidth=0.6, gid=f"path-{path.index}")

    ax.set_aspect("equal", adjustable="datalim")
    return fig


def _render_svg(data: PlotInput) -> str:
    buf = io.StringIO()
    with rc_context(_SVG_RC):
        render_figure(data).savefig(buf, format="svg", metadata={"Date": None})
    return buf.getvalue()


def _render_csv(data: PlotInput) -> str:
    rows = ["x,y,z,path_index"]
    if isinstance(data, MoatPoints):
        for p in data.points:
            a, b, c = (p[0], p[1], 0) if data.dimension == 2 else p
            rows.append(f"{a},{b},{c},0")
    else:
        for path in data:
            for a, b, c in path.points:
                rows.append(f"{a},{b},{c},{path.index}")
    return "\n".join(rows) + "\n"


def emit_plot(lines: Iterable[str], mode: str) -> str:
    """Render a walk export or moat CSV as an SVG drawing or a point-cloud CSV."""
    if mode not in PLOT_MODES:
        raise ValueError(f"unknown plot mode {mode!r}")
    data = load_plot_input(lines)
    if mode == "2d-svg":
        return _render_svg(data)
    return _render_csv(data)
