"""Line-oriented JSON export of walk reports.

Each step is one record ``{"path":k,"seq":i,"point":[a,b,c],"norm":n,"dist":d}``;
a path that ended in a moat is followed by ``{"moat":true,"point":[...],"radius":r}``.
"""

import json
from typing import Any, Dict, Iterable, List, Optional, TextIO

from moatwalk.common.errors import ParseError
from moatwalk.common.models import MoatEvent, Path, PathStep, WalkReport
from moatwalk.lattice.classify import region_of


def _dumps(record: Dict[str, Any]) -> str:
    return json.dumps(record, separators=(",", ":"))


def walk_records(report: WalkReport) -> Iterable[str]:
    for path in report.paths:
        for seq, step in enumerate(path.steps):
            yield _dumps(
                {
                    "path": path.index,
                    "seq": seq,
                    "point": list(step.point),
                    "norm": step.norm,
                    "dist": step.distance,
                }
            )
        if path.moat is not None:
            yield _dumps(
                {"moat": True, "point": list(path.moat.point), "radius": path.moat.radius}
            )


def write_walk_jsonl(report: WalkReport, stream: TextIO) -> int:
    """Write ``report`` to ``stream``; returns the number of records written."""
    count = 0
    for line in walk_records(report):
        stream.write(line + "\n")
        count += 1
    return count


def _triple(value: Any, line: int) -> tuple:
    if (
        not isinstance(value, list)
        or len(value) != 3
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise ParseError(f"expected an integer triple, got {value!r}", line)
    return tuple(value)


def read_walk_jsonl(lines: Iterable[str]) -> List[Path]:
    """Rebuild the paths of a walk export. Blank lines are skipped."""
    paths: List[Path] = []
    current: Optional[Path] = None

    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        try:
            record = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", lineno) from e
        if not isinstance(record, dict):
            raise ParseError("expected a JSON object", lineno)

        if record.get("moat") is True:
            if current is None:
                raise ParseError("moat record before any path", lineno)
            try:
                radius = float(record["radius"])
            except (KeyError, TypeError, ValueError) as e:
                raise ParseError("moat record needs a numeric radius", lineno) from e
            current.moat = MoatEvent(
                path=current.index, point=_triple(record.get("point"), lineno), radius=radius
            )
            continue

        try:
            index = int(record["path"])
            seq = int(record["seq"])
            norm = int(record["norm"])
            dist = float(record["dist"])
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError("step record needs path, seq, norm and dist", lineno) from e
        point = _triple(record.get("point"), lineno)

        if current is None or current.index != index:
            if seq != 0:
                raise ParseError(f"path {index} does not start at seq 0", lineno)
            current = Path(index=index, region=region_of(point))
            paths.append(current)
        elif seq != len(current.steps):
            raise ParseError(
                f"path {index}: expected seq {len(current.steps)}, got {seq}", lineno
            )
        current.steps.append(PathStep(point=point, norm=norm, distance=dist))

    return paths
