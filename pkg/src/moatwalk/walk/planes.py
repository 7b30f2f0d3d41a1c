from functools import reduce
from math import gcd

from moatwalk.common.errors import DegenerateInputError
from moatwalk.common.models import GuidePlane, Path, Triple


def _sign_normalized(v: Triple) -> Triple:
    """Negate so the first nonzero component is positive."""
    for x in v:
        if x != 0:
            return v if x > 0 else (-v[0], -v[1], -v[2])
    return v


def primitive(v: Triple) -> Triple:
    g = reduce(gcd, (abs(x) for x in v))
    if g == 0:
        return v
    return (v[0] // g, v[1] // g, v[2] // g)


def cross(u: Triple, v: Triple) -> Triple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def forward_direction(plane: GuidePlane) -> Triple:
    """In-plane direction orthogonal to the normal and the z-axis, pointing outward.

    The direction is ``normal x z`` = (n_y, -n_x, 0), oriented to a positive
    component sum; a normal parallel to z falls back to +x.
    """
    nx, ny, _ = plane.normal
    d = (ny, -nx, 0)
    if d == (0, 0, 0):
        return (1, 0, 0)
    total = sum(d)
    if total < 0:
        return (-d[0], -d[1], 0)
    if total == 0:
        return _sign_normalized(d)
    return d


def align_plane(plane: GuidePlane, reference: GuidePlane) -> GuidePlane:
    """Same plane, with the normal turned to agree with ``reference``.

    Perpendicular normals keep their sign-normalized orientation.
    """
    if plane.side(reference.normal) < 0:
        return plane.flipped()
    return plane


def build_guide_plane(path: Path, prev: GuidePlane) -> GuidePlane:
    """Plane through the origin and the two path points farthest from ``prev``.

    Returns ``prev`` for single-point paths, when every point lies on ``prev``,
    or when the two chosen points are collinear with the origin.
    """
    if not path.steps:
        raise DegenerateInputError("cannot build a guide plane from an empty path")

    unique = sorted(set(path.points))
    if len(unique) < 2:
        return prev

    ranked = sorted(unique, key=lambda p: (-abs(prev.side(p)), p))
    first, second = ranked[0], ranked[1]
    if prev.side(first) == 0:
        return prev

    normal = primitive(cross(first, second))
    if normal == (0, 0, 0):
        return prev
    return GuidePlane(normal=_sign_normalized(normal), index=prev.index + 1)
