import pytest

from moatwalk.common.errors import DegenerateInputError
from moatwalk.common.models import GuidePlane, Path, PathStep
from moatwalk.walk.planes import (
    align_plane,
    build_guide_plane,
    cross,
    forward_direction,
    primitive,
)


def make_path(*points):
    return Path(
        index=1,
        region="P1",
        steps=[
            PathStep(point=p, norm=sum(v * v for v in p), distance=0.0 if i == 0 else 1.0)
            for i, p in enumerate(points)
        ],
    )


class TestVectorHelpers:

    def test_cross(self):
        """Test the cross product of two lattice vectors."""
        assert cross((5, 1, 1), (4, 3, 2)) == (-1, -6, 11)

    @pytest.mark.parametrize(
        "vector,expected",
        [
            ((2, 4, -6), (1, 2, -3)),
            ((0, 0, 7), (0, 0, 1)),
            ((3, 5, 7), (3, 5, 7)),
            ((0, 0, 0), (0, 0, 0)),
        ],
    )
    def test_primitive(self, vector, expected):
        """Test reduction by the gcd of the components."""
        assert primitive(vector) == expected


class TestForwardDirection:

    @pytest.mark.parametrize(
        "normal,expected",
        [
            ((-1, 1, 0), (1, 1, 0)),
            ((1, -1, 0), (1, 1, 0)),
            ((1, 6, -11), (6, -1, 0)),
            ((1, 1, 0), (1, -1, 0)),
            ((0, 0, 5), (1, 0, 0)),
        ],
    )
    def test_forward_direction(self, normal, expected):
        """Test the in-plane direction orthogonal to the normal and the z-axis."""
        assert forward_direction(GuidePlane(normal=normal)) == expected

    def test_forward_lies_in_plane(self):
        """Test that the forward direction is orthogonal to the normal."""
        for normal in [(-1, 1, 0), (1, 6, -11), (3, -2, 5), (0, 1, 1)]:
            d = forward_direction(GuidePlane(normal=normal))
            assert sum(a * b for a, b in zip(normal, d)) == 0


class TestAlignPlane:

    def test_agreeing_normal_kept(self):
        """Test that a normal with positive dot product against the reference is kept."""
        plane = GuidePlane(normal=(1, 6, -11), index=1)
        assert align_plane(plane, GuidePlane.initial()) == plane

    def test_opposing_normal_flipped(self):
        """Test that an opposing normal is negated and the index kept."""
        aligned = align_plane(GuidePlane(normal=(1, -1, 0), index=3), GuidePlane.initial())
        assert aligned.normal == (-1, 1, 0)
        assert aligned.index == 3

    def test_perpendicular_normal_kept(self):
        """Test that a perpendicular normal keeps its orientation."""
        plane = GuidePlane(normal=(0, 0, 1), index=2)
        assert align_plane(plane, GuidePlane.initial()) == plane


class TestBuildGuidePlane:

    def test_plane_through_farthest_points(self):
        """Test the plane through (4, 3, 2) and (5, 1, 1)."""
        plane = build_guide_plane(make_path((4, 3, 2), (5, 1, 1)), GuidePlane.initial())
        assert plane.normal == (1, 6, -11)
        assert plane.index == 1
        assert plane.side((4, 3, 2)) == 0
        assert plane.side((5, 1, 1)) == 0

    def test_picks_two_farthest(self):
        """Test that points closer to the previous plane are ignored."""
        path = make_path((1, 1, 1), (3, 1, 1), (4, 3, 2), (5, 1, 1))
        plane = build_guide_plane(path, GuidePlane.initial())
        # (5,1,1) and (3,1,1) are farthest from x = y
        assert plane.normal == (0, 1, -1)
        assert plane.side((5, 1, 1)) == 0
        assert plane.side((3, 1, 1)) == 0

    def test_single_point_path(self):
        """Test that a single-point path keeps the previous plane."""
        prev = GuidePlane.initial()
        assert build_guide_plane(make_path((3, 1, 1)), prev) == prev

    def test_points_on_previous_plane(self):
        """Test that a path lying on the previous plane keeps it."""
        prev = GuidePlane.initial()
        assert build_guide_plane(make_path((1, 1, 1), (2, 2, 3)), prev) == prev

    def test_collinear_points(self):
        """Test that points collinear with the origin keep the previous plane."""
        prev = GuidePlane.initial()
        assert build_guide_plane(make_path((2, 1, 1), (4, 2, 2)), prev) == prev

    def test_empty_path(self):
        """Test that an empty path is a degenerate input."""
        with pytest.raises(DegenerateInputError):
            build_guide_plane(Path(index=1, region="P1"), GuidePlane.initial())
