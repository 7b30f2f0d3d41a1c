from collections import deque
from itertools import product
from math import isqrt

import pytest
from prometheus_client import REGISTRY
from pydantic import ValidationError

from moatwalk.common.errors import CapacityError, InvalidStartError
from moatwalk.common.models import MoatQuery
from moatwalk.moat.explore import (
    NORM_BOUND_CAP,
    explore,
    moat_profile,
    neighbour_offsets,
    region_primes,
)


def oracle_is_prime(point, is_prime):
    """Lattice primality from the coordinate pattern, using a plain primality test."""
    norm = sum(v * v for v in point)
    nonzero = [abs(v) for v in point if v != 0]
    if len(nonzero) == len(point):
        return is_prime(norm) and (len(point) == 2 or norm % 8 != 7)
    if len(nonzero) == 1:
        modulus = 4 if len(point) == 2 else 8
        return is_prime(nonzero[0]) and nonzero[0] % modulus == modulus - 1
    if len(point) == 3 and len(nonzero) == 2:
        return is_prime(norm)
    return False


def oracle_component(dimension, k2, start, norm_bound, is_prime):
    """Plain BFS; returns {point: depth} and whether the frontier closed inside the bound."""
    r = isqrt(k2)
    steps = [
        d
        for d in product(range(-r, r + 1), repeat=dimension)
        if 0 < sum(v * v for v in d) <= k2
    ]
    depth = {tuple(start): 0}
    queue = deque([tuple(start)])
    exhausted = True
    while queue:
        p = queue.popleft()
        for d in steps:
            q = tuple(a + b for a, b in zip(p, d))
            if sum(v * v for v in q) > norm_bound:
                exhausted = False
                continue
            if q not in depth and oracle_is_prime(q, is_prime):
                depth[q] = depth[p] + 1
                queue.append(q)
    return depth, exhausted


def components_count(dimension):
    return REGISTRY.get_sample_value(
        "moatwalk_components_total", {"dimension": str(dimension)}
    ) or 0.0


class TestNeighbourOffsets:

    @pytest.mark.parametrize(
        "dimension,k2,count",
        [(2, 1, 4), (2, 2, 8), (2, 4, 12), (3, 1, 6), (3, 2, 18), (3, 3, 26)],
    )
    def test_counts(self, dimension, k2, count):
        """Test the number of lattice steps within each bound."""
        offsets = neighbour_offsets(dimension, k2)
        assert offsets.shape == (count, dimension)

    def test_sorted_and_bounded(self):
        """Test that offsets are lexicographically sorted and within the bound."""
        offsets = neighbour_offsets(3, 5)
        rows = [tuple(o) for o in offsets.tolist()]
        assert rows == sorted(rows)
        assert all(0 < sum(v * v for v in o) <= 5 for o in rows)

    @pytest.mark.parametrize("dimension,k2", [(1, 2), (4, 2), (2, 0)])
    def test_invalid(self, dimension, k2):
        """Test that only two or three dimensions and positive bounds are accepted."""
        with pytest.raises(ValueError):
            neighbour_offsets(dimension, k2)


class TestExplore:

    def test_smallest_step_moat(self, table_1e4):
        """Test that steps of length sqrt(2) from 1 + i close well inside the bound."""
        component = explore(
            MoatQuery(dimension=2, k2=2, start=(1, 1), norm_bound=10**4), table_1e4
        )
        assert component.frontier_exhausted
        assert component.status == "exhausted"
        assert component.members[0] == (1, 1)
        assert component.depths[0] == 0
        assert (1, 2) in component.members
        assert component.farthest_norm < 10**4

    @pytest.mark.parametrize("k2", [2, 4, 10, 200])
    def test_matches_plain_bfs_2d(self, k2, prime_oracle):
        """Test members, depths and closure against a plain BFS."""
        expected, exhausted = oracle_component(2, k2, (1, 1), 50, prime_oracle)
        component = explore(MoatQuery(dimension=2, k2=k2, start=(1, 1), norm_bound=50))

        assert dict(zip(component.members, component.depths)) == expected
        assert component.members == sorted(expected, key=lambda p: (expected[p], p))
        assert component.frontier_exhausted == exhausted

    @pytest.mark.parametrize("k2", [1, 2, 3, 4])
    def test_matches_plain_bfs_3d(self, k2, prime_oracle):
        """Test three-dimensional members and depths against a plain BFS."""
        expected, exhausted = oracle_component(3, k2, (1, 1, 1), 500, prime_oracle)
        component = explore(MoatQuery(dimension=3, k2=k2, start=(1, 1, 1), norm_bound=500))

        assert dict(zip(component.members, component.depths)) == expected
        assert component.frontier_exhausted == exhausted

    def test_farthest(self, table_1e4):
        """Test that the farthest member has the largest norm, smallest on ties."""
        component = explore(
            MoatQuery(dimension=2, k2=4, start=(1, 1), norm_bound=2000), table_1e4
        )
        norms = [sum(v * v for v in m) for m in component.members]
        assert component.farthest_norm == max(norms)
        assert component.farthest == min(
            m for m, n in zip(component.members, norms) if n == max(norms)
        )

    def test_nested_in_step_bound(self, table_1e4):
        """Test that a longer step bound only enlarges the component."""
        small, large = (
            explore(MoatQuery(dimension=2, k2=k2, start=(1, 1), norm_bound=3000), table_1e4)
            for k2 in (4, 8)
        )
        assert set(small.members) <= set(large.members)

    def test_swap_symmetry(self, table_1e4):
        """Test that the component of 1 + i is symmetric under a <-> b."""
        component = explore(
            MoatQuery(dimension=2, k2=4, start=(1, 1), norm_bound=3000), table_1e4
        )
        members = set(component.members)
        assert members == {(b, a) for a, b in members}

    def test_closed_component_has_no_prime_neighbours_outside(self, table_1e4, prime_oracle):
        """Test that no prime within one step of an exhausted component is left out."""
        component = explore(
            MoatQuery(dimension=2, k2=2, start=(1, 1), norm_bound=10**4), table_1e4
        )
        members = set(component.members)
        offsets = [tuple(o) for o in neighbour_offsets(2, 2).tolist()]
        for a, b in members:
            for da, db in offsets:
                q = (a + da, b + db)
                if q not in members:
                    assert not oracle_is_prime(q, prime_oracle)

    def test_truncated_component_is_inconclusive(self):
        """Test that reaching the norm bound is never reported as a moat."""
        component = explore(MoatQuery(dimension=2, k2=2, start=(1, 1), norm_bound=5))
        assert not component.frontier_exhausted
        assert component.status == "inconclusive"
        assert all(sum(v * v for v in m) <= 5 for m in component.members)

    def test_counts_components(self):
        """Test that each exploration increments the per-dimension counter."""
        before = components_count(3)
        explore(MoatQuery(dimension=3, k2=2, start=(1, 1, 1), norm_bound=50))
        assert components_count(3) == before + 1

    @pytest.mark.parametrize(
        "query",
        [
            MoatQuery(dimension=2, k2=2, start=(2, 2), norm_bound=100),
            MoatQuery(dimension=2, k2=2, start=(1, 1), norm_bound=1),
            MoatQuery(dimension=3, k2=2, start=(1, 1, 2), norm_bound=100),
            MoatQuery(dimension=3, k2=2, start=(0, 0, 5), norm_bound=100),
        ],
    )
    def test_invalid_start(self, query):
        """Test that composite starts and starts beyond the bound are rejected."""
        with pytest.raises(InvalidStartError):
            explore(query)

    @pytest.mark.parametrize("dimension,start", [(2, (1, 1)), (3, (1, 1, 1))])
    def test_capacity(self, dimension, start):
        """Test that norm bounds above the dimension's limit are refused."""
        query = MoatQuery(
            dimension=dimension, k2=2, start=start, norm_bound=NORM_BOUND_CAP[dimension] + 1
        )
        with pytest.raises(CapacityError):
            explore(query)

    @pytest.mark.parametrize(
        "fields",
        [
            {"dimension": 4, "k2": 2, "start": (1, 1, 1, 1), "norm_bound": 100},
            {"dimension": 2, "k2": 2, "start": (1, 1, 1), "norm_bound": 100},
            {"dimension": 2, "k2": 0, "start": (1, 1), "norm_bound": 100},
            {"dimension": 2, "k2": 2, "start": (1, 1), "norm_bound": 0},
        ],
    )
    def test_invalid_query(self, fields):
        """Test that malformed queries fail validation."""
        with pytest.raises(ValidationError):
            MoatQuery(**fields)

    def test_step_longer_than_region_2d(self, prime_oracle):
        """Test that a step of length 1000 joins every Gaussian prime of norm <= 50."""
        component = explore(MoatQuery(dimension=2, k2=10**6, start=(1, 1), norm_bound=50))
        expected = {
            (a, b)
            for a, b in product(range(-7, 8), repeat=2)
            if a * a + b * b <= 50 and oracle_is_prime((a, b), prime_oracle)
        }
        assert set(component.members) == expected
        assert component.size == len(expected)
        assert component.depths == [0] + [1] * (len(expected) - 1)
        assert not component.frontier_exhausted

    def test_step_longer_than_region_3d(self, prime_oracle):
        """Test that a step of length 1000 joins every 3D prime of norm <= 50."""
        component = explore(MoatQuery(dimension=3, k2=10**6, start=(1, 1, 1), norm_bound=50))
        expected = {
            p
            for p in product(range(-7, 8), repeat=3)
            if sum(v * v for v in p) <= 50 and oracle_is_prime(p, prime_oracle)
        }
        assert set(component.members) == expected
        assert component.members[1:] == sorted(expected - {(1, 1, 1)})
        assert component.status == "inconclusive"

    @pytest.mark.parametrize("k2", [50, 60, 100])
    def test_long_steps_match_plain_bfs(self, k2, prime_oracle):
        """Test members and depths against a plain BFS once steps outgrow the region radius."""
        expected, exhausted = oracle_component(2, k2, (1, 1), 40, prime_oracle)
        component = explore(MoatQuery(dimension=2, k2=k2, start=(1, 1), norm_bound=40))

        assert component.members == sorted(expected, key=lambda p: (expected[p], p))
        assert component.depths == [expected[p] for p in component.members]
        assert not exhausted
        assert not component.frontier_exhausted

    def test_offset_capacity(self):
        """Test that a step bound needing too many offsets is refused."""
        query = MoatQuery(dimension=3, k2=10**5, start=(1, 1, 1), norm_bound=10**6)
        with pytest.raises(CapacityError):
            explore(query)

    def test_region_capacity(self):
        """Test that enumerating a too large 3D region is refused."""
        query = MoatQuery(dimension=3, k2=1002**2, start=(1, 1, 1), norm_bound=10**6)
        with pytest.raises(CapacityError):
            explore(query)

    @pytest.mark.slow
    def test_smallest_step_moat_at_full_bound(self, table_1e4):
        """Test that the sqrt(2) component is unchanged out to norm 10^6."""
        near = explore(MoatQuery(dimension=2, k2=2, start=(1, 1), norm_bound=10**4), table_1e4)
        far = explore(MoatQuery(dimension=2, k2=2, start=(1, 1), norm_bound=10**6))
        assert far.frontier_exhausted
        assert far.members == near.members


class TestMoatProfile:

    def test_empty(self):
        """Test that no step bounds give no rows."""
        assert moat_profile(2, (1, 1), 100, []) == []

    def test_descending(self):
        """Test that step bounds must be ascending."""
        with pytest.raises(ValueError):
            moat_profile(2, (1, 1), 100, [4, 2])

    def test_single_row(self, table_1e4):
        """Test that a one-element profile matches a direct exploration."""
        (row,) = moat_profile(2, (1, 1), 10**4, [2], table=table_1e4)
        component = explore(
            MoatQuery(dimension=2, k2=2, start=(1, 1), norm_bound=10**4), table_1e4
        )
        assert row.k2 == 2
        assert row.size == component.size
        assert row.farthest_norm == component.farthest_norm
        assert row.exhausted is True

    def test_sizes_nondecreasing(self, table_1e4):
        """Test that component size grows with the step bound."""
        rows = moat_profile(2, (1, 1), 2000, [2, 4, 8, 10], table=table_1e4)
        assert [r.k2 for r in rows] == [2, 4, 8, 10]
        sizes = [r.size for r in rows]
        assert sizes == sorted(sizes)

    def test_three_dimensional(self):
        """Test a profile around (1, 1, 1)."""
        rows = moat_profile(3, (1, 1, 1), 200, [1, 2, 3])
        assert len(rows) == 3
        assert [r.size for r in rows] == sorted(r.size for r in rows)

    def test_counts_one_component_per_row(self):
        """Test that each row is one exploration."""
        before = components_count(2)
        moat_profile(2, (1, 1), 100, [2, 4, 8])
        assert components_count(2) == before + 3

    def test_capacity_checked_first(self):
        """Test that an oversized bound fails before any sieve is built."""
        with pytest.raises(CapacityError):
            moat_profile(3, (1, 1, 1), NORM_BOUND_CAP[3] + 1, [2])

    def test_invalid_start(self):
        """Test that the start is validated once per row."""
        with pytest.raises(InvalidStartError):
            moat_profile(2, (2, 2), 100, [2, 4])


class TestRegionPrimes:

    @pytest.mark.parametrize("dimension,norm_bound", [(2, 50), (2, 1), (3, 30)])
    def test_matches_enumeration(self, dimension, norm_bound, table_1e4, prime_oracle):
        """Test the primes of a small region against an exhaustive scan."""
        r = isqrt(norm_bound)
        expected = [
            p
            for p in product(range(-r, r + 1), repeat=dimension)
            if sum(v * v for v in p) <= norm_bound and oracle_is_prime(p, prime_oracle)
        ]
        found = region_primes(dimension, norm_bound, table_1e4)
        assert [tuple(p) for p in found.tolist()] == expected
