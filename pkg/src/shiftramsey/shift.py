"""Shift graphs Sh(N, k) and the Erdős–Hajnal interval graphs G_k.

Points are 1-based, as in the usual notation; vertices of an arity-2 graph
are :class:`IntervalVertex` values ``[i, j]`` with ``i < j``. Vertices and
edges are enumerated lexicographically, and every tie-break elsewhere in the
package derives from that order.

An edge of Sh(N, k) is determined by a (k+1)-subset ``x_1 < ... < x_{k+1}``:
it joins ``(x_1..x_k)`` to ``(x_2..x_{k+1})``. Edge ranks are therefore
lexicographic ranks of (k+1)-subsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterator, NamedTuple, Sequence

from .errors import SizeGuardError
from .graph import Graph

MAX_POINTS = 2**20
MATERIALIZE_LIMIT = 10**4  # vertices; larger hosts use structural adjacency only


class _Interval(NamedTuple):
    i: int
    j: int


class IntervalVertex(_Interval):
    """Closed integer interval ``[i, j]`` with ``i < j``."""

    __slots__ = ()

    def __new__(cls, i: int, j: int):
        if not 1 <= i < j:
            raise ValueError(f"[{i},{j}] is not a non-degenerate interval of positive points")
        return super().__new__(cls, i, j)

    def __str__(self) -> str:
        return f"[{self.i},{self.j}]"


def vertex_str(v: Sequence[int]) -> str:
    return "[" + ",".join(map(str, v)) + "]"


def combination_rank(subset: Sequence[int], n: int) -> int:
    """Lexicographic rank of a sorted subset of ``{1..n}`` among subsets of its size."""
    r = len(subset)
    rank = 0
    prev = 0
    for pos, x in enumerate(subset):
        m = r - pos - 1
        # hockey stick: sum_{v=prev+1}^{x-1} C(n-v, m)
        rank += comb(n - prev, m + 1) - comb(n - x + 1, m + 1)
        prev = x
    return rank


def _level_of(points: int) -> int | None:
    gap = points - 1
    if gap >= 1 and gap & (gap - 1) == 0:
        return gap.bit_length() - 1
    return None


@dataclass(frozen=True)
class ShiftGraph:
    """Shift graph on the ``arity``-subsets of ``{1..point_count}``.

    Adjacency is structural: nothing is stored, and :meth:`to_graph`
    materializes an index-based :class:`Graph` for hosts small enough for
    the exact solvers.
    """

    point_count: int
    arity: int = 2

    def __post_init__(self):
        if self.arity < 2:
            raise ValueError("shift graph arity must be at least 2")
        if self.point_count < self.arity:
            raise ValueError(f"need at least {self.arity} points, got {self.point_count}")
        if self.point_count > MAX_POINTS:
            raise SizeGuardError(f"{self.point_count} points exceeds the {MAX_POINTS}-point guard")

    @property
    def level(self) -> int | None:
        """``k`` when this is G_k, i.e. arity 2 on ``2^k + 1`` points."""
        return _level_of(self.point_count) if self.arity == 2 else None

    @property
    def points(self) -> range:
        return range(1, self.point_count + 1)

    @property
    def vertex_count(self) -> int:
        return comb(self.point_count, self.arity)

    @property
    def edge_count(self) -> int:
        return comb(self.point_count, self.arity + 1)

    def _make(self, pts: Sequence[int]) -> tuple[int, ...]:
        return IntervalVertex(*pts) if self.arity == 2 else tuple(pts)

    def vertices(self) -> Iterator[tuple[int, ...]]:
        for pts in combinations(self.points, self.arity):
            yield self._make(pts)

    def has_vertex(self, v: Sequence[int]) -> bool:
        return (
            len(v) == self.arity
            and all(a < b for a, b in zip(v, v[1:]))
            and 1 <= v[0]
            and v[-1] <= self.point_count
        )

    def _check_vertex(self, v: Sequence[int]) -> None:
        if not self.has_vertex(v):
            raise ValueError(f"{vertex_str(v)} is not a vertex of Sh({self.point_count},{self.arity})")

    def vertex_index(self, v: Sequence[int]) -> int:
        self._check_vertex(v)
        return combination_rank(v, self.point_count)

    def adjacent(self, x: Sequence[int], y: Sequence[int]) -> bool:
        if self.arity == 2:
            return x[1] == y[0] or y[1] == x[0]
        return tuple(x[1:]) == tuple(y[:-1]) or tuple(y[1:]) == tuple(x[:-1])

    def edge_points(self, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
        """The (arity+1)-subset spanned by the edge ``{x, y}``."""
        self._check_vertex(x)
        self._check_vertex(y)
        if tuple(x[1:]) == tuple(y[:-1]):
            return tuple(x) + (y[-1],)
        if tuple(y[1:]) == tuple(x[:-1]):
            return tuple(y) + (x[-1],)
        raise KeyError(f"{vertex_str(x)} and {vertex_str(y)} are not adjacent")

    def edge_of_points(self, pts: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Canonical edge (lexicographically smaller vertex first) for a (arity+1)-subset."""
        return self._make(pts[:-1]), self._make(pts[1:])

    def edges(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        for pts in combinations(self.points, self.arity + 1):
            yield self.edge_of_points(pts)

    def edge_point_sets(self) -> Iterator[tuple[int, ...]]:
        return combinations(self.points, self.arity + 1)

    def edge_rank(self, x: Sequence[int], y: Sequence[int]) -> int:
        return combination_rank(self.edge_points(x, y), self.point_count)

    def neighbors(self, v: Sequence[int]) -> list[tuple[int, ...]]:
        self._check_vertex(v)
        below = [self._make((a,) + tuple(v[:-1])) for a in range(1, v[0])]
        above = [self._make(tuple(v[1:]) + (b,)) for b in range(v[-1] + 1, self.point_count + 1)]
        return sorted(below + above)

    def degree(self, v: Sequence[int]) -> int:
        self._check_vertex(v)
        return (v[0] - 1) + (self.point_count - v[-1])

    @cached_property
    def _graph(self) -> Graph:
        verts = list(self.vertices())
        index = {v: n for n, v in enumerate(verts)}
        edges = [(index[x], index[y]) for x, y in self.edges()]
        return Graph.from_edges(len(verts), edges, [vertex_str(v) for v in verts])

    def to_graph(self) -> Graph:
        """Materialize as an index-based graph (vertex index = lexicographic rank)."""
        if self.vertex_count > MATERIALIZE_LIMIT:
            raise SizeGuardError(
                f"{self.vertex_count} vertices is above the {MATERIALIZE_LIMIT}-vertex materialization guard"
            )
        return self._graph

    def descriptor(self) -> dict:
        return {"points": self.point_count, "arity": self.arity, "level": self.level}

    @classmethod
    def from_descriptor(cls, data: dict) -> ShiftGraph:
        g = cls(int(data["points"]), int(data.get("arity", 2)))
        if data.get("level") is not None and data["level"] != g.level:
            raise ValueError(f"descriptor level {data['level']} does not match {g.point_count} points")
        return g

    def __str__(self) -> str:
        if self.level is not None:
            return f"G_{self.level}"
        return f"Sh({self.point_count},{self.arity})"


@dataclass(frozen=True)
class PointEmbedding:
    """Strictly increasing map ``{1..len(image)} -> {1..target_points}``; ``p`` goes to ``image[p-1]``."""

    image: tuple[int, ...]
    target_points: int

    def __post_init__(self):
        if not self.image:
            raise ValueError("embedding must map at least one point")
        if any(a >= b for a, b in zip(self.image, self.image[1:])):
            raise ValueError("embedding must be strictly increasing")
        if self.image[0] < 1 or self.image[-1] > self.target_points:
            raise ValueError("embedding image out of range")

    @property
    def source_points(self) -> int:
        return len(self.image)

    def __call__(self, p: int) -> int:
        if not 1 <= p <= len(self.image):
            raise ValueError(f"point {p} outside the embedding's domain")
        return self.image[p - 1]

    def map_vertex(self, v: Sequence[int]) -> tuple[int, ...]:
        pts = tuple(self(p) for p in v)
        return IntervalVertex(*pts) if len(pts) == 2 else pts


def eh_graph(k: int) -> ShiftGraph:
    """The Erdős–Hajnal graph G_k: intervals over ``2^k + 1`` points."""
    if k < 1:
        raise ValueError("eh_graph needs k >= 1")
    if k >= 20:
        raise SizeGuardError(f"G_{k} has 2^{k}+1 points, above the {MAX_POINTS}-point guard")
    return ShiftGraph(2**k + 1, 2)


def shift_graph(n: int, k: int) -> ShiftGraph:
    if k < 2:
        raise ValueError("shift_graph needs k >= 2")
    if n < k:
        raise ValueError(f"shift_graph needs N >= k, got N={n}, k={k}")
    return ShiftGraph(n, k)


def induced_on_points(g: ShiftGraph, points: Sequence[int]) -> tuple[ShiftGraph, PointEmbedding]:
    """Induced copy of ``g`` on the intervals with both ends in ``points``.

    The copy is relabeled through the order isomorphism onto
    ``{1..len(points)}``; the returned embedding maps copy points back to
    host points.
    """
    if g.arity != 2:
        raise ValueError("induced_on_points is defined for interval (arity 2) graphs")
    q = sorted(set(points))
    if len(q) != len(points):
        raise ValueError("point set contains duplicates")
    if len(q) < 2:
        raise ValueError("need at least 2 points")
    if q[0] < 1 or q[-1] > g.point_count:
        raise ValueError(f"points must lie in 1..{g.point_count}")
    return ShiftGraph(len(q), 2), PointEmbedding(tuple(q), g.point_count)


def canonical_embedding(k: int, m: int) -> PointEmbedding:
    """Prefix embedding of the points of G_k into those of G_m."""
    if k < 1 or m < 1:
        raise ValueError("levels must be positive")
    if k > m:
        raise ValueError(f"cannot embed G_{k} into the smaller G_{m}")
    return PointEmbedding(tuple(range(1, 2**k + 2)), 2**m + 1)
