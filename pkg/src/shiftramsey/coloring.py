"""Red-blue edge colorings.

Random colorings use SplitMix64 (Steele, Lea & Flood, 2014) as a
counter-based generator: the color of the edge with canonical rank ``r``
under seed ``s`` is the top bit of ``mix(s + (r + 1) * 0x9E3779B97F4A7C15)``
(all arithmetic mod 2^64), with 1 meaning Blue. Each edge thus has its own
stream, so colors do not depend on iteration order and dense and implicit
hosts agree edge for edge.

Hosts with at most :data:`DENSE_EDGE_LIMIT` edges store one byte per edge;
larger hosts (G_8 has about 2.8 million edges) keep the coloring as a pure
function of the edge's points.
"""

from __future__ import annotations

import io
import os
import re
from enum import IntEnum
from itertools import combinations
from typing import Callable, Iterator, Sequence, TextIO, Union

import numpy as np

from .errors import ColoringFormatError, SizeGuardError
from .graph import Graph
from .shift import ShiftGraph, combination_rank, vertex_str

DENSE_EDGE_LIMIT = 10**6
MAX_EXHAUSTIVE_EDGES = 24

GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MASK64 = (1 << 64) - 1

Host = Union[ShiftGraph, Graph]


class Color(IntEnum):
    RED = 0
    BLUE = 1

    @property
    def token(self) -> str:
        return "R" if self is Color.RED else "B"

    @classmethod
    def from_token(cls, token: str) -> Color:
        t = token.strip().upper()
        if t in ("R", "RED"):
            return cls.RED
        if t in ("B", "BLUE"):
            return cls.BLUE
        raise ValueError(f"unknown color token {token!r}")

    def __str__(self) -> str:
        return self.name.capitalize()


def splitmix64(seed: int, index: int) -> int:
    """Output number ``index + 1`` of a SplitMix64 generator started at ``seed``."""
    z = (seed + (index + 1) * GAMMA) & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def splitmix64_block(seed: int, count: int) -> np.ndarray:
    """Vectorized :func:`splitmix64` for indices ``0..count-1``."""
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + idx * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
    return z


def _check_seed(seed: int) -> int:
    if not 0 <= seed <= _MASK64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    return int(seed)


class TwoColoring:
    """Total assignment of Red/Blue to the edges of a host graph.

    ``data`` holds one byte per edge in canonical edge order (0 = Red,
    1 = Blue). Implicit colorings instead carry ``rule``, a function from
    an edge's sorted point tuple to a :class:`Color`; only arity-2 and
    general shift hosts support implicit form.
    """

    __slots__ = ("host", "_data", "_rule", "seed")

    def __init__(
        self,
        host: Host,
        data: bytes | None = None,
        rule: Callable[[tuple[int, ...]], Color] | None = None,
        seed: int | None = None,
    ):
        if (data is None) == (rule is None):
            raise ValueError("give exactly one of data or rule")
        if data is not None:
            data = bytes(data)
            if len(data) != host.edge_count:
                raise ValueError(f"expected {host.edge_count} edge colors, got {len(data)}")
            if data.translate(None, b"\x00\x01"):
                raise ValueError("edge colors must be 0 (Red) or 1 (Blue)")
        elif not isinstance(host, ShiftGraph):
            raise ValueError("implicit colorings need a shift-graph host")
        self.host = host
        self._data = data
        self._rule = rule
        self.seed = seed

    @property
    def is_dense(self) -> bool:
        return self._data is not None

    @property
    def data(self) -> bytes:
        """Per-edge colors in canonical order (materialized on demand)."""
        if self._data is not None:
            return self._data
        if self.host.edge_count > DENSE_EDGE_LIMIT:
            raise SizeGuardError(f"refusing to materialize {self.host.edge_count} edge colors")
        return bytes(int(self._rule(pts)) for pts in self.host.edge_point_sets())

    def color_at(self, rank: int) -> Color:
        if self._data is not None:
            return Color(self._data[rank])
        raise ValueError("rank lookup needs a dense coloring")

    def color_of_points(self, pts: tuple[int, ...]) -> Color:
        """Color of the shift-graph edge spanned by the sorted point tuple ``pts``."""
        if self._rule is not None:
            return self._rule(pts)
        return Color(self._data[combination_rank(pts, self.host.point_count)])

    def star_color(self, i: int, j: int, k: int) -> Color:
        """Color of the edge ``[i,j]-[j,k]`` (``i < j < k``)."""
        return self.color_of_points((i, j, k))

    def color(self, x, y) -> Color:
        """Color of the edge between vertices ``x`` and ``y``."""
        if isinstance(self.host, ShiftGraph):
            return self.color_of_points(self.host.edge_points(x, y))
        return Color(self._data[self.host.edge_rank(x, y)])

    def red_count(self) -> int:
        return self.data.count(0)

    def edges_with(self, color: Color) -> Iterator[tuple]:
        for edge, c in zip(self.host.edges(), self.data):
            if c == color:
                yield edge

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwoColoring):
            return NotImplemented
        return self.host == other.host and self.data == other.data

    def __hash__(self):
        return hash((self.host, self.data))

    def __repr__(self) -> str:
        form = "dense" if self.is_dense else "implicit"
        return f"TwoColoring({self.host}, {form}, seed={self.seed})"


def _rank_rule(host: ShiftGraph, seed: int) -> Callable[[tuple[int, ...]], Color]:
    n = host.point_count

    def rule(pts: tuple[int, ...]) -> Color:
        return Color(splitmix64(seed, combination_rank(pts, n)) >> 63)

    return rule


def random_coloring(host: Host, seed: int) -> TwoColoring:
    """Independent fair color per edge, drawn from SplitMix64 keyed by ``seed``."""
    seed = _check_seed(seed)
    if isinstance(host, ShiftGraph) and host.edge_count > DENSE_EDGE_LIMIT:
        return TwoColoring(host, rule=_rank_rule(host, seed), seed=seed)
    bits = (splitmix64_block(seed, host.edge_count) >> np.uint64(63)).astype(np.uint8)
    return TwoColoring(host, data=bits.tobytes(), seed=seed)


def monochromatic_coloring(host: Host, color: Color) -> TwoColoring:
    if isinstance(host, ShiftGraph) and host.edge_count > DENSE_EDGE_LIMIT:
        return TwoColoring(host, rule=lambda pts: color)
    return TwoColoring(host, data=bytes([int(color)]) * host.edge_count)


def predicate_coloring(host: ShiftGraph, predicate: Callable[[int, int, int], bool]) -> TwoColoring:
    """Color ``[i,j]-[j,k]`` Red iff ``predicate(i, j, k)`` holds."""
    if host.arity != 2:
        raise ValueError("predicate colorings are defined on interval graphs")

    def rule(pts: tuple[int, ...]) -> Color:
        return Color.RED if predicate(*pts) else Color.BLUE

    if host.edge_count > DENSE_EDGE_LIMIT:
        return TwoColoring(host, rule=rule)
    return TwoColoring(host, data=bytes(int(rule(pts)) for pts in host.edge_point_sets()))


# Structured worst cases for the extraction procedures; each maps (i, j, k) to "Red?".
ADVERSARIAL_PREDICATES: dict[str, Callable[[int, int, int], bool]] = {
    "parity_j": lambda i, j, k: j % 2 == 0,
    "parity_k": lambda i, j, k: k % 2 == 0,
    "parity_sum": lambda i, j, k: (i + j + k) % 2 == 0,
    "short_first": lambda i, j, k: j - i < k - j,
    "bit_xor": lambda i, j, k: bin(j ^ k).count("1") % 2 == 1,
    "mod3_k": lambda i, j, k: k % 3 != 0,
}


def adversarial_coloring(host: ShiftGraph, name: str) -> TwoColoring:
    try:
        pred = ADVERSARIAL_PREDICATES[name]
    except KeyError:
        raise ValueError(f"unknown adversarial coloring {name!r}; choose from {sorted(ADVERSARIAL_PREDICATES)}") from None
    return predicate_coloring(host, pred)


def coloring_from_rank(host: Host, rank: int) -> TwoColoring:
    """Coloring number ``rank`` in binary-counter order: bit ``e`` is edge ``e``'s color."""
    m = host.edge_count
    if not 0 <= rank < 1 << m:
        raise ValueError(f"rank {rank} out of range for {m} edges")
    return TwoColoring(host, data=bytes(rank >> e & 1 for e in range(m)))


def coloring_rank(c: TwoColoring) -> int:
    return sum(b << e for e, b in enumerate(c.data))


def all_colorings(host: Host) -> Iterator[TwoColoring]:
    """Every coloring exactly once, from all-Red upwards in binary-counter order."""
    m = host.edge_count
    if m > MAX_EXHAUSTIVE_EDGES:
        raise SizeGuardError(f"{m} edges gives 2^{m} colorings; exhaustive limit is 2^{MAX_EXHAUSTIVE_EDGES}")
    for rank in range(1 << m):
        yield coloring_from_rank(host, rank)


def out_neighbors(c: TwoColoring, v: Sequence[int], color: Color) -> frozenset:
    """Vertices ``[j,k]`` with ``k > j`` whose edge to ``v = [i,j]`` has ``color``."""
    host = c.host
    if not isinstance(host, ShiftGraph) or host.arity != 2:
        raise ValueError("out_neighbors is defined on interval graphs")
    if not host.has_vertex(v):
        raise ValueError(f"{vertex_str(v)} is not a vertex of {host}")
    i, j = v
    return frozenset(
        host._make((j, k)) for k in range(j + 1, host.point_count + 1) if c.star_color(i, j, k) == color
    )


def _header(host: Host) -> str:
    if isinstance(host, ShiftGraph):
        return f"c host points={host.point_count} arity={host.arity}"
    return f"c host vertices={host.vertex_count}"


def _vertex_token(host: Host, v) -> str:
    return vertex_str(v) if isinstance(host, ShiftGraph) else str(v)


def dumps_coloring(c: TwoColoring) -> str:
    out = io.StringIO()
    write_coloring(c, out)
    return out.getvalue()


def write_coloring(c: TwoColoring, stream: TextIO) -> None:
    host = c.host
    stream.write(_header(host) + "\n")
    for (x, y), b in zip(host.edges(), c.data):
        stream.write(f"{_vertex_token(host, x)} {_vertex_token(host, y)} {'RB'[b]}\n")


def save_coloring(c: TwoColoring, destination) -> None:
    """Write ``c`` to a path or text stream in the line-based coloring format."""
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            write_coloring(c, fh)
    else:
        write_coloring(c, destination)


_VERTEX_RE = re.compile(r"^\[(\d+(?:,\d+)*)\]$")


def _parse_vertex(host: Host, token: str, lineno: int):
    if isinstance(host, ShiftGraph):
        m = _VERTEX_RE.match(token)
        if not m:
            raise ColoringFormatError(f"malformed vertex {token!r}", lineno)
        v = tuple(int(p) for p in m.group(1).split(","))
        if not host.has_vertex(v):
            raise ColoringFormatError(f"{token} is not a vertex of the host", lineno)
        return v
    if not token.isdigit() or int(token) >= host.vertex_count:
        raise ColoringFormatError(f"{token!r} is not a vertex of the host", lineno)
    return int(token)


def loads_coloring(host: Host, text: str) -> TwoColoring:
    return load_coloring(host, io.StringIO(text))


def load_coloring(host: Host, source) -> TwoColoring:
    """Parse a coloring of ``host`` from a path or text stream.

    Every host edge must appear exactly once, in any order.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return load_coloring(host, fh)
    if host.edge_count > DENSE_EDGE_LIMIT:
        raise SizeGuardError(f"refusing to load {host.edge_count} edge colors")
    colors = bytearray(host.edge_count)
    seen = bytearray(host.edge_count)
    header_seen = False
    lineno = 0
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c "):
            if not header_seen and line.startswith("c host"):
                if line != _header(host):
                    raise ColoringFormatError(f"header {line!r} does not match host ({_header(host)!r})", lineno)
                header_seen = True
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ColoringFormatError(f"expected '<vertex> <vertex> R|B', got {line!r}", lineno)
        x = _parse_vertex(host, parts[0], lineno)
        y = _parse_vertex(host, parts[1], lineno)
        try:
            color = Color.from_token(parts[2])
        except ValueError:
            raise ColoringFormatError(f"unknown color token {parts[2]!r}", lineno) from None
        try:
            rank = host.edge_rank(x, y)
        except KeyError:
            raise ColoringFormatError(f"edge not in host: {parts[0]} {parts[1]}", lineno) from None
        if seen[rank]:
            raise ColoringFormatError(f"duplicate edge {parts[0]} {parts[1]}", lineno)
        seen[rank] = 1
        colors[rank] = int(color)
    if not header_seen:
        raise ColoringFormatError("missing 'c host ...' header line", lineno + 1)
    missing = seen.find(0)
    if missing >= 0:
        x, y = _edge_at(host, missing)
        raise ColoringFormatError(
            f"missing edge {_vertex_token(host, x)} {_vertex_token(host, y)} ({seen.count(0)} edge(s) uncolored)",
            lineno + 1,
        )
    return TwoColoring(host, data=bytes(colors))


def _edge_at(host: Host, rank: int):
    if isinstance(host, ShiftGraph):
        for r, pts in enumerate(combinations(host.points, host.arity + 1)):
            if r == rank:
                return host.edge_of_points(pts)
    return host.edge_list[rank]
