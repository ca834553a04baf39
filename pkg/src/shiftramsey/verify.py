"""Independent checks: structured copies, monochromatic copies, Ramsey forcing.

Nothing here reuses the extraction code paths. Structured copies are
re-checked through vertex-level adjacency and edge colors, and forcing
questions are settled by brute force over colorings.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence, Union

import numpy as np

from .coloring import (
    MAX_EXHAUSTIVE_EDGES,
    Color,
    TwoColoring,
    coloring_from_rank,
    random_coloring,
)
from .errors import SizeGuardError
from .extraction import ExtractionTrace, StageRecord
from .graph import MAX_PATTERN_VERTICES, Graph, VertexMapping, complete_graph, find_monomorphism
from .shift import IntervalVertex, ShiftGraph

VERDICT_SCHEMA_VERSION = 1

Host = Union[ShiftGraph, Graph]


def _as_graph(host: Host) -> Graph:
    return host.to_graph() if isinstance(host, ShiftGraph) else host


# -- structured copies -------------------------------------------------------


def verify_structured_copy(c: TwoColoring, points: Sequence[int], color: Color, scope: str = "full") -> bool:
    """Check the induced interval graph over ``points`` against ``color``.

    ``scope="star"`` only checks edges ``[r,a]-[a,b]`` with ``r = min(points)``;
    ``scope="full"`` checks every edge of the induced copy.
    """
    host = c.host
    if not isinstance(host, ShiftGraph) or host.arity != 2:
        raise ValueError("structured copies live in interval graphs")
    q = sorted(points)
    if len(set(q)) != len(q) or len(q) < 2:
        raise ValueError("need at least two distinct points")
    if q[0] < 1 or q[-1] > host.point_count:
        raise ValueError(f"points must lie in 1..{host.point_count}")
    if scope == "star":
        r = q[0]
        for a, b in combinations(q[1:], 2):
            if c.color(IntervalVertex(r, a), IntervalVertex(a, b)) != color:
                return False
        return True
    if scope != "full":
        raise ValueError(f"unknown scope {scope!r}")
    verts = [IntervalVertex(a, b) for a, b in combinations(q, 2)]
    for x, y in combinations(verts, 2):
        if host.adjacent(x, y) and c.color(x, y) != color:
            return False
    return True


def _replay_stage(c: TwoColoring, stage: StageRecord) -> bool:
    r = stage.root_point
    if stage.pivot is not None:
        p = stage.pivot
        return all(c.color(IntervalVertex(r, p), IntervalVertex(p, a)) == stage.stage_color for a in stage.surviving_points)
    ok = verify_structured_copy(c, (r, *stage.surviving_points), stage.stage_color, "star")
    return ok and all(_replay_stage(c, s) for s in stage.steps)


def verify_trace(c: TwoColoring, trace: ExtractionTrace) -> bool:
    """Replay every recorded monochromatic claim of ``trace`` against ``c``."""
    host = c.host
    if not isinstance(host, ShiftGraph) or host.point_count != trace.host_points:
        return False
    q = trace.final_points
    if list(q) != sorted(set(q)) or q[0] < 1 or q[-1] > host.point_count:
        return False
    if len(q) < 2 ** trace.achieved_level + 1:
        return False
    if trace.procedure == "lemma1" and (q[0] != 1 or len(q) != 2 ** trace.achieved_level + 1):
        return False
    if not all(_replay_stage(c, s) for s in trace.stages):
        return False
    return verify_structured_copy(c, q, trace.final_color, trace.scope)


# -- monochromatic copies ----------------------------------------------------


def _color_classes(n: int, edges: Sequence[tuple[int, int]], bits: Sequence[int]) -> tuple[Graph, Graph, int]:
    red = [0] * n
    blue = [0] * n
    reds = 0
    for (u, v), b in zip(edges, bits):
        side = blue if b else red
        side[u] |= 1 << v
        side[v] |= 1 << u
        reds += not b
    return Graph._trusted(n, tuple(red)), Graph._trusted(n, tuple(blue)), reds


def _mono_copy(n, edges, bits, pattern: Graph):
    red, blue, reds = _color_classes(n, edges, bits)
    need = pattern.edge_count
    if reds >= need:
        m = find_monomorphism(pattern, red)
        if m is not None:
            return Color.RED, m
    if len(edges) - reds >= need:
        m = find_monomorphism(pattern, blue)
        if m is not None:
            return Color.BLUE, m
    return None


def contains_mono_copy(c: TwoColoring, pattern: Graph) -> tuple[Color, VertexMapping] | None:
    """First monochromatic copy of ``pattern`` (Red class searched first)."""
    if pattern.vertex_count > MAX_PATTERN_VERTICES:
        raise SizeGuardError(f"pattern has {pattern.vertex_count} vertices; limit is {MAX_PATTERN_VERTICES}")
    g = _as_graph(c.host)
    return _mono_copy(g.vertex_count, g.edge_list, c.data, pattern)


# -- forcing checks ----------------------------------------------------------


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int = 0


@dataclass(frozen=True, eq=False)
class RamseyVerdict:
    forced: bool
    mode: str  # "exhaustive" | "sampled"
    colorings_checked: int
    witness_coloring: TwoColoring | None = None
    witness_rank: int | None = None

    def __post_init__(self):
        if self.forced and self.witness_coloring is not None:
            raise ValueError("a forced verdict cannot carry a witness")

    def to_dict(self, witness_path: str | None = None) -> dict:
        d = {
            "schema_version": VERDICT_SCHEMA_VERSION,
            "forced": self.forced,
            "mode": self.mode,
            "colorings_checked": self.colorings_checked,
        }
        if self.witness_coloring is not None:
            w = self.witness_coloring
            d["witness"] = {
                "rank": self.witness_rank,
                "seed": w.seed,
                "colors": "".join("RB"[b] for b in w.data),
            }
            if witness_path is not None:
                d["witness"]["path"] = witness_path
        return d

    def to_json(self, witness_path: str | None = None) -> str:
        return json.dumps(self.to_dict(witness_path), indent=2) + "\n"


def _rank_bits(rank: int, m: int) -> list[int]:
    return [rank >> e & 1 for e in range(m)]


def _sweep(n: int, edges, pattern: Graph, lo: int, hi: int) -> int | None:
    """Smallest rank in ``[lo, hi)`` whose coloring has no monochromatic copy."""
    m = len(edges)
    for rank in range(lo, hi):
        if _mono_copy(n, edges, _rank_bits(rank, m), pattern) is None:
            return rank
    return None


def _split(total: int, parts: int) -> list[tuple[int, int]]:
    step = -(-total // parts)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _first_witness(n: int, edges, pattern: Graph, total: int, jobs: int) -> int | None:
    if jobs <= 1:
        return _sweep(n, edges, pattern, 0, total)
    ranges = _split(total, jobs * 4)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_sweep, n, edges, pattern, lo, hi) for lo, hi in ranges]
        for fut in futures:
            rank = fut.result()
            if rank is not None:
                for other in futures:
                    other.cancel()
                return rank
    return None


def _check_witness(c: TwoColoring, pattern: Graph) -> None:
    if contains_mono_copy(c, pattern) is not None:
        raise AssertionError("witness coloring contains a monochromatic copy")


def ramsey_check(host: Host, pattern: Graph, mode: str | Sampled = "exhaustive", jobs: int = 1) -> RamseyVerdict:
    """Does every red-blue coloring of ``host`` contain a monochromatic ``pattern``?

    Exhaustive mode walks all colorings in binary-counter order and reports
    the lowest-ranked counterexample, whatever ``jobs`` is. Sampled mode
    checks seeded random colorings; ``forced=True`` there only means no
    counterexample turned up.
    """
    if pattern.vertex_count > MAX_PATTERN_VERTICES:
        raise SizeGuardError(f"pattern has {pattern.vertex_count} vertices; limit is {MAX_PATTERN_VERTICES}")
    g = _as_graph(host)
    n, edges = g.vertex_count, g.edge_list

    if isinstance(mode, Sampled):
        for i in range(mode.count):
            c = random_coloring(host, (mode.seed + i) % 2**64)
            if _mono_copy(n, edges, c.data, pattern) is None:
                _check_witness(c, pattern)
                return RamseyVerdict(False, "sampled", i + 1, c)
        return RamseyVerdict(True, "sampled", mode.count)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")

    m = len(edges)
    if m > MAX_EXHAUSTIVE_EDGES:
        raise SizeGuardError(f"{m} host edges; exhaustive checks are limited to {MAX_EXHAUSTIVE_EDGES}")
    total = 1 << m
    if pattern.vertex_count > n or pattern.edge_count > m:
        rank = 0
    else:
        rank = _first_witness(n, edges, pattern, total, jobs)
    if rank is None:
        return RamseyVerdict(True, "exhaustive", total)
    witness = coloring_from_rank(host, rank)
    _check_witness(witness, pattern)
    return RamseyVerdict(False, "exhaustive", rank + 1, witness, rank)


def _subset_masks(n: int, size: int, edge_index: dict) -> np.ndarray:
    masks = [
        sum(1 << edge_index[e] for e in combinations(sub, 2)) for sub in combinations(range(n), size)
    ]
    return np.array(masks, dtype=np.int64)


def classical_ramsey(s: int, t: int, n: int, chunk: int = 1 << 20) -> RamseyVerdict:
    """Exhaustive check that every coloring of K_n has a red K_s or a blue K_t.

    Coloring ranks are bit vectors over the edges of K_n (bit set = Blue),
    so a red K_s is an s-subset whose edge mask is all zeros in the rank
    and a blue K_t one whose mask is all ones.
    """
    if min(s, t, n) < 1:
        raise ValueError("s, t and n must be positive")
    m = comb(n, 2)
    if m > MAX_EXHAUSTIVE_EDGES:
        raise SizeGuardError(f"K_{n} has {m} edges; exhaustive checks are limited to {MAX_EXHAUSTIVE_EDGES}")
    host = complete_graph(n)
    edge_index = {e: r for r, e in enumerate(host.edge_list)}
    red_masks = _subset_masks(n, s, edge_index) if s <= n else np.zeros(0, dtype=np.int64)
    blue_masks = _subset_masks(n, t, edge_index) if t <= n else np.zeros(0, dtype=np.int64)

    total = 1 << m
    for lo in range(0, total, chunk):
        ranks = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        hit = np.zeros(len(ranks), dtype=bool)
        for mask in red_masks:
            hit |= (ranks & mask) == 0
        for mask in blue_masks:
            hit |= (ranks & mask) == mask
        misses = np.flatnonzero(~hit)
        if len(misses):
            rank = int(ranks[misses[0]])
            witness = coloring_from_rank(host, rank)
            g = _as_graph(host)
            red, blue, _ = _color_classes(n, g.edge_list, witness.data)
            if (s <= n and find_monomorphism(complete_graph(s), red) is not None) or (
                t <= n and find_monomorphism(complete_graph(t), blue) is not None
            ):
                raise AssertionError("classical witness contains a monochromatic clique")
            return RamseyVerdict(False, "exhaustive", rank + 1, witness, rank)
    return RamseyVerdict(True, "exhaustive", total)
