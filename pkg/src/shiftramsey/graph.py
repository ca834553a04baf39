"""Index-based finite graphs and exact solvers.

Adjacency is stored as one Python ``int`` bitmask per vertex, which keeps the
clique, coloring and monomorphism searches short and reasonably fast for the
desk-scale graphs this package works with.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BudgetExhausted, SizeGuardError

DEFAULT_COLORING_BUDGET = 10**8
MAX_PATTERN_VERTICES = 12


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..vertex_count-1``."""

    vertex_count: int
    adjacency: tuple[int, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise ValueError("vertex_count must be nonnegative")
        if len(self.adjacency) != n:
            raise ValueError("adjacency must have one mask per vertex")
        full = (1 << n) - 1
        for v, mask in enumerate(self.adjacency):
            if mask & ~full:
                raise ValueError(f"vertex {v} has a neighbour out of range")
            if mask >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
            for u in _bits(mask):
                if not self.adjacency[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {u})")
        if self.labels is not None:
            if len(self.labels) != n:
                raise ValueError("labels must cover every vertex")
            if len(set(self.labels)) != n:
                raise ValueError("labels must be unique")

    @classmethod
    def _trusted(cls, vertex_count: int, adjacency: tuple[int, ...]) -> Graph:
        """Construct without validation; callers guarantee a valid adjacency."""
        g = object.__new__(cls)
        object.__setattr__(g, "vertex_count", vertex_count)
        object.__setattr__(g, "adjacency", adjacency)
        object.__setattr__(g, "labels", None)
        return g

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ) -> Graph:
        adj = [0] * vertex_count
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(vertex_count, tuple(adj), tuple(labels) if labels is not None else None)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adjacency[v]))

    def degree(self, v: int) -> int:
        return bin(self.adjacency[v]).count("1")

    @cached_property
    def edge_list(self) -> tuple[tuple[int, int], ...]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return tuple(
            (u, v)
            for u in range(self.vertex_count)
            for v in _bits(self.adjacency[u] >> (u + 1) << (u + 1))
        )

    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.edge_list

    @property
    def edge_count(self) -> int:
        return len(self.edge_list)

    @cached_property
    def _edge_ranks(self) -> dict[tuple[int, int], int]:
        return {e: r for r, e in enumerate(self.edge_list)}

    def edge_rank(self, u: int, v: int) -> int:
        """Position of edge ``{u, v}`` in the canonical edge order."""
        if u > v:
            u, v = v, u
        try:
            return self._edge_ranks[(u, v)]
        except KeyError:
            raise KeyError(f"({u}, {v}) is not an edge") from None

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Subgraph induced by ``vertices``, renumbered in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        edges = [
            (index[u], index[w])
            for u in vertices
            for w in _bits(self.adjacency[u])
            if w in index and index[u] < index[w]
        ]
        labels = [self.label(v) for v in vertices] if self.labels is not None else None
        return Graph.from_edges(len(vertices), edges, labels)

    def to_edge_list(self) -> str:
        lines = [f"p {self.vertex_count}"]
        lines += [f"e {u} {v}" for u, v in self.edge_list]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> Graph:
        n = None
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            parts = raw.split()
            if not parts or parts[0] == "c":
                continue
            if parts[0] == "p" and len(parts) == 2 and n is None:
                n = int(parts[1])
            elif parts[0] == "e" and len(parts) == 3 and n is not None:
                edges.append((int(parts[1]), int(parts[2])))
            else:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}")
        if n is None:
            raise ValueError("missing 'p <vertex_count>' line")
        return cls.from_edges(n, edges)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.vertex_count):
            lines.append(f'  {v} [label="{self.label(v)}"];')
        for u, v in self.edge_list:
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VertexMapping:
    """Injective map from pattern vertex ``p`` to host vertex ``pairs[p]``."""

    pairs: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.pairs)) != len(self.pairs):
            raise ValueError("vertex mapping is not injective")

    def __getitem__(self, p: int) -> int:
        return self.pairs[p]

    def is_valid(self, pattern: Graph, host: Graph) -> bool:
        if len(self.pairs) != pattern.vertex_count:
            return False
        if any(not 0 <= h < host.vertex_count for h in self.pairs):
            return False
        return all(host.has_edge(self.pairs[u], self.pairs[v]) for u, v in pattern.edge_list)


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete_graph needs n >= 1")
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, v + 1) for v in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def is_triangle_free(g: Graph) -> bool:
    adj = g.adjacency
    return not any(adj[u] & adj[v] for u, v in g.edge_list)


def degeneracy_order(g: Graph) -> list[int]:
    """Smallest-last order: repeatedly remove a minimum-degree vertex (lowest index on ties)."""
    remaining = (1 << g.vertex_count) - 1
    deg = [g.degree(v) for v in range(g.vertex_count)]
    order = []
    while remaining:
        v = min(_bits(remaining), key=lambda u: (deg[u], u))
        order.append(v)
        remaining &= ~(1 << v)
        for u in _bits(g.adjacency[v] & remaining):
            deg[u] -= 1
    return order


def clique_number(g: Graph) -> int:
    """Exact clique number by branch and bound over a degeneracy ordering."""
    n = g.vertex_count
    if n == 0:
        return 0
    adj = g.adjacency
    best = 1

    def expand(size: int, cand: int) -> None:
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        while cand:
            if size + bin(cand).count("1") <= best:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            expand(size + 1, cand & adj[v])
            cand ^= low

    later = 0
    for v in reversed(degeneracy_order(g)):
        # cand holds neighbours of v that come after it in the ordering
        expand(1, adj[v] & later)
        later |= 1 << v
    return best


def greedy_coloring(g: Graph) -> list[int]:
    """DSatur greedy coloring; returns a color index per vertex."""
    n = g.vertex_count
    colors = [-1] * n
    seen = [0] * n
    deg = [g.degree(v) for v in range(n)]
    for _ in range(n):
        v = max(
            (u for u in range(n) if colors[u] < 0),
            key=lambda u: (bin(seen[u]).count("1"), deg[u], -u),
        )
        c = 0
        while seen[v] >> c & 1:
            c += 1
        colors[v] = c
        for u in _bits(g.adjacency[v]):
            seen[u] |= 1 << c
    return colors


def _find_clique(g: Graph, size: int) -> list[int]:
    """Vertices of some clique of exactly ``size`` vertices, assumed to exist."""
    adj = g.adjacency

    def grow(chosen: list[int], cand: int) -> list[int] | None:
        if len(chosen) == size:
            return chosen
        while cand:
            if len(chosen) + bin(cand).count("1") < size:
                return None
            low = cand & -cand
            v = low.bit_length() - 1
            found = grow(chosen + [v], cand & adj[v])
            if found:
                return found
            cand ^= low
        return None

    return grow([], (1 << g.vertex_count) - 1) or []


def is_k_colorable(
    g: Graph, k: int, budget: int = DEFAULT_COLORING_BUDGET, precolored: Sequence[int] = ()
) -> list[int] | None:
    """Backtracking DSatur search for a proper ``k``-coloring.

    ``precolored`` is a clique whose members are fixed to colors 0, 1, ...
    (symmetry breaking). Returns the coloring or ``None``. Raises
    :class:`BudgetExhausted` once more than ``budget`` color assignments
    have been tried.
    """
    n = g.vertex_count
    adj = g.adjacency
    if n == 0:
        return []
    if k <= 0:
        return None
    if len(precolored) > k:
        return None
    colors = [-1] * n
    for c, v in enumerate(precolored):
        colors[v] = c
    deg = [g.degree(v) for v in range(n)]
    nodes = 0

    def forbidden(v: int) -> int:
        mask = 0
        for u in _bits(adj[v]):
            if colors[u] >= 0:
                mask |= 1 << colors[u]
        return mask

    def solve(uncolored: int, used: int) -> bool:
        nonlocal nodes
        if not uncolored:
            return True
        best_v, best_key, best_forb = -1, None, 0
        for v in _bits(uncolored):
            forb = forbidden(v)
            sat = bin(forb).count("1")
            if sat >= k:
                return False
            key = (sat, deg[v])
            if best_key is None or key > best_key:
                best_v, best_key, best_forb = v, key, forb
        v = best_v
        # a fresh color is interchangeable with any other fresh color
        for c in range(min(k, used + 1)):
            if best_forb >> c & 1:
                continue
            nodes += 1
            if nodes > budget:
                raise BudgetExhausted(f"coloring search exceeded {budget} decisions")
            colors[v] = c
            if solve(uncolored & ~(1 << v), max(used, c + 1)):
                return True
            colors[v] = -1
        return False

    uncolored = (1 << n) - 1
    for v in precolored:
        uncolored &= ~(1 << v)
    if solve(uncolored, len(precolored)):
        return colors
    return None


def chromatic_number(g: Graph, budget: int = DEFAULT_COLORING_BUDGET) -> int:
    """Exact chromatic number.

    Lower bound from the clique number, upper bound from DSatur; each
    candidate ``k`` in between is settled by an exact search. Exceeding the
    budget raises :class:`BudgetExhausted` instead of returning a guess.
    """
    n = g.vertex_count
    if n == 0:
        return 0
    if g.edge_count == 0:
        return 1
    lower = clique_number(g)
    upper = max(greedy_coloring(g)) + 1
    clique = _find_clique(g, lower)
    for k in range(lower, upper):
        if is_k_colorable(g, k, budget, precolored=clique) is not None:
            return k
    return upper


def find_monomorphism(pattern: Graph, host: Graph) -> VertexMapping | None:
    """First injective edge-preserving map of ``pattern`` into ``host``, if any.

    Pattern vertices are matched in a connectivity-first order, host
    candidates in increasing index order, so the answer is deterministic.
    """
    p = pattern.vertex_count
    if p > MAX_PATTERN_VERTICES:
        raise SizeGuardError(
            f"pattern has {p} vertices; monomorphism search is limited to {MAX_PATTERN_VERTICES}"
        )
    if p > host.vertex_count or pattern.edge_count > host.edge_count:
        return None
    if p == 0:
        return VertexMapping(())

    pdeg = [pattern.degree(v) for v in range(p)]
    hdeg = [host.degree(v) for v in range(host.vertex_count)]
    order: list[int] = []
    placed = 0
    while len(order) < p:
        v = max(
            (u for u in range(p) if not placed >> u & 1),
            key=lambda u: (bin(pattern.adjacency[u] & placed).count("1"), pdeg[u], -u),
        )
        order.append(v)
        placed |= 1 << v
    earlier = []
    seen = 0
    for v in order:
        earlier.append(list(_bits(pattern.adjacency[v] & seen)))
        seen |= 1 << v

    by_degree = [0] * (max(pdeg) + 1)
    for d in range(len(by_degree)):
        by_degree[d] = sum(1 << h for h in range(host.vertex_count) if hdeg[h] >= d)

    image = [-1] * p
    hadj = host.adjacency

    def place(pos: int, used: int) -> bool:
        if pos == p:
            return True
        v = order[pos]
        cand = by_degree[pdeg[v]] & ~used
        for u in earlier[pos]:
            cand &= hadj[image[u]]
        for h in _bits(cand):
            image[v] = h
            if place(pos + 1, used | 1 << h):
                return True
        image[v] = -1
        return False

    if place(0, 0):
        return VertexMapping(tuple(image))
    return None
