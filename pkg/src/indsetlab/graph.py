"""Graphs, vertex sets, prefix graphs and the brute-force independent-set oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Iterator

from ._kernels import Xoshiro256, derive_seed

DEFAULT_ORACLE_LIMIT = 20


class GraphError(ValueError):
    """Raised for graphs that violate the simple-graph invariants."""


class GraphParseError(GraphError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class VertexSet:
    """Fixed-width membership bit vector; bit ``v`` set means vertex ``v`` is in."""

    bits: int
    width: int

    def __post_init__(self):
        if self.width < 0:
            raise ValueError("width must be non-negative")
        if self.bits < 0 or self.bits >> self.width:
            raise ValueError(f"bit pattern {self.bits:#x} does not fit width {self.width}")

    @classmethod
    def of(cls, members: Iterable[int], width: int) -> "VertexSet":
        bits = 0
        for v in members:
            if not 0 <= v < width:
                raise ValueError(f"vertex {v} outside [0, {width})")
            bits |= 1 << v
        return cls(bits, width)

    @classmethod
    def empty(cls, width: int) -> "VertexSet":
        return cls(0, width)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.width and bool(self.bits >> v & 1)

    def __iter__(self) -> Iterator[int]:
        bits, v = self.bits, 0
        while bits:
            if bits & 1:
                yield v
            bits >>= 1
            v += 1

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def toggle(self, v: int) -> "VertexSet":
        return VertexSet(self.bits ^ (1 << v), self.width)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with an ordered edge list.

    The edge order is significant: it fixes the prefix graphs ``G_0 .. G_m``
    that the sampler walks through.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        if self.num_vertices < 1:
            raise GraphError("a graph needs at least one vertex")
        seen = set()
        for idx, (u, v) in enumerate(self.edges):
            if u == v:
                raise GraphError(f"edge {idx + 1} is a self-loop at {u}")
            for w in (u, v):
                if not 0 <= w < self.num_vertices:
                    raise GraphError(f"edge {idx + 1} endpoint {w} outside [0, {self.num_vertices})")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"edge {idx + 1} duplicates ({u}, {v})")
            seen.add(key)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Neighbour bit mask of every vertex."""
        adj = [0] * self.num_vertices
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(bin(a).count("1") for a in self.adjacency)

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    @property
    def isolated_vertices(self) -> tuple[int, ...]:
        return tuple(v for v, d in enumerate(self.degrees) if d == 0)

    def prefix(self, k: int) -> "Graph":
        return prefix_graph(self, k)

    def is_connected(self) -> bool:
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in range(self.num_vertices):
                if frontier >> v & 1:
                    nxt |= self.adjacency[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.num_vertices) - 1


def parse_graph(text: str) -> Graph:
    """Parse the ``N m`` header plus ``m`` lines of ``u v`` (0-based)."""
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphParseError(1, "missing 'N m' header")
    head_no, head = lines[0]
    parts = head.split()
    if len(parts) != 2:
        raise GraphParseError(head_no, "header must be 'N m'")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphParseError(head_no, "header values must be integers") from None
    if n < 1:
        raise GraphParseError(head_no, "N must be at least 1")
    if m < 0:
        raise GraphParseError(head_no, "m must be non-negative")
    body = lines[1:]
    if len(body) != m:
        line = body[m][0] if len(body) > m else (body[-1][0] + 1 if body else head_no + 1)
        raise GraphParseError(line, f"header announces {m} edges, found {len(body)}")
    edges = []
    seen = {}
    for line_no, ln in body:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphParseError(line_no, "edge line must be 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(line_no, "edge endpoints must be integers") from None
        if u == v:
            raise GraphParseError(line_no, f"self-loop at vertex {u}")
        for w in (u, v):
            if not 0 <= w < n:
                raise GraphParseError(line_no, f"vertex {w} out of range [0, {n})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphParseError(line_no, f"duplicate edge ({u}, {v}), first at line {seen[key]}")
        seen[key] = line_no
        edges.append((u, v))
    return Graph(n, tuple(edges))


def format_graph(g: Graph) -> str:
    """Canonical edge-list text; edge order and orientation are kept as stored."""
    out = [f"{g.num_vertices} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def prefix_graph(g: Graph, k: int) -> Graph:
    if not 0 <= k <= g.m:
        raise ValueError(f"prefix length {k} outside [0, {g.m}]")
    if k == g.m:
        return g
    return Graph(g.num_vertices, g.edges[:k])


def is_independent(g: Graph, s: VertexSet) -> bool:
    if s.width != g.num_vertices:
        raise ValueError(f"vertex set width {s.width} != graph size {g.num_vertices}")
    return is_independent_mask(g, s.bits)


def is_independent_mask(g: Graph, bits: int) -> bool:
    adj = g.adjacency
    rest = bits
    v = 0
    while rest:
        if rest & 1 and adj[v] & bits:
            return False
        rest >>= 1
        v += 1
    return True


def independent_masks(g: Graph, limit: int = DEFAULT_ORACLE_LIMIT) -> list[int]:
    """Bit patterns of all independent sets in increasing numeric order."""
    n = g.num_vertices
    if n > limit:
        raise ValueError(f"oracle refuses N={n} (limit {limit})")
    adj = g.adjacency
    out = [0]
    # Extend by the highest vertex so masks stay in increasing numeric order.
    for v in range(n):
        lower = (1 << v) - 1
        block = [s | (1 << v) for s in out if not adj[v] & lower & s]
        out.extend(block)
    return out


def enumerate_independent_sets(g: Graph, limit: int = DEFAULT_ORACLE_LIMIT) -> list[VertexSet]:
    return [VertexSet(b, g.num_vertices) for b in independent_masks(g, limit)]


def count_independent_sets(g: Graph, limit: int = DEFAULT_ORACLE_LIMIT) -> int:
    return len(independent_masks(g, limit))


def random_bounded_degree_graph(n: int, max_degree: int, seed: int) -> Graph:
    """Random simple graph with every degree at most ``max_degree``.

    Candidate pairs are visited in a seeded random order and kept while both
    endpoints have spare degree.
    """
    if n < 1 or max_degree < 0:
        raise ValueError("need n >= 1 and max_degree >= 0")
    pairs = list(combinations(range(n), 2))
    rng = Xoshiro256(derive_seed(seed, n, max_degree))
    for i in range(len(pairs) - 1, 0, -1):
        j = rng.randbelow(i + 1)
        pairs[i], pairs[j] = pairs[j], pairs[i]
    deg = [0] * n
    edges = []
    for u, v in pairs:
        if deg[u] < max_degree and deg[v] < max_degree:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return Graph(n, tuple(edges))


def edgeless_graph(n: int) -> Graph:
    return Graph(n, ())


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def connected_graphs(n: int) -> list[Graph]:
    """One representative per isomorphism class of connected graphs on ``n`` vertices.

    Representatives carry the lexicographically smallest relabelled edge list.
    Intended for n <= 6.
    """
    if n == 1:
        return [Graph(1, ())]
    pairs = list(combinations(range(n), 2))
    perms = list(permutations(range(n)))
    seen = set()
    out = []
    for mask in range(1, 1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        if len(edges) < n - 1:
            continue
        canon = min(tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in edges)) for p in perms)
        if canon in seen:
            continue
        g = Graph(n, canon)
        if g.is_connected():
            seen.add(canon)
            out.append(g)
    out.sort(key=lambda g: (g.m, g.edges))
    return out
