"""Source trees, target graphs and path-like tree families.

Vertices are dense integers starting at 0.  Target graphs may carry loops,
which are kept apart from the edge set; a looped vertex is adjacent to
itself exactly once.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class InvalidGraphError(ValueError):
    """Raised when a graph or tree violates its structural invariants."""


class GraphParseError(ValueError):
    """Raised on a malformed graph or tree document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class TargetGraph:
    vertex_count: int
    edges: frozenset[tuple[int, int]]
    loops: frozenset[int] = frozenset()
    depth_tags: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise InvalidGraphError("vertex_count must be nonnegative")
        n = self.vertex_count
        for u, v in self.edges:
            if not (0 <= u < v < n):
                raise InvalidGraphError(f"bad edge ({u}, {v}) for {n} vertices")
        for v in self.loops:
            if not 0 <= v < n:
                raise InvalidGraphError(f"bad loop vertex {v}")
        if self.depth_tags is not None and len(self.depth_tags) != n:
            raise InvalidGraphError("depth_tags length differs from vertex_count")

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[Sequence[int]],
        loops: Iterable[int] = (),
        depth_tags: Sequence[int] | None = None,
    ) -> "TargetGraph":
        """Build from an edge list, rejecting multi-edges and self-pairs."""
        seen: set[tuple[int, int]] = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise InvalidGraphError(f"self-pair ({u}, {v}); use the loops list")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise InvalidGraphError(f"multi-edge {key}")
            seen.add(key)
        loop_list = [int(v) for v in loops]
        if len(set(loop_list)) != len(loop_list):
            raise InvalidGraphError("duplicate loop")
        tags = tuple(int(t) for t in depth_tags) if depth_tags is not None else None
        return cls(vertex_count, frozenset(seen), frozenset(loop_list), tags)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbor lists; a looped vertex lists itself once."""
        nbrs: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        for v in self.loops:
            nbrs[v].append(v)
        return tuple(tuple(sorted(a)) for a in nbrs)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return u in self.loops
        return (min(u, v), max(u, v)) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


@dataclass(frozen=True)
class SourceTree:
    """A rooted tree; ``parent[root] == -1``."""

    vertex_count: int
    parent: tuple[int, ...]
    root: int = 0

    def __post_init__(self):
        n = self.vertex_count
        if n < 1:
            raise InvalidGraphError("a tree needs at least one vertex")
        if len(self.parent) != n:
            raise InvalidGraphError("parent list length differs from vertex_count")
        if not 0 <= self.root < n or self.parent[self.root] != -1:
            raise InvalidGraphError("root must be a vertex with parent -1")
        for v, p in enumerate(self.parent):
            if v != self.root and not 0 <= p < n:
                raise InvalidGraphError(f"vertex {v} has invalid parent {p}")
        # every vertex must reach the root without revisiting
        for v in range(n):
            steps, u = 0, v
            while u != self.root:
                u = self.parent[u]
                steps += 1
                if steps > n:
                    raise InvalidGraphError("parent map contains a cycle")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]], root: int = 0) -> "SourceTree":
        adj: list[list[int]] = [[] for _ in range(vertex_count)]
        count = 0
        for u, v in edges:
            if u == v or not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InvalidGraphError(f"bad tree edge ({u}, {v})")
            adj[u].append(v)
            adj[v].append(u)
            count += 1
        if count != vertex_count - 1:
            raise InvalidGraphError(f"a tree on {vertex_count} vertices needs {vertex_count - 1} edges")
        parent = [-2] * vertex_count
        parent[root] = -1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if parent[w] == -2:
                    parent[w] = u
                    queue.append(w)
        if -2 in parent:
            raise InvalidGraphError("edges do not form a connected tree")
        return cls(vertex_count, tuple(parent), root)

    @cached_property
    def children(self) -> tuple[tuple[int, ...], ...]:
        kids: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(v)
        return tuple(tuple(k) for k in kids)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((min(v, p), max(v, p)) for v, p in enumerate(self.parent) if p >= 0)

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v in self.edges():
            deg[u] += 1
            deg[v] += 1
        return deg

    def postorder(self) -> list[int]:
        """Vertices ordered so every child precedes its parent."""
        order: list[int] = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(self.children[v])
        order.reverse()
        return order

    def rerooted(self, root: int) -> "SourceTree":
        return SourceTree.from_edges(self.vertex_count, self.edges(), root)

    def diameter(self) -> int:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges():
            adj[u].append(v)
            adj[v].append(u)

        def farthest(src: int) -> tuple[int, int]:
            dist = {src: 0}
            queue = deque([src])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            far = max(dist, key=lambda v: (dist[v], -v))
            return far, dist[far]

        end, _ = farthest(self.root)
        return farthest(end)[1]


@dataclass(frozen=True)
class PathLikeFamily:
    """Trees G_n obtained by hanging a path of n new vertices off ``attach_vertex``."""

    seed: SourceTree
    attach_vertex: int

    def __post_init__(self):
        if not 0 <= self.attach_vertex < self.seed.vertex_count:
            raise InvalidGraphError("attach_vertex is not a vertex of the seed")

    @cached_property
    def rooted_seed(self) -> SourceTree:
        """The seed rooted at the attachment vertex."""
        return self.seed.rerooted(self.attach_vertex)

    def member(self, n: int) -> SourceTree:
        """G_n, with the new path vertices numbered after the seed's."""
        if n < 0:
            raise InvalidGraphError("family index must be nonnegative")
        m = self.seed.vertex_count
        edges = self.seed.edges()
        prev = self.attach_vertex
        for i in range(n):
            edges.append((prev, m + i))
            prev = m + i
        return SourceTree.from_edges(m + n, edges, self.seed.root)


def _check_size(n: int, least: int = 1) -> None:
    if n < least:
        raise InvalidGraphError(f"size must be at least {least}, got {n}")


def make_path(n: int) -> SourceTree:
    _check_size(n)
    return SourceTree(n, tuple(i - 1 for i in range(n)), 0)


def make_star(n: int) -> SourceTree:
    _check_size(n)
    return SourceTree(n, (-1,) + (0,) * (n - 1), 0)


def make_E(n: int) -> SourceTree:
    """P_{n-1} on vertices 0..n-2 plus a pendant vertex n-1 hung on vertex 2."""
    _check_size(n, 7)
    parent = [i - 1 for i in range(n - 1)] + [2]
    return SourceTree(n, tuple(parent), 0)


def make_T(x: int, y: int, z: int, rooted_loop: bool = False) -> TargetGraph:
    """Spherically symmetric tree with down-degrees x, y, z, numbered breadth first."""
    for name, val in (("x", x), ("y", y), ("z", z)):
        if val < 1:
            raise InvalidGraphError(f"parameter {name} must be positive, got {val}")
    edges = []
    tags = [0]
    frontier = [0]
    nxt = 1
    for depth, fan in enumerate((x, y, z), start=1):
        new_frontier = []
        for p in frontier:
            for _ in range(fan):
                edges.append((p, nxt))
                tags.append(depth)
                new_frontier.append(nxt)
                nxt += 1
        frontier = new_frontier
    loops = frozenset({0}) if rooted_loop else frozenset()
    return TargetGraph(nxt, frozenset(edges), loops, tuple(tags))


def make_complete(q: int) -> TargetGraph:
    _check_size(q)
    return TargetGraph(q, frozenset((u, v) for u in range(q) for v in range(u + 1, q)))


def make_hind() -> TargetGraph:
    """An edge with one looped endpoint; its colorings are independent sets."""
    return TargetGraph(2, frozenset({(0, 1)}), frozenset({0}))


def path_family() -> PathLikeFamily:
    """Seed P_4 extended from a leaf: member n is P_{n+4}."""
    return PathLikeFamily(make_path(4), 0)


def e_family() -> PathLikeFamily:
    """Seed P_4 extended from a non-leaf: member n is E_{n+4}."""
    return PathLikeFamily(make_path(4), 1)


# -- documents ---------------------------------------------------------------

def graph_to_dict(g: TargetGraph) -> dict:
    doc: dict = {
        "vertices": g.vertex_count,
        "edges": [list(e) for e in sorted(g.edges)],
        "loops": sorted(g.loops),
    }
    if g.depth_tags is not None:
        doc["depth_tags"] = list(g.depth_tags)
    return doc


def tree_to_dict(t: SourceTree) -> dict:
    return {"vertices": t.vertex_count, "root": t.root, "parent": list(t.parent)}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True) + "\n"


def _loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise GraphParseError("document must be an object")
    return doc


def _int_list(doc: dict, key: str, default=None) -> list:
    val = doc.get(key, default)
    if not isinstance(val, list):
        raise GraphParseError(f"field {key!r} must be a list")
    return val


def graph_from_dict(doc: dict) -> TargetGraph:
    n = doc.get("vertices")
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphParseError("field 'vertices' must be an integer")
    edges = _int_list(doc, "edges", [])
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, int) for v in e)):
            raise GraphParseError(f"edge {e!r} is not a pair of integers")
    loops = _int_list(doc, "loops", [])
    tags = doc.get("depth_tags")
    return TargetGraph.from_edges(n, edges, loops, tags)


def tree_from_dict(doc: dict) -> SourceTree:
    n = doc.get("vertices")
    if not isinstance(n, int) or isinstance(n, bool):
        raise GraphParseError("field 'vertices' must be an integer")
    parent = _int_list(doc, "parent")
    root = doc.get("root", parent.index(-1) if -1 in parent else 0)
    return SourceTree(n, tuple(int(p) for p in parent), int(root))


def write_graph(g: TargetGraph) -> str:
    return dumps(graph_to_dict(g))


def read_graph(text: str) -> TargetGraph:
    return graph_from_dict(_loads(text))


def write_tree(t: SourceTree) -> str:
    return dumps(tree_to_dict(t))


def read_tree(text: str) -> SourceTree:
    return tree_from_dict(_loads(text))
