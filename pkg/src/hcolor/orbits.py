"""Orbit partitions and equitable-partition quotients of target graphs."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .graphs import TargetGraph, InvalidGraphError

ORBIT = "orbit"
EQUITABLE_ONLY = "equitable-only"

DEFAULT_MAX_VERTICES = 16


class PartitionError(ValueError):
    """The supplied classes do not partition the vertex set."""


class SizeLimitError(ValueError):
    pass


@dataclass(frozen=True)
class VertexPartition:
    classes: tuple[Sequence[int], ...]

    @classmethod
    def canonical(cls, classes) -> "VertexPartition":
        """Sort members, then order classes by their smallest vertex."""
        cleaned = [tuple(sorted(c)) for c in classes]
        cleaned.sort(key=lambda c: c[0] if c else -1)
        return cls(tuple(cleaned))

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self, vertex_count: int) -> list[int]:
        owner = [-1] * vertex_count
        for i, cls in enumerate(self.classes):
            for v in cls:
                owner[v] = i
        return owner


@dataclass(frozen=True)
class OrbitQuotient:
    partition: VertexPartition
    class_sizes: tuple[int, ...]
    quotient: tuple[tuple[int, ...], ...]
    kind: str

    @property
    def k(self) -> int:
        return len(self.class_sizes)

    def to_dict(self) -> dict:
        return {
            "classes": [list(c) for c in self.partition.classes],
            "sizes": list(self.class_sizes),
            "matrix": [list(r) for r in self.quotient],
            "kind": self.kind,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "OrbitQuotient":
        classes = tuple(tuple(c) for c in doc["classes"])
        q = cls(
            VertexPartition(classes),
            tuple(int(s) for s in doc["sizes"]),
            tuple(tuple(int(v) for v in r) for r in doc["matrix"]),
            doc["kind"],
        )
        q.check()
        return q

    def check(self) -> None:
        """Validate sizes and the edge-count symmetry a_i m_ij = a_j m_ji."""
        k = self.k
        if len(self.quotient) != k or any(len(r) != k for r in self.quotient):
            raise ValueError("quotient matrix must be k x k")
        if self.partition.classes and any(len(c) != s for c, s in zip(self.partition.classes, self.class_sizes)):
            raise ValueError("class_sizes disagree with classes")
        for i in range(k):
            for j in range(k):
                if self.class_sizes[i] * self.quotient[i][j] != self.class_sizes[j] * self.quotient[j][i]:
                    raise ValueError(f"edge-count symmetry fails at ({i}, {j})")


@dataclass(frozen=True)
class Refutation:
    """Vertices u, v of class i see different numbers of neighbors in class j."""

    i: int
    j: int
    u: int
    v: int
    count_u: int
    count_v: int


def _check_partition(H: TargetGraph, p: VertexPartition) -> None:
    seen: set[int] = set()
    for cls in p.classes:
        if not cls:
            raise PartitionError("empty class")
        for v in cls:
            if not 0 <= v < H.vertex_count:
                raise PartitionError(f"vertex {v} is not in the graph")
            if v in seen:
                raise PartitionError(f"vertex {v} appears twice")
            seen.add(v)
    if len(seen) != H.vertex_count:
        raise PartitionError("classes do not cover every vertex")


def verify_equitable(H: TargetGraph, p: VertexPartition) -> OrbitQuotient | Refutation:
    _check_partition(H, p)
    owner = p.class_of(H.vertex_count)
    k = len(p)
    rows: list[tuple[int, ...]] = []
    for i, cls in enumerate(p.classes):
        ref = None
        ref_v = -1
        for v in cls:
            counts = [0] * k
            for w in H.neighbors(v):
                counts[owner[w]] += 1
            if ref is None:
                ref, ref_v = counts, v
            elif counts != ref:
                j = next(j for j in range(k) if counts[j] != ref[j])
                return Refutation(i, j, ref_v, v, ref[j], counts[j])
        rows.append(tuple(ref))
    return OrbitQuotient(p, tuple(len(c) for c in p.classes), tuple(rows), EQUITABLE_ONLY)


def _refine(H: TargetGraph, colors: list[int]) -> list[int]:
    """Colour refinement to the coarsest stable colouring below ``colors``."""
    n = H.vertex_count
    while True:
        sigs = [
            (colors[v], tuple(sorted(Counter(colors[w] for w in H.neighbors(v)).items())))
            for v in range(n)
        ]
        relabel = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [relabel[s] for s in sigs]
        if len(relabel) == len(set(colors)):
            return new
        colors = new


def coarsest_equitable(H: TargetGraph) -> VertexPartition:
    """The coarsest equitable partition (loops count as a vertex invariant)."""
    start = [1 if v in H.loops else 0 for v in range(H.vertex_count)]
    colors = _refine(H, start)
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        groups.setdefault(c, []).append(v)
    return VertexPartition.canonical(groups.values())


def _find_automorphism(H: TargetGraph, colors: list[int], u: int, v: int) -> list[int] | None:
    """Backtracking search for an automorphism sending u to v."""
    n = H.vertex_count
    order = [u] + [w for w in range(n) if w != u]
    image = [-1] * n
    used = [False] * n

    def consistent(a: int, b: int) -> bool:
        if (a in H.loops) != (b in H.loops):
            return False
        for c in range(n):
            d = image[c]
            if d >= 0 and H.has_edge(a, c) != H.has_edge(b, d):
                return False
        return True

    def extend(pos: int) -> bool:
        if pos == n:
            return True
        a = order[pos]
        candidates = [v] if pos == 0 else [b for b in range(n) if not used[b] and colors[b] == colors[a]]
        for b in candidates:
            if consistent(a, b):
                image[a] = b
                used[b] = True
                if extend(pos + 1):
                    return True
                image[a] = -1
                used[b] = False
        return False

    return image if extend(0) else None


def orbit_partition(H: TargetGraph, max_vertices: int = DEFAULT_MAX_VERTICES) -> VertexPartition:
    if H.vertex_count > max_vertices:
        raise SizeLimitError(
            f"target has {H.vertex_count} vertices (limit {max_vertices}); "
            "supply a partition and check it with verify_equitable instead"
        )
    n = H.vertex_count
    colors = _refine(H, [1 if w in H.loops else 0 for w in range(n)])
    root = list(range(n))

    def find(a: int) -> int:
        while root[a] != a:
            root[a] = root[root[a]]
            a = root[a]
        return a

    for a in range(n):
        for b in range(a + 1, n):
            if colors[a] != colors[b] or find(a) == find(b):
                continue
            perm = _find_automorphism(H, colors, a, b)
            if perm is not None:
                # every cycle of the automorphism lies inside one orbit
                for c in range(n):
                    ra, rb = find(c), find(perm[c])
                    if ra != rb:
                        root[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for w in range(n):
        groups.setdefault(find(w), []).append(w)
    return VertexPartition.canonical(groups.values())


def orbit_quotient(H: TargetGraph, max_vertices: int = DEFAULT_MAX_VERTICES) -> OrbitQuotient:
    q = verify_equitable(H, orbit_partition(H, max_vertices))
    assert isinstance(q, OrbitQuotient)
    return OrbitQuotient(q.partition, q.class_sizes, q.quotient, ORBIT)


def structural_orbits_T(x: int, y: int, z: int, rooted_loop: bool = False) -> OrbitQuotient:
    """Depth partition of T(x,y,z), without building the graph.

    Unlooped T(1,1,1) is the path P_4, whose flip mixes depths; every other
    case has a fixed root (unique centre or the loop), so depths are orbits.
    """
    for name, val in (("x", x), ("y", y), ("z", z)):
        if val < 1:
            raise InvalidGraphError(f"parameter {name} must be positive, got {val}")
    sizes = (1, x, x * y, x * y * z)
    starts = [0, 1, 1 + x, 1 + x + x * y, 1 + x + x * y + x * y * z]
    classes = tuple(range(starts[i], starts[i + 1]) for i in range(4))
    matrix = (
        (1 if rooted_loop else 0, x, 0, 0),
        (1, 0, y, 0),
        (0, 1, 0, z),
        (0, 0, 1, 0),
    )
    kind = EQUITABLE_ONLY if (x, y, z) == (1, 1, 1) and not rooted_loop else ORBIT
    return OrbitQuotient(VertexPartition(classes), sizes, matrix, kind)
