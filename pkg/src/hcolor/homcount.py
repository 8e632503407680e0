"""Exact homomorphism counts from trees into target graphs.

Everything here is integer arithmetic on Python ints; nothing is rounded.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import PathLikeFamily, SourceTree, TargetGraph
from .orbits import OrbitQuotient

BRUTE_FORCE_SOURCE_LIMIT = 8
BRUTE_FORCE_TARGET_LIMIT = 6


def hom_bruteforce(G: SourceTree, H: TargetGraph) -> int:
    """Count by trying every vertex map V(G) -> V(H)."""
    edges = G.edges()
    return sum(
        1
        for f in itertools.product(range(H.vertex_count), repeat=G.vertex_count)
        if all(H.has_edge(f[u], f[v]) for u, v in edges)
    )


def hom_oracle(G: SourceTree, H: TargetGraph) -> int:
    """hom(G, H) by leaf-to-root dynamic programming over all of V(H).

    Small instances are also enumerated exhaustively and must agree.
    """
    adj = H.adjacency
    nh = H.vertex_count
    table: dict[int, list[int]] = {}
    for v in G.postorder():
        counts = [1] * nh
        for c in G.children[v]:
            child = table.pop(c)
            for u in range(nh):
                counts[u] *= sum(child[w] for w in adj[u])
        table[v] = counts
    total = sum(table[G.root])
    if G.vertex_count <= BRUTE_FORCE_SOURCE_LIMIT and nh <= BRUTE_FORCE_TARGET_LIMIT:
        brute = hom_bruteforce(G, H)
        if brute != total:
            raise RuntimeError(f"oracle mismatch: dp={total} enumeration={brute}")
    return total


def hvector(T: SourceTree, q: OrbitQuotient) -> tuple[int, ...]:
    """Per-class counts of colorings of T with the root pinned to a class representative."""
    k = q.k
    M = q.quotient
    if len(M) != k or any(len(row) != k for row in M):
        raise ValueError(f"quotient matrix is not {k} x {k}")
    table: dict[int, list[int]] = {}
    for v in T.postorder():
        h = [1] * k
        for c in T.children[v]:
            child = table.pop(c)
            for i in range(k):
                h[i] *= sum(M[i][j] * child[j] for j in range(k) if M[i][j])
        table[v] = h
    return tuple(table[T.root])


def hom_quotient(T: SourceTree, q: OrbitQuotient) -> int:
    return sum(a * h for a, h in zip(q.class_sizes, hvector(T, q)))


def _matvec(M, v) -> list[int]:
    return [sum(m * x for m, x in zip(row, v)) for row in M]


def _matmul(A, B) -> list[list[int]]:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def matrix_power(M, n: int) -> list[list[int]]:
    k = len(M)
    result = [[int(i == j) for j in range(k)] for i in range(k)]
    base = [list(r) for r in M]
    while n:
        if n & 1:
            result = _matmul(result, base)
        base = _matmul(base, base)
        n >>= 1
    return result


def hom_pathlike(fam: PathLikeFamily, q: OrbitQuotient, n: int) -> int:
    """a(H) M^n h(G_0, v_0)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    h = hvector(fam.rooted_seed, q)
    v = _matvec(matrix_power(q.quotient, n), h)
    return sum(a * x for a, x in zip(q.class_sizes, v))


@dataclass(frozen=True)
class CountSequence:
    start_n: int
    values: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.values[n - self.start_n]

    def to_dict(self) -> dict:
        return {"start_n": self.start_n, "values": [str(v) for v in self.values]}

    @classmethod
    def from_dict(cls, doc: dict) -> "CountSequence":
        return cls(int(doc["start_n"]), tuple(int(v) for v in doc["values"]))


def hom_sequence(fam: PathLikeFamily, q: OrbitQuotient, n_from: int, n_to: int) -> CountSequence:
    """hom(G_n, H) for n_from <= n <= n_to, stepping the vector by M each time."""
    if n_from > n_to:
        raise ValueError("n_from must not exceed n_to")
    if n_from < 0:
        raise ValueError("n must be nonnegative")
    h = hvector(fam.rooted_seed, q)
    v = _matvec(matrix_power(q.quotient, n_from), h)
    values = []
    for _ in range(n_from, n_to + 1):
        values.append(sum(a * x for a, x in zip(q.class_sizes, v)))
        v = _matvec(q.quotient, v)
    return CountSequence(n_from, tuple(values))
