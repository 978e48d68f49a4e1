"""Simple undirected graphs and the cut-rank entanglement of their graph states."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRangeError, check_probability
from .f2la import BitMatrix, rank, sample_bernoulli_bits


def _sorted_subset(K: Iterable[int], n: int) -> np.ndarray:
    arr = np.unique(np.asarray(list(K), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise IndexOutOfRangeError(f"vertex index outside [0, {n})")
    return arr


def complement(K: Iterable[int], n: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    mask[_sorted_subset(K, n)] = False
    return np.flatnonzero(mask)


@dataclass(frozen=True)
class Graph:
    """Vertices ``0..n-1``; ``adjacency`` is symmetric with zero diagonal."""

    n: int
    adjacency: BitMatrix

    def __post_init__(self):
        a = self.adjacency.to_dense()
        if a.shape != (self.n, self.n):
            raise ValueError("adjacency must be n x n")
        if np.any(np.diag(a)) or not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric with no self loops")

    @classmethod
    def from_dense(cls, a) -> Graph:
        a = np.asarray(a, dtype=np.uint8)
        return cls(a.shape[0], BitMatrix.from_dense(a))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        a = np.zeros((n, n), dtype=np.uint8)
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise IndexOutOfRangeError((i, j))
            if i == j:
                raise ValueError("self loops are not allowed")
            a[i, j] = a[j, i] = 1
        return cls.from_dense(a)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(n, BitMatrix.zeros(n, n))

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls.from_dense(1 - np.eye(n, dtype=np.uint8))

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency.to_dense(), 1))
        return list(zip(i.tolist(), j.tolist()))

    def neighbors(self, i: int) -> list[int]:
        if not 0 <= i < self.n:
            raise IndexOutOfRangeError(i)
        return self.adjacency.row(i).support()

    def degrees(self) -> np.ndarray:
        return self.adjacency.row_weights()

    def degree(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexOutOfRangeError(i)
        return int(self.degrees()[i])

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def min_degree(self) -> int:
        return int(self.degrees().min()) if self.n else 0

    def to_text(self) -> str:
        return "\n".join([str(self.n)] + [f"{i} {j}" for i, j in self.edges()]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Graph:
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        n = int(lines[0][0])
        edges = [(int(a), int(b)) for a, b in lines[1:]]
        if any(i >= j for i, j in edges):
            raise ValueError("edge lines must satisfy i < j")
        return cls.from_edges(n, edges)


def sample_er(n: int, q: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, q): pair {i < j} present iff hashed entry (i, j) fires."""
    if n < 1:
        raise ValueError("n must be positive")
    q = check_probability(q)
    upper = np.triu(sample_bernoulli_bits(n, n, q, seed), 1)
    return Graph.from_dense(upper | upper.T)


def adjacency_top(G: Graph) -> BitMatrix:
    """Entries with row index > column index, so ``A_top + A_top^T = A``."""
    return BitMatrix.from_dense(np.tril(G.adjacency.to_dense(), -1))


def cut_matrix(G: Graph, K: Iterable[int]) -> BitMatrix:
    """Rows: sorted ``V \\ K``; columns: sorted ``K``."""
    Ks = _sorted_subset(K, G.n)
    rest = complement(Ks, G.n)
    return BitMatrix.from_dense(G.adjacency.to_dense()[np.ix_(rest, Ks)])


def entanglement_entropy(G: Graph, K: Iterable[int]) -> int:
    """Entropy of the graph state across ``(K, V \\ K)`` in ebits: the cut rank."""
    return rank(cut_matrix(G, K))


def induced_subgraph(G: Graph, S: Iterable[int]) -> Graph:
    Ss = _sorted_subset(S, G.n)
    return Graph.from_dense(G.adjacency.to_dense()[np.ix_(Ss, Ss)])
