"""Synthetic graphs, controlled edge sparsification, a spectral embedder, and
embedding-matrix generators for stress-testing the metrics.

Graphs are simple and undirected. Both sparsifiers take a target average
degree and emit exactly T = round(n * degree / 2) edges, so naive and
connectivity-preserving degradation are comparable at equal sparsity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .core import DataError
from .rng import check_seed, make_rng


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: `n` nodes and an (m, 2) edge array.

    Edges satisfy u < v, are lexicographically sorted, and contain no
    duplicates; build instances through `from_edges` to enforce that.
    """

    n: int
    edges: np.ndarray

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        n = int(n)
        if n < 1:
            raise DataError(f"graph needs n >= 1 nodes, got {n}")
        e = np.array(edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= n:
                raise DataError(f"edge endpoint out of range [0, {n})")
            if np.any(e[:, 0] == e[:, 1]):
                bad = e[np.flatnonzero(e[:, 0] == e[:, 1])[0]]
                raise DataError(f"self-loop at node {int(bad[0])}")
            e = np.sort(e, axis=1)
            e = e[np.lexsort((e[:, 1], e[:, 0]))]
            dup = np.flatnonzero((e[1:] == e[:-1]).all(axis=1))
            if dup.size:
                u, v = e[dup[0]]
                raise DataError(f"duplicate edge ({int(u)}, {int(v)})")
        e.setflags(write=False)
        return Graph(n=n, edges=e)

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @property
    def average_degree(self) -> float:
        return 2.0 * self.m / self.n

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        if self.m:
            u, v = self.edges[:, 0], self.edges[:, 1]
            a[u, v] = 1.0
            a[v, u] = 1.0
        return a


def disconnected_pair(g: Graph) -> tuple[int, int] | None:
    """Two nodes in different components, or None when the graph is connected."""
    dsu = DisjointSet(g.n)
    for u, v in g.edges:
        dsu.union(int(u), int(v))
    root0 = dsu.find(0)
    for node in range(1, g.n):
        if dsu.find(node) != root0:
            return 0, node
    return None


def is_connected(g: Graph) -> bool:
    return disconnected_pair(g) is None


def _require_connected(g: Graph, op: str) -> None:
    pair = disconnected_pair(g)
    if pair is not None:
        raise DataError(
            f"{op} requires a connected graph: nodes {pair[0]} and {pair[1]} "
            "are in different components"
        )


@dataclass(frozen=True)
class SbmParams:
    """Stochastic-block-model parameters: block sizes and edge probabilities."""

    blocks: tuple[int, ...]
    p_in: float
    p_out: float
    seed: int

    def __post_init__(self):
        if not self.blocks or any(int(b) < 1 for b in self.blocks):
            raise DataError(f"block sizes must be >= 1, got {self.blocks}")
        if not 0.0 <= self.p_out <= self.p_in <= 1.0:
            raise DataError(
                f"need 0 <= p_out <= p_in <= 1, got p_in={self.p_in}, p_out={self.p_out}"
            )
        check_seed(self.seed)


def sbm_generate(params: SbmParams) -> tuple[Graph, np.ndarray]:
    """Sample a stochastic block model; returns (graph, block labels).

    Each intra-block pair is an edge with probability p_in, each inter-block
    pair with p_out, all independently. Deterministic per seed.
    """
    sizes = [int(b) for b in params.blocks]
    n = sum(sizes)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    rng = make_rng(params.seed)
    u = rng.random((n, n))
    prob = np.where(labels[:, None] == labels[None, :], params.p_in, params.p_out)
    mask = (u < prob) & np.triu(np.ones((n, n), dtype=bool), k=1)
    return Graph.from_edges(n, np.argwhere(mask)), labels


def edge_budget(n: int, target_degree: float) -> int:
    """Edge count T = round(n * target_degree / 2) realizing the target average degree."""
    if target_degree < 0:
        raise DataError(f"target degree must be >= 0, got {target_degree}")
    return int(round(n * target_degree / 2.0))


def sparsify_naive(g: Graph, target_degree: float, seed: int) -> Graph:
    """Uniform sample of T = round(n * degree / 2) distinct edges from the edge set.

    May disconnect the graph; that is the point of this degradation mode.
    """
    t = edge_budget(g.n, target_degree)
    if t > g.m:
        raise DataError(
            f"edge budget {t} (degree {target_degree}) exceeds the {g.m} available edges"
        )
    rng = make_rng(check_seed(seed))
    idx = np.sort(rng.choice(g.m, size=t, replace=False, shuffle=False))
    return Graph.from_edges(g.n, g.edges[idx])


def random_spanning_tree(g: Graph, seed: int) -> Graph:
    """Spanning tree from a seeded edge shuffle + union-find acceptance pass.

    Randomized-Kruskal trees are not uniform over all spanning trees; any
    valid tree serves the degradation experiments.
    """
    _require_connected(g, "random_spanning_tree")
    rng = make_rng(check_seed(seed))
    perm = rng.permutation(g.m)
    dsu = DisjointSet(g.n)
    keep = []
    target = g.n - 1
    for i in perm:
        u, v = g.edges[i]
        if dsu.union(int(u), int(v)):
            keep.append(i)
            if len(keep) == target:
                break
    return Graph.from_edges(g.n, g.edges[np.array(keep, dtype=np.int64)])


def sparsify_connected(g: Graph, target_degree: float, seed: int) -> Graph:
    """Connectivity-preserving sparsification to T = round(n * degree / 2) edges.

    Keeps a random spanning tree and fills the remaining budget with a
    uniform sample of the other edges; the result is always connected and
    uses the same total budget as the naive mode.
    """
    _require_connected(g, "sparsify_connected")
    t = edge_budget(g.n, target_degree)
    if t < g.n - 1:
        raise DataError(
            f"edge budget {t} (degree {target_degree}) is below the "
            f"spanning-tree size {g.n - 1}"
        )
    if t > g.m:
        raise DataError(
            f"edge budget {t} (degree {target_degree}) exceeds the {g.m} available edges"
        )
    seed = check_seed(seed)
    tree = random_spanning_tree(g, seed)

    extra_count = t - (g.n - 1)
    if extra_count == 0:
        return tree
    ids = g.edges[:, 0] * g.n + g.edges[:, 1]
    tree_ids = tree.edges[:, 0] * g.n + tree.edges[:, 1]
    rest = g.edges[~np.isin(ids, tree_ids)]
    rng = make_rng(seed, 1)
    idx = np.sort(rng.choice(rest.shape[0], size=extra_count, replace=False, shuffle=False))
    return Graph.from_edges(g.n, np.vstack([tree.edges, rest[idx]]))


def spectral_embed(g: Graph, dim: int) -> np.ndarray:
    """Embed nodes with the top singular directions of the normalized adjacency.

    Rows are eigenvectors of S = D^{-1/2} (A + I) D^{-1/2} (self-loops keep
    isolated nodes well-defined), ordered by |eigenvalue| and scaled by the
    square root of the singular value. Each column's sign is fixed by making
    its largest-magnitude entry positive, so the output is deterministic up
    to solver behavior for a fixed build.
    """
    if not 1 <= dim <= g.n:
        raise DataError(f"dim must be in [1, {g.n}], got {dim}")
    a = g.adjacency()
    np.fill_diagonal(a, 1.0)
    dinv = 1.0 / np.sqrt(a.sum(axis=1))
    s = a * dinv[:, None] * dinv[None, :]
    s = (s + s.T) / 2.0
    lam, vec = np.linalg.eigh(s)
    order = np.argsort(-np.abs(lam), kind="stable")[:dim]
    sig = np.abs(lam[order])
    cols = vec[:, order]
    anchor = cols[np.abs(cols).argmax(axis=0), np.arange(dim)]
    cols = np.where(anchor < 0.0, -cols, cols)
    return cols * np.sqrt(sig)[None, :]


def gen_sphere(n: int, d: int, seed: int) -> np.ndarray:
    """n rows distributed uniformly on the unit sphere in d dimensions."""
    if n < 1 or d < 1:
        raise DataError(f"need n >= 1 and d >= 1, got {n} x {d}")
    x = make_rng(check_seed(seed)).standard_normal((n, d))
    return core.normalize_rows(x)


def gen_collapsed(n: int, d: int, live_dims: int, seed: int) -> np.ndarray:
    """Isotropic Gaussian rows confined to the first `live_dims` coordinates.

    The remaining d - live_dims columns are exact zeros, forcing the
    numerical rank to live_dims.
    """
    if n < 1 or d < 1:
        raise DataError(f"need n >= 1 and d >= 1, got {n} x {d}")
    if not 1 <= live_dims <= d:
        raise DataError(f"live_dims must be in [1, {d}], got {live_dims}")
    x = np.zeros((n, d))
    x[:, :live_dims] = make_rng(check_seed(seed)).standard_normal((n, live_dims))
    return x


def gen_clustered(n: int, d: int, k: int, spread: float, seed: int) -> np.ndarray:
    """Unit-norm rows scattered around k random unit centroids.

    Rows pick a centroid uniformly, add isotropic noise of scale `spread`,
    and are renormalized to the sphere. Small spreads give strongly
    clustered geometry.
    """
    if n < 1 or d < 1:
        raise DataError(f"need n >= 1 and d >= 1, got {n} x {d}")
    if not 1 <= k <= n:
        raise DataError(f"k must be in [1, {n}], got {k}")
    if spread < 0:
        raise DataError(f"spread must be >= 0, got {spread}")
    rng = make_rng(check_seed(seed))
    centroids = core.normalize_rows(rng.standard_normal((k, d)))
    assign = rng.integers(0, k, size=n)
    x = centroids[assign] + spread * rng.standard_normal((n, d))
    return core.normalize_rows(x)
