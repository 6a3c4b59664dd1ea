"""Weighted dependency graphs: induced multigraphs on vertex multisets,
spanning-tree weight sums (matrix-tree determinant plus a brute-force oracle),
weighted degrees, and the cumulant bounds they certify."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Callable, Iterable, NamedTuple

import numpy as np


class UnknownVertex(KeyError):
    """A multiset element is not a vertex of the graph."""


@dataclass
class WeightedGraph:
    """Undirected graph with nonnegative edge weights; absent edge = weight 0."""

    vertices: list
    weights: dict = field(default_factory=dict)  # frozenset({u, v}) -> weight

    def __post_init__(self):
        vset = set(self.vertices)
        for edge, w in self.weights.items():
            u, v = tuple(edge)
            if u not in vset or v not in vset:
                raise UnknownVertex(f"edge {set(edge)} uses unknown vertices")
            if u == v:
                raise ValueError("self-loops are not stored")
            if w < 0:
                raise ValueError("edge weights must be nonnegative")

    @classmethod
    def from_edges(cls, vertices: Iterable, edges: Iterable[tuple]) -> "WeightedGraph":
        weights = {}
        for u, v, w in edges:
            weights[frozenset((u, v))] = w
        return cls(list(vertices), weights)

    def weight(self, u, v):
        return self.weights.get(frozenset((u, v)), 0)


def parse_edge_list(text: str) -> WeightedGraph:
    """Graph from `u v w` lines, vertices as nonnegative integers."""
    edges = []
    vertices = set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        u_s, v_s, w_s = line.split()
        u, v = int(u_s), int(v_s)
        vertices.update((u, v))
        edges.append((u, v, float(w_s)))
    return WeightedGraph.from_edges(sorted(vertices), edges)


@dataclass
class InducedMultigraph:
    """Multigraph induced on a multiset: one node per multiset element, an edge
    where source vertices coincide (weight 1) or are adjacent in the graph."""

    sources: list                       # source vertex of each node
    edges: list                         # (i, j, weight) with i < j


def induced(g: WeightedGraph, multiset: Iterable) -> InducedMultigraph:
    items = list(multiset)
    if not items:
        raise ValueError("multiset must be non-empty")
    vset = set(g.vertices)
    for v in items:
        if v not in vset:
            raise UnknownVertex(f"{v!r} is not a vertex")
    edges = []
    for i, j in combinations(range(len(items)), 2):
        if items[i] == items[j]:
            edges.append((i, j, 1))
        else:
            w = g.weight(items[i], items[j])
            if w != 0:
                edges.append((i, j, w))
    return InducedMultigraph(items, edges)


def _is_connected(n: int, edges) -> bool:
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    comps = n
    for i, j, w in edges:
        if w == 0:
            continue
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            comps -= 1
    return comps == 1


def spanning_tree_weight_sum(mg: InducedMultigraph):
    """Sum over spanning trees of the product of edge weights.

    Weighted matrix-tree: any cofactor of the multigraph Laplacian.  Exact
    (Fraction elimination) when all weights are ints or Fractions, floating
    LU otherwise.  Zero exactly when the multigraph is disconnected.
    """
    n = len(mg.sources)
    if n == 1:
        return 1
    if not _is_connected(n, mg.edges):
        return 0
    exact = all(isinstance(w, (int, Fraction)) for _, _, w in mg.edges)
    if exact:
        lap = [[Fraction(0)] * n for _ in range(n)]
        for i, j, w in mg.edges:
            w = Fraction(w)
            lap[i][j] -= w
            lap[j][i] -= w
            lap[i][i] += w
            lap[j][j] += w
        minor = [row[1:] for row in lap[1:]]
        return _fraction_det(minor)
    lap = np.zeros((n, n))
    for i, j, w in mg.edges:
        lap[i, j] -= w
        lap[j, i] -= w
        lap[i, i] += w
        lap[j, j] += w
    return float(np.linalg.det(lap[1:, 1:]))


def _fraction_det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    m = [row[:] for row in m]
    det = Fraction(1)
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if m[row][col] != 0:
                pivot = row
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for row in range(col + 1, n):
            factor = m[row][col] * inv
            if factor == 0:
                continue
            for k in range(col, n):
                m[row][k] -= factor * m[col][k]
    return det


def spanning_tree_weight_sum_bruteforce(mg: InducedMultigraph):
    """Oracle: enumerate all (n-1)-edge subsets that form a tree. Nodes <= 8."""
    n = len(mg.sources)
    if n > 8:
        raise ValueError("brute-force oracle capped at 8 nodes")
    if n == 1:
        return 1
    total = 0
    live = [(i, j, w) for i, j, w in mg.edges if w != 0]
    for subset in combinations(live, n - 1):
        if _is_connected(n, subset):  # n-1 edges + connected => tree
            prod = 1
            for _, _, w in subset:
                prod = prod * w
            total += prod
    return total


def max_weighted_degree(g: WeightedGraph) -> float:
    """D = 1 + max over vertices of the total incident weight."""
    totals = {v: 0.0 for v in g.vertices}
    for edge, w in g.weights.items():
        u, v = tuple(edge)
        totals[u] += w
        totals[v] += w
    return 1.0 + (max(totals.values()) if totals else 0.0)


class MultisetCheckRow(NamedTuple):
    multiset: tuple
    kappa: float
    bound: float
    ok: bool


def uwdg_check(
    joint_kappa: Callable[[tuple], object],
    g: WeightedGraph,
    C: float,
    r_max: int,
    exhaustive_cap: int = 20000,
    sample_count: int = 10000,
    rng=None,
    rel_slack: float = 1e-9,
) -> list[MultisetCheckRow]:
    """Check |kappa(A_v, v in B)| <= C^|B| * ST-sum(G[B]) over multisets B.

    Exhaustive up to `exhaustive_cap` multisets per order, uniformly sampled
    beyond; this is a bounded-depth certifier of the defining inequality, not
    a proof over all multisets.
    """
    if C <= 0:
        raise ValueError("C must be positive")
    rows = []
    verts = list(g.vertices)
    n = len(verts)
    for r in range(1, r_max + 1):
        count = math.comb(n + r - 1, r)
        if count <= exhaustive_cap:
            multisets = combinations_with_replacement(verts, r)
        else:
            rng = rng if rng is not None else np.random.default_rng(0)
            multisets = (
                tuple(sorted(verts[k] for k in rng.integers(0, n, size=r)))
                for _ in range(sample_count)
            )
        seen = set()
        for b in multisets:
            b = tuple(b)
            if b in seen:
                continue
            seen.add(b)
            kappa = float(joint_kappa(b))
            bound = float(C) ** r * float(spanning_tree_weight_sum(induced(g, b)))
            rows.append(MultisetCheckRow(b, kappa, bound,
                                         abs(kappa) <= bound + rel_slack * (1.0 + bound)))
    return rows


def uwdg_cumulant_bound(N: float, D: float, C: float, r: int) -> float:
    """N r^(r-2) D^(r-1) C^r, the sum bound from a C-uniform weighted graph."""
    if r < 1:
        raise ValueError("r must be at least 1")
    rr = float(r) ** (r - 2) if r >= 2 else 1.0
    return N * rr * D ** (r - 1) * C ** r


def plain_depgraph_bound(N: float, D: float, A: float, r: int) -> float:
    """N r^(r-2) (2D)^(r-1) A^r, for bounded variables on a plain dependency graph."""
    return uwdg_cumulant_bound(N, 2.0 * D, A, r)
