"""Erdos-Renyi G(n,p) statistics: triangles, isolated vertices, degree-d
vertices, k-cycles; exact pmf oracle by full enumeration at n <= 6; and the
size-bias couplers (erase-edges for isolated vertices, plant-a-copy for
subgraph counts, degree surgery for degree-d counts)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..couplings import CouplingDraw
from ..dist import FinitePmf


@dataclass(frozen=True)
class ErGraph:
    n: int
    p: float
    adjacency: np.ndarray

    def __post_init__(self):
        a = self.adjacency
        if a.shape != (self.n, self.n) or np.any(a != a.T) or np.any(np.diag(a)):
            raise ValueError("adjacency must be symmetric with empty diagonal")


def er_sample(n: int, p: float, rng: np.random.Generator) -> ErGraph:
    if not (0 <= p <= 1):
        raise ValueError("p must be a probability")
    a = np.zeros((n, n), dtype=bool)
    iu = np.triu_indices(n, 1)
    edges = rng.random(iu[0].size) < p
    a[iu] = edges
    a |= a.T
    return ErGraph(n, p, a)


def er_triangles(g: ErGraph) -> int:
    a = g.adjacency.astype(np.int64)
    return int(np.trace(a @ a @ a) // 6)


def er_isolated(g: ErGraph) -> int:
    return int(np.sum(g.adjacency.sum(axis=1) == 0))


def er_degree_d(g: ErGraph, d: int) -> int:
    return int(np.sum(g.adjacency.sum(axis=1) == d))


def er_kcycles(g: ErGraph, k: int) -> int:
    """Number of k-cycles, by iteration over vertex subsets; O(n^k),
    intended for n <= 12."""
    if not (3 <= k <= g.n):
        raise ValueError("need 3 <= k <= n")
    a = g.adjacency
    count = 0
    for verts in itertools.combinations(range(g.n), k):
        rest = verts[1:]
        # cycles through this vertex set: fix the smallest vertex first,
        # each undirected cycle counted twice by orientation
        for perm in itertools.permutations(rest):
            seq = (verts[0],) + perm
            if all(a[seq[i], seq[(i + 1) % k]] for i in range(k)):
                count += 1
    return count // 2


def triangle_moments(n: int, p: float) -> tuple[float, float]:
    """(mean, variance) of the triangle count in G(n,p)."""
    lam = math.comb(n, 3) * p ** 3
    var = lam * (1 - p ** 3 + 3 * (n - 3) * p ** 2 * (1 - p))
    return lam, var


def isolated_moments(n: int, p: float) -> tuple[float, float]:
    """(mean, variance) of the isolated-vertex count."""
    mu = n * (1 - p) ** (n - 1)
    var = mu * (1 + (n * p - 1) * (1 - p) ** (n - 2))
    return mu, var


def er_exact_statistic_pmf(n: int, p: float, statistic) -> FinitePmf:
    """Exact pmf of statistic(graph) by enumerating all 2^C(n,2) graphs.

    statistic receives the boolean adjacency matrix.  n <= 6 keeps this at
    32768 graphs.
    """
    if n > 6:
        raise ValueError("full enumeration capped at n <= 6")
    m = n * (n - 1) // 2
    iu = np.triu_indices(n, 1)
    vals = {}
    for mask in range(1 << m):
        bits = (mask >> np.arange(m)) & 1
        a = np.zeros((n, n), dtype=bool)
        a[iu] = bits.astype(bool)
        a |= a.T
        e = int(bits.sum())
        w = (p ** e) * ((1 - p) ** (m - e))
        s = int(statistic(a))
        vals[s] = vals.get(s, 0.0) + w
    lo, hi = min(vals), max(vals)
    probs = np.zeros(hi - lo + 1)
    for s, w in vals.items():
        probs[s - lo] = w
    return FinitePmf(lo, probs, 0.0)


def er_exact_count_pmf(n: int, p: float, kind: str, d: int | None = None) -> FinitePmf:
    """Vectorized exact pmf for the common statistics (triangles, isolated,
    degree_d) — same enumeration as er_exact_statistic_pmf, all masks at
    once."""
    if n > 6:
        raise ValueError("full enumeration capped at n <= 6")
    m = n * (n - 1) // 2
    iu = np.triu_indices(n, 1)
    bits = ((np.arange(1 << m)[:, None] >> np.arange(m)[None, :]) & 1).astype(bool)
    edge_of = {}
    for e, (u, v) in enumerate(zip(*iu)):
        edge_of[(int(u), int(v))] = e

    if kind == "triangles":
        counts = np.zeros(1 << m, dtype=np.int64)
        for tri in itertools.combinations(range(n), 3):
            e = [edge_of[pair] for pair in itertools.combinations(tri, 2)]
            counts += (bits[:, e[0]] & bits[:, e[1]] & bits[:, e[2]])
    elif kind in ("isolated", "degree_d"):
        target = 0 if kind == "isolated" else d
        counts = np.zeros(1 << m, dtype=np.int64)
        for v in range(n):
            inc = [edge_of[(min(v, u), max(v, u))] for u in range(n) if u != v]
            counts += bits[:, inc].sum(axis=1) == target
    else:
        raise ValueError(f"unknown statistic kind {kind!r}")

    e_tot = bits.sum(axis=1)
    logw = e_tot * (math.log(p) if p > 0 else -np.inf) \
        + (m - e_tot) * (math.log1p(-p) if p < 1 else -np.inf)
    w = np.where(np.isneginf(logw), 0.0, np.exp(logw))
    if p == 0:
        w = (e_tot == 0).astype(float)
    elif p == 1:
        w = (e_tot == m).astype(float)
    lo, hi = int(counts.min()), int(counts.max())
    probs = np.bincount(counts - lo, weights=w, minlength=hi - lo + 1)
    return FinitePmf(lo, probs, 0.0)


# ---------------------------------------------------------------------------
# couplers

def er_isolated_size_bias_coupler(n: int, p: float, rng: np.random.Generator) -> CouplingDraw:
    """Size-bias the isolated-vertex count by erasing the edges at vertex 1
    (exchangeable indicators, so the fixed vertex stands in for I).

    Increasing coupling: erasing edges can only create isolated vertices,
    so X_j^(1) >= X_j for every j != 1 — asserted on each draw.
    """
    g = er_sample(n, p, rng)
    a = g.adjacency
    w = er_isolated(g)
    x = a.sum(axis=1) == 0
    b = a.copy()
    b[0, :] = False
    b[:, 0] = False
    x1 = b.sum(axis=1) == 0
    if not np.all(x1[1:] >= x[1:]):
        raise AssertionError("erase-edges coupling must be increasing")
    ws = 1 + int(x1[1:].sum())
    return CouplingDraw(float(w), float(ws), "size_bias",
                        {"monotone": 1.0, "erased": float(a[0].sum())})


def er_triangle_size_bias_coupler(n: int, p: float, rng: np.random.Generator) -> CouplingDraw:
    """Size-bias the triangle count by planting a triangle on a uniformly
    chosen vertex triple (forcing its three edges present).  Increasing:
    adding edges cannot destroy triangles."""
    g = er_sample(n, p, rng)
    w = er_triangles(g)
    triple = rng.choice(n, size=3, replace=False)
    b = g.adjacency.copy()
    for u, v in itertools.combinations(triple.tolist(), 2):
        b[u, v] = b[v, u] = True
    ws = er_triangles(ErGraph(n, p, b))
    if ws < w:
        raise AssertionError("plant-a-copy coupling must be increasing")
    return CouplingDraw(float(w), float(ws), "size_bias", {"monotone": 1.0})


def er_degree_d_coupler(n: int, p: float, d: int, rng: np.random.Generator) -> CouplingDraw:
    """Size-bias the degree-d vertex count by surgery at vertex 1: add or
    erase uniformly chosen edges at vertex 1 until its degree is exactly d."""
    g = er_sample(n, p, rng)
    w = er_degree_d(g, d)
    b = g.adjacency.copy()
    deg1 = int(b[0].sum())
    others = np.arange(1, n)
    if deg1 > d:
        nbrs = others[b[0, 1:]]
        drop = rng.choice(nbrs, size=deg1 - d, replace=False)
        b[0, drop] = b[drop, 0] = False
    elif deg1 < d:
        non = others[~b[0, 1:]]
        add = rng.choice(non, size=d - deg1, replace=False)
        b[0, add] = b[add, 0] = True
    ws = er_degree_d(ErGraph(n, p, b), d)
    return CouplingDraw(float(w), float(ws), "size_bias", {"deg1": float(deg1)})


def cycle_overlap_counts(n: int, k: int) -> dict[int, int]:
    """|Gamma_alpha^t|: the number of copies of a k-cycle sharing exactly t
    edges with a fixed copy alpha, computed by brute-force enumeration over
    all k-cycles of K_n (small n only)."""
    base = list(range(k))
    base_edges = frozenset(frozenset((base[i], base[(i + 1) % k])) for i in range(k))
    counts: dict[int, int] = {}
    seen = set()
    for verts in itertools.combinations(range(n), k):
        for perm in itertools.permutations(verts[1:]):
            seq = (verts[0],) + perm
            edges = frozenset(frozenset((seq[i], seq[(i + 1) % k])) for i in range(k))
            if edges in seen:
                continue
            seen.add(edges)
            t = len(edges & base_edges)
            if 1 <= t <= k - 1:
                counts[t] = counts.get(t, 0) + 1
    return counts
