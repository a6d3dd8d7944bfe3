"""Sankey diagrams of sequences of partitions and layered crossing minimisation.

Vertex ``i`` of layer ``m`` is the ``i``-th canonical block of ``theta(t_m)``. A
layout holds one permutation per layer: ``rankings[m][i]`` is the 0-based vertical
rank of vertex ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from .core import BigradeGrid, PartitionSequence

DEFAULT_MAX_WIDTH = 8
_CHUNK = 2048


class WidthCapExceeded(RuntimeError):
    def __init__(self, layer: int, width: int, cap: int):
        super().__init__(
            f"layer {layer} has {width} clusters, above the exact-solver cap of {cap}; "
            "use the heuristic optimiser"
        )
        self.layer = layer
        self.width = width
        self.cap = cap


@dataclass(frozen=True)
class SankeyDiagram:
    widths: tuple[int, ...]
    edges: tuple[tuple[tuple[int, int], ...], ...]
    weights: tuple[dict, ...]

    @property
    def m(self) -> int:
        return len(self.widths)

    @property
    def layers(self) -> list[list[tuple[int, int]]]:
        return [[(m, i) for i in range(w)] for m, w in enumerate(self.widths)]

    def incidence(self, m: int) -> np.ndarray:
        """0/1 matrix of ``E_m`` with rows in layer ``m`` and columns in layer ``m + 1``."""
        a = np.zeros((self.widths[m], self.widths[m + 1]), dtype=np.int64)
        for u, v in self.edges[m]:
            a[u, v] = 1
        return a


@dataclass(frozen=True)
class Layout:
    rankings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rk = tuple(tuple(int(x) for x in r) for r in self.rankings)
        for r in rk:
            if sorted(r) != list(range(len(r))):
                raise ValueError(f"ranking {r} is not a permutation")
        object.__setattr__(self, "rankings", rk)

    @classmethod
    def identity(cls, d: SankeyDiagram) -> Layout:
        return cls(tuple(tuple(range(w)) for w in d.widths))

    @classmethod
    def from_orders(cls, orders) -> Layout:
        """Build from per-layer vertex orders (top to bottom) instead of ranks."""
        rankings = []
        for order in orders:
            r = [0] * len(order)
            for rank, v in enumerate(order):
                r[v] = rank
            rankings.append(tuple(r))
        return cls(tuple(rankings))

    def orders(self) -> list[list[int]]:
        return [sorted(range(len(r)), key=r.__getitem__) for r in self.rankings]


def build_sankey(seq: PartitionSequence) -> SankeyDiagram:
    labels = seq.label_matrix
    edges, weights = [], []
    for m in range(seq.m - 1):
        pairs, counts = np.unique(np.stack([labels[m], labels[m + 1]], axis=1), axis=0, return_counts=True)
        e = tuple((int(u), int(v)) for u, v in pairs)
        edges.append(e)
        weights.append({uv: int(c) for uv, c in zip(e, counts)})
    return SankeyDiagram(seq.block_counts, tuple(edges), tuple(weights))


def _check_layout(d: SankeyDiagram, layout: Layout) -> None:
    if tuple(len(r) for r in layout.rankings) != d.widths:
        raise ValueError("layout does not match the diagram's layer widths")


def layer_crossings(edges, rank_a, rank_b) -> int:
    """Unordered pairs of edges between two layers whose endpoints are inverted."""
    pts = sorted((rank_a[u], rank_b[v]) for u, v in edges)
    count = 0
    for k, (ua, vb) in enumerate(pts):
        for ua2, vb2 in pts[k + 1:]:
            if ua2 > ua and vb2 < vb:
                count += 1
    return count


def crossing_number(d: SankeyDiagram, layout: Layout) -> int:
    _check_layout(d, layout)
    rk = layout.rankings
    return sum(layer_crossings(d.edges[m], rk[m], rk[m + 1]) for m in range(d.m - 1))


def _before_matrices(perms: np.ndarray) -> np.ndarray:
    """``B[k, a, b] = 1`` iff vertex ``a`` is ranked above ``b`` in ranking ``k``."""
    return (perms[:, :, None] < perms[:, None, :]).astype(np.int64)


def _transition_costs(inc: np.ndarray, perms_a: np.ndarray, perms_b: np.ndarray):
    """Yield ``(start, block)`` with crossing counts for every ranking pair, chunked over ``perms_a``.

    With ``B`` the "ranked above" matrices, crossings equal ``<B_a, E B_b^T E^T>``.
    """
    before_b = _before_matrices(perms_b)
    y = np.einsum("uv,kwv,xw->kux", inc, before_b, inc).reshape(len(perms_b), -1)
    for start in range(0, len(perms_a), _CHUNK):
        before_a = _before_matrices(perms_a[start:start + _CHUNK]).reshape(-1, inc.shape[0] ** 2)
        yield start, before_a @ y.T


def minimize_crossings_exact(d: SankeyDiagram, max_width: int = DEFAULT_MAX_WIDTH) -> tuple[Layout, int]:
    """Globally optimal layout by dynamic programming over layers.

    States are the rankings of one layer; crossings only couple consecutive layers,
    so the minimum over all ranking products decomposes exactly.
    """
    for m, w in enumerate(d.widths):
        if w > max_width:
            raise WidthCapExceeded(m, w, max_width)
    perms = [np.array(list(permutations(range(w))), dtype=np.int64) for w in d.widths]
    cost = np.zeros(len(perms[0]), dtype=np.int64)
    back = []
    for m in range(d.m - 1):
        inc = d.incidence(m)
        nxt = np.full(len(perms[m + 1]), np.iinfo(np.int64).max, dtype=np.int64)
        arg = np.zeros(len(perms[m + 1]), dtype=np.int64)
        for start, block in _transition_costs(inc, perms[m], perms[m + 1]):
            total = block + cost[start:start + block.shape[0], None]
            best = total.argmin(axis=0)
            vals = total[best, np.arange(total.shape[1])]
            better = vals < nxt
            nxt[better] = vals[better]
            arg[better] = best[better] + start
        back.append(arg)
        cost = nxt
    k = int(cost.argmin())
    best_cost = int(cost[k])
    chosen = [k]
    for arg in reversed(back):
        k = int(arg[k])
        chosen.append(k)
    chosen.reverse()
    layout = Layout(tuple(tuple(perms[m][k]) for m, k in enumerate(chosen)))
    return layout, best_cost


def minimize_crossings_bruteforce(d: SankeyDiagram) -> tuple[Layout, int]:
    """Minimum over every product of per-layer rankings (small diagrams only)."""
    best = None
    for rankings in product(*(permutations(range(w)) for w in d.widths)):
        layout = Layout(rankings)
        c = crossing_number(d, layout)
        if best is None or c < best[1]:
            best = (layout, c)
    return best


def _barycenter_order(order, fixed_rank, neighbours) -> list[int]:
    cur = {v: k for k, v in enumerate(order)}

    def key(v):
        nb = neighbours[v]
        bc = sum(fixed_rank[u] for u in nb) / len(nb) if nb else cur[v]
        return bc, cur[v]

    return sorted(order, key=key)


def minimize_crossings_heuristic(d: SankeyDiagram, sweeps: int = 4,
                                 initial: Layout | None = None) -> tuple[Layout, int]:
    """Layer-by-layer barycenter sweeps starting from ``initial`` (default: identity layout).

    Each sweep goes down then up; a reordered layer is kept only if the total
    crossing number does not increase. Ties in barycenter keep the current order.
    """
    if sweeps < 1:
        raise ValueError("sweeps must be at least 1")
    start = Layout.identity(d) if initial is None else initial
    _check_layout(d, start)
    orders = start.orders()
    best = crossing_number(d, Layout.from_orders(orders))
    down = [dict() for _ in range(d.m)]
    up = [dict() for _ in range(d.m)]
    for m in range(d.m - 1):
        for u, v in d.edges[m]:
            down[m + 1].setdefault(v, []).append(u)
            up[m].setdefault(u, []).append(v)
    for m in range(d.m):
        for v in range(d.widths[m]):
            down[m].setdefault(v, [])
            up[m].setdefault(v, [])

    def try_layer(m, neighbours, ref):
        nonlocal best
        ref_rank = {v: k for k, v in enumerate(orders[ref])}
        candidate = _barycenter_order(orders[m], ref_rank, neighbours)
        if candidate == orders[m]:
            return
        trial = list(orders)
        trial[m] = candidate
        c = crossing_number(d, Layout.from_orders(trial))
        if c <= best:
            orders[m] = candidate
            best = c

    for _ in range(sweeps):
        for m in range(1, d.m):
            try_layer(m, down[m], m - 1)
        for m in range(d.m - 2, -1, -1):
            try_layer(m, up[m], m + 1)
    return Layout.from_orders(orders), best


@dataclass(frozen=True)
class LayerConflicts:
    zero: bool
    triangle_zero: bool
    one: bool


def classify_layer_conflicts(d: SankeyDiagram, m: int) -> LayerConflicts:
    """Conflict types on the window ``[t_m, t_{m+1}]`` read off the bipartite graph ``E_m``."""
    if not 0 <= m < d.m - 1:
        raise IndexError(f"layer {m} has no outgoing Sankey layer")
    edges = d.edges[m]
    deg_u: dict[int, int] = {}
    deg_v: dict[int, int] = {}
    for u, v in edges:
        deg_u[u] = deg_u.get(u, 0) + 1
        deg_v[v] = deg_v.get(v, 0) + 1
    zero = max(deg_u.values(), default=0) >= 2 and max(deg_v.values(), default=0) >= 2
    # a path with three edges needs a middle edge whose ends both branch
    triangle_zero = any(deg_u[u] >= 2 and deg_v[v] >= 2 for u, v in edges)
    # every vertex carries an edge, so the graph is a forest iff |E| = |V| - components
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    one = False
    for u, v in edges:
        a, b = find(("u", u)), find(("v", v))
        if a == b:
            one = True
            break
        parent[a] = b
    return LayerConflicts(zero, triangle_zero, one)


def hf1_crossing_bound(seq: PartitionSequence, hf1: BigradeGrid) -> int:
    """Sum of ``HF_1`` over consecutive-layer bigrades; a lower bound on the minimum crossing number."""
    if hf1.m != seq.m:
        raise ValueError("grid was not computed for this sequence")
    return int(hf1.superdiagonal().sum())


def edge_list_rows(d: SankeyDiagram, layout: Layout):
    """Plot-ready rows ``(layer, source_rank, target_rank, weight)``, all 1-based."""
    _check_layout(d, layout)
    rk = layout.rankings
    for m in range(d.m - 1):
        rows = sorted((rk[m][u] + 1, rk[m + 1][v] + 1, d.weights[m][(u, v)]) for u, v in d.edges[m])
        for src, dst, w in rows:
            yield m + 1, src, dst, w
