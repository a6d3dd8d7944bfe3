"""The three bifiltrations of a sequence of partitions, evaluated at a bigrade.

* element-based: union of the solid simplices of all clusters in the window;
* nerve-based: clusters as vertices, a simplex for every family of clusters with a
  common element;
* Merge-Rips: flag complex of the thresholded first-merge matrix.

Only 2-skeleta are materialised. A bigrade is a window of layer indices ``(i, j)``.
Nerve vertices are ``(layer, cluster)`` pairs with the canonical block index of the
cluster, so complexes at different bigrades share one vertex universe.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .complex import DEFAULT_MAX_TRIANGLES, SimplicialComplex, TriangleCapExceeded
from .core import PartitionSequence

CONSTRUCTIONS = ("element", "nerve")


def window_signatures(seq: PartitionSequence, i: int, j: int) -> np.ndarray:
    """Distinct per-element label vectors over layers ``i..j`` (one row per maximal nerve simplex)."""
    return np.unique(seq.label_matrix[i:j + 1].T, axis=0)


def element_triangle_count(seq: PartitionSequence, i: int, j: int) -> int:
    blocks = {b for p in seq.partitions[i:j + 1] for b in p.blocks}
    return sum(comb(len(b), 3) for b in blocks)


def _check_cap(seq: PartitionSequence, i: int, j: int, max_triangles: int | None) -> None:
    if max_triangles is None:
        return
    n = element_triangle_count(seq, i, j)
    if n > max_triangles:
        raise TriangleCapExceeded(
            f"element construction needs up to {n} triangles at bigrade ({i}, {j}), "
            f"above the cap of {max_triangles}; use the nerve construction instead"
        )


def element_increment(seq: PartitionSequence, j: int):
    """Edges and triangles contributed by the clusters of layer ``j``."""
    edges, tris = [], []
    for b in seq.partitions[j].blocks:
        s = sorted(b)
        if len(s) > 1:
            edges.extend(combinations(s, 2))
        if len(s) > 2:
            tris.extend(combinations(s, 3))
    return edges, tris


def build_element_complex(seq: PartitionSequence, i: int, j: int,
                          max_triangles: int | None = DEFAULT_MAX_TRIANGLES) -> SimplicialComplex:
    """2-skeleton of the element-based complex at bigrade ``(i, j)``."""
    seq.check_window(i, j)
    _check_cap(seq, i, j, max_triangles)
    edges: set = set()
    tris: set = set()
    for r in range(i, j + 1):
        e, t = element_increment(seq, r)
        edges.update(e)
        tris.update(t)
    return SimplicialComplex(range(seq.n_elements), edges, tris)


def build_nerve_complex(seq: PartitionSequence, i: int, j: int) -> SimplicialComplex:
    """2-skeleton of the nerve of all clusters of layers ``i..j``."""
    seq.check_window(i, j)
    verts = [(r, c) for r in range(i, j + 1) for c in range(len(seq.partitions[r]))]
    edges: set = set()
    tris: set = set()
    for sig in window_signatures(seq, i, j):
        chain = [(i + k, int(c)) for k, c in enumerate(sig)]
        edges.update(combinations(chain, 2))
        tris.update(combinations(chain, 3))
    return SimplicialComplex(verts, edges, tris)


def build_merge_rips_complex(seq: PartitionSequence, i: int, j: int) -> SimplicialComplex:
    """2-skeleton of the flag complex of ``{x, y}`` with first merge (from layer ``i``) by ``t_j``."""
    seq.check_window(i, j)
    d = first_merge_matrix(seq, i).entries
    n = seq.n_elements
    close = d <= seq.change_points[j]
    adj = [set(np.flatnonzero(close[x]).tolist()) - {x} for x in range(n)]
    edges = [(x, y) for x in range(n) for y in adj[x] if x < y]
    tris = [(x, y, z) for x, y in edges for z in adj[x] & adj[y] if z > y]
    return SimplicialComplex(range(n), edges, tris)


def build_complex(seq: PartitionSequence, i: int, j: int, construction: str = "nerve",
                  max_triangles: int | None = DEFAULT_MAX_TRIANGLES) -> SimplicialComplex:
    if construction == "element":
        return build_element_complex(seq, i, j, max_triangles)
    if construction == "nerve":
        return build_nerve_complex(seq, i, j)
    if construction == "merge_rips":
        return build_merge_rips_complex(seq, i, j)
    raise ValueError(f"unknown construction {construction!r}")


@dataclass(frozen=True, eq=False)
class FirstMergeMatrix:
    """First co-clustering scale of every element pair, searching from ``start_scale`` on.

    Pairs that never share a cluster get ``inf``; the diagonal is ``start_scale``.
    """

    start_scale: float
    entries: np.ndarray

    def __getitem__(self, xy: tuple[int, int]) -> float:
        return float(self.entries[xy])

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def first_merge_matrix(seq: PartitionSequence, i: int = 0) -> FirstMergeMatrix:
    if not 0 <= i < seq.m:
        raise IndexError(f"layer {i} out of range for {seq.m} layers")
    n = seq.n_elements
    d = np.full((n, n), np.inf)
    labels = seq.label_matrix
    # walk backwards so the earliest co-clustering scale wins
    for r in range(seq.m - 1, i - 1, -1):
        lab = labels[r]
        d[lab[:, None] == lab[None, :]] = seq.change_points[r]
    d.flags.writeable = False
    return FirstMergeMatrix(seq.change_points[i], d)
