"""2-skeleton simplicial complexes and their Betti numbers over GF(2)."""

from __future__ import annotations

from collections.abc import Hashable, Iterable
from dataclasses import dataclass
from itertools import combinations

DEFAULT_MAX_TRIANGLES = 10**7


class TriangleCapExceeded(RuntimeError):
    """The element-based construction would materialise too many triangles."""


class UnionFind:
    """Disjoint-set forest with path halving and union by size."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self.parent: dict = {}
        self.size: dict = {}
        self.n_components = 0
        for x in items:
            self.add(x)

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1
            self.n_components += 1

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.n_components -= 1
        return True

    def roots(self) -> set:
        return {self.find(x) for x in self.parent}


class GF2Basis:
    """Incrementally maintained row-echelon basis of bit vectors (Python ints).

    ``add`` reduces a vector against the basis and keeps it if it is independent;
    ``rank`` is the number of kept vectors.
    """

    def __init__(self):
        self._pivots: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def add(self, v: int) -> bool:
        pivots = self._pivots
        while v:
            top = v.bit_length() - 1
            row = pivots.get(top)
            if row is None:
                pivots[top] = v
                return True
            v ^= row
        return False


def gf2_rank(vectors: Iterable[int]) -> int:
    basis = GF2Basis()
    for v in vectors:
        basis.add(v)
    return basis.rank


def _canon(simplex: Iterable) -> tuple:
    return tuple(sorted(simplex))


@dataclass(frozen=True)
class SimplicialComplex:
    """Vertices, edges and triangles of a simplicial complex, closed under faces.

    Simplices are stored as sorted tuples of vertex ids. Vertex ids only need to be
    hashable and mutually comparable (element indices or ``(layer, cluster)`` pairs).
    """

    vertices: frozenset
    edges: frozenset
    triangles: frozenset

    def __init__(self, vertices: Iterable = (), edges: Iterable = (), triangles: Iterable = (),
                 *, close: bool = False):
        v = set(vertices)
        e = {_canon(s) for s in edges}
        t = {_canon(s) for s in triangles}
        if any(len(s) != 2 or s[0] == s[1] for s in e):
            raise ValueError("edges need two distinct vertices")
        if any(len(set(s)) != 3 for s in t):
            raise ValueError("triangles need three distinct vertices")
        if close:
            for a, b, c in t:
                e.update(((a, b), (a, c), (b, c)))
            for a, b in e:
                v.update((a, b))
        else:
            for a, b, c in t:
                if not {(a, b), (a, c), (b, c)} <= e:
                    raise ValueError(f"triangle {(a, b, c)} is missing a boundary edge")
            for a, b in e:
                if a not in v or b not in v:
                    raise ValueError(f"edge {(a, b)} is missing an endpoint")
        object.__setattr__(self, "vertices", frozenset(v))
        object.__setattr__(self, "edges", frozenset(e))
        object.__setattr__(self, "triangles", frozenset(t))

    @classmethod
    def from_maximal(cls, simplices: Iterable[Iterable], extra_vertices: Iterable = ()) -> SimplicialComplex:
        """2-skeleton of the complex generated by the given (solid) simplices."""
        v = set(extra_vertices)
        e: set = set()
        t: set = set()
        for s in simplices:
            s = _canon(set(s))
            v.update(s)
            e.update(combinations(s, 2))
            t.update(combinations(s, 3))
        return cls(v, e, t)

    def __len__(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.triangles)

    def __le__(self, other: SimplicialComplex) -> bool:
        return (self.vertices <= other.vertices and self.edges <= other.edges
                and self.triangles <= other.triangles)

    def dimension(self) -> int:
        if self.triangles:
            return 2
        if self.edges:
            return 1
        return 0 if self.vertices else -1

    def one_skeleton(self) -> SimplicialComplex:
        return SimplicialComplex(self.vertices, self.edges)

    def adjacency(self) -> dict:
        adj: dict = {x: set() for x in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def boundary_matrix(self) -> BoundaryMatrix:
        return BoundaryMatrix.of(self)


@dataclass(frozen=True)
class BoundaryMatrix:
    """GF(2) boundary map from triangles to edges; column ``k`` is a bitmask over ``rows``."""

    rows: tuple
    cols: tuple
    columns: tuple[int, ...]

    @classmethod
    def of(cls, k: SimplicialComplex) -> BoundaryMatrix:
        rows = tuple(sorted(k.edges))
        cols = tuple(sorted(k.triangles))
        index = {e: n for n, e in enumerate(rows)}
        columns = tuple(
            (1 << index[(a, b)]) | (1 << index[(a, c)]) | (1 << index[(b, c)])
            for a, b, c in cols
        )
        return cls(rows, cols, columns)

    def rank(self) -> int:
        return gf2_rank(self.columns)


def betti0(k: SimplicialComplex) -> int:
    """Number of connected components."""
    uf = UnionFind(k.vertices)
    for a, b in k.edges:
        uf.union(a, b)
    return uf.n_components


def betti1(k: SimplicialComplex) -> int:
    """``dim H_1`` over GF(2): ``|E| - |V| + b0 - rank(d2)``."""
    return len(k.edges) - len(k.vertices) + betti0(k) - k.boundary_matrix().rank()


def clustering_coefficient(k: SimplicialComplex) -> float:
    """Global clustering coefficient of the 1-skeleton.

    ``3 * (graph triangles) / (paths of length 2)``; a graph without any path of
    length 2 gets 1.0, so values below 1 always flag an open wedge.
    """
    adj = k.adjacency()
    wedges = sum(len(nb) * (len(nb) - 1) // 2 for nb in adj.values())
    if wedges == 0:
        return 1.0
    closed = 0
    for a, b in k.edges:
        closed += len(adj[a] & adj[b])
    # each graph triangle is seen once per edge
    return closed / wedges


def open_wedge(k: SimplicialComplex) -> tuple | None:
    """A path ``x - y - z`` in the 1-skeleton with no edge ``x - z``, if one exists."""
    adj = k.adjacency()
    for y in sorted(adj):
        nb = sorted(adj[y])
        for x, z in combinations(nb, 2):
            if z not in adj[x]:
                return x, y, z
    return None
