"""Partitions, sequences of partitions and the refinement order.

Elements of the ground set are dense indices ``0 .. n_elements - 1``. Layers of a
sequence are addressed by 0-based indices into its change points; a window
``(i, j)`` with ``i <= j`` covers layers ``i, i + 1, ..., j``.
"""

from __future__ import annotations

import bisect
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np


class PartitionError(ValueError):
    """Raised for malformed partitions or sequences of partitions."""


@dataclass(frozen=True)
class Partition:
    """A partition of ``{0, ..., n_elements - 1}`` into non-empty blocks.

    Blocks are kept in canonical order (sorted by their minimum element), so two
    partitions are equal iff they have the same blocks.
    """

    n_elements: int
    blocks: tuple[frozenset[int], ...]

    def __init__(self, n_elements: int, blocks: Iterable[Iterable[int]]):
        if n_elements < 1:
            raise PartitionError("a partition needs at least one element")
        canon = [frozenset(int(x) for x in b) for b in blocks]
        if any(not b for b in canon):
            raise PartitionError("blocks must be non-empty")
        seen: set[int] = set()
        for b in canon:
            if seen & b:
                raise PartitionError("blocks must be pairwise disjoint")
            seen |= b
        if seen != set(range(n_elements)):
            raise PartitionError(f"blocks must cover exactly 0..{n_elements - 1}")
        canon.sort(key=min)
        object.__setattr__(self, "n_elements", int(n_elements))
        object.__setattr__(self, "blocks", tuple(canon))

    @classmethod
    def from_labels(cls, labels: Sequence[Hashable]) -> Partition:
        """Build a partition from one cluster label per element."""
        groups: dict[Hashable, list[int]] = {}
        for x, lab in enumerate(labels):
            groups.setdefault(lab, []).append(x)
        return cls(len(labels), groups.values())

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls(n, ([x] for x in range(n)))

    @classmethod
    def whole(cls, n: int) -> Partition:
        return cls(n, [range(n)])

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __repr__(self) -> str:
        inner = ", ".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks)
        return f"Partition({self.n_elements}, [{inner}])"

    @cached_property
    def labels(self) -> np.ndarray:
        """Canonical block index of each element."""
        out = np.empty(self.n_elements, dtype=np.int64)
        for k, b in enumerate(self.blocks):
            out[list(b)] = k
        out.flags.writeable = False
        return out

    def block_of(self, x: int) -> int:
        return int(self.labels[x])

    def mean_block_size(self) -> float:
        return self.n_elements / len(self.blocks)


def _check_same_ground_set(p: Partition, q: Partition) -> None:
    if p.n_elements != q.n_elements:
        raise PartitionError(
            f"ground sets differ: {p.n_elements} vs {q.n_elements} elements"
        )


def refines(p: Partition, q: Partition) -> bool:
    """True iff ``p <= q``: every block of ``p`` lies inside a block of ``q``."""
    _check_same_ground_set(p, q)
    lq = q.labels
    return all(len({int(lq[x]) for x in b}) == 1 for b in p.blocks)


@dataclass(frozen=True)
class PartitionSequence:
    """Piecewise-constant sequence of partitions with strictly increasing change points.

    ``partitions[m]`` is the partition on ``[change_points[m], change_points[m + 1])``;
    the last one extends to infinity.
    """

    change_points: tuple[float, ...]
    partitions: tuple[Partition, ...]

    def __init__(self, partitions: Iterable[Partition], change_points: Iterable[float] | None = None):
        parts = tuple(partitions)
        if not parts:
            raise PartitionError("a sequence needs at least one partition")
        n = parts[0].n_elements
        if any(p.n_elements != n for p in parts):
            raise PartitionError("all partitions must share the same ground set")
        if change_points is None:
            cps = tuple(float(m) for m in range(len(parts)))
        else:
            cps = tuple(float(t) for t in change_points)
        if len(cps) != len(parts):
            raise PartitionError(
                f"{len(cps)} change points for {len(parts)} partitions"
            )
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise PartitionError("change points must be strictly increasing")
        object.__setattr__(self, "change_points", cps)
        object.__setattr__(self, "partitions", parts)

    @classmethod
    def from_label_columns(cls, columns: Sequence[Sequence[Hashable]],
                           change_points: Iterable[float] | None = None) -> PartitionSequence:
        return cls((Partition.from_labels(c) for c in columns), change_points)

    @property
    def m(self) -> int:
        return len(self.partitions)

    @property
    def n_elements(self) -> int:
        return self.partitions[0].n_elements

    def __len__(self) -> int:
        return len(self.partitions)

    def __getitem__(self, m: int) -> Partition:
        return self.partitions[m]

    def __iter__(self):
        return iter(self.partitions)

    @cached_property
    def label_matrix(self) -> np.ndarray:
        """``M x N`` array of canonical block indices, row ``m`` for layer ``m``."""
        out = np.vstack([p.labels for p in self.partitions])
        out.flags.writeable = False
        return out

    @cached_property
    def block_counts(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.partitions)

    def layer_at(self, t: float) -> int:
        """Index of the layer whose piece contains scale ``t``."""
        if t < self.change_points[0]:
            raise ValueError(f"scale {t} lies before the first change point")
        return bisect.bisect_right(self.change_points, t) - 1

    def __call__(self, t: float) -> Partition:
        return self.partitions[self.layer_at(t)]

    def check_window(self, i: int, j: int) -> None:
        if not (0 <= i <= j < self.m):
            raise IndexError(f"window ({i}, {j}) out of range for {self.m} layers")

    def reordered(self, order: Sequence[int]) -> PartitionSequence:
        """Same change points, partitions taken in the given layer order."""
        if sorted(order) != list(range(self.m)):
            raise ValueError("order must be a permutation of the layer indices")
        return PartitionSequence((self.partitions[k] for k in order), self.change_points)

    def reversed(self) -> PartitionSequence:
        return self.reordered(range(self.m - 1, -1, -1))


def is_coarse_graining(seq: PartitionSequence) -> bool:
    c = seq.block_counts
    return all(a >= b for a, b in zip(c, c[1:]))


def is_fine_graining(seq: PartitionSequence) -> bool:
    c = seq.block_counts
    return all(a <= b for a, b in zip(c, c[1:]))


def is_hierarchical(seq: PartitionSequence, i: int, j: int) -> bool:
    """Agglomerative or divisive chain of refinements on layers ``i..j``."""
    seq.check_window(i, j)
    parts = seq.partitions[i:j + 1]
    # refinement is transitive, so consecutive pairs suffice
    up = all(refines(a, b) for a, b in zip(parts, parts[1:]))
    if up:
        return True
    return all(refines(b, a) for a, b in zip(parts, parts[1:]))


def is_nested(seq: PartitionSequence, i: int, j: int) -> bool:
    """Laminar check: any two clusters in the window are disjoint or comparable."""
    seq.check_window(i, j)
    clusters = {b for p in seq.partitions[i:j + 1] for b in p.blocks}
    clusters = sorted(clusters, key=len)
    for a_idx, a in enumerate(clusters):
        for b in clusters[a_idx + 1:]:
            if a & b and not a <= b:
                return False
    return True


def subposet_maximum(seq: PartitionSequence, i: int, j: int) -> int | None:
    """A layer ``r`` in ``[i, j]`` whose partition is coarser than every other in the window.

    Returns ``None`` when the window has no maximum, i.e. a 0-conflict.
    """
    seq.check_window(i, j)
    # a maximum must have the fewest blocks in the window
    counts = seq.block_counts[i:j + 1]
    fewest = min(counts)
    for r in range(i, j + 1):
        if counts[r - i] != fewest:
            continue
        top = seq.partitions[r]
        if all(refines(seq.partitions[a], top) for a in range(i, j + 1)):
            return r
    return None


@dataclass(frozen=True, eq=False)
class BigradeGrid:
    """Upper-triangular ``M x M`` integer grid indexed by layer pairs ``(i, j)``, ``i <= j``.

    Entries below the diagonal are undefined and stored as zero.
    """

    values: np.ndarray
    change_points: tuple[float, ...]

    def __post_init__(self):
        v = np.array(self.values, dtype=np.int64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("grid values must be a square matrix")
        if v.shape[0] != len(self.change_points):
            raise ValueError("grid size does not match the change points")
        v = np.triu(v)
        if (v < 0).any():
            raise ValueError("grid entries must be non-negative")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "change_points", tuple(float(t) for t in self.change_points))

    @property
    def m(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i <= j < self.m):
            raise IndexError(f"bigrade ({i}, {j}) is not in the grid")
        return int(self.values[i, j])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BigradeGrid):
            return NotImplemented
        return self.change_points == other.change_points and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"BigradeGrid(m={self.m}, values={self.values.tolist()})"

    def entries(self):
        """Yield ``(i, j, value)`` for every defined bigrade, row by row."""
        for i in range(self.m):
            for j in range(i, self.m):
                yield i, j, int(self.values[i, j])

    def superdiagonal(self) -> np.ndarray:
        return np.diagonal(self.values, offset=1).copy()
