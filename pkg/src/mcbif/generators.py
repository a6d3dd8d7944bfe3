"""Synthetic sequences of partitions.

Randomness comes from numpy's PCG64 bit generator (``numpy.random.Generator``),
whose stream for a given seed is identical on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import NamedTuple

import numpy as np

from .core import Partition, PartitionSequence

DEFAULT_ORDER_CAP = 8


@dataclass(frozen=True)
class GeneratorConfig:
    n_elements: int
    n_layers: int
    swap_probability: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("n_elements must be at least 1")
        if self.n_layers < 1:
            raise ValueError("n_layers must be at least 1")
        if not 0.0 <= self.swap_probability <= 1.0:
            raise ValueError("swap_probability must lie in [0, 1]")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


def random_partition(n: int, n_blocks: int, rng: np.random.Generator) -> Partition:
    """Start from singletons and merge uniformly chosen pairs of blocks until ``n_blocks`` remain."""
    blocks = [[x] for x in range(n)]
    while len(blocks) > n_blocks:
        a, b = sorted(rng.choice(len(blocks), size=2, replace=False))
        blocks[a].extend(blocks.pop(b))
    return Partition(n, blocks)


def sample_coarse_graining(cfg: GeneratorConfig, rng: np.random.Generator | None = None) -> PartitionSequence:
    """Random coarse-graining sequence from singletons to the full set.

    Interior block counts are drawn one after another, each uniformly between 1 and
    the previous count. Every interior layer is an independent random partition with
    that many blocks, so consecutive layers need not refine each other.
    Change points are ``0 .. M - 1``.
    """
    n, m = cfg.n_elements, cfg.n_layers
    if m < 2:
        raise ValueError("a coarse-graining sample needs at least two layers")
    rng = cfg.rng() if rng is None else rng
    parts = [Partition.singletons(n)]
    c = n
    for _ in range(m - 2):
        c = int(rng.integers(1, c + 1))
        parts.append(random_partition(n, c, rng))
    parts.append(Partition.whole(n))
    return PartitionSequence(parts)


def interval_block_counts(n: int, m: int) -> list[int]:
    """Block counts falling linearly from ``n`` to 1 over ``m`` layers."""
    if m == 1:
        return [n]
    return [int(round(n - (n - 1) * k / (m - 1))) for k in range(m)]


def interval_labels(n: int, n_blocks: int, rng: np.random.Generator) -> np.ndarray:
    """Cut ``0 .. n - 1`` into ``n_blocks`` contiguous runs at uniformly chosen gaps."""
    cuts = np.sort(rng.choice(n - 1, size=n_blocks - 1, replace=False)) + 1 if n_blocks > 1 else []
    labels = np.zeros(n, dtype=np.int64)
    for c in cuts:
        labels[c:] += 1
    return labels


def swap_assignment(labels: np.ndarray, rng: np.random.Generator) -> bool:
    """Exchange the clusters of two elements from different clusters, in place.

    Only swaps that change the partition are made: at least one of the two clusters
    must hold more than one element. Returns whether a swap happened.
    """
    sizes = np.bincount(labels)
    if len(sizes) < 2 or sizes.max() < 2:
        return False
    n = len(labels)
    while True:
        x, y = rng.choice(n, size=2, replace=False)
        if labels[x] != labels[y] and (sizes[labels[x]] > 1 or sizes[labels[y]] > 1):
            labels[x], labels[y] = labels[y], labels[x]
            return True


class OrderSample(NamedTuple):
    sequence: PartitionSequence
    label: int
    n_swaps: int


def sample_order_sequence(cfg: GeneratorConfig, rng: np.random.Generator | None = None) -> OrderSample:
    """Interval-cut sequence, each layer independently perturbed by one swap with probability ``p``."""
    n, m = cfg.n_elements, cfg.n_layers
    rng = cfg.rng() if rng is None else rng
    columns = []
    swaps = 0
    for c in interval_block_counts(n, m):
        labels = interval_labels(n, c, rng)
        if cfg.swap_probability > 0 and rng.random() < cfg.swap_probability:
            swaps += swap_assignment(labels, rng)
        columns.append(labels)
    seq = PartitionSequence.from_label_columns(columns)
    return OrderSample(seq, int(swaps > 0), swaps)


def generate_order_sequence(cfg: GeneratorConfig, rng: np.random.Generator | None = None) -> tuple[PartitionSequence, int]:
    sample = sample_order_sequence(cfg, rng)
    return sample.sequence, sample.label


def _contiguous(labels: np.ndarray, order: tuple[int, ...]) -> bool:
    seen = set()
    prev = None
    for x in order:
        lab = labels[x]
        if lab != prev:
            if lab in seen:
                return False
            seen.add(lab)
            prev = lab
    return True


def is_order_preserving_bruteforce(seq: PartitionSequence, cap: int = DEFAULT_ORDER_CAP) -> bool:
    """Whether one total order of the elements makes every layer's blocks contiguous."""
    n = seq.n_elements
    if n > cap:
        raise ValueError(f"{n} elements exceed the enumeration cap of {cap}")
    rows = [row.tolist() for row in seq.label_matrix]
    return any(all(_contiguous(r, order) for r in rows) for order in permutations(range(n)))
