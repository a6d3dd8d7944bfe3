"""Information-theoretic partition comparisons and first-merge / spectral cross-checks.

The ground set carries the uniform distribution and logarithms are natural.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bifiltration import FirstMergeMatrix
from .core import Partition, PartitionSequence, _check_same_ground_set


@dataclass(frozen=True, eq=False)
class OverlapTable:
    """Joint and conditional cluster probabilities of a pair of partitions.

    ``joint[i, j] = |p_i & q_j| / N`` and ``conditional[i, j] = |p_i & q_j| / |q_j|``
    (probability of block ``i`` of ``p`` given block ``j`` of ``q``).
    """

    joint: np.ndarray
    conditional: np.ndarray


def contingency(p: Partition, q: Partition) -> np.ndarray:
    _check_same_ground_set(p, q)
    table = np.zeros((len(p), len(q)), dtype=np.int64)
    np.add.at(table, (p.labels, q.labels), 1)
    return table


def overlap_table(p: Partition, q: Partition) -> OverlapTable:
    counts = contingency(p, q)
    return OverlapTable(counts / p.n_elements, counts / counts.sum(axis=0, keepdims=True))


def conditional_entropy(p: Partition, q: Partition) -> float:
    """``H(p | q)``: information still missing about ``p`` once ``q`` is known.

    Zero exactly when ``q`` refines ``p``.
    """
    t = overlap_table(p, q)
    nz = t.joint > 0
    h = -float((t.joint[nz] * np.log(t.conditional[nz])).sum())
    return h if h > 0 else 0.0


def variation_of_information(p: Partition, q: Partition) -> float:
    return conditional_entropy(p, q) + conditional_entropy(q, p)


def conditional_entropy_matrix(seq: PartitionSequence) -> np.ndarray:
    """``CE[s, t] = H(theta(t) | theta(s))``; rows index the conditioned-on layer."""
    m = seq.m
    out = np.zeros((m, m))
    for s in range(m):
        for t in range(m):
            if s != t:
                out[s, t] = conditional_entropy(seq[t], seq[s])
    return out


def variation_of_information_matrix(seq: PartitionSequence) -> np.ndarray:
    ce = conditional_entropy_matrix(seq)
    return ce + ce.T


def consensus_index(seq: PartitionSequence) -> float:
    """Mean variation of information over all unordered pairs of layers."""
    m = seq.m
    if m < 2:
        raise ValueError("the consensus index needs at least two partitions")
    total = sum(variation_of_information(seq[a], seq[b]) for a, b in combinations(range(m), 2))
    return total / (m * (m - 1) / 2)


def strong_triangle_violations(d: FirstMergeMatrix) -> list[tuple[int, int, int]]:
    """Triples ``(x, y, z)`` with ``D(x, z) > max(D(x, y), D(y, z))``, reported with ``x < z``.

    ``y`` is the middle element through which ``x`` and ``z`` are chained. Pairs that
    never merge count as infinitely far apart.
    """
    e = d.entries
    n = e.shape[0]
    out = []
    for y in range(n):
        for x in range(n):
            if x == y:
                continue
            for z in range(x + 1, n):
                if z == y:
                    continue
                if e[x, z] > max(e[x, y], e[y, z]):
                    out.append((x, y, z))
    return sorted(out)


def laplacian(p: Partition, q: Partition):
    """``diag(P 1) - P P^T`` with ``P[i, j] = |q_i & p_j| / |p_j|``, as an exact rational matrix."""
    from sympy import Matrix, Rational

    counts = contingency(q, p)
    sizes = counts.sum(axis=0)
    cond = Matrix(counts.shape[0], counts.shape[1],
                  lambda i, j: Rational(int(counts[i, j]), int(sizes[j])))
    row_sums = [sum(cond.row(i)) for i in range(cond.rows)]
    return Matrix.diag(*row_sums) - cond * cond.T


def laplacian_kernel_dim(p: Partition, q: Partition) -> int:
    """Nullity of the cluster-overlap Laplacian, by exact rank over the rationals."""
    from sympy.polys.matrices import DomainMatrix

    lap = laplacian(p, q)
    return lap.rows - DomainMatrix.from_Matrix(lap).to_field().rank()
