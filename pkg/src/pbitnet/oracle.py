"""Exact distributions over small networks by full enumeration.

Directed networks get the chain-rule joint, where each node's conditional
given its parents is the sigmoid of its synaptic input:

    P(m_i = +1 | parents) = (1 + tanh(gain * (h_i + sum_j J_ij m_j))) / 2

Symmetric networks get the Boltzmann distribution

    P(m) ~ exp(gain * (sum_i h_i m_i + sum_{i<j} J_ij m_i m_j))

with each undirected pair counted once.  Both enumerate all 2**n spin
configurations, capped at ``ENUMERATION_CAP`` nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import NetworkKind, PBitNetwork
from .errors import SubsetMismatchError, TooLargeError, UnknownNodeError, WrongKindError

ENUMERATION_CAP = 22


@dataclass
class DistributionTable:
    """Probability table over spin configurations of a node subset.

    ``probs[c]`` is the probability of the configuration whose spins follow
    the binary expansion of ``c``: bit ``(k - 1 - j)`` of ``c`` set means
    ``nodes[j] = +1``, clear means ``-1``.  Index 0 is therefore the
    all-minus configuration and iteration order counts up with the last
    listed node varying fastest.
    """

    nodes: tuple[int, ...]
    probs: np.ndarray

    def __post_init__(self):
        self.nodes = tuple(int(v) for v in self.nodes)
        self.probs = np.asarray(self.probs, dtype=np.float64)
        k = len(self.nodes)
        if self.probs.shape != (2**k,):
            raise ValueError(
                f"need {2**k} probabilities for {k} nodes, got shape {self.probs.shape}"
            )
        if len(set(self.nodes)) != k:
            raise ValueError("duplicate nodes in subset")
        if not np.all(np.isfinite(self.probs)) or np.any(self.probs < -1e-12):
            raise ValueError("probabilities must be finite and non-negative")
        if abs(float(self.probs.sum()) - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {self.probs.sum()!r}, not 1")

    @classmethod
    def from_counts(cls, nodes: Sequence[int], counts: np.ndarray) -> "DistributionTable":
        counts = np.asarray(counts, dtype=np.float64)
        total = counts.sum()
        if total <= 0:
            raise ValueError("counts are empty")
        return cls(tuple(nodes), counts / total)

    def config(self, index: int) -> tuple[int, ...]:
        """Spin tuple for a flat table index."""
        k = len(self.nodes)
        return tuple(1 if (index >> (k - 1 - j)) & 1 else -1 for j in range(k))

    def index_of(self, config: Sequence[int]) -> int:
        k = len(self.nodes)
        if len(config) != k:
            raise ValueError(f"config length {len(config)} != {k}")
        idx = 0
        for j, s in enumerate(config):
            if s == 1:
                idx |= 1 << (k - 1 - j)
            elif s != -1:
                raise ValueError(f"spins must be -1 or +1, got {s}")
        return idx

    def prob_of(self, config: Sequence[int]) -> float:
        return float(self.probs[self.index_of(config)])

    def items(self) -> Iterator[tuple[tuple[int, ...], float]]:
        for idx in range(self.probs.shape[0]):
            yield self.config(idx), float(self.probs[idx])

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return dict(self.items())


def _spins_of_bit(n: int, j: int) -> np.ndarray:
    """±1 spin of node j across all 2**n enumeration indices."""
    idx = np.arange(2**n, dtype=np.uint32 if n <= 30 else np.uint64)
    return (2 * ((idx >> (n - 1 - j)) & 1).astype(np.int8) - 1).astype(np.float64)


def _check_enumerable(net: PBitNetwork, want: NetworkKind) -> int:
    if net.kind is not want:
        raise WrongKindError(f"this oracle requires a {want.value} network, got {net.kind.value}")
    n = net.n_nodes
    if n > ENUMERATION_CAP:
        raise TooLargeError(f"{n} nodes exceeds the enumeration cap of {ENUMERATION_CAP}")
    return n


def bn_joint(net: PBitNetwork) -> DistributionTable:
    """Chain-rule joint of a directed network over all of its nodes."""
    n = _check_enumerable(net, NetworkKind.DIRECTED)
    probs = np.ones(2**n)
    for i in range(n):
        drive = np.full(2**n, net.biases[i])
        for j in net.parents(i):
            drive += net.couplings[i, j] * _spins_of_bit(n, int(j))
        p_plus = 0.5 * (1.0 + np.tanh(net.gain * drive))
        s_i = _spins_of_bit(n, i)
        probs *= np.where(s_i > 0, p_plus, 1.0 - p_plus)
    probs /= probs.sum()
    return DistributionTable(tuple(range(n)), probs)


def boltzmann_joint(net: PBitNetwork) -> DistributionTable:
    """Boltzmann distribution of a symmetric network over all of its nodes."""
    n = _check_enumerable(net, NetworkKind.SYMMETRIC)
    score = np.zeros(2**n)
    spins = [_spins_of_bit(n, j) for j in range(n)]
    for i in range(n):
        if net.biases[i] != 0.0:
            score += net.biases[i] * spins[i]
        for j in range(i + 1, n):
            if net.couplings[i, j] != 0.0:
                score += net.couplings[i, j] * spins[i] * spins[j]
    score *= net.gain
    score -= score.max()
    probs = np.exp(score)
    probs /= probs.sum()
    return DistributionTable(tuple(range(n)), probs)


def marginalize(table: DistributionTable, subset: Sequence[int]) -> DistributionTable:
    """Marginal of ``table`` over ``subset``, in the order given."""
    subset = tuple(int(v) for v in subset)
    if len(set(subset)) != len(subset):
        raise ValueError("duplicate nodes in subset")
    positions = []
    for v in subset:
        if v not in table.nodes:
            raise UnknownNodeError(f"node {v} is not in the table over {table.nodes}")
        positions.append(table.nodes.index(v))
    k = len(table.nodes)
    cube = table.probs.reshape((2,) * k)
    keep = positions
    drop = [ax for ax in range(k) if ax not in keep]
    cube = np.transpose(cube, axes=keep + drop)
    if drop:
        cube = cube.sum(axis=tuple(range(len(keep), k)))
    return DistributionTable(subset, cube.reshape(-1))
