"""Network container, structural validation, and seeded generators.

A network couples ``n`` p-bits through a weight matrix and per-node biases.
``couplings[i, j]`` is the weight on the edge from node ``j`` into node
``i``: row ``i`` collects everything node ``i`` receives.  The scalar
``gain`` multiplies the whole synaptic sum, so the input to node ``i`` in
state ``m`` is ``gain * (biases[i] + couplings[i] @ m)``.
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CycleDetectedError, DimensionMismatchError, WrongKindError
from .rng import RandomStream

NodeId = int


class NetworkKind(enum.Enum):
    DIRECTED = "directed"
    SYMMETRIC = "symmetric"


@dataclass
class PBitNetwork:
    """Weighted p-bit network, immutable after construction.

    Directed networks are belief networks: edges point parent -> child and
    the graph must be acyclic.  Symmetric networks have ``J == J.T`` with a
    zero diagonal.
    """

    couplings: np.ndarray
    biases: np.ndarray
    gain: float = 1.0
    kind: NetworkKind = NetworkKind.DIRECTED
    labels: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.couplings = np.array(self.couplings, dtype=np.float64)
        self.biases = np.array(self.biases, dtype=np.float64)
        self.gain = float(self.gain)
        self.couplings.flags.writeable = False
        self.biases.flags.writeable = False

    @property
    def n_nodes(self) -> int:
        return self.biases.shape[0] if self.biases.ndim else 0

    def parents(self, i: NodeId) -> np.ndarray:
        """Indices j with a nonzero edge j -> i."""
        return np.flatnonzero(self.couplings[i])

    def children(self, i: NodeId) -> np.ndarray:
        """Indices j with a nonzero edge i -> j."""
        return np.flatnonzero(self.couplings[:, i])


@dataclass(frozen=True)
class Violation:
    kind: str
    nodes: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        return self.message


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def validate_network(net: PBitNetwork) -> ValidationReport:
    """Structural checks for a network.

    Returns a report listing every violation found: non-finite entries, bad
    gain, self-loops, bidirectional edges or cycles (directed kind), broken
    symmetry (symmetric kind).  Raises :class:`DimensionMismatchError` when
    the couplings matrix is not square or does not match the bias vector.
    """
    J, h = net.couplings, net.biases
    if J.ndim != 2 or J.shape[0] != J.shape[1] or h.ndim != 1 or h.shape[0] != J.shape[0]:
        raise DimensionMismatchError(
            f"couplings shape {J.shape} does not match biases shape {h.shape}"
        )
    n = net.n_nodes
    out: list[Violation] = []

    bad = np.argwhere(~np.isfinite(J))
    for i, j in bad[:16]:
        out.append(Violation("non_finite", (int(i), int(j)), f"couplings[{i}, {j}] is not finite"))
    for i in np.flatnonzero(~np.isfinite(h))[:16]:
        out.append(Violation("non_finite", (int(i),), f"biases[{i}] is not finite"))
    if not math.isfinite(net.gain) or net.gain <= 0.0:
        out.append(Violation("bad_gain", (), f"gain must be a finite positive number, got {net.gain}"))

    for i in np.flatnonzero(np.diag(J))[:16]:
        out.append(Violation("self_loop", (int(i),), f"node {i} couples to itself"))

    if net.kind is NetworkKind.SYMMETRIC:
        asym = np.argwhere(J != J.T)
        seen = set()
        for i, j in asym:
            key = (min(i, j), max(i, j))
            if key in seen or i == j:
                continue
            seen.add(key)
            out.append(Violation(
                "asymmetric", (int(i), int(j)),
                f"couplings[{i}, {j}]={J[i, j]} but couplings[{j}, {i}]={J[j, i]}",
            ))
            if len(seen) >= 16:
                break
    else:
        both = np.argwhere((J != 0) & (J.T != 0))
        seen = set()
        for i, j in both:
            if i == j:
                continue
            key = (min(i, j), max(i, j))
            if key in seen:
                continue
            seen.add(key)
            out.append(Violation(
                "bidirectional_edge", (int(i), int(j)),
                f"edges both ways between nodes {i} and {j}",
            ))
            if len(seen) >= 16:
                break
        if not np.diag(J).any():
            try:
                _kahn_order(J)
            except CycleDetectedError as exc:
                out.append(Violation(
                    "cycle", tuple(exc.cycle),
                    f"cycle: {' -> '.join(map(str, exc.cycle))}",
                ))

    return ValidationReport(out)


def _kahn_order(J: np.ndarray) -> list[int]:
    n = J.shape[0]
    adj = J != 0
    indeg = adj.sum(axis=1).astype(np.int64)  # row i receives from its parents
    order: list[int] = []
    ready = [int(i) for i in np.flatnonzero(indeg == 0)]
    heapq.heapify(ready)
    while ready:
        u = heapq.heappop(ready)
        order.append(int(u))
        for c in np.flatnonzero(adj[:, u]):
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(ready, int(c))
    if len(order) < n:
        raise CycleDetectedError(_find_cycle(adj, set(range(n)) - set(order)))
    return order


def _find_cycle(adj: np.ndarray, remaining: set[int]) -> list[int]:
    # Walk parent links inside the leftover subgraph until a node repeats.
    start = min(remaining)
    path, pos = [start], {start: 0}
    while True:
        u = path[-1]
        nxt = next(int(p) for p in np.flatnonzero(adj[u]) if int(p) in remaining)
        if nxt in pos:
            cyc = path[pos[nxt]:] + [nxt]
            cyc.reverse()  # report in edge direction parent -> child
            return cyc
        pos[nxt] = len(path)
        path.append(nxt)


def topological_order(net: PBitNetwork) -> list[NodeId]:
    """Parent-before-child ordering of a directed network's nodes.

    Deterministic (lowest index first among ready nodes).  Raises
    :class:`WrongKindError` on symmetric networks and
    :class:`CycleDetectedError` (with a witness cycle) when no such order
    exists.
    """
    if net.kind is not NetworkKind.DIRECTED:
        raise WrongKindError("update order is only defined for directed networks")
    return _kahn_order(net.couplings)


def gen_fig3_network(r: float, seed: int) -> PBitNetwork:
    """19-node belief network with a correlated (A, M1, B) backbone.

    A feeds M1 through two 2-edge branches, M1 feeds B through two more;
    each branch carries one weight ``+r`` and one ``-r`` so its product is
    ``-r**2`` and the pairs (A, M1) and (M1, B) come out anti-correlated
    while (A, B) is positively correlated.  The remaining twelve nodes form
    three feed-forward decoy layers hanging off the backbone with seeded
    uniform weights in [-1, 1]; they read from the labeled chain but never
    feed it, so the backbone statistics are set by ``r`` alone.  All biases
    are zero and the gain is 1.
    """
    if not (0.0 < r <= 1.0):
        raise ValueError(f"r must lie in (0, 1], got {r}")
    n = 19
    J = np.zeros((n, n))
    a, m1, b = 0, 3, 6
    # J[child, parent] = weight
    J[1, a], J[m1, 1] = r, -r
    J[2, a], J[m1, 2] = -r, r
    J[4, m1], J[b, 4] = r, -r
    J[5, m1], J[b, 5] = -r, r

    decoy_edges = [
        (7, 0), (7, 2), (8, 1), (8, 3), (9, 3), (9, 5), (10, 4), (10, 6),
        (11, 7), (11, 8), (12, 8), (12, 9), (13, 9), (13, 10), (14, 7), (14, 10),
        (15, 11), (15, 12), (16, 12), (16, 13), (17, 13), (17, 14), (18, 11), (18, 14),
    ]
    stream = RandomStream(seed, substream=0)
    for child, parent in decoy_edges:
        J[child, parent] = stream.uniform_sym()

    return PBitNetwork(
        couplings=J,
        biases=np.zeros(n),
        gain=1.0,
        kind=NetworkKind.DIRECTED,
        labels={"A": a, "M1": m1, "B": b},
    )


def gen_layered_random_bn(
    layer_sizes: list[int], extra_skip_edges: int, seed: int
) -> PBitNetwork:
    """Layered random belief network with optional skip-layer edges.

    Consecutive layers are fully connected front-to-back; on top of that,
    ``extra_skip_edges`` distinct edges are drawn between non-adjacent
    layers (always pointing forward).  All weights are seeded uniform in
    [-1, 1], biases are zero, gain is 1.  The first node is labeled ``A``
    and the last ``B``.
    """
    if len(layer_sizes) < 2:
        raise ValueError("need at least two layers")
    if any(s < 1 for s in layer_sizes):
        raise ValueError("layer sizes must be positive")
    if extra_skip_edges < 0:
        raise ValueError("extra_skip_edges must be >= 0")

    offsets = np.concatenate([[0], np.cumsum(layer_sizes)])
    n = int(offsets[-1])
    layers = [list(range(offsets[k], offsets[k + 1])) for k in range(len(layer_sizes))]

    stream = RandomStream(seed, substream=0)
    J = np.zeros((n, n))
    for k in range(len(layers) - 1):
        for parent in layers[k]:
            for child in layers[k + 1]:
                J[child, parent] = stream.uniform_sym()

    skip_pairs = [
        (child, parent)
        for ka in range(len(layers))
        for kb in range(ka + 2, len(layers))
        for parent in layers[ka]
        for child in layers[kb]
    ]
    if extra_skip_edges > len(skip_pairs):
        raise ValueError(
            f"requested {extra_skip_edges} skip edges but only {len(skip_pairs)} exist"
        )
    remaining = list(skip_pairs)
    for _ in range(extra_skip_edges):
        pick = int(stream.uniform01() * len(remaining))
        pick = min(pick, len(remaining) - 1)
        child, parent = remaining.pop(pick)
        J[child, parent] = stream.uniform_sym()

    return PBitNetwork(
        couplings=J,
        biases=np.zeros(n),
        gain=1.0,
        kind=NetworkKind.DIRECTED,
        labels={"A": 0, "B": n - 1},
    )
