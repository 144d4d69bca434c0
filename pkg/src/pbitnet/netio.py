"""Network files and CSV emitters.

Networks are stored as JSON::

    {
      "n_nodes": 2,
      "kind": "directed",            // or "symmetric"
      "i0": 1.0,                     // global gain
      "biases": [0.0, 0.0],
      "edges": [{"from": 0, "to": 1, "w": 0.8}],   // weight J[to, from]
      "labels": {"A": 0, "B": 1}     // optional
    }

An edge ``{"from": j, "to": i, "w": w}`` feeds node ``j`` into node ``i``.
Symmetric networks list each undirected pair once (either orientation); the
parser mirrors it.  Duplicate edges, out-of-range indices, and networks
failing validation are rejected.

All CSV output is RFC-4180 style with a header row, comma separators, and
``.`` decimal points; floats use ``repr`` so equal runs produce byte-equal
files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import NetworkKind, PBitNetwork, validate_network
from .errors import InvalidNetworkError, NetworkFormatError, SubsetMismatchError
from .oracle import DistributionTable
from .trace import SampleTrace


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise NetworkFormatError(msg)


def network_from_dict(doc: dict) -> PBitNetwork:
    _require(isinstance(doc, dict), "top level must be a JSON object")
    for key in ("n_nodes", "kind", "i0", "biases", "edges"):
        _require(key in doc, f"missing required key {key!r}")
    n = doc["n_nodes"]
    _require(isinstance(n, int) and n >= 1, f"n_nodes must be a positive integer, got {n!r}")
    kind_name = doc["kind"]
    _require(kind_name in ("directed", "symmetric"),
             f"kind must be 'directed' or 'symmetric', got {kind_name!r}")
    kind = NetworkKind(kind_name)
    i0 = doc["i0"]
    _require(isinstance(i0, (int, float)) and not isinstance(i0, bool),
             f"i0 must be a number, got {i0!r}")
    biases = doc["biases"]
    _require(isinstance(biases, list) and len(biases) == n,
             f"biases must be a list of {n} numbers")
    _require(all(isinstance(b, (int, float)) and not isinstance(b, bool) for b in biases),
             "biases must all be numbers")

    J = np.zeros((n, n))
    seen: set[tuple[int, int]] = set()
    for pos, edge in enumerate(doc["edges"]):
        _require(isinstance(edge, dict), f"edges[{pos}] must be an object")
        for key in ("from", "to", "w"):
            _require(key in edge, f"edges[{pos}] is missing {key!r}")
        src, dst, w = edge["from"], edge["to"], edge["w"]
        _require(isinstance(src, int) and isinstance(dst, int),
                 f"edges[{pos}] endpoints must be integers")
        _require(0 <= src < n and 0 <= dst < n,
                 f"edges[{pos}] endpoints ({src}, {dst}) out of range for {n} nodes")
        _require(isinstance(w, (int, float)) and not isinstance(w, bool),
                 f"edges[{pos}] weight must be a number")
        key = (min(src, dst), max(src, dst)) if kind is NetworkKind.SYMMETRIC else (src, dst)
        _require(key not in seen, f"edges[{pos}] duplicates edge {src} -> {dst}")
        seen.add(key)
        J[dst, src] = w
        if kind is NetworkKind.SYMMETRIC:
            J[src, dst] = w

    labels: dict[str, int] = {}
    if "labels" in doc and doc["labels"] is not None:
        _require(isinstance(doc["labels"], dict), "labels must be an object")
        for name, idx in doc["labels"].items():
            _require(isinstance(idx, int) and 0 <= idx < n,
                     f"label {name!r} points at invalid node {idx!r}")
            labels[str(name)] = idx

    net = PBitNetwork(couplings=J, biases=np.array(biases, dtype=np.float64),
                      gain=float(i0), kind=kind, labels=labels)
    report = validate_network(net)
    if not report.ok:
        raise InvalidNetworkError(f"network file fails validation: {report}")
    return net


def load_network(path: str | Path) -> PBitNetwork:
    """Parse and validate a network JSON file."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"{path}: not valid JSON ({exc})") from exc
    try:
        return network_from_dict(doc)
    except (NetworkFormatError, InvalidNetworkError) as exc:
        raise type(exc)(f"{path}: {exc}") from None


def network_to_dict(net: PBitNetwork) -> dict:
    J = net.couplings
    n = net.n_nodes
    edges = []
    if net.kind is NetworkKind.SYMMETRIC:
        for i in range(n):
            for j in range(i + 1, n):
                if J[j, i] != 0.0:
                    edges.append({"from": i, "to": j, "w": float(J[j, i])})
    else:
        for dst in range(n):
            for src in np.flatnonzero(J[dst]):
                edges.append({"from": int(src), "to": dst, "w": float(J[dst, src])})
    doc = {
        "n_nodes": n,
        "kind": net.kind.value,
        "i0": float(net.gain),
        "biases": [float(b) for b in net.biases],
        "edges": edges,
    }
    if net.labels:
        doc["labels"] = dict(net.labels)
    return doc


def save_network(net: PBitNetwork, path: str | Path) -> None:
    """Write a network to JSON so that load_network round-trips it exactly."""
    Path(path).write_text(json.dumps(network_to_dict(net), indent=2) + "\n")


# --- CSV ----------------------------------------------------------------------

def _node_names(nodes: Sequence[int], labels: dict[str, int] | None) -> list[str]:
    by_id = {idx: name for name, idx in (labels or {}).items()}
    return [by_id.get(v, f"n{v}") for v in nodes]


def write_table_csv(
    table: DistributionTable, path: str | Path, labels: dict[str, int] | None = None
) -> None:
    """One row per configuration: the ±1 spins, then the probability."""
    total = float(table.probs.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"refusing to write a table summing to {total!r}")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_node_names(table.nodes, labels) + ["probability"])
        for config, p in table.items():
            w.writerow([*config, repr(p)])


def read_table_csv(path: str | Path) -> tuple[list[str], dict[tuple[int, ...], float]]:
    """Read a table CSV back as (column names, config -> probability)."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][-1] != "probability":
        raise NetworkFormatError(f"{path}: not a distribution table CSV")
    names = rows[0][:-1]
    out: dict[tuple[int, ...], float] = {}
    for row in rows[1:]:
        if not row:
            continue
        config = tuple(int(v) for v in row[:-1])
        if any(s not in (-1, 1) for s in config):
            raise NetworkFormatError(f"{path}: spins must be -1 or 1, got {row[:-1]}")
        out[config] = float(row[-1])
    return names, out


def write_trace_csv(
    trace: SampleTrace, path: str | Path, labels: dict[str, int] | None = None
) -> None:
    names = _node_names(range(trace.n_nodes), labels)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time"] + names)
        for t, row in zip(trace.times, trace.states):
            w.writerow([repr(float(t))] + [int(v) for v in row])


def write_xy_csv(path: str | Path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(list(header))
        for row in rows:
            w.writerow([repr(float(v)) for v in row])


def table_tv_from_csvs(path_a: str | Path, path_b: str | Path) -> float:
    """Total variation distance between two table CSVs over the union of
    their configurations.  The column headers must agree."""
    names_a, pa = read_table_csv(path_a)
    names_b, pb = read_table_csv(path_b)
    if names_a != names_b:
        raise SubsetMismatchError(
            f"tables cover different columns: {names_a} vs {names_b}"
        )
    keys = set(pa) | set(pb)
    return 0.5 * sum(abs(pa.get(k, 0.0) - pb.get(k, 0.0)) for k in keys)
