"""Autonomous single-time-scale p-bit engine (input-modulated retention).

Here the device has one knob: the input tilts the retention time of the
state itself.  Per step ``dt`` and per node, the spin survives with
probability

    p_keep = exp(-dt / (tau_n * exp(input * m)))

and flips otherwise, so an aligned state (``input * m > 0``) lives longer
and the steady-state marginal is the same sigmoid as the two-time-scale
design.  There is no fast response branch: the time to react to an input
step is the same retention scale the network fluctuates on, which is what
breaks directed (Bayesian) networks while leaving symmetric (Boltzmann)
networks intact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import PBitNetwork, validate_network
from .errors import InvalidNetworkError, UnstableTimestepWarning
from .rng import RandomStream, _u01_at, node_origins
from .trace import SampleTrace


@dataclass
class D2Params:
    """Run parameters for the single-time-scale engine."""

    tau_n: float
    duration: float
    tau_s: float = 0.0
    dt: float | None = None
    record_stride: int = 1

    def __post_init__(self):
        if self.tau_n <= 0 or self.tau_s < 0:
            raise ValueError("time constants must be positive (tau_s may be 0)")
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")

    def fastest_scale(self) -> float:
        return min(self.tau_n, self.tau_s) if self.tau_s > 0 else self.tau_n

    def resolved_dt(self) -> float:
        return self.fastest_scale() / 20.0 if self.dt is None else self.dt


def d2_step(m: int, drive: float, dt: float, tau_n: float, stream: RandomStream) -> int:
    """One retention step of the spin: keep ``m`` with probability
    ``exp(-dt / (tau_n * exp(drive * m)))``, flip otherwise."""
    p_keep = math.exp(-dt / (tau_n * math.exp(drive * m)))
    return m if stream.uniform01() < p_keep else -m


@njit(cache=True)
def _d2_kernel(
    pptr, pidx, pw, cptr, cidx, h, gain,
    n_steps, dt, tau_n, tau_s, stride, origins,
):
    n = h.shape[0]
    one = np.uint64(1)
    counts = np.zeros(n, dtype=np.uint64)

    m = np.empty(n, dtype=np.int8)
    for i in range(n):
        m[i] = 1 if _u01_at(origins[i], counts[i]) < 0.5 else -1
        counts[i] += one

    target = np.empty(n)
    drive = np.empty(n)
    keep_p = np.empty(n)
    rate = dt / tau_n
    for i in range(n):
        acc = h[i]
        for e in range(pptr[i], pptr[i + 1]):
            acc += pw[e] * m[pidx[e]]
        target[i] = gain * acc
        drive[i] = target[i]
        keep_p[i] = math.exp(-rate * math.exp(-drive[i] * m[i]))

    decay_s = math.exp(-dt / tau_s) if tau_s > 0.0 else 0.0
    dirty = np.zeros(n, dtype=np.bool_)
    any_dirty = False
    n_rec = n_steps // stride
    rec = np.empty((n_rec, n), dtype=np.int8)
    rec_i = 0

    for step in range(1, n_steps + 1):
        if any_dirty:
            for i in range(n):
                if dirty[i]:
                    acc = h[i]
                    for e in range(pptr[i], pptr[i + 1]):
                        acc += pw[e] * m[pidx[e]]
                    target[i] = gain * acc
                    if tau_s == 0.0:
                        drive[i] = target[i]
                        keep_p[i] = math.exp(-rate * math.exp(-drive[i] * m[i]))
                    dirty[i] = False
            any_dirty = False
        if tau_s > 0.0:
            for i in range(n):
                drive[i] = drive[i] * decay_s + (1.0 - decay_s) * target[i]
                keep_p[i] = math.exp(-rate * math.exp(-drive[i] * m[i]))

        for i in range(n):
            u = _u01_at(origins[i], counts[i])
            counts[i] += one
            if u >= keep_p[i]:
                m[i] = -m[i]
                keep_p[i] = math.exp(-rate * math.exp(-drive[i] * m[i]))
                for e in range(cptr[i], cptr[i + 1]):
                    dirty[cidx[e]] = True
                    any_dirty = True

        if step % stride == 0:
            rec[rec_i] = m
            rec_i += 1
    return rec


def run_autonomous_d2(net: PBitNetwork, params: D2Params, seed: int) -> SampleTrace:
    """Free-run the single-time-scale engine and record every
    ``record_stride``-th step.

    Equal (net, params, seed) give bit-identical traces.
    """
    report = validate_network(net)
    if not report.ok:
        raise InvalidNetworkError(str(report))
    dt = params.resolved_dt()
    scales = [("tau_n", params.tau_n), ("tau_s", params.tau_s)]
    for name, scale in scales:
        if scale > 0 and dt > scale / 10.0 * (1 + 1e-12):
            warnings.warn(
                f"dt={dt:g} exceeds {name}/10={scale / 10:g}; dynamics on that "
                "scale are coarsely resolved",
                UnstableTimestepWarning,
                stacklevel=2,
            )
    # Worst-case per-step flip hazard: the fastest escape rate is
    # exp(+|drive|)/tau_n, reached by a spin anti-aligned with a saturated input.
    drive_max = net.gain * (np.abs(net.biases) + np.abs(net.couplings).sum(axis=1)).max()
    if dt / params.tau_n * math.exp(drive_max) >= 0.5:
        warnings.warn(
            f"dt={dt:g} gives a worst-case flip hazard of "
            f"{dt / params.tau_n * math.exp(drive_max):.2f} per step (>= 0.5); "
            "retention statistics will be distorted",
            UnstableTimestepWarning,
            stacklevel=2,
        )
    n_steps = int(round(params.duration / dt))
    if n_steps < 1:
        raise ValueError("duration shorter than one step")

    from .d1 import _adjacency

    pptr, pidx, pw, cptr, cidx = _adjacency(net)
    origins = node_origins(seed, net.n_nodes)
    rec = _d2_kernel(
        pptr, pidx, pw, cptr, cidx, net.biases, net.gain,
        n_steps, dt, params.tau_n, params.tau_s, params.record_stride, origins,
    )
    times = dt * params.record_stride * np.arange(1, rec.shape[0] + 1, dtype=np.float64)
    meta = {
        "engine": "d2",
        "seed": seed,
        "dt": dt,
        "tau_n": params.tau_n,
        "tau_s": params.tau_s,
        "duration": params.duration,
        "record_stride": params.record_stride,
    }
    return SampleTrace(times, rec, meta)
