"""Autonomous two-time-scale p-bit engine (transistor branch + stochastic MTJ).

Every node runs free with no clock.  Per time step ``dt`` and per node:

* the synaptic input relaxes toward its target with time constant
  ``tau_s`` (``tau_s = 0`` means the synapse is instantaneous),
* the transistor branch ``r_t`` relaxes toward ``tanh(input)`` with time
  constant ``tau_t`` (the step update is the exact solution of the
  first-order relaxation over ``dt``),
* the stochastic branch ``r_mtj`` is redrawn with probability
  ``1 - exp(-dt / tau_n)``, where ``tau_n`` is the retention time
  ``tau_n0 * exp(r_mtj * i_mtj)`` (current-pinning; ``i_mtj = 0`` keeps it
  fixed at ``tau_n0``),
* the output snaps to ``m = sgn(r_t - r_mtj)`` with ``sgn(0) = +1``.

All targets read the previous step's spin vector, so the update is
synchronous.  The engine behaves correctly as a Bayesian network sampler
when ``tau_t`` (response) is far below ``tau_n0`` (fluctuation).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import PBitNetwork, validate_network
from .errors import InvalidNetworkError, UnstableTimestepWarning
from .rng import RandomStream, _u01_at, node_origins
from .trace import SampleTrace


class MtjMode(enum.Enum):
    CONTINUOUS = "continuous"
    BIPOLAR = "bipolar"


@dataclass
class D1Params:
    """Run parameters for the two-time-scale engine.

    ``dt=None`` resolves to a twentieth of the fastest time constant.  A
    :class:`UnstableTimestepWarning` is emitted when the resolved step
    exceeds a tenth of any time constant in play.
    """

    tau_t: float
    tau_n0: float
    duration: float
    tau_s: float = 0.0
    dt: float | None = None
    i_mtj: float = 0.0
    mtj_mode: MtjMode = MtjMode.CONTINUOUS
    record_stride: int = 1

    def __post_init__(self):
        if self.tau_t <= 0 or self.tau_n0 <= 0 or self.tau_s < 0:
            raise ValueError("time constants must be positive (tau_s may be 0)")
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")

    def fastest_scale(self) -> float:
        scales = [self.tau_t, self.tau_n0]
        if self.tau_s > 0:
            scales.append(self.tau_s)
        return min(scales)

    def resolved_dt(self) -> float:
        return self.fastest_scale() / 20.0 if self.dt is None else self.dt


def rt_relax(r_t: float, dt: float, tau_t: float, target: float) -> float:
    """Exact first-order relaxation of ``r_t`` toward ``target`` over ``dt``."""
    decay = math.exp(-dt / tau_t)
    return r_t * decay + (1.0 - decay) * target


def synapse_relax(current: float, dt: float, tau_s: float, target: float) -> float:
    """Synaptic input after ``dt``; ``tau_s = 0`` jumps straight to target."""
    if tau_s == 0.0:
        return target
    decay = math.exp(-dt / tau_s)
    return current * decay + (1.0 - decay) * target


def effective_tau_n(tau_n0: float, r_mtj: float, i_mtj: float) -> float:
    """Retention time pinned by the current through the stochastic branch."""
    return tau_n0 * math.exp(r_mtj * i_mtj)


def mtj_step(
    r_mtj: float, dt: float, tau_n: float, mode: MtjMode, stream: RandomStream
) -> float:
    """One retention step: keep ``r_mtj`` with probability ``exp(-dt/tau_n)``,
    otherwise redraw it (uniform on [-1, 1] in continuous mode, a fair ±1 in
    bipolar mode)."""
    if stream.uniform01() <= math.exp(-dt / tau_n):
        return r_mtj
    if mode is MtjMode.BIPOLAR:
        return 1.0 if stream.uniform01() < 0.5 else -1.0
    return stream.uniform_sym()


@njit(cache=True)
def _d1_kernel(
    pptr, pidx, pw, cptr, cidx, h, gain,
    n_steps, dt, tau_t, tau_n0, tau_s, i_mtj, bipolar,
    stride, origins,
):
    n = h.shape[0]
    one = np.uint64(1)
    counts = np.zeros(n, dtype=np.uint64)

    m = np.empty(n, dtype=np.int8)
    r_mtj = np.empty(n)
    for i in range(n):
        m[i] = 1 if _u01_at(origins[i], counts[i]) < 0.5 else -1
        counts[i] += one
        u = _u01_at(origins[i], counts[i])
        counts[i] += one
        if bipolar:
            r_mtj[i] = 1.0 if u < 0.5 else -1.0
        else:
            r_mtj[i] = 2.0 * u - 1.0

    target = np.empty(n)
    drive = np.empty(n)      # synaptic input I_i
    tanh_drive = np.empty(n)
    r_t = np.empty(n)
    keep_p = np.empty(n)     # exp(-dt / tau_n_eff)
    for i in range(n):
        acc = h[i]
        for e in range(pptr[i], pptr[i + 1]):
            acc += pw[e] * m[pidx[e]]
        target[i] = gain * acc
        drive[i] = target[i]
        tanh_drive[i] = math.tanh(drive[i])
        r_t[i] = tanh_drive[i]
        keep_p[i] = math.exp(-dt / (tau_n0 * math.exp(r_mtj[i] * i_mtj)))

    decay_t = math.exp(-dt / tau_t)
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
                        tanh_drive[i] = math.tanh(drive[i])
                    dirty[i] = False
            any_dirty = False
        if tau_s > 0.0:
            for i in range(n):
                drive[i] = drive[i] * decay_s + (1.0 - decay_s) * target[i]
                tanh_drive[i] = math.tanh(drive[i])

        for i in range(n):
            r_t[i] = r_t[i] * decay_t + (1.0 - decay_t) * tanh_drive[i]
            u = _u01_at(origins[i], counts[i])
            counts[i] += one
            if u > keep_p[i]:
                u2 = _u01_at(origins[i], counts[i])
                counts[i] += one
                if bipolar:
                    r_mtj[i] = 1.0 if u2 < 0.5 else -1.0
                else:
                    r_mtj[i] = 2.0 * u2 - 1.0
                if i_mtj != 0.0:
                    keep_p[i] = math.exp(-dt / (tau_n0 * math.exp(r_mtj[i] * i_mtj)))
            new_m = np.int8(1) if r_t[i] - r_mtj[i] >= 0.0 else np.int8(-1)
            if new_m != m[i]:
                m[i] = new_m
                for e in range(cptr[i], cptr[i + 1]):
                    dirty[cidx[e]] = True
                    any_dirty = True

        if step % stride == 0:
            rec[rec_i] = m
            rec_i += 1
    return rec


def _adjacency(net: PBitNetwork):
    """Parent CSR (who feeds node i) and child CSR (whom node i feeds)."""
    J = net.couplings
    n = net.n_nodes
    pptr = np.zeros(n + 1, dtype=np.int64)
    pidx, pw = [], []
    for i in range(n):
        js = np.flatnonzero(J[i])
        pidx.extend(int(j) for j in js)
        pw.extend(float(J[i, j]) for j in js)
        pptr[i + 1] = len(pidx)
    cptr = np.zeros(n + 1, dtype=np.int64)
    cidx = []
    for i in range(n):
        cs = np.flatnonzero(J[:, i])
        cidx.extend(int(c) for c in cs)
        cptr[i + 1] = len(cidx)
    return (
        pptr, np.array(pidx, dtype=np.int64), np.array(pw, dtype=np.float64),
        cptr, np.array(cidx, dtype=np.int64),
    )


def _check_timestep(dt: float, params_scales: list[tuple[str, float]]) -> None:
    for name, scale in params_scales:
        if scale > 0 and dt > scale / 10.0 * (1 + 1e-12):
            warnings.warn(
                f"dt={dt:g} exceeds {name}/10={scale / 10:g}; dynamics on that "
                "scale are coarsely resolved",
                UnstableTimestepWarning,
                stacklevel=3,
            )


def run_autonomous_d1(net: PBitNetwork, params: D1Params, seed: int) -> SampleTrace:
    """Free-run the two-time-scale engine and record every
    ``record_stride``-th step.

    Equal (net, params, seed) give bit-identical traces.  Works on directed
    and symmetric networks alike; the network must pass validation.
    """
    report = validate_network(net)
    if not report.ok:
        raise InvalidNetworkError(str(report))
    dt = params.resolved_dt()
    _check_timestep(dt, [("tau_t", params.tau_t), ("tau_n0", params.tau_n0),
                         ("tau_s", params.tau_s)])
    n_steps = int(round(params.duration / dt))
    if n_steps < 1:
        raise ValueError("duration shorter than one step")

    pptr, pidx, pw, cptr, cidx = _adjacency(net)
    origins = node_origins(seed, net.n_nodes)
    rec = _d1_kernel(
        pptr, pidx, pw, cptr, cidx, net.biases, net.gain,
        n_steps, dt, params.tau_t, params.tau_n0, params.tau_s, params.i_mtj,
        params.mtj_mode is MtjMode.BIPOLAR,
        params.record_stride, origins,
    )
    times = dt * params.record_stride * np.arange(1, rec.shape[0] + 1, dtype=np.float64)
    meta = {
        "engine": "d1",
        "seed": seed,
        "dt": dt,
        "tau_t": params.tau_t,
        "tau_n0": params.tau_n0,
        "tau_s": params.tau_s,
        "i_mtj": params.i_mtj,
        "mtj_mode": params.mtj_mode.value,
        "duration": params.duration,
        "record_stride": params.record_stride,
    }
    return SampleTrace(times, rec, meta)
