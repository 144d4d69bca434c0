"""Measurements on traces and engines: histograms, correlation times,
step responses, sigmoid sweeps, and the total-variation metric."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .core import NetworkKind, PBitNetwork
from .d1 import D1Params, MtjMode
from .d2 import D2Params
from .errors import (
    ConstantTraceError,
    NotConvergedError,
    SubsetMismatchError,
    UnknownNodeError,
)
from .oracle import DistributionTable
from .rng import _u01_at, member_substream, stream_origin
from .trace import SampleTrace


def histogram(trace: SampleTrace, nodes: Sequence[int]) -> DistributionTable:
    """Empirical configuration distribution of ``nodes`` over a trace."""
    nodes = tuple(int(v) for v in nodes)
    if len(set(nodes)) != len(nodes):
        raise ValueError("duplicate nodes in subset")
    for v in nodes:
        if not 0 <= v < trace.n_nodes:
            raise UnknownNodeError(f"node {v} is not in a trace of width {trace.n_nodes}")
    k = len(nodes)
    bits = (trace.states[:, nodes] > 0).astype(np.int64)
    weights = 1 << np.arange(k - 1, -1, -1, dtype=np.int64)
    idx = bits @ weights
    counts = np.bincount(idx, minlength=2**k)
    return DistributionTable.from_counts(nodes, counts)


def tv_distance(p: DistributionTable, q: DistributionTable) -> float:
    """Total variation distance ``0.5 * sum |p - q|`` between two tables
    over the same node subset."""
    if p.nodes != q.nodes:
        raise SubsetMismatchError(f"tables cover {p.nodes} vs {q.nodes}")
    return 0.5 * float(np.abs(p.probs - q.probs).sum())


@dataclass
class AutocorrResult:
    """Normalized autocorrelation ``acf`` at time ``lags`` and the full
    width at half maximum of its symmetric two-sided extension."""

    lags: np.ndarray
    acf: np.ndarray
    fwhm: float


def autocorrelation(trace: SampleTrace, node: int, max_lag: float) -> AutocorrResult:
    """Mean-removed, biased-normalized autocorrelation of one node's spin.

    The trace must be uniformly sampled and span at least ``10 * max_lag``.
    The FWHM is the width of the window where the two-sided autocorrelation
    stays at or above one half, with linear interpolation at the crossing.
    """
    if trace.n_samples < 4:
        raise ValueError("trace too short")
    steps = np.diff(trace.times)
    dt = float(steps[0])
    if not np.allclose(steps, dt, rtol=1e-9, atol=0.0):
        raise ValueError("autocorrelation requires a uniformly sampled trace")
    span = float(trace.times[-1] - trace.times[0])
    if span < 10.0 * max_lag:
        raise ValueError(
            f"trace spans {span:g} but needs >= 10 * max_lag = {10 * max_lag:g}"
        )
    x = trace.signal(node)
    x = x - x.mean()
    n = x.shape[0]
    if not np.any(x):
        raise ConstantTraceError(f"node {node} never changes over the trace")

    n_lags = min(n - 1, int(math.floor(max_lag / dt)))
    size = 1 << int(np.ceil(np.log2(n + n_lags + 1)))
    fx = np.fft.rfft(x, size)
    raw = np.fft.irfft(fx * np.conj(fx), size)[: n_lags + 1]
    acf = raw / raw[0]  # biased estimator: constant 1/n normalization cancels

    below = np.flatnonzero(acf < 0.5)
    if below.size == 0:
        raise NotConvergedError(
            f"autocorrelation stays above 0.5 out to max_lag={max_lag:g}"
        )
    k = int(below[0])
    if k == 0:
        half_lag = 0.0
    else:
        frac = (acf[k - 1] - 0.5) / (acf[k - 1] - acf[k])
        half_lag = (k - 1 + frac) * dt
    lags = dt * np.arange(n_lags + 1, dtype=np.float64)
    return AutocorrResult(lags=lags, acf=acf, fwhm=2.0 * half_lag)


# --- step response -----------------------------------------------------------

@njit(cache=True)
def _d1_step_kernel(
    n_members, equil_steps, run_steps, dt, tau_t, tau_n0, i_mtj, bipolar,
    i_initial, i_final, origins,
):
    one = np.uint64(1)
    counts = np.zeros(n_members, dtype=np.uint64)
    r_t = np.full(n_members, math.tanh(i_initial))
    r_mtj = np.empty(n_members)
    for k in range(n_members):
        # the member's spin is sgn(r_t - r_mtj); no separate init draw needed
        u = _u01_at(origins[k], counts[k])
        counts[k] += one
        if bipolar:
            r_mtj[k] = 1.0 if u < 0.5 else -1.0
        else:
            r_mtj[k] = 2.0 * u - 1.0

    decay_t = math.exp(-dt / tau_t)
    mean = np.zeros(run_steps + 1)
    tgt = math.tanh(i_initial)
    for step in range(equil_steps + run_steps):
        if step == equil_steps:
            acc = 0.0
            for k in range(n_members):
                acc += 1.0 if r_t[k] - r_mtj[k] >= 0.0 else -1.0
            mean[0] = acc / n_members
            tgt = math.tanh(i_final)
        acc = 0.0
        for k in range(n_members):
            r_t[k] = r_t[k] * decay_t + (1.0 - decay_t) * tgt
            u = _u01_at(origins[k], counts[k])
            counts[k] += one
            keep_p = math.exp(-dt / (tau_n0 * math.exp(r_mtj[k] * i_mtj)))
            if u > keep_p:
                u2 = _u01_at(origins[k], counts[k])
                counts[k] += one
                if bipolar:
                    r_mtj[k] = 1.0 if u2 < 0.5 else -1.0
                else:
                    r_mtj[k] = 2.0 * u2 - 1.0
            acc += 1.0 if r_t[k] - r_mtj[k] >= 0.0 else -1.0
        if step >= equil_steps:
            mean[step - equil_steps + 1] = acc / n_members
    return mean


@njit(cache=True)
def _d2_step_kernel(
    n_members, equil_steps, run_steps, dt, tau_n, i_initial, i_final, origins
):
    one = np.uint64(1)
    counts = np.zeros(n_members, dtype=np.uint64)
    m = np.empty(n_members, dtype=np.int8)
    for k in range(n_members):
        m[k] = 1 if _u01_at(origins[k], counts[k]) < 0.5 else -1
        counts[k] += one

    rate = dt / tau_n
    mean = np.zeros(run_steps + 1)
    drive = i_initial
    for step in range(equil_steps + run_steps):
        if step == equil_steps:
            acc = 0.0
            for k in range(n_members):
                acc += m[k]
            mean[0] = acc / n_members
            drive = i_final
        acc = 0.0
        for k in range(n_members):
            u = _u01_at(origins[k], counts[k])
            counts[k] += one
            if u >= math.exp(-rate * math.exp(-drive * m[k])):
                m[k] = -m[k]
            acc += m[k]
        if step >= equil_steps:
            mean[step - equil_steps + 1] = acc / n_members
    return mean


@dataclass
class StepResponseResult:
    """Ensemble-mean output after an input step at time zero."""

    times: np.ndarray
    mean: np.ndarray
    tau_step: float
    i_initial: float
    i_final: float


def step_response(
    engine: str,
    params: D1Params | D2Params,
    n_ensembles: int,
    i_initial: float,
    i_final: float,
    seed: int,
    equilibration: float | None = None,
) -> StepResponseResult:
    """Ensemble step response of a single clamped p-bit.

    ``n_ensembles`` independent devices equilibrate at input ``i_initial``;
    at time zero the input jumps to ``i_final`` and the ensemble-mean output
    is recorded each step for ``params.duration``.  ``tau_step`` is where the
    mean first crosses ``1 - 1/e`` of the gap between its value at time zero
    and the steady state ``tanh(i_final)``; never crossing raises
    :class:`NotConvergedError`.
    """
    if n_ensembles < 100:
        raise ValueError("need at least 100 ensemble members")
    dt = params.resolved_dt()
    run_steps = int(round(params.duration / dt))
    if run_steps < 2:
        raise ValueError("duration shorter than two steps")
    # one stream per member: substream id = member index * stride (node 0)
    origins = np.array(
        [stream_origin(seed, member_substream(k, 0)) for k in range(n_ensembles)],
        dtype=np.uint64,
    )

    if engine == "d1":
        if not isinstance(params, D1Params):
            raise TypeError("engine 'd1' needs D1Params")
        equil = 30.0 * max(params.tau_t, params.tau_s) if equilibration is None else equilibration
        equil_steps = max(1, int(round(equil / dt)))
        mean = _d1_step_kernel(
            n_ensembles, equil_steps, run_steps, dt, params.tau_t, params.tau_n0,
            params.i_mtj, params.mtj_mode is MtjMode.BIPOLAR,
            float(i_initial), float(i_final), origins,
        )
    elif engine == "d2":
        if not isinstance(params, D2Params):
            raise TypeError("engine 'd2' needs D2Params")
        equil = 10.0 * params.tau_n if equilibration is None else equilibration
        equil_steps = max(1, int(round(equil / dt)))
        mean = _d2_step_kernel(
            n_ensembles, equil_steps, run_steps, dt, params.tau_n,
            float(i_initial), float(i_final), origins,
        )
    else:
        raise ValueError(f"unknown engine {engine!r}; use 'd1' or 'd2'")

    times = dt * np.arange(run_steps + 1, dtype=np.float64)
    target = math.tanh(i_final)
    m0 = float(mean[0])
    gap = target - m0
    if abs(gap) < 0.05:
        raise NotConvergedError(
            f"step from mean {m0:.3f} to target {target:.3f} has no usable amplitude"
        )
    threshold = m0 + (1.0 - 1.0 / math.e) * gap
    signed = (mean - threshold) * math.copysign(1.0, gap)
    crossed = np.flatnonzero(signed >= 0.0)
    if crossed.size == 0:
        raise NotConvergedError("ensemble mean never reached the 1 - 1/e threshold")
    k = int(crossed[0])
    if k == 0:
        tau = 0.0
    else:
        frac = (threshold - mean[k - 1]) / (mean[k] - mean[k - 1])
        tau = (k - 1 + frac) * dt
    return StepResponseResult(
        times=times, mean=mean, tau_step=float(tau),
        i_initial=float(i_initial), i_final=float(i_final),
    )


def _single_node_net(drive: float) -> PBitNetwork:
    return PBitNetwork(
        couplings=np.zeros((1, 1)),
        biases=np.array([drive]),
        gain=1.0,
        kind=NetworkKind.DIRECTED,
    )


def sigmoid_sweep(
    engine: str,
    params: D1Params | D2Params,
    inputs: Sequence[float],
    seed: int,
) -> list[tuple[float, float]]:
    """Steady-state mean output of a single clamped p-bit per input value.

    Each point runs for ``params.duration`` (which must cover at least a
    thousand fluctuation times); the first twentieth of each trace is
    discarded before averaging.  Returns ``(input, mean)`` pairs.
    """
    from .d1 import run_autonomous_d1
    from .d2 import run_autonomous_d2

    if engine == "d1":
        if not isinstance(params, D1Params):
            raise TypeError("engine 'd1' needs D1Params")
        fluct = params.tau_n0
        runner = run_autonomous_d1
    elif engine == "d2":
        if not isinstance(params, D2Params):
            raise TypeError("engine 'd2' needs D2Params")
        fluct = params.tau_n
        runner = run_autonomous_d2
    else:
        raise ValueError(f"unknown engine {engine!r}; use 'd1' or 'd2'")
    if params.duration < 1000.0 * fluct:
        raise ValueError(
            f"duration {params.duration:g} covers fewer than 1000 fluctuation "
            f"times ({fluct:g})"
        )

    out: list[tuple[float, float]] = []
    for k, drive in enumerate(inputs):
        trace = runner(_single_node_net(float(drive)), params, seed + k)
        x = trace.signal(0)
        x = x[x.shape[0] // 20:]
        out.append((float(drive), float(x.mean())))
    return out
