"""Two-time-scale engine: device ops, kernel equivalence, and statistics.

The engine has two independent routes to the same trajectory: the compiled
kernel used by ``run_autonomous_d1`` and the scalar device operations
(``rt_relax`` / ``synapse_relax`` / ``effective_tau_n`` / ``mtj_step``)
driven by a plain Python loop.  ``test_kernel_matches_op_level_reference``
pins them to bit-identical spins.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from pbitnet.core import NetworkKind, PBitNetwork
from pbitnet.d1 import (
    D1Params,
    MtjMode,
    _adjacency,
    _d1_kernel,
    effective_tau_n,
    mtj_step,
    rt_relax,
    run_autonomous_d1,
    synapse_relax,
)
from pbitnet.errors import InvalidNetworkError, UnstableTimestepWarning
from pbitnet.rng import RandomStream, member_substream, node_origins


def dnet(J, h, gain=1.0):
    return PBitNetwork(np.array(J, dtype=float), np.array(h, dtype=float), gain,
                       NetworkKind.DIRECTED)


# --- device operations --------------------------------------------------------

def test_rt_relax_limits():
    assert rt_relax(0.3, 100.0, 1.0, math.tanh(1.0)) == pytest.approx(math.tanh(1.0), abs=1e-15)
    assert rt_relax(0.3, 0.0, 1.0, 0.9) == 0.3


def test_rt_relax_accumulated_over_one_time_constant():
    tau = 0.7
    r, target = 0.0, math.tanh(1.0)
    for _ in range(1000):
        r = rt_relax(r, tau / 1000, tau, target)
    assert r == pytest.approx(math.tanh(1.0) * (1.0 - math.exp(-1.0)), abs=1e-3)


def test_synapse_relax():
    assert synapse_relax(0.123, 0.05, 0.0, -0.7) == -0.7  # instantaneous
    assert synapse_relax(0.5, 0.0, 2.0, -0.7) == 0.5
    x = 0.0
    for _ in range(1000):
        x = synapse_relax(x, 3.0 / 1000, 3.0, 2.0)
    assert x == pytest.approx(2.0 * (1.0 - math.exp(-1.0)), abs=1e-3)


def test_effective_tau_n():
    assert effective_tau_n(2.0, 0.77, 0.0) == 2.0
    assert effective_tau_n(2.0, 0.5, 2.0) == pytest.approx(2.0 * math.e)
    up = effective_tau_n(1.0, 0.4, 1.3)
    down = effective_tau_n(1.0, -0.4, 1.3)
    assert up * down == pytest.approx(1.0)


def test_mtj_step_redraw_probability():
    stream = RandomStream(2024)
    n, redraws = 1_000_000, 0
    for _ in range(n):
        if mtj_step(0.5, 0.01, 1.0, MtjMode.CONTINUOUS, stream) != 0.5:
            redraws += 1
    want = 1.0 - math.exp(-0.01)
    sigma = math.sqrt(want * (1.0 - want) / n)
    assert abs(redraws / n - want) < 3.5 * sigma


def test_mtj_step_zero_dt_keeps_value():
    stream = RandomStream(1)
    assert all(mtj_step(0.25, 0.0, 1.0, MtjMode.CONTINUOUS, stream) == 0.25
               for _ in range(100))


def test_mtj_redraw_moments():
    stream = RandomStream(9)
    # dt >> tau forces a redraw every call
    vals = np.array([mtj_step(0.0, 1e3, 1.0, MtjMode.CONTINUOUS, stream)
                     for _ in range(100_000)])
    assert abs(vals.mean()) < 0.01
    assert abs(vals.var() - 1.0 / 3.0) < 0.01
    assert vals.min() >= -1.0 and vals.max() < 1.0


def test_mtj_bipolar_values():
    stream = RandomStream(10)
    vals = [mtj_step(1.0, 1e3, 1.0, MtjMode.BIPOLAR, stream) for _ in range(20_000)]
    assert set(vals) == {-1.0, 1.0}
    assert abs(np.mean(vals)) < 0.025


# --- parameters ---------------------------------------------------------------

def test_params_validation():
    with pytest.raises(ValueError):
        D1Params(tau_t=0.0, tau_n0=1.0, duration=1.0)
    with pytest.raises(ValueError):
        D1Params(tau_t=0.1, tau_n0=-1.0, duration=1.0)
    with pytest.raises(ValueError):
        D1Params(tau_t=0.1, tau_n0=1.0, duration=1.0, tau_s=-0.1)
    with pytest.raises(ValueError):
        D1Params(tau_t=0.1, tau_n0=1.0, duration=0.0)
    with pytest.raises(ValueError):
        D1Params(tau_t=0.1, tau_n0=1.0, duration=1.0, dt=0.0)
    with pytest.raises(ValueError):
        D1Params(tau_t=0.1, tau_n0=1.0, duration=1.0, record_stride=0)


def test_default_dt_is_a_twentieth_of_the_fastest_scale():
    p = D1Params(tau_t=0.4, tau_n0=1.0, duration=1.0)
    assert p.resolved_dt() == pytest.approx(0.02)
    p = D1Params(tau_t=0.4, tau_n0=1.0, tau_s=0.1, duration=1.0)
    assert p.fastest_scale() == 0.1
    assert p.resolved_dt() == pytest.approx(0.005)
    p = D1Params(tau_t=0.4, tau_n0=1.0, duration=1.0, dt=0.011)
    assert p.resolved_dt() == 0.011


def test_coarse_timestep_warns():
    net = dnet([[0.0]], [0.0])
    p = D1Params(tau_t=0.1, tau_n0=1.0, duration=5.0, dt=0.02)  # > tau_t / 10
    with pytest.warns(UnstableTimestepWarning):
        run_autonomous_d1(net, p, seed=0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        run_autonomous_d1(net, D1Params(tau_t=0.1, tau_n0=1.0, duration=5.0, dt=0.01), seed=0)


def test_rejects_invalid_network():
    loop = dnet([[1.0]], [0.0])
    with pytest.raises(InvalidNetworkError):
        run_autonomous_d1(loop, D1Params(tau_t=0.1, tau_n0=1.0, duration=1.0), seed=0)


# --- kernel equivalence -------------------------------------------------------

def reference_d1(net, params, seed):
    """Op-level scalar implementation of the synchronous loop."""
    dt = params.resolved_dt()
    n_steps = int(round(params.duration / dt))
    n = net.n_nodes
    J, h, gain = net.couplings, net.biases, net.gain
    parents = [np.flatnonzero(J[i]) for i in range(n)]
    streams = [RandomStream(seed, member_substream(0, i)) for i in range(n)]
    bipolar = params.mtj_mode is MtjMode.BIPOLAR

    m = np.empty(n, dtype=np.int8)
    r_mtj = np.empty(n)
    for i in range(n):
        m[i] = 1 if streams[i].uniform01() < 0.5 else -1
        u = streams[i].uniform01()
        r_mtj[i] = (1.0 if u < 0.5 else -1.0) if bipolar else 2.0 * u - 1.0

    def raw_target(i):
        acc = h[i]
        for j in parents[i]:
            acc += J[i, j] * m[j]
        return gain * acc

    target = np.array([raw_target(i) for i in range(n)])
    drive = target.copy()
    tanh_drive = np.array([math.tanh(v) for v in drive])
    r_t = tanh_drive.copy()

    rows = []
    for step in range(1, n_steps + 1):
        for i in range(n):  # previous step's spins feed every target
            target[i] = raw_target(i)
        if params.tau_s == 0.0:
            for i in range(n):
                drive[i] = synapse_relax(drive[i], dt, 0.0, target[i])
                tanh_drive[i] = math.tanh(drive[i])
        else:
            for i in range(n):
                drive[i] = synapse_relax(drive[i], dt, params.tau_s, target[i])
                tanh_drive[i] = math.tanh(drive[i])
        for i in range(n):
            r_t[i] = rt_relax(r_t[i], dt, params.tau_t, tanh_drive[i])
            tau_n = effective_tau_n(params.tau_n0, r_mtj[i], params.i_mtj)
            r_mtj[i] = mtj_step(r_mtj[i], dt, tau_n, params.mtj_mode, streams[i])
            m[i] = 1 if r_t[i] - r_mtj[i] >= 0.0 else -1
        if step % params.record_stride == 0:
            rows.append(m.copy())
    return np.array(rows, dtype=np.int8)


@pytest.mark.parametrize("mode,tau_s", [
    (MtjMode.CONTINUOUS, 0.0),
    (MtjMode.BIPOLAR, 0.0),
    (MtjMode.CONTINUOUS, 0.05),
])
def test_kernel_matches_op_level_reference(mode, tau_s):
    net = dnet([[0, 0, 0], [0.9, 0, 0], [-0.6, 0.8, 0]], [0.1, 0.0, -0.2])
    params = D1Params(tau_t=0.05, tau_n0=0.2, tau_s=tau_s, dt=0.002,
                      duration=0.6, mtj_mode=mode, record_stride=1)
    trace = run_autonomous_d1(net, params, seed=77)
    assert np.array_equal(trace.states, reference_d1(net, params, seed=77))


def test_kernel_matches_reference_with_pinning():
    net = dnet([[0, 0], [0.7, 0]], [0.0, 0.1])
    params = D1Params(tau_t=0.05, tau_n0=0.2, dt=0.002, duration=0.6,
                      i_mtj=0.8, record_stride=2)
    trace = run_autonomous_d1(net, params, seed=5)
    assert np.array_equal(trace.states, reference_d1(net, params, seed=5))


def test_kernel_compiled_equals_interpreted():
    net = dnet([[0, 0], [0.7, 0]], [0.0, 0.1])
    pptr, pidx, pw, cptr, cidx = _adjacency(net)
    origins = node_origins(3, 2)
    args = (pptr, pidx, pw, cptr, cidx, net.biases, net.gain,
            400, 0.002, 0.05, 0.2, 0.0, 0.3, False, 1, origins)
    assert np.array_equal(_d1_kernel(*args), _d1_kernel.py_func(*args))


# --- run-level behaviour ------------------------------------------------------

def test_trace_layout_and_meta():
    net = dnet([[0, 0], [1, 0]], [0, 0])
    p = D1Params(tau_t=0.1, tau_n0=1.0, duration=10.0, dt=0.01, record_stride=10)
    trace = run_autonomous_d1(net, p, seed=3)
    assert trace.n_samples == 100
    assert trace.times[0] == pytest.approx(0.1)
    assert trace.times[-1] == pytest.approx(10.0)
    assert trace.meta["engine"] == "d1"
    assert trace.meta["dt"] == 0.01
    assert trace.meta["mtj_mode"] == "continuous"


def test_determinism():
    net = dnet([[0, 0], [1, 0]], [0, 0])
    p = D1Params(tau_t=0.1, tau_n0=1.0, duration=20.0, dt=0.01)
    a = run_autonomous_d1(net, p, seed=8)
    b = run_autonomous_d1(net, p, seed=8)
    c = run_autonomous_d1(net, p, seed=9)
    assert np.array_equal(a.states, b.states)
    assert not np.array_equal(a.states, c.states)


def test_single_node_is_unbiased():
    net = dnet([[0.0]], [0.0])
    p = D1Params(tau_t=0.05, tau_n0=1.0, duration=1e5, dt=5e-3, record_stride=1)
    trace = run_autonomous_d1(net, p, seed=12)
    assert abs(trace.signal(0).mean()) < 0.02


def test_pinning_biases_the_dwell_times():
    # bipolar at zero input: m = -r_mtj, and the pinned retention times make
    # the +1 state of r_mtj live e^(2 i_mtj) times longer than the -1 state
    net = dnet([[0.0]], [0.0])
    p = D1Params(tau_t=0.05, tau_n0=1.0, duration=1e5, dt=5e-3,
                 i_mtj=1.0, mtj_mode=MtjMode.BIPOLAR, record_stride=1)
    trace = run_autonomous_d1(net, p, seed=21)
    assert trace.signal(0).mean() == pytest.approx(-math.tanh(1.0), abs=0.02)
