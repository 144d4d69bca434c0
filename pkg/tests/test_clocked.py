"""Clocked sweep sampler: update rule, policies, and convergence."""

from __future__ import annotations

import math

import numpy as np
import pytest

from pbitnet.analysis import histogram, tv_distance
from pbitnet.clocked import (
    ClockedConfig,
    UpdatePolicy,
    _clocked_kernel,
    bsn_update,
    run_clocked,
    synapse_input,
)
from pbitnet.core import NetworkKind, PBitNetwork, topological_order
from pbitnet.errors import PolicyMismatchError
from pbitnet.oracle import bn_joint, boltzmann_joint
from pbitnet.rng import RandomStream, member_substream, node_origins, stream_origin


def dnet(J, h, gain=1.0):
    return PBitNetwork(np.array(J, dtype=float), np.array(h, dtype=float), gain,
                       NetworkKind.DIRECTED)


def snet(J, h, gain=1.0):
    return PBitNetwork(np.array(J, dtype=float), np.array(h, dtype=float), gain,
                       NetworkKind.SYMMETRIC)


@pytest.mark.parametrize("drive", [-1.0, 0.0, 0.7])
def test_bsn_update_frequency(drive):
    stream = RandomStream(17)
    n = 100_000
    hits = sum(bsn_update(drive, stream) == 1 for _ in range(n))
    want = 0.5 * (1.0 + math.tanh(drive))
    sigma = math.sqrt(want * (1.0 - want) / n)
    assert abs(hits / n - want) < 3.5 * sigma


def test_bsn_update_saturates():
    stream = RandomStream(3)
    assert all(bsn_update(20.0, stream) == 1 for _ in range(1000))
    assert all(bsn_update(-20.0, stream) == -1 for _ in range(1000))


def test_synapse_input_arithmetic():
    net = dnet([[0, 0.5, -2], [0, 0, 0], [0, 0, 0]], [0.25, 0, 0], gain=2.0)
    state = np.array([1, -1, 1], dtype=np.int8)
    assert synapse_input(net, state, 0) == pytest.approx(2.0 * (0.25 - 0.5 - 2.0))
    assert synapse_input(net, state, 1) == 0.0


def test_policy_constructors():
    assert UpdatePolicy.topological().kind == "topological"
    assert UpdatePolicy.fixed([2, 0, 1]).order == (2, 0, 1)
    assert UpdatePolicy.random_per_sweep().order is None


def test_run_clocked_rejects_bad_policies():
    sym = snet([[0, 1], [1, 0]], [0, 0])
    with pytest.raises(PolicyMismatchError):
        run_clocked(sym, ClockedConfig(sweeps=10, policy=UpdatePolicy.topological()))
    chain = dnet([[0, 0], [1, 0]], [0, 0])
    with pytest.raises(ValueError):
        run_clocked(chain, ClockedConfig(sweeps=10, policy=UpdatePolicy.fixed([0, 0])))
    with pytest.raises(ValueError):
        run_clocked(chain, ClockedConfig(sweeps=10, policy=UpdatePolicy.fixed([0])))


def test_burn_in_resolution():
    assert ClockedConfig(sweeps=1000).resolved_burn_in() == 100
    assert ClockedConfig(sweeps=1000, burn_in_sweeps=5).resolved_burn_in() == 5
    with pytest.raises(ValueError):
        ClockedConfig(sweeps=10, burn_in_sweeps=10).resolved_burn_in()
    with pytest.raises(ValueError):
        ClockedConfig(sweeps=10, burn_in_sweeps=-1).resolved_burn_in()


def test_trace_layout():
    net = dnet([[0, 0], [1, 0]], [0, 0])
    trace = run_clocked(net, ClockedConfig(sweeps=50, burn_in_sweeps=20, seed=1))
    assert trace.n_samples == 30
    assert trace.times[0] == 20 and trace.times[-1] == 49
    assert set(np.unique(trace.states)) <= {-1, 1}
    assert trace.meta["policy"] == "topological"


def test_determinism_and_seed_sensitivity():
    net = dnet([[0, 0, 0], [1, 0, 0], [0, -1, 0]], [0.2, 0, 0])
    cfg = ClockedConfig(sweeps=500, seed=9)
    a = run_clocked(net, cfg)
    b = run_clocked(net, cfg)
    assert np.array_equal(a.states, b.states)
    c = run_clocked(net, ClockedConfig(sweeps=500, seed=10))
    assert not np.array_equal(a.states, c.states)


def test_kernel_compiled_equals_interpreted():
    net = snet([[0, 1, 0], [1, 0, -0.5], [0, -0.5, 0]], [0.1, 0, -0.1], gain=0.7)
    origins = node_origins(3, 3)
    perm_origin = np.uint64(stream_origin(3, member_substream(0, 3)))
    order = np.arange(3, dtype=np.int64)
    args = (net.couplings, net.biases, net.gain, order, True, 200, 0, origins, perm_origin)
    assert np.array_equal(_clocked_kernel(*args), _clocked_kernel.py_func(*args))


def test_topological_sweep_is_ancestral_sampling():
    # every recorded sweep under the parent-first order is an exact joint draw,
    # so even modest sweep counts land near the chain-rule table
    net = dnet([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [0, 0, 0])
    trace = run_clocked(net, ClockedConfig(sweeps=200_000, policy=UpdatePolicy.topological(), seed=2))
    tv = tv_distance(histogram(trace, [0, 1, 2]), bn_joint(net))
    assert tv < 0.02


def test_reverse_order_misses_the_joint():
    net = dnet([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [0, 0, 0])
    cfg = ClockedConfig(sweeps=200_000, policy=UpdatePolicy.fixed([2, 1, 0]), seed=2)
    tv = tv_distance(histogram(run_clocked(net, cfg), [0, 1, 2]), bn_joint(net))
    assert tv > 0.1  # systematic error, not sampling noise


def test_any_order_on_symmetric_network():
    net = snet([[0, 1], [1, 0]], [0, 0], gain=0.5)
    oracle = boltzmann_joint(net)
    for policy in (UpdatePolicy.fixed([0, 1]), UpdatePolicy.fixed([1, 0]),
                   UpdatePolicy.random_per_sweep()):
        trace = run_clocked(net, ClockedConfig(sweeps=200_000, policy=policy, seed=4))
        assert tv_distance(histogram(trace, [0, 1]), oracle) < 0.02


def test_topological_policy_uses_generated_order():
    # child listed before parent in index order still updates parent first
    net = dnet([[0, 1], [0, 0]], [0, 0])  # edge 1 -> 0
    assert topological_order(net) == [1, 0]
    trace = run_clocked(net, ClockedConfig(sweeps=100_000, seed=6))
    tv = tv_distance(histogram(trace, [0, 1]), bn_joint(net))
    assert tv < 0.02
