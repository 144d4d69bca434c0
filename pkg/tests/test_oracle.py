"""Enumeration oracles against hand-derived probabilities."""

from __future__ import annotations

import math

import numpy as np
import pytest

from pbitnet.core import NetworkKind, PBitNetwork, gen_fig3_network, gen_layered_random_bn
from pbitnet.errors import TooLargeError, UnknownNodeError, WrongKindError
from pbitnet.oracle import DistributionTable, bn_joint, boltzmann_joint, marginalize


def dnet(J, h, gain=1.0):
    return PBitNetwork(np.array(J, dtype=float), np.array(h, dtype=float), gain,
                       NetworkKind.DIRECTED)


def snet(J, h, gain=1.0):
    return PBitNetwork(np.array(J, dtype=float), np.array(h, dtype=float), gain,
                       NetworkKind.SYMMETRIC)


class TestDistributionTable:
    def test_index_convention(self):
        t = DistributionTable((4, 7), np.array([0.1, 0.2, 0.3, 0.4]))
        assert t.config(0) == (-1, -1)
        assert t.config(1) == (-1, 1)  # last listed node varies fastest
        assert t.config(3) == (1, 1)
        assert t.index_of((1, -1)) == 2
        assert t.prob_of((1, 1)) == 0.4
        assert list(t.as_dict()) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    def test_rejects_bad_tables(self):
        with pytest.raises(ValueError):
            DistributionTable((0,), np.array([0.5, 0.25, 0.25]))  # wrong size
        with pytest.raises(ValueError):
            DistributionTable((0, 0), np.full(4, 0.25))  # duplicate node
        with pytest.raises(ValueError):
            DistributionTable((0,), np.array([1.2, -0.2]))  # negative
        with pytest.raises(ValueError):
            DistributionTable((0,), np.array([0.6, 0.6]))  # sum != 1

    def test_from_counts(self):
        t = DistributionTable.from_counts((0, 1), np.array([1, 1, 0, 2]))
        assert t.prob_of((1, 1)) == 0.5
        with pytest.raises(ValueError):
            DistributionTable.from_counts((0,), np.zeros(2))

    def test_index_of_rejects_junk(self):
        t = DistributionTable((0,), np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            t.index_of((0,))
        with pytest.raises(ValueError):
            t.index_of((1, 1))


def test_single_unbiased_node():
    t = bn_joint(dnet([[0.0]], [0.0]))
    assert t.prob_of((1,)) == 0.5
    assert t.prob_of((-1,)) == 0.5


def test_two_node_chain_hand_values():
    # parent h=0 is a fair coin; child copies with sigmoid strength tanh(1)
    t = bn_joint(dnet([[0, 0], [1, 0]], [0, 0]))
    agree = (1.0 + math.tanh(1.0)) / 4.0
    assert t.prob_of((1, 1)) == pytest.approx(agree, abs=1e-15)
    assert t.prob_of((-1, -1)) == pytest.approx(agree, abs=1e-15)
    assert t.prob_of((1, -1)) == pytest.approx(0.5 - agree, abs=1e-15)
    assert t.prob_of((1, 1)) == pytest.approx(0.4404, abs=1e-4)


def test_root_marginals_equal_standalone_sigmoid():
    for seed in range(5):
        net = gen_layered_random_bn([2, 2, 2], extra_skip_edges=1, seed=seed)
        joint = bn_joint(net)
        for root in (0, 1):
            marg = marginalize(joint, [root])
            want = 0.5 * (1.0 + math.tanh(net.gain * net.biases[root]))
            assert marg.prob_of((1,)) == pytest.approx(want, abs=1e-12)


def test_bn_joint_normalization():
    for seed in range(5):
        net = gen_layered_random_bn([1, 3, 2], extra_skip_edges=2, seed=seed)
        assert abs(bn_joint(net).probs.sum() - 1.0) < 1e-12


def test_bn_joint_guards():
    with pytest.raises(WrongKindError):
        bn_joint(snet([[0, 1], [1, 0]], [0, 0]))
    big = np.zeros((23, 23))
    with pytest.raises(TooLargeError):
        bn_joint(PBitNetwork(big, np.zeros(23), 1.0, NetworkKind.DIRECTED))


def test_boltzmann_two_node_agreement():
    t = boltzmann_joint(snet([[0, 1], [1, 0]], [0, 0], gain=0.5))
    agree = t.prob_of((1, 1)) + t.prob_of((-1, -1))
    assert agree == pytest.approx(1.0 / (1.0 + math.exp(-1.0)), abs=1e-12)
    assert agree == pytest.approx(0.7310585786300049, abs=1e-12)


def test_boltzmann_uniform_when_uncoupled():
    t = boltzmann_joint(snet(np.zeros((3, 3)), [0, 0, 0]))
    assert np.allclose(t.probs, 1 / 8, atol=1e-15)


def test_boltzmann_global_flip_symmetry():
    t = boltzmann_joint(snet([[0, 0.7, 0], [0.7, 0, -0.4], [0, -0.4, 0]], [0, 0, 0], gain=0.8))
    for config, p in t.items():
        flipped = tuple(-s for s in config)
        assert p == pytest.approx(t.prob_of(flipped), abs=1e-14)


def test_boltzmann_guards():
    with pytest.raises(WrongKindError):
        boltzmann_joint(dnet([[0, 0], [1, 0]], [0, 0]))


def test_marginalize_identity_and_order():
    t = bn_joint(dnet([[0, 0], [1, 0]], [0.3, -0.2]))
    same = marginalize(t, [0, 1])
    assert np.allclose(same.probs, t.probs, atol=0)
    swapped = marginalize(t, [1, 0])
    assert swapped.prob_of((1, -1)) == pytest.approx(t.prob_of((-1, 1)), abs=1e-15)


def test_marginal_of_independent_node():
    t = bn_joint(dnet([[0, 0], [0, 0]], [1.0, 0.0]))
    m = marginalize(t, [0])
    assert m.prob_of((1,)) == pytest.approx((1 + math.tanh(1)) / 2, abs=1e-12)
    assert m.prob_of((1,)) == pytest.approx(0.8808, abs=1e-4)


def test_marginalize_unknown_node():
    t = bn_joint(dnet([[0.0]], [0.0]))
    with pytest.raises(UnknownNodeError):
        marginalize(t, [5])


def test_marginals_always_sum_to_one():
    net = gen_layered_random_bn([2, 3, 2], extra_skip_edges=2, seed=11)
    joint = bn_joint(net)
    for subset in ([0], [0, 6], [6, 3, 0]):
        assert abs(marginalize(joint, subset).probs.sum() - 1.0) < 1e-12


def test_fig3_backbone_statistics():
    net = gen_fig3_network(0.8, seed=42)
    joint = bn_joint(net)
    a, m1, b = net.labels["A"], net.labels["M1"], net.labels["B"]
    ab = marginalize(joint, [a, b])
    # two inverting branches in series: (A, B) correlated, (A, M1) anti-correlated
    assert ab.prob_of((1, 1)) + ab.prob_of((-1, -1)) > 0.5
    ranked = sorted(ab.items(), key=lambda kv: kv[1], reverse=True)
    assert {ranked[0][0], ranked[1][0]} == {(1, 1), (-1, -1)}
    am = marginalize(joint, [a, m1])
    assert am.prob_of((1, 1)) + am.prob_of((-1, -1)) < 0.5
    # backbone statistics do not depend on the decoy seed
    other = marginalize(bn_joint(gen_fig3_network(0.8, seed=43)), [a, b])
    assert np.allclose(ab.probs, other.probs, atol=1e-12)
