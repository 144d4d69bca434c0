"""
Running a Bayesian network without a clock
==========================================

Remove the sequencer and let all 19 p-bits of a deliberately messy belief
network fluctuate concurrently.  With two-time-scale devices (tau_t much
smaller than tau_n0) each p-bit sees a quasi-static snapshot of its parents
whenever it randomizes, so the network behaves as if some invisible clock
were replaying every topological order at once -- the histogram lands on
the chain-rule joint.  Single-time-scale devices break that separation and
the histogram flattens toward the wrong answer.

The network: two antagonistic 3-hop branches from A to B (each with edge
product -0.64), plus a tail of decoy nodes hanging off B that add bulk but
cannot influence A..B.  We watch the (A, B) marginal.
"""

import numpy as np

from pbitnet.analysis import histogram, tv_distance
from pbitnet.core import gen_fig3_network
from pbitnet.d1 import D1Params, run_autonomous_d1
from pbitnet.d2 import D2Params, run_autonomous_d2
from pbitnet.oracle import bn_joint, marginalize

SEED = 3
DURATION = 2e4  # in units of tau_n0

net = gen_fig3_network(0.8, seed=42)
a, b = net.labels["A"], net.labels["B"]
truth = marginalize(bn_joint(net), [a, b])

print(f"network: {net.n_nodes} nodes, watching (A, B)")
print("simulating...")

d1 = run_autonomous_d1(
    net, D1Params(tau_t=1e-3, tau_n0=1.0, duration=DURATION, dt=1e-4,
                  record_stride=500), seed=SEED)
h1 = histogram(d1, [a, b])

d2 = run_autonomous_d2(
    net, D2Params(tau_n=1.0, duration=DURATION, dt=0.01, record_stride=5), seed=SEED)
h2 = histogram(d2, [a, b])

print()
print(f"{'A':>3} {'B':>3} {'exact':>8} {'d1':>8} {'d2':>8}")
for config, p in truth.items():
    p1 = h1.prob_of(config)
    p2 = h2.prob_of(config)
    bar = "#" * int(round(40 * p1))
    print(f"{config[0]:3d} {config[1]:3d} {p:8.4f} {p1:8.4f} {p2:8.4f}  {bar}")

print()
print(f"TV(d1, exact) = {tv_distance(h1, truth):.4f}   "
      "<- tau_t/tau_n0 = 1e-3: correct")
print(f"TV(d2, exact) = {tv_distance(h2, truth):.4f}   "
      "<- single time scale: flattened")
