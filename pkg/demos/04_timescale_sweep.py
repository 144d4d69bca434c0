"""
How fast does clockless inference degrade?
==========================================

Clockless inference on a directed network is exact in the limit
tau_t/tau_n0 -> 0 and drifts off as the response time approaches the
fluctuation time.  This
script sweeps the ratio over three decades on the 19-node demo network and
prints TV distance from the exact (A, B) marginal -- the knee is the
design rule for hardware: keep the transistor branch an order of magnitude
or three faster than the nanomagnet.
"""

from pbitnet.analysis import histogram, tv_distance
from pbitnet.core import gen_fig3_network
from pbitnet.d1 import D1Params, run_autonomous_d1
from pbitnet.oracle import bn_joint, marginalize

SEED = 5
DURATION = 5e3
RATIOS = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 3e-1, 1.0]

net = gen_fig3_network(0.8, seed=42)
a, b = net.labels["A"], net.labels["B"]
truth = marginalize(bn_joint(net), [a, b])

print(f"{'tau_t/tau_n0':>12} {'TV(A,B)':>9}")
for k, ratio in enumerate(RATIOS):
    dt = ratio / 10.0  # a tenth of the fastest scale
    n_steps = int(round(DURATION / dt))
    params = D1Params(tau_t=ratio, tau_n0=1.0, duration=DURATION, dt=dt,
                      record_stride=max(1, n_steps // 100_000))
    trace = run_autonomous_d1(net, params, seed=SEED + k)
    tv = tv_distance(histogram(trace, [a, b]), truth)
    print(f"{ratio:12g} {tv:9.4f}  {'#' * int(round(100 * tv))}")

print()
print("statistical noise floor at this duration is roughly 0.02;")
print("everything above it is the cost of a sluggish response.")
