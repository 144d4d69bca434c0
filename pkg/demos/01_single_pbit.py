"""
Characterizing a single p-bit
=============================

A p-bit is a binary stochastic element: its output m(t) hops between -1
and +1, and the input I tilts the long-run average toward tanh(I).  This
script measures the three numbers that define a device:

  * the sigmoid      <m>(I)        -- should follow tanh(I)
  * the fluctuation  tau_corr      -- FWHM of the zero-input autocorrelation
  * the response     tau_step      -- time to re-equilibrate after an input step

and does so for both hardware designs.  The two-time-scale design ("d1")
responds much faster than it fluctuates; the single-time-scale design
("d2") has tau_step comparable to tau_corr.  That ratio is the whole story
of why only d1 can run a Bayesian network without a clock.
"""

import math

import numpy as np

from pbitnet.analysis import autocorrelation, sigmoid_sweep, step_response
from pbitnet.core import PBitNetwork
from pbitnet.d1 import D1Params, run_autonomous_d1
from pbitnet.d2 import D2Params, run_autonomous_d2

SEED = 2024
INPUTS = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]

# one free-running p-bit with no self-coupling and no bias
lone = PBitNetwork(np.zeros((1, 1)), np.zeros(1), gain=1.0)

# --- sigmoid -----------------------------------------------------------------
print("sigmoid <m>(I) vs tanh(I)")
print(f"{'I':>4} {'tanh':>8} {'d1':>8} {'d2':>8}")
d1_pts = sigmoid_sweep("d1", D1Params(tau_t=0.05, tau_n0=1.0, duration=2e4, dt=5e-3),
                       INPUTS, seed=SEED)
d2_pts = sigmoid_sweep("d2", D2Params(tau_n=1.0, duration=2e4, dt=0.02),
                       INPUTS, seed=SEED)
for (i, m1), (_, m2) in zip(d1_pts, d2_pts):
    bar = "#" * int(round(20 * (1 + m1) / 2))
    print(f"{i:4.0f} {math.tanh(i):8.3f} {m1:8.3f} {m2:8.3f}  {bar}")

# --- fluctuation time --------------------------------------------------------
# with I = 0 the output is a telegraph process; its autocorrelation decays
# exponentially and the full width at half maximum measures the flip rate
trace1 = run_autonomous_d1(lone, D1Params(tau_t=5e-3, tau_n0=1.0, duration=2e4,
                                          dt=5e-4, record_stride=10), seed=SEED)
trace2 = run_autonomous_d2(lone, D2Params(tau_n=1.0, duration=2e4, dt=0.05), seed=SEED)
corr1 = autocorrelation(trace1, 0, max_lag=5.0).fwhm
corr2 = autocorrelation(trace2, 0, max_lag=5.0).fwhm
print()
print(f"d1 tau_corr = {corr1:.4f}   (2 ln2 tau_n0 = {2 * math.log(2):.4f})")
print(f"d2 tau_corr = {corr2:.4f}   (  ln2 tau_n  = {math.log(2):.4f})")

# --- response time -----------------------------------------------------------
# drive an ensemble from I = -3 to I = 0 and time the recovery of <m>
step1 = step_response("d1", D1Params(tau_t=5e-3, tau_n0=1.0, duration=0.05, dt=2.5e-4),
                      n_ensembles=10_000, i_initial=-3.0, i_final=0.0, seed=SEED)
step2 = step_response("d2", D2Params(tau_n=1.0, duration=2.5, dt=0.02),
                      n_ensembles=10_000, i_initial=-3.0, i_final=0.0, seed=SEED)
print()
print(f"d1 tau_step = {step1.tau_step:.4f}   (tau_t     = 0.0050)")
print(f"d2 tau_step = {step2.tau_step:.4f}   (tau_n / 2 = 0.5000)")
print()
print(f"d1 tau_step / tau_corr = {step1.tau_step / corr1:.2g}   <- two time scales")
print(f"d2 tau_step / tau_corr = {step2.tau_step / corr2:.2g}   <- one time scale")
