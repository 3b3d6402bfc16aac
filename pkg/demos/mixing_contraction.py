"""The bump-to-bump phase chain forgets its starting point geometrically.

Sampling theta just before each bump of a Model I chain gives a Markov chain
on [0, pi).  Chains started at very different tangents t (theta = atan t)
are driven by the same bump sequence; the KS distance between their
empirical laws contracts geometrically until it hits the resolution floor
of the seed count.

Run:  python3 demos/mixing_contraction.py
"""
import numpy as np

from heavykp.estimators import chain_mixing
from heavykp.potentials import Model, ModelConfig
from heavykp.rng import RngStream

N_SEEDS = 4000
POINTS = (-10.0, 0.0, 10.0)

for label, energy, alpha in (("strong disorder", 2.0, 0.5),
                             ("mild disorder", 36.0, 0.8)):
    cfg = ModelConfig(model=Model.I, energy=energy, alpha1=alpha)
    ks = chain_mixing(cfg, 48, POINTS, N_SEEDS, RngStream(61))
    worst = ks.max(axis=(1, 2))
    print(f"{label} (energy {energy:g}, alpha {alpha}):")
    print("  step    worst KS across starts")
    for step in (1, 3, 6, 12, 24, 48):
        print(f"  {step:4d}    {worst[step - 1]:.5f}")
    floor = 1.5 / N_SEEDS
    print(f"  (ECDF resolution floor at {N_SEEDS} seeds: ~{floor:.1e})\n")

print("strong disorder collapses the chain within a few bumps; mild disorder")
print("shows the geometric decay over a readable range of steps.")
