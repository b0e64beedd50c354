#!/usr/bin/env python3
"""Synthesizing functions with prescribed sparse spectra.

Builds sampled functions of the form sum_n f_n(x) e^{2 pi i lambda_n x}
with each layer f_n band-limited to [0, 1], then exercises the exact
spectral transforms: support verification, the e^{-|xi|} multiplier,
the derivative-to-function ratio, and sampling sums over separated sets.
"""

import math

import numpy as np

from lacspec import (
    Grid,
    Sequence,
    bernstein_ratio,
    build_counterexample,
    difference_set,
    plancherel_polya_ratio,
    poisson_transform,
    random_band_function,
    spectral_support,
    split_uniformly_discrete,
    synthesize,
)

rng = np.random.Generator(np.random.Philox(2024))

print("=" * 70)
print("1. Synthesis with grid-exact modulation")
print("=" * 70)
grid = Grid(period=16.0, samples=4096)
freqs = Sequence((4, 16, 64))
blocks = [rng.standard_normal(17) + 1j * rng.standard_normal(17)
          for _ in range(3)]
F = synthesize(blocks, freqs, grid)
print(f"three layers modulated to {list(freqs)}")
print(f"spectral mass outside the declared support: {F.leakage():.2e}")
active = sorted(spectral_support(F, 1e-8))
print(f"active bins span [{active[0]}, {active[-1]}], all inside the")
print(f"declared unit intervals {F.declared_support.intervals()}")

total = grid.period * float(np.sum(np.abs(F.spectrum()) ** 2))
print(f"Plancherel: ||F||^2 = {F.norm_sq:.6f} vs T * sum|c|^2 = {total:.6f}")

print()
print("=" * 70)
print("2. The e^{-|xi|} multiplier (harmonic extension to height one)")
print("=" * 70)
g = random_band_function(grid, rng)
Pg = poisson_transform(g)
print(f"||Pg|| / ||g|| = {Pg.norm / g.norm:.6f} <= 1 (contraction)")
T = 256
fine = Grid(float(T), 4096)
c = np.zeros(4096, dtype=complex)
c[: T + 1] = 1.0
from lacspec import BandFunction

indicator = BandFunction.from_spectrum(fine, c, (0.0, 1.0))
val = poisson_transform(indicator).norm_sq / T**2
print(f"flat unit-band spectrum: discrete energy {val:.6f} vs the closed")
print(f"form (1 - e^-2)/2 = {(1 - math.exp(-2)) / 2:.6f}")

print()
print("=" * 70)
print("3. Derivative ratio of unit-band functions")
print("=" * 70)
ratios = [bernstein_ratio(random_band_function(grid, rng)) for _ in range(200)]
print(f"200 random unit-band functions: max ||f'||/||f|| = {max(ratios):.6f}")
print(f"the exact ceiling is 2*pi = {2 * math.pi:.6f}, attained at frequency 1")

print()
print("=" * 70)
print("4. Sampling sums over separated point sets")
print("=" * 70)
sgrid = Grid(64.0, 512)
h = random_band_function(sgrid, rng, include_right=False)
for k in (16, 32, 64):
    r = plancherel_polya_ratio(h, np.arange(k), 1.0)
    print(f"  first {k:2d} integers: sample energy / ||h||^2 = {r:.6f}")
print("the full integer grid recovers the norm exactly (Parseval).")

print()
print("Difference set of the paired-power sequence, split into separated parts:")
diffs = [float(d) for d in difference_set(build_counterexample(3))]
parts = split_uniformly_discrete(diffs, 1.0)
for i, part in enumerate(parts):
    r = plancherel_polya_ratio(h, part, 1.0)
    print(f"  part {i} ({len(part):2d} points): ratio {r:.6f}")
