"""Cesaro averages of oscillatory integrals and the excluded-scaling recipe.

The sweep argument needs scalings mu = pi nu for which all tracked integrals

    I_nu = int_K e^{2 pi i nu (Psi - x2)} W d^2x

are small; the set where they are not has density zero whenever the level
sets of Psi - x2 carry no area.  The script shows the two regimes:

  * Psi = 0 and W = e^{2 pi i x2}: a single resonance, |I_1| = 1 and nothing
    else, so A(N) = (1/N) sum |I_nu|^2 = 1/N exactly;
  * Psi from the canonical gauge of a random instance: non-stationary phase
    makes I_nu collapse rapidly and the threshold set stays empty.

The last section assembles the full exclusion recipe: the ladder radii, the
crowd size tau*, and the threshold theta derived from the empirical constants.

Run:  python3 demos/04_oscillatory_averages.py
"""

import numpy as np

import dirac2d as d

grid = d.FourierGrid(6, 26)

# 1. the exact resonance -------------------------------------------------------
w = d.PeriodicScalarField.from_modes(grid, {(0, 1): 1.0})
psi0 = d.PeriodicScalarField.constant(grid, 0.0)
rep = d.wiener_average(w, psi0, 512, theta=0.5)
print("resonant pair (W = e^{2 pi i x2}, Psi = 0):")
print(f"  quadrature grid {rep.resolution}")
print(f"  max |A(N) - 1/N| = {np.max(np.abs(rep.averages - 1/np.arange(1, 513))):.2e}")
print(f"  threshold set at theta = 0.5: {rep.m_plus}  (density {rep.density_plus:.4f})")

# 2. gauge Psi ------------------------------------------------------------------
rng = np.random.default_rng(42)
inst = d.random_gamma_instance(grid, rng, p=2.0, q=0.5, f_bound=1.0)
can = d.solve_canonical_gauge(inst)
wr = d.random_trig_field(grid, rng, 2, 1.0, zero_mean=False)
rep2 = d.wiener_average(wr, can.psi, 512, theta=0.1)
print("\ngauge-produced Psi with a random W:")
print(f"  quadrature grid {rep2.resolution} (phase resolved at nu = 512)")
for n in (64, 128, 256, 512):
    print(f"  A({n:4d}) = {rep2.average_at(n):.3e}")
print(f"  excluded-scaling densities: +{rep2.density_plus:.4f} / -{rep2.density_minus:.4f}")

# 3. the exclusion recipe ---------------------------------------------------------
c1, c2 = d.estimate_c1_c2(inst, (np.pi, 0.3), 4 * np.pi)
prof = d.potential_profile(wr)
c7 = prof.c7
c8 = c1**2 / (6 * (c1 + 4 * c7**2))
ladder = d.admissibility_recipe(inst, c1, c2, c8, a1=4 * np.pi)
print("\nexclusion recipe from the empirical constants:")
print(f"  c1 = {c1:.4f}, c2 = {c2:.4f}, c7 = {c7:.4f}, c8 = {c8:.5f}")
print(f"  delta = {ladder.delta:.5f}, ladder length J = {ladder.j_count}")
print(f"  first radii: " + ", ".join(f"{r:.2f}" for r in ladder.radii_head[:5]))
if ladder.constant_gap is not None:
    print(f"  constant tail gap {ladder.constant_gap:.2f} up to a_J = {ladder.a_j:.1f}")
print(f"  tau* = {ladder.tau_star:.3e}, theta = {ladder.theta:.3e} "
      f"(feasible: {ladder.feasible})")
