"""Conserved two-deformation current on a string worldsheet.

Pairing two solutions of the linearized equations through the boundary
term of the action's variation gives an antisymmetric bilinear form.  Its
quadrature over a constant-time cross-section does not depend on which
cross-section, and for the minimal-area string it reduces to the textbook
"position against momentum density" pairing.
"""

import numpy as np

from branelab import embeddings as emb
from branelab import jets
from branelab import models as mdl
from branelab import symplectic as sym

E = emb.static_string(1.0)
model = mdl.DNG(mu=1.0)

# two standing z-waves in quadrature: a solution pair of the wave equation
f1 = sym.chart_field(lambda t, s: (
    0.0 * t, 0.0 * t, 0.0 * t, jets.sin(s) * jets.cos(t)))
f2 = sym.chart_field(lambda t, s: (
    0.0 * t, 0.0 * t, 0.0 * t, jets.sin(s) * jets.sin(t)))

print("slice form on the static string, three cross-sections:")
for tv in (0.3, 1.1, 2.0):
    w = sym.symplectic_form(model, E, sym.CauchySlice("tau", tv, 256),
                            f1, f2)
    print(f"  tau = {tv:<4} w = {w:.12f}")
print(f"  analytic value for this unit pair: pi = {np.pi:.12f}")

print("\nantisymmetry and the reduction to canonical pairing (tau = 0.9):")
slc = sym.CauchySlice("tau", 0.9, 160)
w12 = sym.symplectic_form(model, E, slc, f1, f2)
w21 = sym.symplectic_form(model, E, slc, f2, f1)
p12 = sym.dng_canonical_pairing(E, slc, f1, f2, sigma0=1.0)
print(f"  w[f1,f2] = {w12:+.12f}")
print(f"  w[f2,f1] = {w21:+.12f}")
print(f"  pairing  = {p12:+.12f}")

print("\ntangential deformations are pure reparameterization and drop out:")


def tangential(geom):
    t, s = geom.params
    comp = jets.jet_stack([0.2 + 0.1 * jets.sin(s), -0.3 + 0.1 * jets.cos(t)],
                          template=geom.X)
    return jets.jet_einsum("am...,a...->m...", geom.tangents, comp)


print(f"  w[tangential, f1] = {sym.symplectic_form(model, E, slc, tangential, f1):.2e}")

print("\ncanonical data of the circular string (sigma0 = 2):")
pair = sym.dng_canonical_pair(E, slc, sigma0=2.0)
print(f"  position components at s=0:  {pair.position[:, 0]}")
print(f"  momentum density at s=0:     {pair.momentum[:, 0]}")
print("  the momentum is sigma0 sqrt(-gamma) times the unit clock")
print("  direction, so only its time component is filled")

print("\nmass shell: p.p + sigma0^2 vanishes pointwise:")
res = sym.mass_shell_check(E, slc, sigma0=2.0)
print(f"  max residual = {np.max(np.abs(res)):.2e}")
