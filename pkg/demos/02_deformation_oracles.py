"""First variations of curvature invariants, checked two ways.

For a normal deformation X -> X + eps phi^i n_i the variation of any
curvature scalar follows from a chain rule through the variations of the
metric, the normal frame, and the extrinsic curvature.  The closed-form
predictions are compared against a re-embedding central difference with a
halving step schedule; the difference ratio near 4 confirms quadratic
convergence, and the Richardson limit pins the formulas themselves.
"""

import numpy as np

from branelab import deformation as dfm
from branelab import embeddings as emb
from branelab import jets

rng = np.random.default_rng(3)

for E in (emb.sphere_polar(), emb.ellipsoid(), emb.s3_curve()):
    print(E.name)
    # a handful of random interior chart points, batched along one axis
    pts = []
    for ax in E.axes:
        span = ax.hi - ax.lo
        lo = ax.lo if ax.periodic else ax.lo + 0.15 * span
        hi = ax.hi if ax.periodic else ax.hi - 0.15 * span
        pts.append(rng.uniform(lo, hi, 6))
    for name, order in (("k_squared", 3), ("k_dot_k", 3), ("gradk_full", 4)):
        geom = E.geometry(pts, order + 1)
        coefs = rng.uniform(-0.5, 0.5, size=(geom.codim, 2, 6))
        phi = dfm.normal_field(geom, *[
            (lambda row: lambda *ps: row[0] + row[1] * jets.sin(ps[0]))(row)
            for row in coefs
        ])
        V = dfm.deformation_vector(geom, phi)
        pred = np.asarray(
            dfm.predicted_delta_scalar(geom, phi, name).value, float)
        got = dfm.finite_difference_delta(
            geom, V,
            lambda g2: np.asarray(dfm.scalar_invariant(g2, name).value,
                                  float))
        gap = np.max(np.abs(got.estimate - pred))
        ratio = np.nanmedian(got.convergence_ratio(floor=1e-10))
        print(f"  {name:<11} max|oracle - formula| = {gap:.2e}   "
              f"difference ratio ~ {ratio:.3f}")
    print()

print("the ratio sits at 4 because halving the step quarters the")
print("second-order error of a central difference")
