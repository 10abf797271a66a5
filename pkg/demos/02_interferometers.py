"""
Three ways to choose the interferometer
=======================================

Given purifications A (at theta) and B (at theta + delta) we can build

* the QR plan: R = Q^H from A = Q T, so R A is upper triangular,
* the finite-shift plan: eigenvectors of P = B A^+, which makes every row
  of R B proportional to the same row of R A,
* the SLD plan: eigenvectors of the symmetric logarithmic derivative.

Row proportionality is what makes f^c equal f.  The QR plan only has it
when the scene is inversion symmetric.
"""

import numpy as np

from qlim import (asymmetric_scene, build_finite_shift, build_qr, build_sld, classical_fidelity,
                  plan_residual, purification_pair, symmetric_scene)

theta, delta = 2.0, 1e-3

for name, scene in [("symmetric", symmetric_scene()), ("asymmetric", asymmetric_scene())]:
    pair = purification_pair(scene, theta, theta + delta)
    f = pair.d.sum()
    print(f"--- {name} scene, theta = {theta}, delta = {delta}")
    plans = {"qr": build_qr(pair),
             "finite_shift": build_finite_shift(scene, theta, delta),
             "sld": build_sld(scene, theta)}
    for label, plan in plans.items():
        excess = classical_fidelity(pair, plan.r) - f
        print(f"  {label:<13} row defect {plan_residual(plan, pair):.2e}   f^c - f {excess:.2e}")

# The finite-shift eigenvalues are the per-row ratios |b'(v)| / |a'(v)|.
plan = build_finite_shift(asymmetric_scene(), theta, 1e-5)
print("finite-shift lambda:", np.round(plan.lam, 6))
