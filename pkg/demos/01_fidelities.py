"""
Quantum and classical fidelity of two nearby images
===================================================

Two incoherent point sources at 0 and theta are seen by two collectors.
The one-photon state is rho = C C^H, with C the collector-by-source
transfer matrix.  Here we compare

* the quantum (root) fidelity f, the nuclear norm of C(theta)^H C(theta'),
* the Uhlmann form Tr|sqrt(rho) sqrt(sigma)|, which must agree,
* the classical fidelity f^c of photon counting behind an interferometer,
  which can never be smaller than f.
"""

import numpy as np

from qlim import (asymmetric_scene, classical_fidelity, density, diagonal_fidelity,
                  haar_unitary, purification_pair, quantum_fidelity, row_fidelity,
                  uhlmann_fidelity)

scene = asymmetric_scene()
theta, theta2 = 1.0, 1.6

# Two independent routes to the same number.
f = quantum_fidelity(scene, theta, theta2)
u = uhlmann_fidelity(density(scene, theta), density(scene, theta2))
print(f"quantum fidelity  Tr D          = {f:.12f}")
print(f"Uhlmann fidelity  Tr|sqrt sqrt| = {u:.12f}")

# Purifications A, B with A^H B = D diagonal and nonnegative.
pair = purification_pair(scene, theta, theta2)
print("A^H B =\n", np.round(pair.a.conj().T @ pair.b, 12))

# Any measurement basis gives f^c >= f.  Random ones are usually well above.
for seed in range(3):
    r = haar_unitary(2, seed)
    print(f"Haar seed {seed}: f^c = {classical_fidelity(pair, r):.6f}  (f = {f:.6f})")

# The row-norm formula is the classical fidelity.  Keeping only the diagonal
# of triangular rotated purifications undercounts it.
a = np.array([[1.0, 1.0], [0.0, 1.0]])
b = np.array([[1.0, 0.0], [1.0, 1.0]])
print(f"row formula {row_fidelity(a, b):.4f} vs diagonal formula {diagonal_fidelity(a, b):.4f}")
