"""Commutative Gaussian case: closed forms for rho_b(x) = exp(b.x - |b|^2/2) against quadrature."""

import numpy as np

from ncbl.frames import mercedes_frame, random_inadmissible_frame
from ncbl.gaussian import (
    gaussian_entropy,
    gaussian_entropy_production,
    quadrature_entropy,
    quadrature_entropy_production,
    verify_gaussian_bl_quadrature,
    verify_gaussian_sa,
)

for b in (0.3, 0.7, 1.5):
    print(f"b = {b}: S closed {gaussian_entropy(b):.8f} quadrature {quadrature_entropy([b]):.8f}; "
          f"D closed {gaussian_entropy_production(b):.6f} quadrature {quadrature_entropy_production([b]):.6f}")

rng = np.random.default_rng(4)
frame = mercedes_frame()
cs = [rng.standard_normal(1) for _ in range(3)]
rep = verify_gaussian_bl_quadrature(frame, cs)
print(f"tight frame B-L: ln lhs {rep.lhs:.8f}, ln rhs {rep.rhs:.8f}, closed-form error {rep.extra['closed_form_error']:.1e}")

bad = random_inadmissible_frame(2, 3, rng)
w, v = np.linalg.eigh(bad.slack)
rep = verify_gaussian_sa(v[:, 0], bad)
print(f"inadmissible frame: deficit along slack eigenvector {rep.deficit:.4f} (= eigenvalue/2 = {w[0] / 2:.4f})")
