"""Clifford inequality on frames of subspaces, and what happens without the frame condition."""

import numpy as np

from ncbl import check_frame_condition, verify_clifford_bl, verify_cosh_inequality
from ncbl.clifford import build_generators, random_subalgebra_self_adjoint
from ncbl.frames import mercedes_frame, random_inadmissible_frame
from ncbl.search import clifford_witness

rng = np.random.default_rng(1)
alg = build_generators(2)
frame = mercedes_frame()
ok, min_eig, _ = check_frame_condition(frame)
print(f"three lines at 120 degrees, p = 3/2: admissible={ok}, slack min eigenvalue {min_eig:.1e}")

deficits = []
for _ in range(300):
    hams = [random_subalgebra_self_adjoint(alg, v, rng, 2.0) for v in frame.subspaces]
    deficits.append(verify_clifford_bl(alg, frame, hams).deficit)
print(f"B-L log-deficit over 300 draws: min {min(deficits):.3e}")

# for lines the inequality reduces to a scalar log-cosh inequality
b = rng.standard_normal((5, 3))
print("log-cosh deficits:", " ".join(f"{verify_cosh_inequality(row, frame).deficit:.4f}" for row in b))

bad = random_inadmissible_frame(2, 3, rng)
ok, min_eig, direction = check_frame_condition(bad)
t, a, d = clifford_witness(alg, bad)
print(f"inadmissible frame (slack min eigenvalue {min_eig:.3f}): rho = I + {t}*a.Q has deficit {d:.4e}")
