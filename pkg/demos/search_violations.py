"""Derivative-free violation search on admissible and inadmissible settings."""

import numpy as np

from ncbl.clifford import build_generators
from ncbl.frames import random_admissible_frame, random_inadmissible_frame
from ncbl.search import SearchConfig, clifford_objective, gaussian_objective, maximize_deficit_violation, slack_witness_starts

rng = np.random.default_rng(5)
for label, frame in (("admissible", random_admissible_frame(2, 3, rng)), ("inadmissible", random_inadmissible_frame(2, 3, rng))):
    for obj in (gaussian_objective(frame), clifford_objective(build_generators(2), frame)):
        res = maximize_deficit_violation(SearchConfig(obj, budget=400, starts=slack_witness_starts(frame)))
        print(f"{label:12s} {obj.name:8s} best deficit {res.best_deficit:+.3e}  violation={res.violation}  evals={res.evaluations}")
