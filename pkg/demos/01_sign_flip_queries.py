"""Building and running a query algorithm by hand.

A two-amplitude register, two sign-flip queries, and a labeling that names
which basis state means "output 1". This is the exact 2-query algorithm for
not(x1 xor x2 xor x3).
"""
import numpy as np

from nqquery import HADAMARD, QueryAlgorithm, QueryLayer, UnitaryLayer, run, validate
from nqquery.algorithm import all_inputs

H = HADAMARD.matrix

# H, query (x1, x2), H*H, query (x3, -), H
algo = QueryAlgorithm(
    num_vars=3,
    dimension=2,
    layers=[HADAMARD, QueryLayer([1, 2]), UnitaryLayer(H @ H), QueryLayer([3, None]), HADAMARD],
    labeling=[1, 0],
)
print("violations:", validate(algo))

for x in all_inputs(3):
    d = run(algo, x)
    amps = np.round(d.final_state.real, 6) + 0.0
    print("".join(map(str, x)), "final", amps, f"p1 = {d.p1:.3f}")

# A broken layer list is reported rather than silently run.
bad = QueryAlgorithm(3, 2, [QueryLayer([1, 2]), HADAMARD], [1, 0])
for problem in validate(bad):
    print("  ", problem)
