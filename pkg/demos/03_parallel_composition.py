"""Parallel composition of exact algorithms.

Each block receives 1/sqrt(m) of the initial amplitude and runs untouched, so
a block that computes 0 contributes exactly 1/m to p0 and a block that
computes 1 contributes exactly 1/m to p1. The same circuit is then dual
nondeterministic for the AND of the blocks and nondeterministic for their OR.
"""
import numpy as np

from nqquery import BlockSpec, alg_h7, alg_not_parity3, classify, compose_parallel, h7, not_parity3, query_count
from nqquery.algorithm import run_all
from nqquery.functions import bitstring, multi_and, multi_or

m = 3
base = alg_not_parity3()
blocks = [BlockSpec(base, [3 * i + 1, 3 * i + 2, 3 * i + 3]) for i in range(m)]
algo = compose_parallel(blocks, total_vars=3 * m)
print(f"dimension {algo.dimension}, queries {query_count(algo)}")

probs, _ = run_all(algo)
levels = sorted({round(float(p), 9) for p in probs[:, 1]})
print("distinct p1 values:", levels)
for i in (0, 0b100000000, 0b100100000, 0b100100100):
    print(bitstring(i, 9), "p1 =", np.round(probs[i, 1], 6))

print("NQ0 for MULTI_AND:", classify(algo, multi_and(not_parity3(), m)).is_nq0)
print("NQ1 for MULTI_OR: ", classify(algo, multi_or(not_parity3(), m)).is_nq1)

# Heterogeneous blocks: F3 on x1..x3 beside G4 on x4..x7.
h = alg_h7()
r = classify(h, h7())
print(f"H7: {query_count(h)} queries, NQ0 = {r.is_nq0}, exact = {r.is_exact}")
