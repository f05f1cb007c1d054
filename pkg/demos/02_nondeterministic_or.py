"""One query suffices for OR in the nondeterministic sense.

Spread over n+1 amplitudes, flip the signs of the amplitudes whose variable
is 1, and undo the spread. Only the all-zero input returns to basis 0 with
certainty, so "output 1 with positive probability" happens exactly when OR = 1.
"""
from nqquery import alg_or_nondet, classify, complement, or_n, relabel_outputs, run

n = 6
algo = alg_or_nondet(n)
for w in range(n + 1):
    x = [1] * w + [0] * (n - w)
    print(f"|x| = {w}:  p1 = {run(algo, x).p1:.4f}")

report = classify(algo, or_n(n))
print("exact:", report.is_exact, " NQ1:", report.is_nq1, " NQ0:", report.is_nq0)
print("NQ0 fails at", report.counterexamples["nq0"])

# Swapping output labels turns it into a dual nondeterministic algorithm
# for the complement (NOR).
dual = classify(relabel_outputs(algo), complement(or_n(n)))
print("relabelled, against NOR -> NQ0:", dual.is_nq0)
