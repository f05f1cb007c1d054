"""Control_n: n deterministic queries versus 2 dual nondeterministic ones.

Control_n is the conjunction of k-1 not-PARITY3 checks over overlapping
triples, so k-1 copies of the 2-query exact circuit run in parallel decide it.
Classically, every variable is sensitive at the all-zero input.
"""
import json
import tempfile
from pathlib import Path

from nqquery import alg_control, classify, control_n, decision_tree_complexity, query_count, sensitivity_at
from nqquery.algolib import control_triples
from nqquery.algorithm import read_algorithm, write_algorithm

print(f"{'n':>3} {'D(f)':>5} {'s(f,0)':>7} {'quantum NQ0':>12}")
for n in (3, 5, 7, 9, 11):
    f = control_n(n)
    a = alg_control(n)
    assert classify(a, f).is_nq0
    print(f"{n:>3} {decision_tree_complexity(f):>5} {sensitivity_at(f, (0,) * n):>7} {query_count(a):>12}")

print("triples for n = 9:", control_triples(9))

# Algorithms are plain JSON documents.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "control7.json"
    write_algorithm(alg_control(7), path)
    doc = json.loads(path.read_text())
    print("saved:", doc["dimension"], "amplitudes,", len(doc["layers"]), "layers")
    print("reloaded equal:", read_algorithm(path) == alg_control(7))
