"""Exhaustive membership tests for exact, nondeterministic (NQ1) and dual
nondeterministic (NQ0) query algorithms.

With tolerance ``eps``: "probability 1" means ``p >= 1 - eps``; "positive
probability" means ``p > eps``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algorithm import QueryAlgorithm, run_all
from .functions import BooleanFunction, bitstring
from .quantum_core import StructuralError

DEFAULT_EPSILON = 1e-9


@dataclass(frozen=True)
class Counterexample:
    input: str
    p0: float
    p1: float
    value: int


@dataclass(frozen=True)
class ClassificationReport:
    num_vars: int
    per_input: dict  # bitstring -> (p0, p1), in table order
    function_values: dict  # bitstring -> f(X)
    is_exact: bool
    is_nq1: bool
    is_nq0: bool
    counterexamples: dict = field(default_factory=dict)  # "exact" | "nq1" | "nq0" -> Counterexample
    epsilon: float = DEFAULT_EPSILON

    def verdicts(self) -> dict:
        return {"exact": self.is_exact, "nq1": self.is_nq1, "nq0": self.is_nq0}

    def to_dict(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "epsilon": self.epsilon,
            "is_exact": self.is_exact,
            "is_nq1": self.is_nq1,
            "is_nq0": self.is_nq0,
            "counterexamples": {
                k: {"input": c.input, "p0": c.p0, "p1": c.p1, "f": c.value}
                for k, c in sorted(self.counterexamples.items())
            },
            "per_input": [
                {"input": x, "p0": p0, "p1": p1, "f": self.function_values[x]}
                for x, (p0, p1) in self.per_input.items()
            ],
        }

    def table(self) -> str:
        n = max(self.num_vars, len("input"))
        lines = [f"{'input':<{n}}  {'p0':>12}  {'p1':>12}  f(X)"]
        for x, (p0, p1) in self.per_input.items():
            lines.append(f"{x:<{n}}  {p0:>12.9f}  {p1:>12.9f}  {self.function_values[x]:>4}")
        return "\n".join(lines)


@dataclass(frozen=True)
class InputPartition:
    set_A: frozenset  # p1 = 1
    set_B: frozenset  # p0 = 1
    set_C: frozenset  # neither


def _check_epsilon(epsilon: float) -> None:
    if not 0 < epsilon < 0.5:
        raise StructuralError(f"epsilon must lie in (0, 0.5), got {epsilon}")


def outcome_table(algo: QueryAlgorithm) -> np.ndarray:
    """``(2**n, 2)`` array of ``(p0, p1)`` in table order."""
    probs, _ = run_all(algo)
    return probs


def class_masks(probs: np.ndarray, values: np.ndarray, epsilon: float) -> dict[str, np.ndarray]:
    """Per-input pass/fail for each class predicate."""
    p0, p1 = probs[:, 0], probs[:, 1]
    one = values.astype(bool)
    sure0, sure1 = p0 >= 1 - epsilon, p1 >= 1 - epsilon
    return {
        "exact": np.where(one, sure1, sure0),
        "nq1": np.where(one, p1 > epsilon, sure0),
        "nq0": np.where(one, sure1, p0 > epsilon),
    }


def classify(
    algo: QueryAlgorithm,
    f: BooleanFunction,
    epsilon: float = DEFAULT_EPSILON,
    probs: Optional[np.ndarray] = None,
) -> ClassificationReport:
    if algo.num_vars != f.num_vars:
        raise StructuralError(f"algorithm has {algo.num_vars} variables, function has {f.num_vars}")
    _check_epsilon(epsilon)
    if probs is None:
        probs = outcome_table(algo)
    n = f.num_vars
    masks = class_masks(probs, f.table, epsilon)
    names = [bitstring(i, n) for i in range(2**n)]
    counterexamples = {}
    for cls, ok in masks.items():
        bad = np.flatnonzero(~ok)
        if bad.size:
            i = int(bad[0])
            counterexamples[cls] = Counterexample(names[i], float(probs[i, 0]), float(probs[i, 1]), int(f.table[i]))
    return ClassificationReport(
        num_vars=n,
        per_input={x: (float(p[0]), float(p[1])) for x, p in zip(names, probs)},
        function_values={x: int(v) for x, v in zip(names, f.table)},
        is_exact=bool(masks["exact"].all()),
        is_nq1=bool(masks["nq1"].all()),
        is_nq0=bool(masks["nq0"].all()),
        counterexamples=counterexamples,
        epsilon=epsilon,
    )


def partition_inputs(algo: QueryAlgorithm, epsilon: float = DEFAULT_EPSILON) -> InputPartition:
    """Split all inputs into A (sure 1), B (sure 0) and C (everything else)."""
    _check_epsilon(epsilon)
    probs = outcome_table(algo)
    n = algo.num_vars
    A, B, C = set(), set(), set()
    for i, (p0, p1) in enumerate(probs):
        x = bitstring(i, n)
        if p1 >= 1 - epsilon:
            A.add(x)
        elif p0 >= 1 - epsilon:
            B.add(x)
        else:
            C.add(x)
    return InputPartition(frozenset(A), frozenset(B), frozenset(C))
