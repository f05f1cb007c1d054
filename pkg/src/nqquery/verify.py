"""Exhaustive re-check of every published claim, one row per claim."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Mapping, Optional

import numpy as np

from . import algolib
from .algorithm import QueryAlgorithm, load_algorithm, query_count, run_all, save_algorithm
from .classify import DEFAULT_EPSILON, classify
from .compose import BlockSpec, block_slices, compose_parallel, relabel_outputs
from .functions import (
    BooleanFunction,
    bitstring,
    complement,
    compose_semantic,
    control_n,
    decision_tree_complexity,
    f3,
    g4,
    h7,
    lift,
    multi_and,
    multi_or,
    not_parity3,
    or_n,
    parity_n,
    resolve_function,
    sensitivity,
    sensitivity_at,
)
from .quantum_core import NORM_TOL, apply_query

RANDOM_SEED = 20240601


@dataclass(frozen=True)
class Check:
    criterion: int
    claim: str
    expected: str
    computed: str
    passed: bool
    counterexample: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GapRow:
    n: int
    decision_tree: int
    sensitivity_at_zero: int
    nq0_queries: int
    nq0_verified: bool


class _Registry:
    def __init__(self, overrides: Optional[Mapping[str, Callable[[], QueryAlgorithm]]] = None):
        self.overrides = dict(overrides or {})

    def __call__(self, name: str) -> QueryAlgorithm:
        if name in self.overrides:
            return self.overrides[name]()
        return algolib.builtin_algorithm(name)


def _witness(report, cls: str) -> Optional[str]:
    c = report.counterexamples.get(cls)
    if c is None:
        return None
    return f"input {c.input}: p0={c.p0:.6g} p1={c.p1:.6g} f={c.value}"


def _fmt_bool(b: bool) -> str:
    return "yes" if b else "no"


def check_not_parity3(get, eps) -> list[Check]:
    a = get("not_parity3")
    r = classify(a, not_parity3(), eps)
    q = query_count(a)
    worst = min(p[v] for p, v in zip(r.per_input.values(), r.function_values.values()))
    return [
        Check(1, "not-PARITY3 is computed exactly", "exact", "exact" if r.is_exact else "not exact",
              r.is_exact, _witness(r, "exact")),
        Check(1, "not-PARITY3 uses 2 queries", "2", str(q), q == 2),
        Check(1, "not-PARITY3 worst-case correct probability", f">= {1 - eps}", f"{worst:.12f}", worst >= 1 - eps),
    ]


def check_parity(get, eps, max_n) -> list[Check]:
    rows = []
    for n in range(1, min(8, max_n) + 1):
        a = get(f"parity:{n}")
        r = classify(a, parity_n(n), eps)
        q = query_count(a)
        ok = r.is_exact and q == math.ceil(n / 2)
        rows.append(Check(2, f"PARITY_{n} exact with ceil(n/2) queries", f"exact, {math.ceil(n / 2)}",
                          f"{'exact' if r.is_exact else 'not exact'}, {q}", ok, _witness(r, "exact")))
    return rows


def check_or(get, eps, max_n) -> list[Check]:
    rows = []
    for n in range(1, min(8, max_n) + 1):
        a = get(f"or1q:{n}")
        r = classify(a, or_n(n), eps)
        q = query_count(a)
        p0_zero = r.per_input["0" * n][0]
        ok = r.is_nq1 and q == 1 and p0_zero >= 1 - eps
        rows.append(Check(3, f"OR_{n} nondeterministic with 1 query", "NQ1, 1, p0(0..0)=1",
                          f"{'NQ1' if r.is_nq1 else 'not NQ1'}, {q}, p0(0..0)={p0_zero:.12f}", ok,
                          _witness(r, "nq1")))
    return rows


def check_duality(get, eps, max_n) -> list[Check]:
    rows = []
    for name in algolib.builtin_names(max_n):
        a = get(name)
        fref, _ = algolib.target_of(name)
        f = resolve_function(fref)
        probs, _ = run_all(a)
        nq0 = classify(a, f, eps, probs=probs).is_nq0
        r_dual = classify(relabel_outputs(a), complement(f), eps)
        rows.append(Check(4, f"{name}: NQ0(A, f) == NQ1(relabel(A), not f)", _fmt_bool(nq0),
                          _fmt_bool(r_dual.is_nq1), nq0 == r_dual.is_nq1))
    return rows


def _block_mass(algo: QueryAlgorithm, blocks, values: np.ndarray) -> tuple[bool, Optional[str]]:
    """Every block carries mass 1/m, all on the label of its block value."""
    _, states = run_all(algo)
    m = len(blocks)
    labels = np.array(algo.labeling.labels)
    for sl, vals in zip(block_slices(blocks), values):
        mass = np.abs(states[:, sl]) ** 2
        lab = labels[sl]
        on1 = mass[:, lab == 1].sum(axis=1)
        on0 = mass[:, lab == 0].sum(axis=1)
        want1 = np.where(vals == 1, 1 / m, 0.0)
        want0 = np.where(vals == 0, 1 / m, 0.0)
        err = np.maximum(np.abs(on1 - want1), np.abs(on0 - want0))
        if err.max() > 1e-9:
            i = int(np.argmax(err))
            return False, f"input {bitstring(i, algo.num_vars)}: block mass ({on0[i]:.6g}, {on1[i]:.6g})"
    return True, None


def check_multi(get, eps, max_n) -> list[Check]:
    rows = []
    base_f = not_parity3()
    for m in (1, 2, 3):
        N = 3 * m
        if N > max_n:
            continue
        maps = [list(range(3 * i + 1, 3 * i + 4)) for i in range(m)]
        blocks = [BlockSpec(get("not_parity3"), mp) for mp in maps]
        algo = compose_parallel(blocks, N)
        probs, _ = run_all(algo)
        vals = np.array([lift(base_f, mp, N).table for mp in maps])
        zeros = (vals == 0).sum(axis=0) / m
        ones = (vals == 1).sum(axis=0) / m
        err = np.maximum(np.abs(probs[:, 0] - zeros), np.abs(probs[:, 1] - ones))
        i = int(np.argmax(err))
        rows.append(Check(5, f"m={m}: p0 = #zero-blocks/m, p1 = #one-blocks/m", "max err <= 1e-9",
                          f"max err {err.max():.3g}", bool(err.max() <= 1e-9),
                          None if err.max() <= 1e-9 else f"input {bitstring(i, N)}"))
        ok_mass, why = _block_mass(algo, blocks, vals)
        rows.append(Check(5, f"m={m}: each block holds 0 or 1/m on each label", "yes", _fmt_bool(ok_mass),
                          ok_mass, why))
        r_and = classify(algo, multi_and(base_f, m), eps, probs=probs)
        r_or = classify(algo, multi_or(base_f, m), eps, probs=probs)
        q = query_count(algo)
        rows.append(Check(5, f"m={m}: NQ0 for MULTI_AND_m(not-PARITY3)", "NQ0", "NQ0" if r_and.is_nq0 else "not NQ0",
                          r_and.is_nq0, _witness(r_and, "nq0")))
        rows.append(Check(5, f"m={m}: NQ1 for MULTI_OR_m(not-PARITY3)", "NQ1", "NQ1" if r_or.is_nq1 else "not NQ1",
                          r_or.is_nq1, _witness(r_or, "nq1")))
        rows.append(Check(5, f"m={m}: composed query count equals base", "2", str(q), q == 2))
    return rows


def check_h7(get, eps, max_n) -> list[Check]:
    if max_n < 7:
        return []
    a = get("h7")
    probs, _ = run_all(a)
    r = classify(a, h7(), eps, probs=probs)
    disj = compose_semantic("OR", [(f3(), [1, 2, 3]), (g4(), [4, 5, 6, 7])], 7)
    r_or = classify(a, disj, eps, probs=probs)
    q = query_count(a)
    return [
        Check(6, "H7 dual nondeterministic", "NQ0", "NQ0" if r.is_nq0 else "not NQ0", r.is_nq0, _witness(r, "nq0")),
        Check(6, "H7 uses max(Q_E(F3), Q_E(G4)) = 2 queries", "2", str(q), q == 2),
        Check(6, "same circuit is NQ1 for F3 or G4", "NQ1", "NQ1" if r_or.is_nq1 else "not NQ1", r_or.is_nq1,
              _witness(r_or, "nq1")),
    ]


def gap_table(get, eps, max_n) -> list[GapRow]:
    rows = []
    for n in (3, 5, 7, 9):
        if n > max_n:
            continue
        f = control_n(n)
        a = get(f"control:{n}")
        rows.append(GapRow(
            n=n,
            decision_tree=decision_tree_complexity(f),
            sensitivity_at_zero=sensitivity_at(f, (0,) * n),
            nq0_queries=query_count(a),
            nq0_verified=classify(a, f, eps).is_nq0,
        ))
    return rows


def check_gap(rows: list[GapRow]) -> list[Check]:
    out = []
    for g in rows:
        out.append(Check(7, f"D(Control_{g.n}) = n", str(g.n), str(g.decision_tree), g.decision_tree == g.n))
        out.append(Check(7, f"Control_{g.n} NQ0 with 2 queries", "NQ0, 2",
                         f"{'NQ0' if g.nq0_verified else 'not NQ0'}, {g.nq0_queries}",
                         g.nq0_verified and g.nq0_queries == 2))
        out.append(Check(7, f"s(Control_{g.n}, 0..0) = n", str(g.n), str(g.sensitivity_at_zero),
                         g.sensitivity_at_zero == g.n))
    return out


def random_functions(count: int, n: int, seed: int = RANDOM_SEED) -> list[BooleanFunction]:
    rng = np.random.default_rng(seed)
    return [BooleanFunction(n, rng.integers(0, 2, size=2**n)) for _ in range(count)]


def check_classical(max_n) -> list[Check]:
    rows = [
        Check(8, "s(F3) = 3", "3", str(sensitivity(f3())), sensitivity(f3()) == 3),
        Check(8, "s(G4) = 4", "4", str(sensitivity(g4())), sensitivity(g4()) == 4),
    ]
    named = {"not_parity3": not_parity3(), "f3": f3(), "g4": g4()}
    if max_n >= 7:
        d = decision_tree_complexity(h7())
        rows.append(Check(8, "D(H7) = 7", "7", str(d), d == 7))
        named["h7"] = h7()
    for name in algolib.builtin_names(max_n):
        fref, _ = algolib.target_of(name)
        named.setdefault(fref, resolve_function(fref))
    bad = [k for k, f in named.items() if decision_tree_complexity(f) < sensitivity(f)]
    rows.append(Check(8, f"D(f) >= s(f) on {len(named)} built-in functions", "all", f"{len(named) - len(bad)} hold",
                      not bad, ", ".join(bad) or None))
    if max_n >= 6:
        rand = random_functions(100, 6)
        bad_r = [i for i, f in enumerate(rand) if decision_tree_complexity(f) < sensitivity(f)]
        rows.append(Check(8, "D(f) >= s(f) on 100 random 6-variable functions", "100", str(100 - len(bad_r)),
                          not bad_r, None if not bad_r else f"functions {bad_r}"))
    return rows


def check_semantic(max_n) -> list[Check]:
    rows = []
    for n in (3, 5, 7, 9):
        if n > max_n:
            continue
        triples = algolib.control_triples(n)
        sem = compose_semantic("AND", [(not_parity3(), t) for t in triples], n)
        ref = control_n(n)
        diff = np.flatnonzero(sem.table != ref.table)
        rows.append(Check(9, f"AND of not-PARITY3 over triples == Control_{n}", "equal",
                          "equal" if diff.size == 0 else f"{diff.size} entries differ", diff.size == 0,
                          None if diff.size == 0 else f"input {bitstring(int(diff[0]), n)}"))
    return rows


def check_infrastructure(get, max_n) -> list[Check]:
    rows = []
    names = algolib.builtin_names(max_n)
    worst_rt, worst_norm = 0.0, 0.0
    rt_bad, relabel_bad, query_bad, norm_bad = [], [], [], []
    for name in names:
        a = get(name)
        probs, states = run_all(a)
        b = load_algorithm(save_algorithm(a))
        probs_b, _ = run_all(b)
        err = float(np.abs(probs - probs_b).max())
        worst_rt = max(worst_rt, err)
        if err > 1e-12 or b != a:
            rt_bad.append(name)
        if relabel_outputs(relabel_outputs(a)) != a:
            relabel_bad.append(name)
        norms = np.abs((np.abs(states) ** 2).sum(axis=1) - 1.0)
        worst_norm = max(worst_norm, float(norms.max()))
        if norms.max() > NORM_TOL:
            norm_bad.append(name)
        rng = np.random.default_rng(len(name))
        for layer in a.queries:
            s = rng.normal(size=a.dimension) + 1j * rng.normal(size=a.dimension)
            x = rng.integers(0, 2, size=a.num_vars)
            if not np.array_equal(apply_query(apply_query(s, layer, x), layer, x), s):
                query_bad.append(name)
                break
    rows.append(Check(10, "save/load roundtrip preserves distributions", "<= 1e-12", f"{worst_rt:.3g}",
                      not rt_bad, ", ".join(rt_bad) or None))
    rows.append(Check(10, "relabel is an involution", "all", f"{len(names) - len(relabel_bad)}/{len(names)}",
                      not relabel_bad, ", ".join(relabel_bad) or None))
    rows.append(Check(10, "query layers are involutions", "all", f"{len(names) - len(query_bad)}/{len(names)}",
                      not query_bad, ", ".join(query_bad) or None))
    rows.append(Check(10, "final states have unit norm on all inputs", "<= 1e-9", f"{worst_norm:.3g}",
                      not norm_bad, ", ".join(norm_bad) or None))
    return rows


def run_verification(
    max_n: int = 9,
    epsilon: float = DEFAULT_EPSILON,
    overrides: Optional[Mapping[str, Callable[[], QueryAlgorithm]]] = None,
) -> tuple[list[Check], list[GapRow]]:
    """Evaluate every claim whose instances have at most ``max_n`` variables.

    ``overrides`` replaces named built-ins, e.g. to confirm that a broken
    circuit is reported.
    """
    get = _Registry(overrides)
    gaps = gap_table(get, epsilon, max_n)
    checks = (
        check_not_parity3(get, epsilon)
        + check_parity(get, epsilon, max_n)
        + check_or(get, epsilon, max_n)
        + check_duality(get, epsilon, max_n)
        + check_multi(get, epsilon, max_n)
        + check_h7(get, epsilon, max_n)
        + check_gap(gaps)
        + check_classical(max_n)
        + check_semantic(max_n)
        + check_infrastructure(get, max_n)
    )
    return checks, gaps


def format_checks(checks: list[Check], gaps: list[GapRow]) -> str:
    w = max((len(c.claim) for c in checks), default=10)
    lines = [f"{'#':>2}  {'claim':<{w}}  {'expected':<22}  {'computed':<30}  result"]
    for c in checks:
        line = f"{c.criterion:>2}  {c.claim:<{w}}  {c.expected:<22}  {c.computed:<30}  {'PASS' if c.passed else 'FAIL'}"
        if c.counterexample and not c.passed:
            line += f"  [{c.counterexample}]"
        lines.append(line)
    if gaps:
        lines.append("")
        lines.append("gap table: deterministic vs dual nondeterministic quantum queries")
        lines.append(f"{'n':>3}  {'D(f)':>5}  {'s(f,0)':>6}  {'NQ0 queries':>11}")
        for g in gaps:
            lines.append(f"{g.n:>3}  {g.decision_tree:>5}  {g.sensitivity_at_zero:>6}  {g.nq0_queries:>11}")
    passed = sum(c.passed for c in checks)
    lines.append("")
    lines.append(f"{passed}/{len(checks)} checks passed")
    return "\n".join(lines)
