import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nqquery import algolib
from nqquery.algorithm import QueryAlgorithm, all_inputs, run
from nqquery.classify import classify, partition_inputs
from nqquery.compose import relabel_outputs
from nqquery.functions import BooleanFunction, complement, control_n, not_parity3, or_n, parity_n, resolve_function
from nqquery.quantum_core import QueryLayer, StructuralError, UnitaryLayer

from conftest import random_unitary


def test_not_parity3_exact():
    r = classify(algolib.alg_not_parity3(), not_parity3())
    assert r.is_exact and r.is_nq0 and r.is_nq1
    assert r.counterexamples == {}
    assert len(r.per_input) == 8


def test_control7_nq0_not_exact():
    r = classify(algolib.alg_control(7), control_n(7))
    assert r.is_nq0 and not r.is_exact
    c = r.counterexamples["exact"]
    assert c.value == 0 and 0 < c.p1 < 1


def test_or4_nq1_not_nq0():
    r = classify(algolib.alg_or_nondet(4), or_n(4))
    assert r.is_nq1 and not r.is_nq0
    assert r.per_input["1111"][1] < 1


def test_counterexample_is_smallest_witness():
    r = classify(algolib.alg_not_parity3(), parity_n(3))
    assert not r.is_exact
    assert r.counterexamples["exact"].input == "000"
    assert set(r.counterexamples) == {"exact", "nq1", "nq0"}


def test_arity_and_epsilon_checked():
    with pytest.raises(StructuralError):
        classify(algolib.alg_not_parity3(), or_n(4))
    for eps in (0, 0.5, -1):
        with pytest.raises(StructuralError):
            classify(algolib.alg_not_parity3(), not_parity3(), eps)


def test_or_single_one_probability():
    # <u|psi> = (n+1-2)/(n+1) = 1/2 at n = 3, so p1 = 3/4
    r = classify(algolib.alg_or_nondet(3), or_n(3))
    for x in ("001", "010", "100"):
        assert r.per_input[x][1] == pytest.approx(0.75, abs=1e-12)


def test_partition_exact():
    p = partition_inputs(algolib.alg_g4())
    f = resolve_function("g4")
    assert p.set_A == {x for x, v in zip(_names(4), f.table) if v == 1}
    assert p.set_B == {x for x, v in zip(_names(4), f.table) if v == 0}
    assert p.set_C == set()


def test_partition_control7():
    p = partition_inputs(algolib.alg_control(7))
    f = control_n(7)
    assert p.set_A == {x for x, v in zip(_names(7), f.table) if v == 1}
    assert p.set_C
    assert p.set_A | p.set_B | p.set_C == set(_names(7))


def test_partition_identity():
    a = QueryAlgorithm(2, 1, [UnitaryLayer.identity(1)], [0])
    assert partition_inputs(a).set_B == set(_names(2))


def _names(n):
    return ["".join(map(str, x)) for x in all_inputs(n)]


def test_report_formats():
    r = classify(algolib.alg_or_nondet(2), or_n(2))
    d = r.to_dict()
    assert [row["input"] for row in d["per_input"]] == ["00", "01", "10", "11"]
    assert d["counterexamples"]["nq0"]["input"] == "01"
    lines = r.table().splitlines()
    assert lines[0].split() == ["input", "p0", "p1", "f(X)"]
    assert len(lines) == 5


def test_exact_implies_nondeterministic_both_ways():
    for name in algolib.builtin_names(9):
        a = algolib.builtin_algorithm(name)
        fref, _ = algolib.target_of(name)
        r = classify(a, resolve_function(fref))
        if r.is_exact:
            assert r.is_nq0 and r.is_nq1


def _random_algorithm(rng, n, d, T):
    layers = [UnitaryLayer(random_unitary(d, rng))]
    for _ in range(T):
        layers.append(QueryLayer([None if rng.random() < 0.2 else int(rng.integers(1, n + 1)) for _ in range(d)]))
        layers.append(UnitaryLayer(random_unitary(d, rng)))
    return QueryAlgorithm(n, d, layers, rng.integers(0, 2, size=d).tolist())


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4), d=st.integers(1, 4), T=st.integers(0, 2))
def test_duality_on_random_algorithms(seed, n, d, T):
    rng = np.random.default_rng(seed)
    a = _random_algorithm(rng, n, d, T)
    # target derived from the algorithm so that some instances land in a class
    probs = np.array([[run(a, x).p0, run(a, x).p1] for x in all_inputs(n)])
    mode = int(rng.integers(0, 3))
    if mode == 0:
        f = BooleanFunction(n, probs[:, 1] >= 1 - 1e-9)
    elif mode == 1:
        f = BooleanFunction(n, probs[:, 1] > 1e-9)
    else:
        f = BooleanFunction(n, rng.integers(0, 2, size=2**n))
    r = classify(a, f)
    r_dual = classify(relabel_outputs(a), complement(f))
    assert r.is_nq0 == r_dual.is_nq1
    assert r.is_nq1 == r_dual.is_nq0
    assert r.is_exact == r_dual.is_exact


@pytest.mark.parametrize("name", algolib.builtin_names(9))
def test_duality_on_builtins(name):
    a = algolib.builtin_algorithm(name)
    f = resolve_function(algolib.target_of(name)[0])
    assert classify(a, f).is_nq0 == classify(relabel_outputs(a), complement(f)).is_nq1


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), e1=st.floats(1e-12, 0.49), e2=st.floats(1e-12, 0.49))
def test_exactness_monotone_in_epsilon(seed, e1, e2):
    lo, hi = sorted((e1, e2))
    rng = np.random.default_rng(seed)
    a = _random_algorithm(rng, 2, 3, 1)
    f = BooleanFunction(2, rng.integers(0, 2, size=4))
    if classify(a, f, lo).is_exact:
        assert classify(a, f, hi).is_exact


@pytest.mark.parametrize("name", algolib.builtin_names(9))
def test_verdicts_stable_over_practical_epsilons(name):
    a = algolib.builtin_algorithm(name)
    f = resolve_function(algolib.target_of(name)[0])
    base = classify(a, f, 1e-12).verdicts()
    for eps in (1e-10, 1e-9, 1e-6, 1e-3):
        got = classify(a, f, eps).verdicts()
        assert all(got[k] for k, v in base.items() if v)


def test_positive_probability_threshold_can_reject_at_large_epsilon():
    # weight-1 inputs of OR_8 reach output 1 with probability 1 - (7/9)^2 ~ 0.395
    a, f = algolib.alg_or_nondet(8), or_n(8)
    assert classify(a, f, 1e-9).is_nq1
    assert not classify(a, f, 0.45).is_nq1
