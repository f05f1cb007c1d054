import math

import pytest

from nqquery import algolib
from nqquery.algorithm import query_count, run, validate
from nqquery.classify import classify
from nqquery.functions import control_n, f3, g4, h7, or_n, parity_n, resolve_function


@pytest.mark.parametrize("name", algolib.builtin_names(9))
def test_builtins_valid_and_as_claimed(name):
    a = algolib.builtin_algorithm(name)
    assert validate(a) == []
    fref, cls = algolib.target_of(name)
    assert classify(a, resolve_function(fref)).verdicts()[cls]


def test_not_parity3():
    a = algolib.alg_not_parity3()
    assert a.dimension == 2 and query_count(a) == 2
    assert a.queries[0].assignment == (1, 2) and a.queries[1].assignment == (3, None)
    assert a.labeling.labels == (1, 0)
    assert run(a, [0, 0, 0]).p1 == pytest.approx(1, abs=1e-12)
    assert run(a, [1, 0, 0]).p0 == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n", range(1, 9))
def test_parity(n):
    a = algolib.alg_parity(n)
    assert query_count(a) == math.ceil(n / 2)
    assert classify(a, parity_n(n)).is_exact


def test_parity_odd_last_query_has_one_variable():
    assert algolib.alg_parity(5).queries[-1].assignment == (5, None)


@pytest.mark.parametrize("n", range(1, 9))
def test_or_nondet(n):
    a = algolib.alg_or_nondet(n)
    assert query_count(a) == 1 and a.dimension == n + 1
    assert a.queries[0].assignment == (None, *range(1, n + 1))
    assert classify(a, or_n(n)).is_nq1
    assert run(a, [0] * n).p0 == pytest.approx(1, abs=1e-12)


def test_or_probability_formula():
    # final amplitude on basis 0 is (n + 1 - 2|x|) / (n + 1)
    n = 6
    a = algolib.alg_or_nondet(n)
    for w in range(n + 1):
        x = [1] * w + [0] * (n - w)
        assert run(a, x).p0 == pytest.approx(((n + 1 - 2 * w) / (n + 1)) ** 2, abs=1e-12)


def test_f3_g4_exact():
    for a, f in ((algolib.alg_f3(), f3()), (algolib.alg_g4(), g4())):
        assert a.dimension == 4 and query_count(a) == 2
        assert classify(a, f).is_exact


def test_h7():
    a = algolib.alg_h7()
    assert query_count(a) == 2
    r = classify(a, h7())
    assert r.is_nq0 and not r.is_exact
    assert run(a, [1, 1, 0, 1, 0, 1, 1]).p0 > 0
    # F3(0,0,1) = 1, G4(1,0,0,1) = 1
    assert run(a, [0, 0, 1, 1, 0, 0, 1]).p1 == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
def test_control(n):
    a = algolib.alg_control(n)
    assert query_count(a) == 2
    assert classify(a, control_n(n)).is_nq0
    assert run(a, [0] * n).p1 == pytest.approx(1, abs=1e-12)


def test_control_triples():
    assert algolib.control_triples(7) == [(5, 1, 2), (6, 5, 3), (7, 6, 4)]
    with pytest.raises(Exception):
        algolib.control_triples(6)


def test_builtin_lookup():
    with pytest.raises(KeyError):
        algolib.builtin_algorithm("nope")
    assert algolib.target_of("or1q:3") == ("or:3", "nq1")
    assert algolib.builtin_names(3) == ["not_parity3", "f3", "g4", "parity:1", "parity:2", "parity:3",
                                        "or1q:1", "or1q:2", "or1q:3", "control:3"]
