import itertools
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nqquery.functions import (
    BooleanFunction,
    FunctionFormatError,
    and_n,
    builtin_function,
    complement,
    compose_semantic,
    control_n,
    decision_tree_complexity,
    dumps_table,
    evaluate,
    f3,
    g4,
    h7,
    loads_table,
    multi_and,
    not_parity3,
    or_n,
    parity_n,
    read_table,
    resolve_function,
    sensitivity,
    sensitivity_at,
    write_table,
)
from nqquery.quantum_core import StructuralError
from nqquery.algolib import control_triples


def xor(*bits):
    return reduce(lambda a, b: a ^ b, bits, 0)


# closed-form definitions, evaluated bit by bit
CLOSED_FORMS = {
    "or:4": (4, lambda x: int(any(x))),
    "and:3": (3, lambda x: int(all(x))),
    "parity:5": (5, lambda x: xor(*x)),
    "not_parity3": (3, lambda x: 1 - xor(*x)),
    "f3": (3, lambda x: (1 - (x[0] ^ x[1])) & (x[0] ^ x[2])),
    "g4": (4, lambda x: (x[0] ^ x[1]) & (x[2] ^ x[3])),
    "h7": (7, lambda x: (1 - (x[0] ^ x[1])) & (x[0] ^ x[2]) & (x[3] ^ x[4]) & (x[5] ^ x[6])),
}


def control_direct(x):
    k = (len(x) + 1) // 2
    return int(all(x[k + j - 1] == xor(*x[: j + 1]) for j in range(1, k)))


@pytest.mark.parametrize("name", sorted(CLOSED_FORMS))
def test_builders_match_closed_forms(name):
    n, fn = CLOSED_FORMS[name]
    f = builtin_function(name)
    for x in itertools.product((0, 1), repeat=n):
        assert evaluate(f, x) == fn(x)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_control_matches_equation_system(n):
    f = control_n(n)
    for x in itertools.product((0, 1), repeat=n):
        assert f(x) == control_direct(x)


def test_evaluate_examples():
    assert evaluate(or_n(3), "000") == 0
    assert evaluate(g4(), "1010") == 1
    assert evaluate(control_n(3), "110") == 1
    assert evaluate(h7(), "1101011") == 0


def test_evaluate_arity_mismatch():
    with pytest.raises(StructuralError):
        evaluate(or_n(3), "01")


def test_control_all_zero_accepted():
    for n in (3, 5, 7, 9, 11):
        assert control_n(n)((0,) * n) == 1


@pytest.mark.parametrize("n", [0, 2, 4, 1])
def test_control_rejects_bad_arity(n):
    with pytest.raises(StructuralError):
        control_n(n)


def test_complement_involution():
    for f in (f3(), g4(), control_n(5)):
        assert complement(complement(f)) == f
        assert complement(f) != f


def test_table_length_checked():
    with pytest.raises(StructuralError):
        BooleanFunction(3, [0] * 7)


def test_compose_semantic_multi_and_disjoint():
    g = compose_semantic("AND", [(not_parity3(), [1, 2, 3]), (not_parity3(), [4, 5, 6])], 6)
    for x in itertools.product((0, 1), repeat=6):
        assert g(x) == (1 - xor(*x[:3])) & (1 - xor(*x[3:]))
    assert g == multi_and(not_parity3(), 2)


@pytest.mark.parametrize("n", [3, 5, 7, 9])
def test_not_parity_over_triples_is_control(n):
    g = compose_semantic("AND", [(not_parity3(), t) for t in control_triples(n)], n)
    assert np.array_equal(g.table, control_n(n).table)


def test_or_over_one_part_is_identity():
    assert compose_semantic("OR", [(g4(), [1, 2, 3, 4])], 4) == g4()


def test_compose_semantic_bad_map():
    with pytest.raises(StructuralError):
        compose_semantic("AND", [(f3(), [1, 2, 9])], 3)
    with pytest.raises(StructuralError):
        compose_semantic("XOR", [(f3(), [1, 2, 3])], 3)


@settings(max_examples=40, deadline=None)
@given(data=st.data(), N=st.integers(1, 6), mode=st.sampled_from(["AND", "OR"]))
def test_compose_semantic_against_direct_evaluation(data, N, mode):
    parts = []
    for _ in range(data.draw(st.integers(1, 3))):
        n = data.draw(st.integers(1, 3))
        table = data.draw(st.lists(st.integers(0, 1), min_size=2**n, max_size=2**n))
        mp = data.draw(st.lists(st.integers(1, N), min_size=n, max_size=n))
        parts.append((BooleanFunction(n, table), mp))
    g = compose_semantic(mode, parts, N)
    combine = all if mode == "AND" else any
    for x in itertools.product((0, 1), repeat=N):
        want = combine(f(tuple(x[k - 1] for k in mp)) for f, mp in parts)
        assert g(x) == int(want)


# sensitivity


def brute_sensitivity_at(f, x):
    return sum(f(x) != f(x[:i] + (1 - x[i],) + x[i + 1:]) for i in range(len(x)))


def test_sensitivity_values():
    assert sensitivity(f3()) == 3
    assert sensitivity(g4()) == 4
    assert sensitivity(h7()) == 7
    for n in range(1, 7):
        assert sensitivity_at(or_n(n), (0,) * n) == n
    for n in (3, 5, 7, 9):
        assert sensitivity_at(control_n(n), (0,) * n) == n


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 5), data=st.data())
def test_sensitivity_matches_brute_force(n, data):
    f = BooleanFunction(n, data.draw(st.lists(st.integers(0, 1), min_size=2**n, max_size=2**n)))
    per = [brute_sensitivity_at(f, x) for x in itertools.product((0, 1), repeat=n)]
    assert sensitivity(f) == max(per)
    x = tuple(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)))
    assert sensitivity_at(f, x) == brute_sensitivity_at(f, x)


# decision-tree complexity


def depth_oracle(n):
    """D for every n-variable function, by growing the set of tables computable
    with depth-d trees from the constants upward (ite on a variable)."""
    N = 2**n
    masks = []
    for i in range(n):
        m = 0
        for idx in range(N):
            if (idx >> (n - 1 - i)) & 1:
                m |= 1 << idx
        masks.append(m)
    full = (1 << N) - 1
    depth = {0: 0, full: 0}
    d = 0
    while len(depth) < 2**N:
        d += 1
        known = list(depth)
        new = set()
        for m in masks:
            for hi in known:
                for lo in known:
                    t = (hi & m) | (lo & ~m & full)
                    if t not in depth:
                        new.add(t)
        for t in new:
            depth[t] = d
    return depth


def table_int(f):
    return sum(int(b) << i for i, b in enumerate(f.table))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_decision_tree_matches_forward_oracle_on_every_function(n):
    oracle = depth_oracle(n)
    for t, d in oracle.items():
        f = BooleanFunction(n, [(t >> i) & 1 for i in range(2**n)])
        assert decision_tree_complexity(f) == d


def test_decision_tree_known_values():
    for n in range(1, 6):
        assert decision_tree_complexity(parity_n(n)) == n
    assert decision_tree_complexity(h7()) == 7
    for n in (3, 5, 7, 9):
        assert decision_tree_complexity(control_n(n)) == n
    assert decision_tree_complexity(and_n(4)) == 4
    assert decision_tree_complexity(BooleanFunction(3, [1] * 8)) == 0
    # depends on x1 only
    assert decision_tree_complexity(BooleanFunction(3, [0, 0, 0, 0, 1, 1, 1, 1])) == 1


def test_decision_tree_guard():
    with pytest.raises(StructuralError, match="refuses"):
        decision_tree_complexity(or_n(14))


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 8), data=st.data())
def test_d_at_least_s_and_complement_invariance(n, data):
    f = BooleanFunction(n, data.draw(st.lists(st.integers(0, 1), min_size=2**n, max_size=2**n)))
    d = decision_tree_complexity(f)
    assert d >= sensitivity(f)
    assert d == decision_tree_complexity(complement(f))
    assert sensitivity(f) == sensitivity(complement(f))


# files and names


def test_table_file_roundtrip(tmp_path):
    write_table(h7(), tmp_path / "h7.txt")
    assert read_table(tmp_path / "h7.txt") == h7()
    assert resolve_function(str(tmp_path / "h7.txt")) == h7()
    assert dumps_table(f3()).splitlines() == ["3", "01000010"]


@pytest.mark.parametrize("text", ["3\n0101", "x\n01", "1\n012", "2\n0110\n1"])
def test_bad_table_files(text):
    with pytest.raises(FunctionFormatError):
        loads_table(text)


def test_builtin_names():
    assert builtin_function("or:5") == or_n(5)
    assert builtin_function("control:7") == control_n(7)
    with pytest.raises(KeyError):
        builtin_function("nand:3")
    with pytest.raises(FunctionFormatError):
        resolve_function("no_such_thing")
