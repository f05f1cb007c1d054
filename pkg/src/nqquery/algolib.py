"""Concrete query algorithms for the named functions."""
from __future__ import annotations

import numpy as np

from .algorithm import QueryAlgorithm
from .compose import BlockSpec, compose_parallel, splitter
from .quantum_core import HADAMARD, MeasurementLabeling, QueryLayer, StructuralError, UnitaryLayer

_S = 1 / np.sqrt(2)
_H = HADAMARD.matrix


def alg_not_parity3() -> QueryAlgorithm:
    """Exact, 2 queries, dimension 2.

    After ``H, Q(x1, x2), H`` the state is basis 0 iff ``x1 = x2``; a second
    ``H, Q(x3, -), H`` folds x3 in the same way. The two Hadamards between the
    queries form a single unitary layer.
    """
    layers = (
        HADAMARD,
        QueryLayer([1, 2]),
        UnitaryLayer(_H @ _H),
        QueryLayer([3, None]),
        HADAMARD,
    )
    return QueryAlgorithm(3, 2, layers, MeasurementLabeling([1, 0]))


def alg_parity(n: int) -> QueryAlgorithm:
    """Exact XOR of n bits with ceil(n/2) queries on a single 2-dim register.

    Each query reads two fresh variables as a relative phase between the two
    amplitudes; the final Hadamard turns that phase into the answer.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise StructuralError(f"alg_parity needs n >= 1, got {n!r}")
    layers: list = [HADAMARD]
    for q in range((n + 1) // 2):
        a = 2 * q + 1
        b = a + 1 if a + 1 <= n else None
        layers.append(QueryLayer([a, b]))
        last = q == (n + 1) // 2 - 1
        layers.append(HADAMARD if last else UnitaryLayer.identity(2))
    return QueryAlgorithm(n, 2, tuple(layers), MeasurementLabeling([0, 1]))


def alg_or_nondet(n: int) -> QueryAlgorithm:
    """One-query nondeterministic OR.

    Spread uniformly over n+1 amplitudes, query ``(-, x1..xn)``, then undo the
    spread. Basis 0 is recovered with certainty only on the all-zero input.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise StructuralError(f"alg_or_nondet needs n >= 1, got {n!r}")
    s = splitter(n + 1, range(n + 1))
    layers = (s, QueryLayer([None, *range(1, n + 1)]), s.dagger())
    return QueryAlgorithm(n, n + 1, layers, MeasurementLabeling([0] + [1] * n))


def _perm(d: int, mapping: dict) -> np.ndarray:
    """Matrix sending basis ``j`` to the vector ``mapping[j]``."""
    m = np.zeros((d, d), dtype=complex)
    for j, col in mapping.items():
        m[:, j] = col
    return m


def _e(d: int, i: int) -> np.ndarray:
    v = np.zeros(d)
    v[i] = 1.0
    return v


def _h_on(d: int, i: int, j: int) -> np.ndarray:
    m = np.eye(d, dtype=complex)
    m[np.ix_([i, j], [i, j])] = _H
    return m


def _two_stage(route_equal: bool) -> np.ndarray:
    """Middle unitary shared by the F3 and G4 circuits.

    Hadamard on amplitudes (0, 1) sends the first-query XOR to basis 0 (equal)
    or 1 (different). The branch selected by ``route_equal`` is then spread
    over amplitudes (2, 3) for the second query; the other branch parks at a
    rejecting amplitude.
    """
    d = 4
    fan = (_e(d, 2) + _e(d, 3)) * _S
    anti = (_e(d, 2) - _e(d, 3)) * _S
    if route_equal:
        w = _perm(d, {0: fan, 1: _e(d, 1), 2: anti, 3: _e(d, 0)})
    else:
        w = _perm(d, {0: _e(d, 0), 1: fan, 2: anti, 3: _e(d, 1)})
    return w @ _h_on(d, 0, 1)


def _fan01() -> np.ndarray:
    return _perm(4, {0: (_e(4, 0) + _e(4, 1)) * _S, 1: (_e(4, 0) - _e(4, 1)) * _S, 2: _e(4, 2), 3: _e(4, 3)})


def alg_g4() -> QueryAlgorithm:
    """Exact ``(x1 xor x2) and (x3 xor x4)`` with 2 queries, dimension 4."""
    layers = (
        UnitaryLayer(_fan01()),
        QueryLayer([1, 2, None, None]),
        UnitaryLayer(_two_stage(route_equal=False)),
        QueryLayer([None, None, 3, 4]),
        UnitaryLayer(_h_on(4, 2, 3)),
    )
    return QueryAlgorithm(4, 4, layers, MeasurementLabeling([0, 0, 0, 1]))


def alg_f3() -> QueryAlgorithm:
    """Exact ``not(x1 xor x2) and (x1 xor x3)`` with 2 queries, dimension 4."""
    layers = (
        UnitaryLayer(_fan01()),
        QueryLayer([1, 2, None, None]),
        UnitaryLayer(_two_stage(route_equal=True)),
        QueryLayer([None, None, 1, 3]),
        UnitaryLayer(_h_on(4, 2, 3)),
    )
    return QueryAlgorithm(3, 4, layers, MeasurementLabeling([0, 0, 0, 1]))


def alg_h7() -> QueryAlgorithm:
    """Dual nondeterministic H7: F3 on x1..x3 in parallel with G4 on x4..x7."""
    return compose_parallel(
        [BlockSpec(alg_f3(), [1, 2, 3]), BlockSpec(alg_g4(), [4, 5, 6, 7])],
        total_vars=7,
    )


def control_triples(n: int) -> list[tuple[int, int, int]]:
    """Variable triples whose XOR must vanish for Control_n to accept.

    ``(x_{k+1}, x_1, x_2)`` then ``(x_{k+j}, x_{k+j-1}, x_{j+1})`` for j >= 2.
    """
    if not isinstance(n, (int, np.integer)) or n < 3 or n % 2 == 0:
        raise StructuralError(f"control needs odd n = 2k-1 with k >= 2, got {n!r}")
    k = (n + 1) // 2
    triples = [(k + 1, 1, 2)]
    for j in range(2, k):
        triples.append((k + j, k + j - 1, j + 1))
    return triples


def alg_control(n: int) -> QueryAlgorithm:
    """Dual nondeterministic Control_n with 2 queries: k-1 parallel not-parity blocks."""
    base = alg_not_parity3()
    return compose_parallel([BlockSpec(base, t) for t in control_triples(n)], total_vars=n)


_FIXED = {
    "not_parity3": alg_not_parity3,
    "f3": alg_f3,
    "g4": alg_g4,
    "h7": alg_h7,
}
_FAMILIES = {
    "parity": alg_parity,
    "or1q": alg_or_nondet,
    "control": alg_control,
}


def builtin_algorithm(name: str) -> QueryAlgorithm:
    """Resolve ``not_parity3``, ``f3``, ``g4``, ``h7``, ``parity:N``, ``or1q:N``, ``control:N``."""
    if name in _FIXED:
        return _FIXED[name]()
    family, sep, arg = name.partition(":")
    if sep and family in _FAMILIES:
        try:
            n = int(arg)
        except ValueError:
            raise StructuralError(f"bad arity in {name!r}") from None
        return _FAMILIES[family](n)
    raise KeyError(name)


def builtin_names(max_n: int = 9) -> list[str]:
    """A representative list of built-in names up to ``max_n`` variables."""
    names = ["not_parity3", "f3", "g4"]
    if max_n >= 7:
        names.append("h7")
    names += [f"parity:{n}" for n in range(1, min(max_n, 8) + 1)]
    names += [f"or1q:{n}" for n in range(1, min(max_n, 8) + 1)]
    names += [f"control:{n}" for n in range(3, max_n + 1, 2)]
    return names


# function each built-in algorithm targets, with the class it is claimed to be
TARGETS = {
    "not_parity3": ("not_parity3", "exact"),
    "f3": ("f3", "exact"),
    "g4": ("g4", "exact"),
    "h7": ("h7", "nq0"),
    "parity": ("parity", "exact"),
    "or1q": ("or", "nq1"),
    "control": ("control", "nq0"),
}


def target_of(name: str) -> tuple[str, str]:
    """``(function_ref, claimed_class)`` for a built-in algorithm name."""
    family, _, arg = name.partition(":")
    fn, cls = TARGETS[family]
    return (f"{fn}:{arg}" if arg else fn), cls
