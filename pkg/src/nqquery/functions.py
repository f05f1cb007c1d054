"""Boolean functions as truth tables, named families, and s(f) / D(f).

Indexing convention, shared by the whole package: the input ``x_1 x_2 ... x_n``
sits at table index ``sum(x_i << (n - i))``, i.e. x_1 is the most significant bit.
"""
from __future__ import annotations

import sys
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .quantum_core import StructuralError

MAX_D_VARS = 13


class FunctionFormatError(ValueError):
    pass


class BooleanFunction:
    """Truth table over ``num_vars`` variables (read-only uint8 array)."""

    __slots__ = ("num_vars", "table")

    def __init__(self, num_vars: int, table):
        t = np.array(table, dtype=np.uint8).reshape(-1)
        if num_vars < 0 or t.size != 2**num_vars:
            raise StructuralError(f"truth table of length {t.size} does not match {num_vars} variables")
        if np.any(t > 1):
            raise StructuralError("truth table entries must be 0 or 1")
        t.setflags(write=False)
        self.num_vars = int(num_vars)
        self.table = t

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[tuple[int, ...]], int]) -> "BooleanFunction":
        from .algorithm import all_inputs

        return cls(n, [int(bool(fn(tuple(int(b) for b in row)))) for row in all_inputs(n)])

    def __call__(self, bits) -> int:
        return evaluate(self, bits)

    def __eq__(self, other):
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return self.num_vars == other.num_vars and bool(np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.num_vars, self.table.tobytes()))

    def __repr__(self):
        bits = "".join(map(str, self.table[:64]))
        more = "..." if self.table.size > 64 else ""
        return f"BooleanFunction({self.num_vars}, '{bits}{more}')"

    def ones(self) -> np.ndarray:
        return np.flatnonzero(self.table)

    def zeros(self) -> np.ndarray:
        return np.flatnonzero(self.table == 0)


def input_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def index_bits(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> (n - 1 - i)) & 1 for i in range(n))


def bitstring(index: int, n: int) -> str:
    return "".join(map(str, index_bits(index, n)))


def parse_bits(text: str) -> tuple[int, ...]:
    if not text or any(c not in "01" for c in text):
        raise StructuralError(f"input must be a non-empty string over {{0,1}}, got {text!r}")
    return tuple(int(c) for c in text)


def evaluate(f: BooleanFunction, bits) -> int:
    if isinstance(bits, str):
        bits = parse_bits(bits)
    bits = tuple(int(b) for b in bits)
    if len(bits) != f.num_vars:
        raise StructuralError(f"input has {len(bits)} bits, function expects {f.num_vars}")
    if any(b not in (0, 1) for b in bits):
        raise StructuralError("input bits must be 0 or 1")
    return int(f.table[input_index(bits)])


def _columns(n: int) -> np.ndarray:
    from .algorithm import all_inputs

    return all_inputs(n)


# builders


def _arity(n: int, least: int = 1) -> None:
    if not isinstance(n, (int, np.integer)) or n < least:
        raise StructuralError(f"arity must be an integer >= {least}, got {n!r}")


def or_n(n: int) -> BooleanFunction:
    _arity(n)
    return BooleanFunction(n, _columns(n).any(axis=1))


def and_n(n: int) -> BooleanFunction:
    _arity(n)
    return BooleanFunction(n, _columns(n).all(axis=1))


def parity_n(n: int) -> BooleanFunction:
    """XOR of all bits: 1 on inputs with an odd number of ones."""
    _arity(n)
    return BooleanFunction(n, _columns(n).sum(axis=1) % 2)


def not_parity3() -> BooleanFunction:
    return complement(parity_n(3))


def f3() -> BooleanFunction:
    """``not(x1 xor x2) and (x1 xor x3)``"""
    X = _columns(3)
    x1, x2, x3 = X.T
    return BooleanFunction(3, (1 - (x1 ^ x2)) & (x1 ^ x3))


def g4() -> BooleanFunction:
    """``(x1 xor x2) and (x3 xor x4)``"""
    X = _columns(4)
    x1, x2, x3, x4 = X.T
    return BooleanFunction(4, (x1 ^ x2) & (x3 ^ x4))


def h7() -> BooleanFunction:
    """F3 on x1..x3 conjoined with G4 on x4..x7."""
    X = _columns(7)
    x1, x2, x3, x4, x5, x6, x7 = X.T
    return BooleanFunction(7, (1 - (x1 ^ x2)) & (x1 ^ x3) & (x4 ^ x5) & (x6 ^ x7))


def control_n(n: int) -> BooleanFunction:
    """n = 2k-1 variables; accepts iff ``x_{k+j} = x_1 xor ... xor x_{j+1}`` for j = 1..k-1."""
    if not isinstance(n, (int, np.integer)) or n < 3 or n % 2 == 0:
        raise StructuralError(f"control_n needs odd n = 2k-1 with k >= 2, got {n!r}")
    k = (n + 1) // 2
    X = _columns(n)
    prefix = np.bitwise_xor.accumulate(X[:, :k], axis=1)
    # prefix[:, j] = x_1 ^ ... ^ x_{j+1}; compare with x_{k+j} (0-based column k+j-1)
    ok = np.all(X[:, k:] == prefix[:, 1:], axis=1)
    return BooleanFunction(n, ok)


def complement(f: BooleanFunction) -> BooleanFunction:
    return BooleanFunction(f.num_vars, 1 - f.table)


def _check_map(variable_map: Sequence[int], local_n: int, total_vars: int, where: str = "map") -> np.ndarray:
    m = list(variable_map)
    if len(m) != local_n:
        raise StructuralError(f"{where}: has {len(m)} entries, expected {local_n}")
    for k in m:
        if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 1 <= k <= total_vars:
            raise StructuralError(f"{where}: index {k!r} outside 1..{total_vars}")
    return np.array(m, dtype=np.intp) - 1


def lift(f: BooleanFunction, variable_map: Sequence[int], total_vars: int) -> BooleanFunction:
    """``g(x_1..x_N) = f(x_{map[0]}, ..., x_{map[n-1]})``"""
    cols = _check_map(variable_map, f.num_vars, total_vars)
    X = _columns(total_vars)
    sub = X[:, cols].astype(np.int64)
    weights = 1 << np.arange(f.num_vars - 1, -1, -1)
    return BooleanFunction(total_vars, f.table[sub @ weights] if f.num_vars else np.full(len(X), f.table[0]))


def compose_semantic(mode: str, parts, total_vars: int) -> BooleanFunction:
    """Pointwise AND / OR of ``(function, variable_map)`` parts lifted to N variables."""
    mode = mode.upper()
    if mode not in ("AND", "OR"):
        raise StructuralError(f"mode must be AND or OR, got {mode!r}")
    parts = list(parts)
    if not parts:
        raise StructuralError("compose_semantic needs at least one part")
    lifted = [lift(f, m, total_vars).table for f, m in parts]
    op = np.bitwise_and if mode == "AND" else np.bitwise_or
    return BooleanFunction(total_vars, op.reduce(lifted))


def multi_and(f: BooleanFunction, m: int) -> BooleanFunction:
    n = f.num_vars
    return compose_semantic("AND", [(f, range(i * n + 1, (i + 1) * n + 1)) for i in range(m)], m * n)


def multi_or(f: BooleanFunction, m: int) -> BooleanFunction:
    n = f.num_vars
    return compose_semantic("OR", [(f, range(i * n + 1, (i + 1) * n + 1)) for i in range(m)], m * n)


# classical measures


def sensitivity_profile(f: BooleanFunction) -> np.ndarray:
    """Sensitivity at every input, in table order."""
    n = f.num_vars
    idx = np.arange(f.table.size)
    counts = np.zeros(f.table.size, dtype=np.int64)
    for i in range(n):
        counts += f.table != f.table[idx ^ (1 << (n - 1 - i))]
    return counts


def sensitivity_at(f: BooleanFunction, bits) -> int:
    if isinstance(bits, str):
        bits = parse_bits(bits)
    evaluate(f, bits)
    return int(sensitivity_profile(f)[input_index(bits)])


def sensitivity(f: BooleanFunction) -> int:
    return int(sensitivity_profile(f).max()) if f.num_vars else 0


def decision_tree_complexity(f: BooleanFunction, max_vars: int = MAX_D_VARS) -> int:
    """Deterministic query complexity D(f) by memoized minimax over subcubes.

    A subcube is ``(fixed_mask, values)`` with bit ``n-1-i`` standing for x_{i+1}.
    The state space is 3**n, so arities above ``max_vars`` are refused.
    """
    n = f.num_vars
    if n > max_vars:
        raise StructuralError(f"decision_tree_complexity refuses n = {n} > {max_vars} (3**n subcubes)")
    table = f.table.tolist()
    full = (1 << n) - 1
    # packed entry: 4 * depth + (0 | 1 constant value, 2 not constant)
    memo: dict[int, int] = {}

    def solve(mask: int, vals: int) -> int:
        key = (mask << n) | vals
        hit = memo.get(key)
        if hit is not None:
            return hit
        if mask == full:
            res = table[vals]
        else:
            free = full & ~mask
            bit = free & -free
            a = solve(mask | bit, vals)
            b = solve(mask | bit, vals | bit)
            if a == b and a < 2:
                res = a
            else:
                best = 1 + max(a >> 2, b >> 2)
                free ^= bit
                while free and best > 1:
                    bit = free & -free
                    free ^= bit
                    a = solve(mask | bit, vals)
                    b = solve(mask | bit, vals | bit)
                    best = min(best, 1 + max(a >> 2, b >> 2))
                res = 4 * best + 2
        memo[key] = res
        return res

    if sys.getrecursionlimit() < n + 100:
        sys.setrecursionlimit(n + 100)
    return solve(0, 0) >> 2


# named references and files

_FAMILIES = {
    "or": or_n,
    "and": and_n,
    "parity": parity_n,
    "control": control_n,
}
_FIXED = {
    "not_parity3": not_parity3,
    "f3": f3,
    "g4": g4,
    "h7": h7,
}


def builtin_function(name: str) -> BooleanFunction:
    """Resolve ``or:N``, ``and:N``, ``parity:N``, ``control:N``, ``not_parity3``, ``f3``, ``g4``, ``h7``."""
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


def is_builtin_function(name: str) -> bool:
    return name in _FIXED or name.partition(":")[0] in _FAMILIES and ":" in name


def loads_table(text: str) -> BooleanFunction:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise FunctionFormatError("truth-table file must have exactly two non-empty lines: n, then the table")
    try:
        n = int(lines[0])
    except ValueError:
        raise FunctionFormatError(f"first line must be the variable count, got {lines[0]!r}") from None
    if n < 0:
        raise FunctionFormatError("variable count must be non-negative")
    if len(lines[1]) != 2**n or any(c not in "01" for c in lines[1]):
        raise FunctionFormatError(f"second line must be {2**n} characters over {{0,1}}")
    return BooleanFunction(n, [int(c) for c in lines[1]])


def dumps_table(f: BooleanFunction) -> str:
    return f"{f.num_vars}\n{''.join(map(str, f.table))}\n"


def read_table(path) -> BooleanFunction:
    return loads_table(Path(path).read_text())


def write_table(f: BooleanFunction, path) -> None:
    Path(path).write_text(dumps_table(f))


def resolve_function(ref: str) -> BooleanFunction:
    """Builtin name, else a truth-table file path."""
    try:
        return builtin_function(ref)
    except KeyError:
        pass
    p = Path(ref)
    if not p.is_file():
        raise FunctionFormatError(f"{ref!r} is neither a builtin function name nor a readable file")
    return read_table(p)
