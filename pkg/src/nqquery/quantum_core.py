"""State vectors, unitary layers, sign-flip query layers and output labeling.

States are plain 1-D ``complex128`` numpy arrays. Layers are small immutable
wrappers that validate themselves on construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

UNITARY_TOL = 1e-10
NORM_TOL = 1e-9


class StructuralError(ValueError):
    """Raised on dimension, arity or index-range mismatches."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def unitarity_defect(matrix: np.ndarray) -> float:
    """Largest entry magnitude of ``U^dagger U - I``."""
    d = matrix.shape[0]
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(d))))


@dataclass(frozen=True, eq=False)
class UnitaryLayer:
    matrix: np.ndarray

    def __init__(self, matrix, check: bool = True):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise StructuralError(f"unitary layer must be a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise StructuralError("unitary layer contains non-finite entries")
        if check:
            defect = unitarity_defect(m)
            if defect > UNITARY_TOL:
                raise StructuralError(f"matrix is not unitary (max |U'U - I| = {defect:.3g})")
        object.__setattr__(self, "matrix", _readonly(m))

    @classmethod
    def identity(cls, d: int) -> "UnitaryLayer":
        return cls(np.eye(d))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return unitarity_defect(self.matrix) <= tol

    def dagger(self) -> "UnitaryLayer":
        return UnitaryLayer(self.matrix.conj().T, check=False)

    def __eq__(self, other):
        if not isinstance(other, UnitaryLayer):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and bool(np.array_equal(self.matrix, other.matrix))

    __hash__ = None


@dataclass(frozen=True)
class QueryLayer:
    """Per-amplitude variable assignment; ``None`` leaves the amplitude alone.

    Variable indices are 1-based, as in ``x_1 .. x_n``. The same variable may
    appear on several amplitudes.
    """

    assignment: tuple[Optional[int], ...]

    def __init__(self, assignment: Sequence[Optional[int]]):
        entries = []
        for k in assignment:
            if k is None:
                entries.append(None)
            elif isinstance(k, (bool, np.bool_)) or not isinstance(k, (int, np.integer)):
                raise StructuralError(f"query assignment entries must be ints or None, got {k!r}")
            else:
                entries.append(int(k))
        if not entries:
            raise StructuralError("query layer must have at least one entry")
        object.__setattr__(self, "assignment", tuple(entries))

    @classmethod
    def unassigned(cls, d: int) -> "QueryLayer":
        return cls([None] * d)

    @property
    def dimension(self) -> int:
        return len(self.assignment)

    def max_index(self) -> int:
        return max((k for k in self.assignment if k is not None), default=0)

    def out_of_range(self, n: int) -> list[int]:
        """Positions whose assigned variable lies outside ``1..n``."""
        return [j for j, k in enumerate(self.assignment) if k is not None and not 1 <= k <= n]

    def index_array(self) -> np.ndarray:
        """0-based variable index per amplitude, -1 where unassigned."""
        return np.array([-1 if k is None else k - 1 for k in self.assignment], dtype=np.intp)

    def signs(self, bits: Sequence[int]) -> np.ndarray:
        x = np.asarray(bits, dtype=np.int8)
        bad = self.out_of_range(len(x))
        if bad:
            raise StructuralError(
                f"query assigns variable {self.assignment[bad[0]]} at amplitude {bad[0]}, "
                f"but the input has {len(x)} bits"
            )
        idx = self.index_array()
        flips = np.where(idx >= 0, x[np.maximum(idx, 0)], 0)
        return 1.0 - 2.0 * flips


@dataclass(frozen=True)
class MeasurementLabeling:
    labels: tuple[int, ...]

    def __init__(self, labels: Sequence[int]):
        out = []
        for v in labels:
            if v not in (0, 1) or isinstance(v, float):
                raise StructuralError(f"labels must be 0 or 1, got {v!r}")
            out.append(int(v))
        if not out:
            raise StructuralError("labeling must have at least one entry")
        object.__setattr__(self, "labels", tuple(out))

    @property
    def dimension(self) -> int:
        return len(self.labels)

    def flipped(self) -> "MeasurementLabeling":
        return MeasurementLabeling([1 - v for v in self.labels])

    def mask(self) -> np.ndarray:
        return np.array(self.labels, dtype=bool)


def as_state(amplitudes) -> np.ndarray:
    state = np.array(amplitudes, dtype=complex).reshape(-1)
    if state.size < 1:
        raise StructuralError("state vector must have at least one amplitude")
    if not np.all(np.isfinite(state)):
        raise StructuralError("state vector contains non-finite amplitudes")
    return state


def basis_state(d: int, index: int = 0) -> np.ndarray:
    state = np.zeros(d, dtype=complex)
    state[index] = 1.0
    return state


def norm_squared(state) -> float:
    s = np.asarray(state)
    return float(np.vdot(s, s).real)


def apply_unitary(state, layer: UnitaryLayer) -> np.ndarray:
    s = as_state(state)
    if layer.dimension != s.size:
        raise StructuralError(f"unitary of dimension {layer.dimension} applied to state of dimension {s.size}")
    return layer.matrix @ s


def apply_query(state, layer: QueryLayer, bits: Sequence[int]) -> np.ndarray:
    """Multiply amplitude j by ``(-1)**x[k_j]`` wherever a variable is assigned."""
    s = as_state(state)
    if layer.dimension != s.size:
        raise StructuralError(f"query of dimension {layer.dimension} applied to state of dimension {s.size}")
    return s * layer.signs(bits)


def measure_distribution(state, labeling: MeasurementLabeling) -> tuple[float, float]:
    """Return ``(p0, p1)``: squared amplitude mass on each output label."""
    s = as_state(state)
    if labeling.dimension != s.size:
        raise StructuralError(f"labeling of length {labeling.dimension} for state of dimension {s.size}")
    probs = np.abs(s) ** 2
    ones = labeling.mask()
    return float(probs[~ones].sum()), float(probs[ones].sum())


HADAMARD = UnitaryLayer(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
