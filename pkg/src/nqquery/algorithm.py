"""Query algorithms: alternating unitary/query layers plus an output labeling."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from .quantum_core import (
    NORM_TOL,
    UNITARY_TOL,
    MeasurementLabeling,
    QueryLayer,
    StructuralError,
    UnitaryLayer,
    apply_query,
    apply_unitary,
    basis_state,
    measure_distribution,
    norm_squared,
    unitarity_defect,
)

Layer = Union[UnitaryLayer, QueryLayer]


class AlgorithmFormatError(ValueError):
    """Malformed or invalid algorithm document."""


@dataclass(frozen=True, eq=False)
class QueryAlgorithm:
    num_vars: int
    dimension: int
    layers: tuple
    labeling: MeasurementLabeling

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not isinstance(self.labeling, MeasurementLabeling):
            object.__setattr__(self, "labeling", MeasurementLabeling(self.labeling))

    @cached_property
    def violations(self) -> list[str]:
        return validate(self)

    @property
    def unitaries(self) -> list[UnitaryLayer]:
        return [l for l in self.layers if isinstance(l, UnitaryLayer)]

    @property
    def queries(self) -> list[QueryLayer]:
        return [l for l in self.layers if isinstance(l, QueryLayer)]

    def with_labeling(self, labeling) -> "QueryAlgorithm":
        return QueryAlgorithm(self.num_vars, self.dimension, self.layers, MeasurementLabeling(labeling))

    def __eq__(self, other):
        if not isinstance(other, QueryAlgorithm):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.dimension == other.dimension
            and self.labeling == other.labeling
            and len(self.layers) == len(other.layers)
            and all(type(a) is type(b) and a == b for a, b in zip(self.layers, other.layers))
        )

    __hash__ = None


@dataclass(frozen=True)
class OutcomeDistribution:
    p0: float
    p1: float
    final_state: np.ndarray = field(repr=False, compare=False)


def validate(algo: QueryAlgorithm) -> list[str]:
    """Return every invariant violation of ``algo``, each naming its location."""
    problems = []
    if not isinstance(algo.num_vars, (int, np.integer)) or algo.num_vars < 1:
        problems.append(f"num_vars: must be a positive integer, got {algo.num_vars!r}")
    if not isinstance(algo.dimension, (int, np.integer)) or algo.dimension < 1:
        problems.append(f"dimension: must be a positive integer, got {algo.dimension!r}")
    d, n = algo.dimension, algo.num_vars

    if not algo.layers:
        problems.append("layers: empty; at least one unitary layer is required")
    for i, layer in enumerate(algo.layers):
        expected = UnitaryLayer if i % 2 == 0 else QueryLayer
        if not isinstance(layer, (UnitaryLayer, QueryLayer)):
            problems.append(f"layer {i}: unknown layer type {type(layer).__name__}")
            continue
        if not isinstance(layer, expected):
            kind = "unitary" if expected is UnitaryLayer else "query"
            problems.append(f"layer {i}: alternation violated, expected a {kind} layer")
        if layer.dimension != d:
            problems.append(f"layer {i}: dimension {layer.dimension} != algorithm dimension {d}")
        if isinstance(layer, UnitaryLayer):
            if layer.dimension == d:
                defect = unitarity_defect(layer.matrix)
                if defect > UNITARY_TOL:
                    problems.append(f"layer {i}: matrix is not unitary (max |U'U - I| = {defect:.3g})")
        else:
            for j in layer.out_of_range(n):
                problems.append(f"layer {i}: amplitude {j} queries variable {layer.assignment[j]} outside 1..{n}")
    if algo.layers and not isinstance(algo.layers[-1], UnitaryLayer):
        problems.append(f"layer {len(algo.layers) - 1}: alternation violated, last layer must be unitary")
    if algo.labeling.dimension != d:
        problems.append(f"labels: length {algo.labeling.dimension} != algorithm dimension {d}")
    return problems


def check_valid(algo: QueryAlgorithm) -> None:
    if algo.violations:
        raise StructuralError("invalid algorithm: " + "; ".join(algo.violations))


def query_count(algo: QueryAlgorithm) -> int:
    return sum(isinstance(l, QueryLayer) for l in algo.layers)


def _check_input(algo: QueryAlgorithm, bits) -> np.ndarray:
    x = np.array([int(b) for b in bits], dtype=np.int8)
    if x.size != algo.num_vars:
        raise StructuralError(f"input has {x.size} bits, algorithm expects {algo.num_vars}")
    if np.any((x != 0) & (x != 1)):
        raise StructuralError("input bits must be 0 or 1")
    return x


def run(algo: QueryAlgorithm, bits: Sequence[int]) -> OutcomeDistribution:
    """Start in basis state 0, apply every layer in order, then measure."""
    check_valid(algo)
    x = _check_input(algo, bits)
    state = basis_state(algo.dimension)
    for layer in algo.layers:
        if isinstance(layer, UnitaryLayer):
            state = apply_unitary(state, layer)
        else:
            state = apply_query(state, layer, x)
    p0, p1 = measure_distribution(state, algo.labeling)
    state.setflags(write=False)
    return OutcomeDistribution(p0, p1, state)


def all_inputs(n: int) -> np.ndarray:
    """All ``2**n`` inputs as rows, x_1 as the most significant bit."""
    idx = np.arange(2**n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1)
    return ((idx[:, None] >> shifts) & 1).astype(np.int8)


def run_all(algo: QueryAlgorithm) -> tuple[np.ndarray, np.ndarray]:
    """Simulate every input at once.

    Returns ``(probs, states)``: ``probs[i] = (p0, p1)`` and ``states[i]`` the
    final state for the input with table index ``i``.
    """
    check_valid(algo)
    X = all_inputs(algo.num_vars)
    states = np.zeros((X.shape[0], algo.dimension), dtype=complex)
    states[:, 0] = 1.0
    for layer in algo.layers:
        if isinstance(layer, UnitaryLayer):
            states = states @ layer.matrix.T
        else:
            idx = layer.index_array()
            flips = np.where(idx >= 0, X[:, np.maximum(idx, 0)], 0)
            states = states * (1.0 - 2.0 * flips)
    mass = np.abs(states) ** 2
    ones = algo.labeling.mask()
    probs = np.stack([mass[:, ~ones].sum(axis=1), mass[:, ones].sum(axis=1)], axis=1)
    return probs, states


def final_norm_ok(dist: OutcomeDistribution, tol: float = NORM_TOL) -> bool:
    return abs(norm_squared(dist.final_state) - 1.0) <= tol


# serialization


def _encode_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def save_algorithm(algo: QueryAlgorithm) -> dict:
    """Algorithm as a JSON-ready document."""
    layers = []
    for layer in algo.layers:
        if isinstance(layer, UnitaryLayer):
            layers.append({
                "type": "unitary",
                "matrix": [[_encode_complex(z) for z in row] for row in layer.matrix],
            })
        else:
            layers.append({"type": "query", "assignment": list(layer.assignment)})
    return {
        "num_vars": int(algo.num_vars),
        "dimension": int(algo.dimension),
        "layers": layers,
        "labels": list(algo.labeling.labels),
    }


def _parse_matrix(raw, where: str, d: int) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != d:
        got = len(raw) if isinstance(raw, list) else type(raw).__name__
        raise AlgorithmFormatError(f"{where}: matrix must have {d} rows, got {got}")
    m = np.zeros((d, d), dtype=complex)
    for r, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != d:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise AlgorithmFormatError(f"{where}: row {r} must have {d} entries, got {got}")
        for c, entry in enumerate(row):
            if (
                not isinstance(entry, list)
                or len(entry) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
            ):
                raise AlgorithmFormatError(f"{where}: entry ({r}, {c}) must be [re, im], got {entry!r}")
            m[r, c] = complex(entry[0], entry[1])
    if not np.all(np.isfinite(m)):
        raise AlgorithmFormatError(f"{where}: matrix has non-finite entries")
    return m


def load_algorithm(doc: dict) -> QueryAlgorithm:
    """Parse and validate an algorithm document; errors name the offending layer."""
    if not isinstance(doc, dict):
        raise AlgorithmFormatError("document must be a JSON object")
    for key in ("num_vars", "dimension", "layers", "labels"):
        if key not in doc:
            raise AlgorithmFormatError(f"missing field {key!r}")
    n, d = doc["num_vars"], doc["dimension"]
    for key, v in (("num_vars", n), ("dimension", d)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise AlgorithmFormatError(f"{key}: must be a positive integer, got {v!r}")
    if not isinstance(doc["layers"], list):
        raise AlgorithmFormatError("layers: must be a list")

    layers = []
    for i, raw in enumerate(doc["layers"]):
        where = f"layer {i}"
        if not isinstance(raw, dict) or raw.get("type") not in ("unitary", "query"):
            raise AlgorithmFormatError(f"{where}: must be an object with type 'unitary' or 'query'")
        if raw["type"] == "unitary":
            layers.append(UnitaryLayer(_parse_matrix(raw.get("matrix"), where, d), check=False))
        else:
            assignment = raw.get("assignment")
            if not isinstance(assignment, list) or len(assignment) != d:
                raise AlgorithmFormatError(f"{where}: assignment must be a list of length {d}")
            if not all(k is None or (isinstance(k, int) and not isinstance(k, bool)) for k in assignment):
                raise AlgorithmFormatError(f"{where}: assignment entries must be integers or null")
            layers.append(QueryLayer(assignment))

    labels = doc["labels"]
    if not isinstance(labels, list) or not all(v in (0, 1) and isinstance(v, int) for v in labels):
        raise AlgorithmFormatError("labels: must be a list of 0/1 integers")
    try:
        labeling = MeasurementLabeling(labels)
    except StructuralError as exc:
        raise AlgorithmFormatError(f"labels: {exc}") from None

    algo = QueryAlgorithm(n, d, tuple(layers), labeling)
    if algo.violations:
        raise AlgorithmFormatError("invalid algorithm: " + "; ".join(algo.violations))
    return algo


def dumps_algorithm(algo: QueryAlgorithm) -> str:
    return json.dumps(save_algorithm(algo), indent=1)


def read_algorithm(path) -> QueryAlgorithm:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise AlgorithmFormatError(f"{path}: not valid JSON ({exc})") from None
    return load_algorithm(doc)


def write_algorithm(algo: QueryAlgorithm, path) -> None:
    Path(path).write_text(dumps_algorithm(algo) + "\n")
