"""Output relabeling and parallel block composition of query algorithms."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algorithm import QueryAlgorithm, check_valid, query_count
from .quantum_core import MeasurementLabeling, QueryLayer, StructuralError, UnitaryLayer


@dataclass(frozen=True)
class BlockSpec:
    """An algorithm plus where its local variables live globally (1-based)."""

    algorithm: QueryAlgorithm
    variable_map: tuple[int, ...]

    def __init__(self, algorithm: QueryAlgorithm, variable_map: Sequence[int]):
        object.__setattr__(self, "algorithm", algorithm)
        object.__setattr__(self, "variable_map", tuple(int(k) for k in variable_map))


def relabel_outputs(algo: QueryAlgorithm) -> QueryAlgorithm:
    """Swap the 0/1 label on every basis state; layers are untouched."""
    return QueryAlgorithm(algo.num_vars, algo.dimension, algo.layers, algo.labeling.flipped())


def splitter(dimension: int, targets: Sequence[int]) -> UnitaryLayer:
    """Unitary mapping basis state 0 to the uniform superposition over ``targets``.

    Built as the Householder reflection ``I - 2 v v^T / (v^T v)`` with
    ``v = e_0 - t``, which sends ``e_0`` to ``t`` exactly. The result is real
    symmetric, hence its own inverse.
    """
    targets = list(targets)
    if not targets:
        raise StructuralError("splitter needs at least one target")
    if len(set(targets)) != len(targets):
        raise StructuralError(f"splitter targets must be distinct, got {targets}")
    if any(not 0 <= t < dimension for t in targets):
        raise StructuralError(f"splitter targets must lie in 0..{dimension - 1}, got {targets}")
    t = np.zeros(dimension)
    t[targets] = 1.0 / np.sqrt(len(targets))
    v = -t
    v[0] += 1.0
    vv = v @ v
    if vv < 1e-24:
        return UnitaryLayer.identity(dimension)
    m = np.eye(dimension) - 2.0 * np.outer(v, v) / vv
    m[:, 0] = t
    return UnitaryLayer(m)


def _block_diag(mats: Sequence[np.ndarray]) -> np.ndarray:
    d = sum(m.shape[0] for m in mats)
    out = np.zeros((d, d), dtype=complex)
    off = 0
    for m in mats:
        k = m.shape[0]
        out[off:off + k, off:off + k] = m
        off += k
    return out


def compose_parallel(blocks: Sequence[BlockSpec], total_vars: int, pad_to: Optional[int] = None) -> QueryAlgorithm:
    """Run every block side by side from an equal initial spread.

    Block ``i`` occupies a contiguous slice of the global register. The first
    unitary spreads amplitude ``1/sqrt(m)`` onto each block's local index 0 and
    then applies every block's first unitary. Query step ``t`` carries each
    block's ``t``-th query remapped to global variables; blocks that ran out of
    queries sit idle (unassigned entries, identity unitaries). Labels are the
    concatenation of the block labels.

    ``pad_to`` appends idle label-0 amplitudes up to that dimension.
    """
    blocks = list(blocks)
    if not blocks:
        raise StructuralError("compose_parallel needs at least one block")
    if isinstance(total_vars, bool) or not isinstance(total_vars, (int, np.integer)) or total_vars < 1:
        raise StructuralError(f"total_vars must be a positive integer, got {total_vars!r}")

    for b, spec in enumerate(blocks):
        check_valid(spec.algorithm)
        if len(spec.variable_map) != spec.algorithm.num_vars:
            raise StructuralError(
                f"block {b}: map has {len(spec.variable_map)} entries, algorithm has {spec.algorithm.num_vars} variables"
            )
        for k in spec.variable_map:
            if not 1 <= k <= total_vars:
                raise StructuralError(f"block {b}: map index {k} outside 1..{total_vars}")

    dims = [spec.algorithm.dimension for spec in blocks]
    offsets = np.concatenate([[0], np.cumsum(dims)[:-1]]).astype(int)
    d = int(sum(dims))
    pad = 0
    if pad_to is not None:
        if pad_to < d:
            raise StructuralError(f"pad_to={pad_to} is smaller than the composed dimension {d}")
        pad = pad_to - d
    T = max(query_count(spec.algorithm) for spec in blocks)

    def unitary_at(step: int) -> UnitaryLayer:
        mats = []
        for spec in blocks:
            us = spec.algorithm.unitaries
            mats.append(us[step].matrix if step < len(us) else np.eye(spec.algorithm.dimension))
        if pad:
            mats.append(np.eye(pad))
        return UnitaryLayer(_block_diag(mats))

    def query_at(step: int) -> QueryLayer:
        entries: list[Optional[int]] = []
        for spec in blocks:
            qs = spec.algorithm.queries
            if step < len(qs):
                entries.extend(None if k is None else spec.variable_map[k - 1] for k in qs[step].assignment)
            else:
                entries.extend([None] * spec.algorithm.dimension)
        entries.extend([None] * pad)
        return QueryLayer(entries)

    spread = splitter(d + pad, [int(o) for o in offsets])
    first = UnitaryLayer(unitary_at(0).matrix @ spread.matrix)
    layers: list = [first]
    for t in range(T):
        layers.append(query_at(t))
        layers.append(unitary_at(t + 1))

    labels = [v for spec in blocks for v in spec.algorithm.labeling.labels] + [0] * pad
    return QueryAlgorithm(int(total_vars), d + pad, tuple(layers), MeasurementLabeling(labels))


def block_slices(blocks: Sequence[BlockSpec]) -> list[slice]:
    """Amplitude range each block occupies in the composed register."""
    out, off = [], 0
    for spec in blocks:
        out.append(slice(off, off + spec.algorithm.dimension))
        off += spec.algorithm.dimension
    return out
