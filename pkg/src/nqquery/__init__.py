"""Simulation and exhaustive verification of exact and (dual) nondeterministic
quantum query algorithms for Boolean functions."""
from .quantum_core import (
    HADAMARD,
    MeasurementLabeling,
    QueryLayer,
    StructuralError,
    UnitaryLayer,
    apply_query,
    apply_unitary,
    measure_distribution,
)
from .algorithm import (
    AlgorithmFormatError,
    OutcomeDistribution,
    QueryAlgorithm,
    load_algorithm,
    query_count,
    run,
    save_algorithm,
    validate,
)
from .functions import (
    BooleanFunction,
    and_n,
    complement,
    compose_semantic,
    control_n,
    decision_tree_complexity,
    evaluate,
    f3,
    g4,
    h7,
    not_parity3,
    or_n,
    parity_n,
    sensitivity,
    sensitivity_at,
)
from .classify import ClassificationReport, InputPartition, classify, partition_inputs
from .compose import BlockSpec, compose_parallel, relabel_outputs, splitter
from .algolib import (
    alg_control,
    alg_f3,
    alg_g4,
    alg_h7,
    alg_not_parity3,
    alg_or_nondet,
    alg_parity,
)

__version__ = "0.1.0"
