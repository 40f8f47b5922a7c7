"""Boolean logic and constraints as verified penalty Hamiltonians.

The package compiles Boolean operations, linear constraint equations
and inequalities, and reversible gates into quadratic penalty
functions over binary variables, lays them out as QUBO or Ising
models, and verifies by exhaustive enumeration that the intended
assignments are exactly the ground states.
"""

from .boolops import (
    BoolOp,
    TruthTable,
    ValidSet,
    arity,
    distinct_binary_columns,
    eval_op,
    relation_of,
    truth_table,
)
from .errors import (
    DegreeError,
    DuplicateNameError,
    ExclusivityError,
    GapVerificationError,
    InfeasibleBoundError,
    MissingVariableError,
    NonUniqueGroundStateError,
    NormalizationError,
    ParseError,
    QubogatesError,
    SolverLimitError,
    UnsatisfiableRelationError,
)
from .feasibility import FeasibilityCertificate, LinearConstraint, prove_no_quadratic
from .formats import (
    dump_coordinate,
    dump_document,
    load_coordinate,
    load_document,
)
from .gates import (
    FieldPair,
    GATE_NAMES,
    GateSpec,
    apply_gate,
    cnot_gate,
    coefficient_range,
    fredkin_gate,
    fredkin_gate_9x9,
    gate,
    hadamard_apply,
    reverse_check,
    state_one_penalty,
    toffoli_gate,
)
from .hamiltonian import (
    Clamp,
    IsingModel,
    QuboMatrix,
    apply_clamp,
    compute_clamp,
    emit_matrix,
    ising_to_qubo,
    penalty_to_qubo,
    qubo_to_ising,
)
from .parse import compile_constraint, parse_constraint
from .pbf import (
    Assignment,
    Poly,
    Var,
    VarKind,
    View,
    all_assignments,
    boolean_to_spin,
    spin_to_boolean,
)
from .penalty import (
    AncillaBinding,
    GapReport,
    Penalty,
    builtin_penalty,
    compile_inequality,
    equation_to_penalty,
    inequality_to_equation,
    op_penalty,
    quadratize,
    verify_gap,
)
from .pipeline import (
    Allocator,
    CircuitDescription,
    PipelineTrace,
    Stage,
    StageRun,
    compile_circuit,
    evaluate_classically,
    hadamard_stage,
    parse_circuit,
    run_circuit,
    run_pipeline,
)
from .solver import (
    AnnealParams,
    SolveResult,
    solve_anneal,
    solve_exhaustive,
)

__version__ = "0.1.0"

__all__ = [
    "AncillaBinding",
    "AnnealParams",
    "Allocator",
    "Assignment",
    "BoolOp",
    "CircuitDescription",
    "Clamp",
    "DegreeError",
    "DuplicateNameError",
    "ExclusivityError",
    "FeasibilityCertificate",
    "FieldPair",
    "GATE_NAMES",
    "GapReport",
    "GapVerificationError",
    "GateSpec",
    "InfeasibleBoundError",
    "IsingModel",
    "LinearConstraint",
    "MissingVariableError",
    "NonUniqueGroundStateError",
    "NormalizationError",
    "ParseError",
    "Penalty",
    "PipelineTrace",
    "Poly",
    "QuboMatrix",
    "QubogatesError",
    "SolveResult",
    "SolverLimitError",
    "Stage",
    "StageRun",
    "TruthTable",
    "UnsatisfiableRelationError",
    "ValidSet",
    "Var",
    "VarKind",
    "View",
    "all_assignments",
    "apply_clamp",
    "apply_gate",
    "arity",
    "boolean_to_spin",
    "builtin_penalty",
    "cnot_gate",
    "coefficient_range",
    "compile_circuit",
    "compile_constraint",
    "compile_inequality",
    "compute_clamp",
    "distinct_binary_columns",
    "dump_coordinate",
    "dump_document",
    "emit_matrix",
    "equation_to_penalty",
    "eval_op",
    "evaluate_classically",
    "fredkin_gate",
    "fredkin_gate_9x9",
    "gate",
    "hadamard_apply",
    "hadamard_stage",
    "inequality_to_equation",
    "ising_to_qubo",
    "load_coordinate",
    "load_document",
    "op_penalty",
    "parse_circuit",
    "parse_constraint",
    "penalty_to_qubo",
    "prove_no_quadratic",
    "quadratize",
    "relation_of",
    "reverse_check",
    "run_circuit",
    "run_pipeline",
    "solve_anneal",
    "solve_exhaustive",
    "spin_to_boolean",
    "state_one_penalty",
    "toffoli_gate",
    "truth_table",
    "verify_gap",
]
