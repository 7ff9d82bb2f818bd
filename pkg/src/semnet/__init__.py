"""Two-tier semantic/bit network simulator and resource allocator."""
from .assignment import Assignment, AssignmentProblem, build_assignment_problem, solve_assignment
from .experiments import (
    ExperimentResult,
    RunRecord,
    SweepSpec,
    apply_override,
    emit_csv,
    emit_meta,
    emit_summary,
    load_sweep_spec,
    run_sweep,
)
from .generate import ConfigError, GenerationConfig, generate, link_gain
from .model import (
    AccuracyModel,
    BaseStation,
    DegenerateInstanceError,
    InfeasibleAccuracyError,
    KnowledgeSplit,
    MobileDevice,
    ModelError,
    RadioParams,
    Scenario,
    TimingBreakdown,
    access_rate,
    backhaul_rate,
    default_accuracy_model,
    extraction_grid,
    gestr,
    knowledge_split,
    min_extraction_ratio,
    timing,
)
from .oracle import OracleReport, brute_force_joint
from .serialization import (
    load_generation_config,
    load_scenario,
    parse_power,
    save_scenario,
    scenario_hash,
)
from .solver import JointDecision, SolveStats, SolverMode, solve_joint

__all__ = [
    "AccuracyModel",
    "Assignment",
    "AssignmentProblem",
    "BaseStation",
    "ConfigError",
    "DegenerateInstanceError",
    "ExperimentResult",
    "GenerationConfig",
    "InfeasibleAccuracyError",
    "JointDecision",
    "KnowledgeSplit",
    "MobileDevice",
    "ModelError",
    "OracleReport",
    "RadioParams",
    "RunRecord",
    "Scenario",
    "SolveStats",
    "SolverMode",
    "SweepSpec",
    "TimingBreakdown",
    "access_rate",
    "apply_override",
    "backhaul_rate",
    "brute_force_joint",
    "build_assignment_problem",
    "default_accuracy_model",
    "emit_csv",
    "emit_meta",
    "emit_summary",
    "extraction_grid",
    "generate",
    "gestr",
    "knowledge_split",
    "link_gain",
    "load_generation_config",
    "load_scenario",
    "load_sweep_spec",
    "min_extraction_ratio",
    "parse_power",
    "run_sweep",
    "save_scenario",
    "scenario_hash",
    "solve_assignment",
    "solve_joint",
    "timing",
]
