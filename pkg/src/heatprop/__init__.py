"""Semi-supervised node classification on graphs by heat diffusion.

Solve one Dirichlet problem per label, center the equilibrium temperatures,
and assign each free node the argmax label. Includes a deterministic
block-model oracle with closed-form temperatures and a reproducible
experiment harness for stochastic block models and edge-list datasets.
"""

from .bench import (
    ExperimentReport,
    ExperimentSpec,
    FileSource,
    GlobalFraction,
    PerClassCounts,
    SbmParams,
    generate_sbm,
    macro_f1,
    run_experiment,
    sample_seeds,
)
from .blockmodel import (
    BlockModelParams,
    ClosedFormSolution,
    build_block_graph,
    closed_form,
    consistency_check,
    uncentered_failure_check,
)
from .classifier import (
    CENTERING_MODES,
    NO_CENTERING,
    Prediction,
    ScoreMatrix,
    classify,
    classify_binary,
)
from .dirichlet import (
    ALL_NODES,
    FIXED_POINT,
    FREE_NODES,
    GROUNDED,
    BoundaryCondition,
    SolverConfig,
    TemperatureField,
    mean_temperature,
    solve_dirichlet,
)
from .errors import (
    ConstructionError,
    ConvergenceError,
    DataError,
    DegenerateParamsError,
    EmptySetError,
    EvaluationError,
    GenerationError,
    HeatpropError,
    InvalidSeedsError,
    NumericalError,
    ParamError,
    SamplingError,
    SingularSystemError,
)
from .graph import (
    Graph,
    LabeledNodes,
    build_graph,
    connected_components_with_seeds,
    read_edge_list,
    read_labels,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_NODES",
    "CENTERING_MODES",
    "FIXED_POINT",
    "FREE_NODES",
    "GROUNDED",
    "NO_CENTERING",
    "BlockModelParams",
    "BoundaryCondition",
    "ClosedFormSolution",
    "ConstructionError",
    "ConvergenceError",
    "DataError",
    "DegenerateParamsError",
    "EmptySetError",
    "EvaluationError",
    "ExperimentReport",
    "ExperimentSpec",
    "FileSource",
    "GenerationError",
    "GlobalFraction",
    "Graph",
    "HeatpropError",
    "InvalidSeedsError",
    "LabeledNodes",
    "NumericalError",
    "ParamError",
    "PerClassCounts",
    "Prediction",
    "SamplingError",
    "SbmParams",
    "ScoreMatrix",
    "SingularSystemError",
    "SolverConfig",
    "TemperatureField",
    "build_block_graph",
    "build_graph",
    "classify",
    "classify_binary",
    "closed_form",
    "connected_components_with_seeds",
    "consistency_check",
    "generate_sbm",
    "macro_f1",
    "mean_temperature",
    "read_edge_list",
    "read_labels",
    "run_experiment",
    "sample_seeds",
    "solve_dirichlet",
    "uncentered_failure_check",
]
