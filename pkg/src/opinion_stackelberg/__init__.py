"""Competitive opinion optimization on social networks.

A min player resets k internal opinions to -1, an adversary then overwrites
k internal opinions to +1, and expressed opinions settle at the
Friedkin-Johnsen equilibrium computed through an absorbing random walk.
The min player learns with follow-the-perturbed-leader.
"""

from .errors import (
    DimensionMismatch,
    GuardError,
    InvalidParam,
    NegativeWeight,
    NoConvergence,
    NonFinite,
    ParseError,
    RoleMismatch,
    SingularSystem,
    TooLarge,
    ValidationError,
    ZeroAnchor,
)
from .graph import WeightedGraph, generate_graph, load_graph, serialize_graph, validate_graph
from .absorbing import (
    AbsorptionModel,
    absorption_model,
    build_transition,
    compute_qub,
    equilibrium_opinions,
    expressed_control_equilibrium,
    iterate_dynamics,
)
from .game import (
    GameInstance,
    Strategy,
    apply_strategies,
    cost_g,
    individual_cost,
    loss_f,
    make_instance,
    social_cost,
)
from .ftpl import FtplState, ProbabilityEstimate, draw_perturbation, estimate_selection_probs, ftpl_select
from .adversary import (
    best_response_topk,
    delta_scores,
    exact_best_response,
    expected_modified_opinions,
)
from .oracle import MinmaxResult, brute_ftpl_argmin, brute_minmax, enumerate_subsets
from .harness import (
    RoundRecord,
    RunConfig,
    RunReport,
    compute_regret,
    emit_report,
    equilibrium_gap,
    run_stackelberg,
)

__version__ = "0.1.0"
