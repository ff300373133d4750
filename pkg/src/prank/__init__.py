"""Ranking and top-k queries over probabilistic databases.

Tuples carry membership probabilities and deterministic scores; ranking
functions weight each tuple's rank distribution over the possible worlds.
Submodules: model (relations, trees, worlds), engine (rank distributions
and scores), ranking (baselines, top-k, consensus), weights (positional
weight functions), approx (exponential-mixture approximation), learn
(parameter fitting from preferences), jtree (correlated tuples via
junction trees), synth (dataset generators), polynomial (FFT toolkit),
cli (command-line surface), plots (report figures).
"""

from .approx import ApproxConfig, ExpMixture, dft_approx_full, rank_mixture
from .engine import (
    RankDistribution,
    positional_matrix,
    rank_distributions,
    rank_prf,
    rank_prfe,
)
from .errors import PrankError
from .jtree import (
    Clique,
    JunctionTree,
    SeparatorEdge,
    calibrate,
    condition_on_presence,
    independent_junction_tree,
    partial_sum,
    rank_distributions_jt,
    rank_prf_jt,
)
from .learn import PreferenceSample, learn_alpha, learn_prfw_weights
from .model import (
    AndXorTree,
    ProbTuple,
    Relation,
    TreeAnd,
    TreeLeaf,
    TreeXor,
    XorEdge,
    enumerate_worlds,
    load_relation_csv,
    load_tree_json,
    save_relation_csv,
    save_tree_json,
)
from .ranking import (
    TopK,
    consensus_expected_distance,
    kendall,
    rank_erank,
    rank_escore,
    rank_kselection,
    rank_pt,
    rank_urank,
    topk,
)
from .synth import SynthSpec, gen_andxor, gen_independent, gen_junction, gen_preset
from .weights import (
    Constant,
    Delta,
    Discount,
    Exponential,
    Linear,
    ScoreScaled,
    Step,
    Tabulated,
    WeightFunction,
)

__version__ = "0.1.0"

__all__ = [
    "AndXorTree",
    "ApproxConfig",
    "Clique",
    "Constant",
    "Delta",
    "Discount",
    "ExpMixture",
    "Exponential",
    "JunctionTree",
    "Linear",
    "PrankError",
    "PreferenceSample",
    "ProbTuple",
    "RankDistribution",
    "Relation",
    "ScoreScaled",
    "SeparatorEdge",
    "Step",
    "SynthSpec",
    "Tabulated",
    "TopK",
    "TreeAnd",
    "TreeLeaf",
    "TreeXor",
    "WeightFunction",
    "XorEdge",
    "calibrate",
    "condition_on_presence",
    "consensus_expected_distance",
    "dft_approx_full",
    "enumerate_worlds",
    "gen_andxor",
    "gen_independent",
    "gen_junction",
    "gen_preset",
    "independent_junction_tree",
    "kendall",
    "learn_alpha",
    "learn_prfw_weights",
    "load_relation_csv",
    "load_tree_json",
    "partial_sum",
    "positional_matrix",
    "rank_distributions",
    "rank_distributions_jt",
    "rank_erank",
    "rank_escore",
    "rank_kselection",
    "rank_mixture",
    "rank_prf",
    "rank_prf_jt",
    "rank_prfe",
    "rank_pt",
    "rank_urank",
    "save_relation_csv",
    "save_tree_json",
    "topk",
]
