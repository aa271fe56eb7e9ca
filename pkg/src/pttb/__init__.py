"""Probabilistic Take The Best: Bayesian inference over lexicographic
decision strategies, with exact and MCMC posteriors, posterior prediction,
baselines, a benchmark harness, and a biased-feedback regression experiment.
"""

from .backend import BACKEND
from .baselines import (CueValidity, LogRegModel, classic_cue_validities,
                        classic_ttb_fit, logreg_fit, logreg_predict)
from .benchmark import (AccuracyRow, BenchmarkConfig, accuracy_from_probs,
                        export_cue_rank_heatmap, minmax_scale, run_benchmark,
                        trace_log_posterior)
from .datasets import load_item_table
from .embedding import (AgentConfig, GridDensity, PreferenceObservations,
                        RegressionTask, grid_posterior,
                        run_embedding_experiment, simulate_agent,
                        ttb_evidence, unbiased_evidence,
                        unbiased_observations, uniform_covariate_grid)
from .inference import (EnumerationCapError, SamplerConfig, StrategyPosterior,
                        ThresholdGrid, cue_rank_marginals,
                        default_threshold_grid, exhaustive_posterior,
                        gibbs_sample)
from .likelihood import (FitCounts, NoisePrior, TruncatedBetaPosterior,
                         count_outcomes, epsilon_posterior,
                         log_marginal_likelihood)
from .model import (ItemTable, PairwiseComparisons, PredictionOutcome,
                    TtbStrategy, build_comparisons, transitivity_weight,
                    ttb_predict)
from .prediction import (PredictiveResult, evaluate_accuracy,
                         posterior_predictor, predictive_prob,
                         predictive_probs)
from .special import log_beta_inc_half, trunc_beta_mean

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
