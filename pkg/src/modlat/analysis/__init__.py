"""Exact combinatorics, Monte Carlo statistics, brute-force oracles and the CPA game."""
from .combinatorics import (CountingBound, ExpectedDims, RankDistribution, count_containing_spaces, expected_dims,
                            full_rank_probability, gaussian_coeff, policy_counting_bounds, rank_pmf, subspace_count)
from .game import (Adversary, BruteForceBDHAdversary, CoinFlipAdversary, GameConfig, GameResult, OmniscientAdversary,
                   ProtocolViolation, run_cpa_game)
from .montecarlo import DimStats, RankMCReport, full_rank_trend, monte_carlo_rank, protocol_dim_stats
from .oracles import BudgetExceededError, action_preimages, brute_force_bdh, interval_size

__all__ = [
    "Adversary", "BruteForceBDHAdversary", "BudgetExceededError", "CoinFlipAdversary", "CountingBound", "DimStats",
    "ExpectedDims", "GameConfig", "GameResult", "OmniscientAdversary", "ProtocolViolation", "RankDistribution",
    "RankMCReport", "action_preimages", "brute_force_bdh", "count_containing_spaces", "expected_dims",
    "full_rank_probability", "full_rank_trend", "gaussian_coeff", "interval_size", "monte_carlo_rank",
    "policy_counting_bounds", "protocol_dim_stats", "rank_pmf", "run_cpa_game", "subspace_count",
]
