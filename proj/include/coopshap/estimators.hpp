#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "coopshap/game.hpp"

namespace coopshap {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ConvergenceRule { fixed_iterations, bernstein_all_players };

struct EstimatorConfig {
    double delta = 0.05;     // per-player failure probability of the bounds
    double epsilon = 1e-3;   // tolerance, in V-units
    int k = 1;               // top-k target for the bandit stopping rule
    double v_t = -kInfinity; // truncation threshold, -inf = off
    std::uint64_t max_iterations = 100000;
    std::uint64_t seed = 0;
    std::vector<int> candidate_filter;  // empty = every player is a candidate
    bool bonferroni = false;            // use delta/n_candidates in the bounds
    double range_r = 1.0;               // marginal-contribution range R
    ConvergenceRule convergence = ConvergenceRule::bernstein_all_players;
    std::uint64_t fixed_iterations = 1000;

    bool truncation_on() const { return v_t != -kInfinity; }
    void validate(int n_players) const;  // throws invalid_argument naming the key
    std::vector<int> candidates(int n_players) const;
    double effective_delta(int n_candidates) const;
};

// Per-player running statistics. mean/m2 follow Welford's one-pass scheme;
// variance uses the unbiased (t-1) denominator.
struct PlayerStats {
    double mean = 0.0;
    double m2 = 0.0;
    std::uint64_t count = 0;
    double lb = -kInfinity;
    double ub = kInfinity;
    std::uint64_t evals = 0;  // oracle calls charged to this player

    double variance() const { return count >= 2 ? m2 / static_cast<double>(count - 1) : 0.0; }

    void update(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
};

struct EstimatorState {
    std::vector<PlayerStats> players;
    std::vector<char> active;  // the bandit's sampling set U
    std::uint64_t iteration = 0;
    std::uint64_t truncation_hits = 0;  // chain positions frozen by the threshold
    std::uint64_t overhead_evals = 0;   // oracle calls not charged to a player
    double observed_r = 0.0;            // range R, widened if marginals exceed it
    std::uint64_t range_warnings = 0;
    double v_full_sum = 0.0;
    std::uint64_t v_full_count = 0;
    double v_empty_sum = 0.0;
    std::uint64_t v_empty_count = 0;
};

struct PlayerResult {
    int index = 0;
    std::string label;
    double value = 0.0;
    double variance = 0.0;
    double lb = -kInfinity;
    double ub = kInfinity;
    std::uint64_t samples = 0;
    std::uint64_t evals = 0;
    int rank = 0;  // 1 = largest value; ties broken by ascending index
};

struct ShapleyResult {
    std::string estimator;  // "mc", "tmab", "exact_subsets", "exact_permutations"
    std::vector<PlayerResult> players;
    std::uint64_t iterations = 0;
    std::uint64_t eval_count = 0;
    std::uint64_t truncation_hits = 0;
    std::uint64_t wall_ms = 0;
    std::string status = "converged";  // or "iteration-capped"
    double mean_v_full = 0.0;
    double mean_v_empty = 0.0;
    double observed_r = 0.0;
    std::uint64_t range_warnings = 0;
    EstimatorConfig config;

    std::vector<double> values() const;
    std::vector<int> top_k(int k) const;  // player indices with rank 1..k
    double sum_values() const;
};

// Empirical Bernstein interval: mean +/- half with
//   half = sqrt(2 ln(2/delta) variance / t) + 7 R ln(2/delta) / (3 (t-1)).
// t < 2 yields the infinite-width sentinel interval.
std::pair<double, double> bernstein_bounds(double mean, double variance, std::uint64_t t,
                                           double delta, double range_r);

struct RunHooks {
    // Invoked after every merged iteration with the coordinator's state.
    std::function<void(const EstimatorState&, std::uint64_t eval_count)> on_iteration;
};

// Monte-Carlo permutation estimator: every iteration walks a full removal
// chain and updates every candidate player's statistics.
ShapleyResult mc_shapley(GameSpec& game, const EstimatorConfig& cfg, int workers = 1,
                         const RunHooks& hooks = {}, const EstimatorState* resume = nullptr);

// mc_shapley with the early-truncation rule active (cfg.v_t must be set).
// With v_t off this is the identical code path as mc_shapley.
ShapleyResult truncated_mc_shapley(GameSpec& game, const EstimatorConfig& cfg, int workers = 1,
                                   const RunHooks& hooks = {}, const EstimatorState* resume = nullptr);

// Truncated multi-armed-bandit estimator: samples marginals only for players
// whose confidence interval still straddles the k-th largest estimate,
// evaluating the chain lazily at segment boundaries next to sampled players.
ShapleyResult tmab_shapley(GameSpec& game, const EstimatorConfig& cfg, int workers = 1,
                           const RunHooks& hooks = {}, const EstimatorState* resume = nullptr);

// Baselines applicable to any game. weight_norm / response_norm need network
// internals and live with the neuron game; passing them here is an error.
std::vector<double> baseline_scores(GameSpec& game, const std::string& method,
                                    std::uint64_t seed = 0);

}  // namespace coopshap
