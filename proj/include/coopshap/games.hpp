#pragma once

#include <cstdint>
#include <vector>

#include "coopshap/game.hpp"

namespace coopshap {

// Analytic cooperative games with known Shapley values, used as ground truth
// for the estimators and in benchmarks.

// One left-glove player (index 0) and n_right right-glove players.
// V(S) = 1 iff S holds the left glove and at least one right glove.
GameSpec make_glove(int n_right);

// V(S) = 1 iff the summed weights of S reach the quota.
GameSpec make_weighted_voting(double quota, std::vector<double> weights);

// V(S) = sum of weights over S. Shapley values equal the weights.
GameSpec make_additive(std::vector<double> weights);

// V(S) = 1 iff S contains every player of the required set.
GameSpec make_unanimity(int n, std::vector<int> required);

// Additive game with a designed sparse top-k structure: k_hot designated
// players carry large distinct weights plus a small pairwise interaction
// between designated pairs (so that leave-one-out and Shapley rankings can
// disagree); the rest carry seeded near-zero weights.
struct SparseSyntheticGame {
    GameSpec game;
    std::vector<int> designated;       // ground-truth top-k player set, sorted
    std::vector<double> weights;       // per-player additive weight
    double interaction = 0.0;          // pairwise bonus between designated players
    std::vector<double> exact_shapley; // closed form: w_i + interaction*(k-1)/2 on designated
};

SparseSyntheticGame make_sparse_synthetic(int n, int k_hot, std::uint64_t seed);

}  // namespace coopshap
