#pragma once

#include <vector>

#include "coopshap/game.hpp"

namespace coopshap {

struct ExactOptions {
    // 2^n oracle calls; refuse beyond this to guard against accidental blowup.
    int max_players_subsets = 20;
    // n! permutation walks.
    int max_players_permutations = 8;
};

// Exact Shapley values by subset enumeration. Makes exactly 2^n oracle
// evaluations; combinatorial weights accumulate as exact integer numerators
// over the common denominator n!.
std::vector<double> shapley_by_subsets(GameSpec& game, const ExactOptions& opts = {});

// Exact Shapley values by full n! permutation enumeration. Independent route
// used to cross-check shapley_by_subsets.
std::vector<double> shapley_by_permutations(GameSpec& game, const ExactOptions& opts = {});

}  // namespace coopshap
