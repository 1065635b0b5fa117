#include "coopshap/exact.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coopshap {

namespace {

Coalition coalition_from_mask(int n, std::uint64_t mask) {
    Coalition c = Coalition::empty_set(n);
    for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1ULL) c.add(i);
    }
    return c;
}

void check_cap(int n, int cap, const char* route) {
    if (n > cap) {
        throw std::invalid_argument(std::string(route) + " refuses n=" + std::to_string(n) +
                                    " (cap " + std::to_string(cap) +
                                    "); use a sampling estimator instead");
    }
}

}  // namespace

std::vector<double> shapley_by_subsets(GameSpec& game, const ExactOptions& opts) {
    const int n = game.n_players();
    check_cap(n, opts.max_players_subsets, "shapley_by_subsets");

    const std::uint64_t total = 1ULL << n;
    std::vector<double> table(total);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        table[mask] = game.evaluate(coalition_from_mask(n, mask));
    }

    // weight_num[s] = s! * (n-1-s)!; every marginal over a size-s coalition
    // contributes weight_num[s] / n!. For n <= 20 both fit in 64 bits.
    std::vector<std::uint64_t> factorial(static_cast<std::size_t>(n) + 1, 1);
    for (std::size_t i = 1; i < factorial.size(); ++i) factorial[i] = factorial[i - 1] * i;
    std::vector<std::uint64_t> weight_num(static_cast<std::size_t>(n), 0);
    for (int s = 0; s < n; ++s) {
        weight_num[static_cast<std::size_t>(s)] =
            factorial[static_cast<std::size_t>(s)] * factorial[static_cast<std::size_t>(n - 1 - s)];
    }
    const long double denom = static_cast<long double>(factorial[static_cast<std::size_t>(n)]);

    std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t bit = 1ULL << i;
        long double acc = 0.0L;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            if (mask & bit) continue;
            const int s = __builtin_popcountll(mask);
            const long double delta = static_cast<long double>(table[mask | bit]) -
                                      static_cast<long double>(table[mask]);
            acc += static_cast<long double>(weight_num[static_cast<std::size_t>(s)]) * delta;
        }
        phi[static_cast<std::size_t>(i)] = static_cast<double>(acc / denom);
    }
    return phi;
}

std::vector<double> shapley_by_permutations(GameSpec& game, const ExactOptions& opts) {
    const int n = game.n_players();
    check_cap(n, opts.max_players_permutations, "shapley_by_permutations");

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);

    std::vector<long double> acc(static_cast<std::size_t>(n), 0.0L);
    std::uint64_t count = 0;
    do {
        Coalition s = Coalition::empty_set(n);
        double prev = game.evaluate(s);
        for (int j = 0; j < n; ++j) {
            const int p = perm[static_cast<std::size_t>(j)];
            s.add(p);
            const double cur = game.evaluate(s);
            acc[static_cast<std::size_t>(p)] += static_cast<long double>(cur) - prev;
            prev = cur;
        }
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<double> phi(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        phi[static_cast<std::size_t>(i)] =
            static_cast<double>(acc[static_cast<std::size_t>(i)] / static_cast<long double>(count));
    }
    return phi;
}

}  // namespace coopshap
