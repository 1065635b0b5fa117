#include "coopshap/games.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "coopshap/rng.hpp"

namespace coopshap {

namespace {

class GloveOracle : public ValueOracle {
public:
    explicit GloveOracle(int n_right) : n_right_(n_right) {}

    double value(const Coalition& s, const EvalContext&) const override {
        if (!s.contains(0)) return 0.0;
        for (int i = 1; i <= n_right_; ++i) {
            if (s.contains(i)) return 1.0;
        }
        return 0.0;
    }

private:
    int n_right_;
};

class VotingOracle : public ValueOracle {
public:
    VotingOracle(double quota, std::vector<double> weights)
        : quota_(quota), weights_(std::move(weights)) {}

    double value(const Coalition& s, const EvalContext&) const override {
        double total = 0.0;
        for (int i = 0; i < s.universe_size(); ++i) {
            if (s.contains(i)) total += weights_[static_cast<std::size_t>(i)];
        }
        return total >= quota_ ? 1.0 : 0.0;
    }

private:
    double quota_;
    std::vector<double> weights_;
};

class AdditiveOracle : public ValueOracle {
public:
    explicit AdditiveOracle(std::vector<double> weights) : weights_(std::move(weights)) {}

    double value(const Coalition& s, const EvalContext&) const override {
        double total = 0.0;
        for (int i = 0; i < s.universe_size(); ++i) {
            if (s.contains(i)) total += weights_[static_cast<std::size_t>(i)];
        }
        return total;
    }

private:
    std::vector<double> weights_;
};

class UnanimityOracle : public ValueOracle {
public:
    explicit UnanimityOracle(Coalition required) : required_(std::move(required)) {}

    double value(const Coalition& s, const EvalContext&) const override {
        return required_.is_subset_of(s) ? 1.0 : 0.0;
    }

private:
    Coalition required_;
};

// Additive weights plus a constant bonus per designated pair present.
class SparseOracle : public ValueOracle {
public:
    SparseOracle(std::vector<double> weights, std::vector<int> designated, double interaction)
        : weights_(std::move(weights)), designated_(std::move(designated)), interaction_(interaction) {}

    double value(const Coalition& s, const EvalContext&) const override {
        double total = 0.0;
        for (int i = 0; i < s.universe_size(); ++i) {
            if (s.contains(i)) total += weights_[static_cast<std::size_t>(i)];
        }
        int present = 0;
        for (int d : designated_) {
            if (s.contains(d)) ++present;
        }
        total += interaction_ * (present * (present - 1)) / 2.0;
        return total;
    }

private:
    std::vector<double> weights_;
    std::vector<int> designated_;
    double interaction_;
};

}  // namespace

GameSpec make_glove(int n_right) {
    if (n_right < 1) throw std::invalid_argument("glove game needs n_right >= 1");
    std::vector<std::string> labels;
    labels.push_back("left");
    for (int i = 1; i <= n_right; ++i) labels.push_back("right" + std::to_string(i));
    return GameSpec(PlayerSet(n_right + 1, std::move(labels)),
                    std::make_unique<GloveOracle>(n_right));
}

GameSpec make_weighted_voting(double quota, std::vector<double> weights) {
    if (quota <= 0) throw std::invalid_argument("voting game needs quota > 0");
    for (double w : weights) {
        if (w < 0) throw std::invalid_argument("voting game needs all weights >= 0");
    }
    const int n = static_cast<int>(weights.size());
    return GameSpec(PlayerSet(n), std::make_unique<VotingOracle>(quota, std::move(weights)));
}

GameSpec make_additive(std::vector<double> weights) {
    const int n = static_cast<int>(weights.size());
    return GameSpec(PlayerSet(n), std::make_unique<AdditiveOracle>(std::move(weights)));
}

GameSpec make_unanimity(int n, std::vector<int> required) {
    if (required.empty()) throw std::invalid_argument("unanimity game needs a non-empty required set");
    Coalition r = Coalition::of(n, required);
    return GameSpec(PlayerSet(n), std::make_unique<UnanimityOracle>(std::move(r)));
}

SparseSyntheticGame make_sparse_synthetic(int n, int k_hot, std::uint64_t seed) {
    if (k_hot < 1 || k_hot > n) throw std::invalid_argument("sparse game needs 1 <= k_hot <= n");

    Prng pick(derive_seed(seed, Stream::data, 0));
    std::vector<int> order = pick.permutation(n);
    std::vector<int> designated(order.begin(), order.begin() + k_hot);
    std::sort(designated.begin(), designated.end());

    // Designated weights descend from 0.9 to 0.5; noise weights live in
    // [0, gap/10] where gap = 0.5 is the designed separation.
    const double w_hi = 0.9;
    const double w_lo = 0.5;
    const double gap = w_lo;
    const double interaction = k_hot > 1 ? 0.02 : 0.0;

    std::vector<double> weights(static_cast<std::size_t>(n), 0.0);
    for (int r = 0; r < k_hot; ++r) {
        const double w = k_hot == 1 ? w_hi : w_hi - (w_hi - w_lo) * r / (k_hot - 1);
        weights[static_cast<std::size_t>(designated[static_cast<std::size_t>(r)])] = w;
    }
    Prng noise(derive_seed(seed, Stream::noise, 0));
    std::vector<char> is_designated(static_cast<std::size_t>(n), 0);
    for (int d : designated) is_designated[static_cast<std::size_t>(d)] = 1;
    for (int i = 0; i < n; ++i) {
        if (!is_designated[static_cast<std::size_t>(i)]) {
            weights[static_cast<std::size_t>(i)] = noise.uniform(0.0, gap / 10.0);
        }
    }

    std::vector<double> exact(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        exact[static_cast<std::size_t>(i)] = weights[static_cast<std::size_t>(i)];
        if (is_designated[static_cast<std::size_t>(i)]) {
            exact[static_cast<std::size_t>(i)] += interaction * (k_hot - 1) / 2.0;
        }
    }

    SparseSyntheticGame out{
        GameSpec(PlayerSet(n), std::make_unique<SparseOracle>(weights, designated, interaction)),
        std::move(designated), std::move(weights), interaction, std::move(exact)};
    return out;
}

}  // namespace coopshap
