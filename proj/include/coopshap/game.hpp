#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "coopshap/coalition.hpp"

namespace coopshap {

struct PlayerSet {
    int n = 0;
    std::vector<std::string> labels;  // empty, or exactly n distinct entries

    explicit PlayerSet(int count, std::vector<std::string> names = {});

    std::string label(int i) const {
        if (!labels.empty()) return labels[static_cast<std::size_t>(i)];
        return "p" + std::to_string(i);
    }
};

// Extra inputs an oracle may depend on besides the coalition itself. For
// batch-sampling games the estimator fixes one batch_seed per outer iteration;
// oracles that ignore it see batch_seed == 0 always.
struct EvalContext {
    std::uint64_t batch_seed = 0;
};

// The black-box score function. Implementations must be reentrant: the score
// is a pure function of (coalition, context).
class ValueOracle {
public:
    virtual ~ValueOracle() = default;

    virtual double value(const Coalition& s, const EvalContext& ctx) const = 0;

    // True when the score depends on ctx.batch_seed (per-iteration batches).
    virtual bool iteration_dependent() const { return false; }

    // Bounds on any single marginal contribution (the R of the confidence
    // bound). Metrics here are normalized scores, so (-1, 1) by default.
    std::pair<double, double> declared_range{-1.0, 1.0};
};

struct CachePolicy {
    enum class Kind { off, bounded };
    Kind kind = Kind::bounded;
    std::size_t max_entries = 1 << 20;

    static CachePolicy off() { return {Kind::off, 0}; }
    static CachePolicy bounded(std::size_t max_entries) { return {Kind::bounded, max_entries}; }
};

// Binds a player set to an oracle, with memoization and call accounting.
// evaluate() is safe for concurrent callers; eval_count() increments exactly
// once per non-cached oracle invocation.
class GameSpec {
public:
    GameSpec(PlayerSet players, std::unique_ptr<ValueOracle> oracle,
             CachePolicy cache = CachePolicy::bounded(1 << 20));
    ~GameSpec();

    GameSpec(GameSpec&&) noexcept;
    GameSpec& operator=(GameSpec&&) noexcept;
    GameSpec(const GameSpec&) = delete;
    GameSpec& operator=(const GameSpec&) = delete;

    int n_players() const;
    const PlayerSet& players() const;
    const ValueOracle& oracle() const;

    double evaluate(const Coalition& s, const EvalContext& ctx = {});

    // Like evaluate(), additionally reporting whether this call reached the
    // oracle (false when served from cache). Used for call accounting.
    double evaluate_traced(const Coalition& s, const EvalContext& ctx, bool& counted);

    // V(s + {i}) - V(s). Requires i not already in s.
    double marginal(const Coalition& s, int i, const EvalContext& ctx = {});

    std::uint64_t eval_count() const;
    void set_eval_count(std::uint64_t value);  // checkpoint restore

    void set_cache_policy(CachePolicy policy);  // drops current entries
    std::size_t cache_entries() const;

    Coalition grand_coalition() const { return Coalition::full_set(n_players()); }
    Coalition empty_coalition() const { return Coalition::empty_set(n_players()); }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace coopshap
