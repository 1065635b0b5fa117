#include "coopshap/game.hpp"

#include <atomic>
#include <cmath>
#include <list>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace coopshap {

PlayerSet::PlayerSet(int count, std::vector<std::string> names) : n(count), labels(std::move(names)) {
    if (n < 1) throw std::invalid_argument("player set needs n >= 1");
    if (!labels.empty()) {
        if (static_cast<int>(labels.size()) != n) {
            throw std::invalid_argument("player labels must have exactly n entries");
        }
        std::set<std::string> uniq(labels.begin(), labels.end());
        if (static_cast<int>(uniq.size()) != n) {
            throw std::invalid_argument("player labels must be distinct");
        }
    }
}

namespace {

struct CacheKey {
    std::vector<std::uint64_t> words;
    std::uint64_t batch_seed;

    bool operator==(const CacheKey& other) const {
        return batch_seed == other.batch_seed && words == other.words;
    }
};

struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const {
        std::uint64_t h = 0x243f6a8885a308d3ULL ^ k.batch_seed;
        for (std::uint64_t w : k.words) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

struct GameSpec::Impl {
    PlayerSet players;
    std::unique_ptr<ValueOracle> oracle;
    CachePolicy policy;

    mutable std::mutex mu;
    // LRU: most recent at front.
    std::list<std::pair<CacheKey, double>> lru;
    std::unordered_map<CacheKey, std::list<std::pair<CacheKey, double>>::iterator, CacheKeyHash> index;
    std::atomic<std::uint64_t> eval_count{0};

    Impl(PlayerSet p, std::unique_ptr<ValueOracle> o, CachePolicy c)
        : players(std::move(p)), oracle(std::move(o)), policy(c) {}

    bool cache_enabled() const {
        return policy.kind == CachePolicy::Kind::bounded && policy.max_entries > 0;
    }

    bool lookup(const CacheKey& key, double& out) {
        std::lock_guard<std::mutex> lock(mu);
        auto it = index.find(key);
        if (it == index.end()) return false;
        lru.splice(lru.begin(), lru, it->second);
        out = it->second->second;
        return true;
    }

    void store(const CacheKey& key, double value) {
        std::lock_guard<std::mutex> lock(mu);
        auto it = index.find(key);
        if (it != index.end()) {
            lru.splice(lru.begin(), lru, it->second);
            it->second->second = value;
            return;
        }
        lru.emplace_front(key, value);
        index.emplace(key, lru.begin());
        while (index.size() > policy.max_entries) {
            index.erase(lru.back().first);
            lru.pop_back();
        }
    }
};

GameSpec::GameSpec(PlayerSet players, std::unique_ptr<ValueOracle> oracle, CachePolicy cache)
    : impl_(std::make_unique<Impl>(std::move(players), std::move(oracle), cache)) {
    if (!impl_->oracle) throw std::invalid_argument("game requires an oracle");
}

GameSpec::~GameSpec() = default;
GameSpec::GameSpec(GameSpec&&) noexcept = default;
GameSpec& GameSpec::operator=(GameSpec&&) noexcept = default;

int GameSpec::n_players() const { return impl_->players.n; }
const PlayerSet& GameSpec::players() const { return impl_->players; }
const ValueOracle& GameSpec::oracle() const { return *impl_->oracle; }

double GameSpec::evaluate_traced(const Coalition& s, const EvalContext& ctx, bool& counted) {
    if (s.universe_size() != impl_->players.n) {
        throw std::invalid_argument("coalition universe (" + std::to_string(s.universe_size()) +
                                    ") does not match game player count (" +
                                    std::to_string(impl_->players.n) + ")");
    }
    const std::uint64_t key_seed = impl_->oracle->iteration_dependent() ? ctx.batch_seed : 0;
    const CacheKey key{s.words(), key_seed};

    if (impl_->cache_enabled()) {
        double hit;
        if (impl_->lookup(key, hit)) {
            counted = false;
            return hit;
        }
    }

    const double v = impl_->oracle->value(s, ctx);
    if (!std::isfinite(v)) {
        throw std::runtime_error("oracle returned non-finite value for coalition " + s.to_string());
    }
    impl_->eval_count.fetch_add(1, std::memory_order_relaxed);
    counted = true;
    if (impl_->cache_enabled()) impl_->store(key, v);
    return v;
}

double GameSpec::evaluate(const Coalition& s, const EvalContext& ctx) {
    bool counted;
    return evaluate_traced(s, ctx, counted);
}

double GameSpec::marginal(const Coalition& s, int i, const EvalContext& ctx) {
    if (s.contains(i)) {
        throw std::invalid_argument("marginal of player " + std::to_string(i) +
                                    " requires a coalition that excludes it");
    }
    return evaluate(s.with(i), ctx) - evaluate(s, ctx);
}

std::uint64_t GameSpec::eval_count() const {
    return impl_->eval_count.load(std::memory_order_relaxed);
}

void GameSpec::set_eval_count(std::uint64_t value) {
    impl_->eval_count.store(value, std::memory_order_relaxed);
}

void GameSpec::set_cache_policy(CachePolicy policy) {
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->policy = policy;
    impl_->lru.clear();
    impl_->index.clear();
}

std::size_t GameSpec::cache_entries() const {
    std::lock_guard<std::mutex> lock(impl_->mu);
    return impl_->index.size();
}

}  // namespace coopshap
