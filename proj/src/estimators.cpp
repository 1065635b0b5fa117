#include "coopshap/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "coopshap/rng.hpp"

namespace coopshap {

void EstimatorConfig::validate(int n_players) const {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("estimator.delta must be in (0, 1)");
    }
    if (!(epsilon >= 0.0)) throw std::invalid_argument("estimator.epsilon must be >= 0");
    if (k < 1 || k > n_players) {
        throw std::invalid_argument("estimator.k must be in [1, n_players]; got k=" +
                                    std::to_string(k) + " with n=" + std::to_string(n_players));
    }
    if (max_iterations < 1) throw std::invalid_argument("estimator.max_iterations must be >= 1");
    if (!(range_r > 0.0)) throw std::invalid_argument("estimator.range_r must be > 0");
    if (!candidate_filter.empty()) {
        std::vector<int> sorted = candidate_filter;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("estimator.candidate_filter has duplicate players");
        }
        if (sorted.front() < 0 || sorted.back() >= n_players) {
            throw std::invalid_argument("estimator.candidate_filter has out-of-range players");
        }
        if (k > static_cast<int>(sorted.size())) {
            throw std::invalid_argument("estimator.k exceeds the candidate set size");
        }
    }
}

std::vector<int> EstimatorConfig::candidates(int n_players) const {
    if (candidate_filter.empty()) {
        std::vector<int> all(static_cast<std::size_t>(n_players));
        for (int i = 0; i < n_players; ++i) all[static_cast<std::size_t>(i)] = i;
        return all;
    }
    std::vector<int> sorted = candidate_filter;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

double EstimatorConfig::effective_delta(int n_candidates) const {
    return bonferroni ? delta / static_cast<double>(n_candidates) : delta;
}

std::pair<double, double> bernstein_bounds(double mean, double variance, std::uint64_t t,
                                           double delta, double range_r) {
    if (t < 2) return {-kInfinity, kInfinity};
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("bernstein_bounds: delta must be in (0, 1]");
    }
    if (!(range_r > 0.0)) throw std::invalid_argument("bernstein_bounds: range_r must be > 0");
    if (variance < 0.0) variance = 0.0;
    const double l = std::log(2.0 / delta);
    const double half = std::sqrt(2.0 * l * variance / static_cast<double>(t)) +
                        7.0 * range_r * l / (3.0 * static_cast<double>(t - 1));
    return {mean - half, mean + half};
}

std::vector<double> ShapleyResult::values() const {
    std::vector<double> v(players.size());
    for (const auto& p : players) v[static_cast<std::size_t>(p.index)] = p.value;
    return v;
}

std::vector<int> ShapleyResult::top_k(int k) const {
    std::vector<int> out;
    for (const auto& p : players) {
        if (p.rank <= k) out.push_back(p.index);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double ShapleyResult::sum_values() const {
    double s = 0.0;
    for (const auto& p : players) s += p.value;
    return s;
}

namespace {

struct MarginalSample {
    int player;
    double marginal;
    std::uint64_t charged;  // counted oracle calls made for this position
};

struct WalkDelta {
    std::vector<MarginalSample> samples;
    std::uint64_t overhead = 0;
    std::uint64_t truncation_hits = 0;
    double v_full = 0.0;
    bool has_v_empty = false;
    double v_empty = 0.0;
};

// One removal chain along `perm`. `record[p]` marks players whose marginal is
// measured this walk. With eval_all the chain value is computed at every
// position (plain MC); otherwise only the segment boundaries adjacent to
// recorded players are evaluated, one call per maximal skipped run.
// Once the chain value drops below v_t the remaining positions inherit it.
WalkDelta run_walk(GameSpec& game, const std::vector<int>& perm, const std::vector<char>& record,
                   bool eval_all, double v_t, const EvalContext& ctx) {
    const int n = game.n_players();
    WalkDelta delta;
    delta.samples.reserve(static_cast<std::size_t>(n));

    Coalition at = Coalition::full_set(n);
    bool counted = false;
    double v_last = game.evaluate_traced(at, ctx, counted);
    if (counted) ++delta.overhead;
    delta.v_full = v_last;
    int removals_known = 0;  // removals reflected in v_last

    for (int j = 0; j < n; ++j) {
        const int p = perm[static_cast<std::size_t>(j)];
        const bool need = eval_all || record[static_cast<std::size_t>(p)];
        std::uint64_t charged = 0;
        double v_before = v_last;
        if (need && removals_known < j && !(v_last < v_t)) {
            v_before = game.evaluate_traced(at, ctx, counted);
            if (counted) ++charged;
            v_last = v_before;
            removals_known = j;
        }
        at.remove(p);
        if (!need) continue;

        double v_after;
        if (v_before < v_t) {
            v_after = v_before;
            ++delta.truncation_hits;
        } else {
            v_after = game.evaluate_traced(at, ctx, counted);
            if (counted) ++charged;
        }
        v_last = v_after;
        removals_known = j + 1;
        if (record[static_cast<std::size_t>(p)]) {
            delta.samples.push_back({p, v_before - v_after, charged});
        } else {
            delta.overhead += charged;
        }
    }

    if (eval_all) {
        delta.has_v_empty = true;
        delta.v_empty = v_last;
    }
    return delta;
}

struct Engine {
    GameSpec& game;
    EstimatorConfig cfg;
    bool bandit;    // tmab active-set logic on
    bool eval_all;  // evaluate every chain position
    std::string name;
    std::vector<int> candidate_list;
    std::vector<char> is_candidate;
    double delta_eff = 0.0;
    EstimatorState state;

    Engine(GameSpec& g, const EstimatorConfig& c, bool bandit_mode, bool eval_all_mode,
           std::string estimator_name, const EstimatorState* resume)
        : game(g), cfg(c), bandit(bandit_mode), eval_all(eval_all_mode),
          name(std::move(estimator_name)) {
        const int n = game.n_players();
        cfg.validate(n);
        candidate_list = cfg.candidates(n);
        is_candidate.assign(static_cast<std::size_t>(n), 0);
        for (int c_i : candidate_list) is_candidate[static_cast<std::size_t>(c_i)] = 1;
        delta_eff = cfg.effective_delta(static_cast<int>(candidate_list.size()));

        if (resume) {
            if (static_cast<int>(resume->players.size()) != n) {
                throw std::invalid_argument("resume state player count does not match the game");
            }
            state = *resume;
        } else {
            state.players.assign(static_cast<std::size_t>(n), PlayerStats{});
            state.active = is_candidate;
            state.observed_r = cfg.range_r;
        }
    }

    std::vector<char> record_mask() const {
        if (!bandit) return is_candidate;
        std::vector<char> rec(state.active.size(), 0);
        for (int c : candidate_list) {
            rec[static_cast<std::size_t>(c)] = state.active[static_cast<std::size_t>(c)];
        }
        return rec;
    }

    void merge(const WalkDelta& delta) {
        state.overhead_evals += delta.overhead;
        state.truncation_hits += delta.truncation_hits;
        state.v_full_sum += delta.v_full;
        ++state.v_full_count;
        if (delta.has_v_empty) {
            state.v_empty_sum += delta.v_empty;
            ++state.v_empty_count;
        }
        for (const auto& s : delta.samples) {
            auto& ps = state.players[static_cast<std::size_t>(s.player)];
            ps.evals += s.charged;
            ps.update(s.marginal);
            if (std::abs(s.marginal) > state.observed_r) {
                state.observed_r = std::abs(s.marginal);
                ++state.range_warnings;
            }
        }
        for (const auto& s : delta.samples) {
            auto& ps = state.players[static_cast<std::size_t>(s.player)];
            const auto b = bernstein_bounds(ps.mean, ps.variance(), ps.count, delta_eff,
                                            state.observed_r);
            ps.lb = b.first;
            ps.ub = b.second;
        }
    }

    double pivot_value() const {
        // k-th largest current estimate over all candidates (including
        // deactivated ones), ties broken by ascending player index.
        std::vector<std::pair<double, int>> vals;
        vals.reserve(candidate_list.size());
        for (int c : candidate_list) {
            vals.emplace_back(state.players[static_cast<std::size_t>(c)].mean, c);
        }
        std::sort(vals.begin(), vals.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        return vals[static_cast<std::size_t>(cfg.k - 1)].first;
    }

    void update_active() {
        const double pivot = pivot_value();
        for (int c : candidate_list) {
            auto& ps = state.players[static_cast<std::size_t>(c)];
            bool in;
            if (ps.count < 2) {
                in = true;  // no bounds yet, keep sampling
            } else {
                in = (ps.lb + cfg.epsilon < pivot) && (pivot < ps.ub - cfg.epsilon);
            }
            state.active[static_cast<std::size_t>(c)] = in ? 1 : 0;
        }
    }

    bool bandit_done() const {
        for (int c : candidate_list) {
            if (state.active[static_cast<std::size_t>(c)]) return false;
        }
        return true;
    }

    bool bernstein_done() const {
        for (int c : candidate_list) {
            const auto& ps = state.players[static_cast<std::size_t>(c)];
            if (ps.count < 2) return false;
            if ((ps.ub - ps.lb) / 2.0 > cfg.epsilon) return false;
        }
        return true;
    }

    // Stop check at a merge boundary; returns true when no more walks should
    // be scheduled.
    bool done() const {
        if (bandit) {
            return bandit_done() || state.iteration >= cfg.max_iterations;
        }
        if (cfg.convergence == ConvergenceRule::fixed_iterations) {
            return state.iteration >= cfg.fixed_iterations;
        }
        return bernstein_done() || state.iteration >= cfg.max_iterations;
    }

    bool converged() const {
        if (bandit) return bandit_done();
        if (cfg.convergence == ConvergenceRule::fixed_iterations) {
            return state.iteration >= cfg.fixed_iterations;
        }
        return bernstein_done();
    }

    WalkDelta run_one(std::uint64_t t, const std::vector<char>& record) {
        Prng perm_rng(derive_seed(cfg.seed, Stream::permutation, t));
        const std::vector<int> perm = perm_rng.permutation(game.n_players());
        EvalContext ctx;
        if (game.oracle().iteration_dependent()) {
            ctx.batch_seed = derive_seed(cfg.seed, Stream::batch, t);
        }
        return run_walk(game, perm, record, eval_all, cfg.v_t, ctx);
    }

    void run_sequential(const RunHooks& hooks) {
        while (!done()) {
            const std::uint64_t t = state.iteration + 1;
            const WalkDelta delta = run_one(t, record_mask());
            merge(delta);
            state.iteration = t;
            if (bandit) update_active();
            if (hooks.on_iteration) hooks.on_iteration(state, game.eval_count());
        }
    }

    void run_parallel(int workers, const RunHooks& hooks) {
        std::mutex mu;
        std::uint64_t next_t = state.iteration;
        bool stop = false;

        const bool fixed = !bandit && cfg.convergence == ConvergenceRule::fixed_iterations;
        auto worker_loop = [&]() {
            for (;;) {
                std::uint64_t t;
                std::vector<char> record;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (stop || done()) break;
                    if (fixed && next_t >= cfg.fixed_iterations) break;
                    if (!fixed && next_t >= cfg.max_iterations) break;
                    t = ++next_t;
                    record = record_mask();
                }
                WalkDelta delta = run_one(t, record);
                {
                    std::lock_guard<std::mutex> lock(mu);
                    // Stale-epoch walks are still merged: the active set only
                    // chose which marginals were measured, not their validity.
                    merge(delta);
                    ++state.iteration;
                    if (bandit) update_active();
                    if (hooks.on_iteration) hooks.on_iteration(state, game.eval_count());
                    if (done()) stop = true;
                }
            }
        };

        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
        for (auto& th : pool) th.join();
    }

    ShapleyResult finish(std::uint64_t wall_ms) const {
        const int n = game.n_players();
        ShapleyResult res;
        res.estimator = name;
        res.config = cfg;
        res.iterations = state.iteration;
        res.eval_count = game.eval_count();
        res.truncation_hits = state.truncation_hits;
        res.wall_ms = wall_ms;
        res.status = converged() ? "converged" : "iteration-capped";
        res.mean_v_full =
            state.v_full_count ? state.v_full_sum / static_cast<double>(state.v_full_count) : 0.0;
        res.mean_v_empty =
            state.v_empty_count ? state.v_empty_sum / static_cast<double>(state.v_empty_count) : 0.0;
        res.observed_r = state.observed_r;
        res.range_warnings = state.range_warnings;

        res.players.resize(static_cast<std::size_t>(n));
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            const double va = state.players[static_cast<std::size_t>(a)].mean;
            const double vb = state.players[static_cast<std::size_t>(b)].mean;
            if (va != vb) return va > vb;
            return a < b;
        });
        std::vector<int> rank_of(static_cast<std::size_t>(n));
        for (int r = 0; r < n; ++r) rank_of[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r + 1;

        for (int i = 0; i < n; ++i) {
            const auto& ps = state.players[static_cast<std::size_t>(i)];
            auto& pr = res.players[static_cast<std::size_t>(i)];
            pr.index = i;
            pr.label = game.players().label(i);
            pr.value = ps.mean;
            pr.variance = ps.variance();
            pr.lb = ps.lb;
            pr.ub = ps.ub;
            pr.samples = ps.count;
            pr.evals = ps.evals;
            pr.rank = rank_of[static_cast<std::size_t>(i)];
        }
        return res;
    }
};

ShapleyResult run_estimator(GameSpec& game, const EstimatorConfig& cfg, bool bandit, bool eval_all,
                            const std::string& name, int workers, const RunHooks& hooks,
                            const EstimatorState* resume) {
    if (workers < 1) throw std::invalid_argument("runner.workers must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    Engine engine(game, cfg, bandit, eval_all, name, resume);
    if (workers == 1) {
        engine.run_sequential(hooks);
    } else {
        engine.run_parallel(workers, hooks);
    }
    const auto end = std::chrono::steady_clock::now();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(end - start).count();
    return engine.finish(static_cast<std::uint64_t>(ms));
}

}  // namespace

ShapleyResult mc_shapley(GameSpec& game, const EstimatorConfig& cfg, int workers,
                         const RunHooks& hooks, const EstimatorState* resume) {
    return run_estimator(game, cfg, /*bandit=*/false, /*eval_all=*/true, "mc", workers, hooks,
                         resume);
}

ShapleyResult truncated_mc_shapley(GameSpec& game, const EstimatorConfig& cfg, int workers,
                                   const RunHooks& hooks, const EstimatorState* resume) {
    return run_estimator(game, cfg, /*bandit=*/false, /*eval_all=*/true, "mc", workers, hooks,
                         resume);
}

ShapleyResult tmab_shapley(GameSpec& game, const EstimatorConfig& cfg, int workers,
                           const RunHooks& hooks, const EstimatorState* resume) {
    return run_estimator(game, cfg, /*bandit=*/true, /*eval_all=*/false, "tmab", workers, hooks,
                         resume);
}

std::vector<double> baseline_scores(GameSpec& game, const std::string& method, std::uint64_t seed) {
    const int n = game.n_players();
    if (method == "leave_one_out") {
        std::vector<double> out(static_cast<std::size_t>(n));
        const Coalition full = game.grand_coalition();
        const double v_full = game.evaluate(full);
        for (int i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i)] = v_full - game.evaluate(full.without(i));
        }
        return out;
    }
    if (method == "random") {
        Prng rng(derive_seed(seed, Stream::ranking, 0));
        std::vector<double> out(static_cast<std::size_t>(n));
        for (auto& v : out) v = rng.uniform();
        return out;
    }
    if (method == "weight_norm" || method == "response_norm") {
        throw std::invalid_argument("baseline '" + method +
                                    "' reads network internals and needs a neuron game");
    }
    throw std::invalid_argument("unknown baseline method '" + method + "'");
}

}  // namespace coopshap
