#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coopshap {

// A subset of the player index set {0..n-1}, stored as a fixed-width bit set.
// Canonical by construction: two coalitions over the same universe with equal
// member sets compare and hash equal regardless of insertion order.
class Coalition {
public:
    Coalition() = default;

    static Coalition empty_set(int universe) {
        check_universe(universe);
        Coalition c;
        c.n_ = universe;
        c.words_.assign(word_count(universe), 0);
        return c;
    }

    static Coalition full_set(int universe) {
        Coalition c = empty_set(universe);
        for (std::size_t w = 0; w < c.words_.size(); ++w) c.words_[w] = ~0ULL;
        c.trim();
        return c;
    }

    static Coalition of(int universe, const std::vector<int>& members) {
        Coalition c = empty_set(universe);
        for (int i : members) c.add(i);
        return c;
    }

    int universe_size() const { return n_; }

    bool contains(int i) const {
        check_index(i);
        return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1ULL;
    }

    void add(int i) {
        check_index(i);
        words_[static_cast<std::size_t>(i) >> 6] |= 1ULL << (i & 63);
    }

    void remove(int i) {
        check_index(i);
        words_[static_cast<std::size_t>(i) >> 6] &= ~(1ULL << (i & 63));
    }

    Coalition with(int i) const {
        Coalition c = *this;
        c.add(i);
        return c;
    }

    Coalition without(int i) const {
        Coalition c = *this;
        c.remove(i);
        return c;
    }

    int size() const {
        int total = 0;
        for (std::uint64_t w : words_) total += __builtin_popcountll(w);
        return total;
    }

    bool empty() const {
        for (std::uint64_t w : words_) {
            if (w != 0) return false;
        }
        return true;
    }

    Coalition complement() const {
        Coalition c = full_set(n_);
        for (std::size_t w = 0; w < words_.size(); ++w) c.words_[w] &= ~words_[w];
        return c;
    }

    bool is_subset_of(const Coalition& other) const {
        if (n_ != other.n_) return false;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] & ~other.words_[w]) return false;
        }
        return true;
    }

    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (int i = 0; i < n_; ++i) {
            if (contains(i)) out.push_back(i);
        }
        return out;
    }

    bool operator==(const Coalition& other) const {
        return n_ == other.n_ && words_ == other.words_;
    }
    bool operator!=(const Coalition& other) const { return !(*this == other); }

    std::size_t hash() const {
        std::uint64_t h = 0x51'7c'c1'b7'27'22'0a'95ULL ^ static_cast<std::uint64_t>(n_);
        for (std::uint64_t w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    // Low 64 bits, usable as a dense table index when n <= 64.
    std::uint64_t low_bits() const { return words_.empty() ? 0 : words_[0]; }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int i = 0; i < n_; ++i) {
            if (!contains(i)) continue;
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        }
        s += "}";
        return s;
    }

private:
    static std::size_t word_count(int n) { return (static_cast<std::size_t>(n) + 63) / 64; }

    static void check_universe(int n) {
        if (n < 1) throw std::invalid_argument("coalition universe must have at least one player");
    }

    void check_index(int i) const {
        if (i < 0 || i >= n_) {
            throw std::out_of_range("player index " + std::to_string(i) + " outside universe of " +
                                    std::to_string(n_));
        }
    }

    void trim() {
        const int rem = n_ & 63;
        if (rem != 0 && !words_.empty()) words_.back() &= (1ULL << rem) - 1ULL;
    }

    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

struct CoalitionHash {
    std::size_t operator()(const Coalition& c) const { return c.hash(); }
};

}  // namespace coopshap
