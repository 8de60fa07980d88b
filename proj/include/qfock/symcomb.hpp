#pragma once

// Symmetric-group and pair-partition combinatorics.
//
// Permutations use one-line notation over {1..n}. Products follow function
// composition: (s * t)(x) = s(t(x)), and the fundamental transposition
// pi_i swaps i and i+1.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qfock/error.hpp"

namespace qfock {

/// Largest n accepted by enumerate_permutations (n! terms).
inline constexpr int kPermutationCap = 6;
/// Largest n accepted by enumerate_pairings ((n-1)!! terms).
inline constexpr int kPairingCap = 8;

class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
        std::vector<bool> seen(images_.size(), false);
        for (int v : images_) {
            if (v < 1 || v > static_cast<int>(images_.size()) || seen[v - 1])
                throw ConfigError("permutation: images must be a bijection of {1..n}");
            seen[v - 1] = true;
        }
    }

    static Permutation identity(int n) {
        std::vector<int> im(static_cast<std::size_t>(n));
        std::iota(im.begin(), im.end(), 1);
        return Permutation(std::move(im));
    }

    /// The fundamental transposition pi_i in S_n (1 <= i <= n-1).
    static Permutation transposition(int n, int i) {
        if (i < 1 || i >= n) throw RangeError("transposition index out of range");
        auto p = identity(n);
        std::swap(p.images_[i - 1], p.images_[i]);
        return p;
    }

    int size() const { return static_cast<int>(images_.size()); }
    /// Image of x, 1-based.
    int operator()(int x) const { return images_[static_cast<std::size_t>(x - 1)]; }
    const std::vector<int>& images() const { return images_; }

    friend Permutation operator*(const Permutation& s, const Permutation& t) {
        if (s.size() != t.size()) throw DimensionError("permutation sizes differ");
        std::vector<int> im(s.images_.size());
        for (int x = 1; x <= t.size(); ++x) im[x - 1] = s(t(x));
        return Permutation(std::move(im));
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> images_;
};

/// Generator indices i of pi_i; the word [i1, ..., ik] denotes pi_i1 * ... * pi_ik.
struct ReducedWord {
    std::vector<int> letters;
    std::size_t length() const { return letters.size(); }
};

inline std::size_t inversion_count(const Permutation& p) {
    std::size_t count = 0;
    const auto& im = p.images();
    for (std::size_t i = 0; i < im.size(); ++i)
        for (std::size_t j = i + 1; j < im.size(); ++j)
            if (im[i] > im[j]) ++count;
    return count;
}

/// Minimal word by bubble sort. Swapping one-line positions i, i+1 is right
/// multiplication by pi_i, so p = (swap sequence) reversed.
inline ReducedWord reduced_word(const Permutation& p) {
    std::vector<int> a = p.images();
    std::vector<int> swaps;
    const int n = p.size();
    for (int pass = 0; pass < n; ++pass) {
        bool changed = false;
        for (int i = 0; i + 1 < n; ++i) {
            if (a[i] > a[i + 1]) {
                std::swap(a[i], a[i + 1]);
                swaps.push_back(i + 1);
                changed = true;
            }
        }
        if (!changed) break;
    }
    std::reverse(swaps.begin(), swaps.end());
    return ReducedWord{std::move(swaps)};
}

/// Composes pi_i1 * ... * pi_ik in S_n.
inline Permutation compose_word(int n, const ReducedWord& w) {
    auto p = Permutation::identity(n);
    for (int letter : w.letters) p = p * Permutation::transposition(n, letter);
    return p;
}

/// All n! permutations in lexicographic order of their one-line notation.
inline std::vector<Permutation> enumerate_permutations(int n) {
    if (n < 1) throw ConfigError("enumerate_permutations: n must be >= 1");
    if (n > kPermutationCap)
        throw ResourceLimitError("enumerate_permutations: n=" + std::to_string(n) +
                                 " exceeds cap " + std::to_string(kPermutationCap));
    std::vector<int> im(static_cast<std::size_t>(n));
    std::iota(im.begin(), im.end(), 1);
    std::vector<Permutation> out;
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

/// A pair partition of {1..n}. Pairs (a, z) with a < z, sorted by a.
/// Crossings are 0-based pair-index pairs (k, l) with a_k < a_l < z_k < z_l.
class Pairing {
public:
    explicit Pairing(std::vector<std::pair<int, int>> pairs) : pairs_(std::move(pairs)) {
        std::sort(pairs_.begin(), pairs_.end());
        std::vector<int> seen;
        for (auto [a, z] : pairs_) {
            if (a >= z) throw ConfigError("pairing: require a < z in every pair");
            seen.push_back(a);
            seen.push_back(z);
        }
        std::sort(seen.begin(), seen.end());
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (seen[i] != static_cast<int>(i) + 1)
                throw ConfigError("pairing: pairs must partition {1..n}");
        for (std::size_t k = 0; k < pairs_.size(); ++k)
            for (std::size_t l = 0; l < pairs_.size(); ++l) {
                auto [ak, zk] = pairs_[k];
                auto [al, zl] = pairs_[l];
                if (ak < al && al < zk && zk < zl) crossings_.emplace_back(k, l);
            }
    }

    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& crossings() const { return crossings_; }
    std::size_t size() const { return pairs_.size(); }

private:
    std::vector<std::pair<int, int>> pairs_;
    std::vector<std::pair<std::size_t, std::size_t>> crossings_;
};

inline const std::vector<std::pair<std::size_t, std::size_t>>& crossing_set(const Pairing& v) {
    return v.crossings();
}

namespace detail {
inline void enumerate_pairings_rec(std::vector<int>& rest, std::vector<std::pair<int, int>>& acc,
                                   std::vector<Pairing>& out) {
    if (rest.empty()) {
        out.emplace_back(acc);
        return;
    }
    const int first = rest.front();
    for (std::size_t j = 1; j < rest.size(); ++j) {
        const int partner = rest[j];
        std::vector<int> next;
        next.reserve(rest.size() - 2);
        for (std::size_t k = 1; k < rest.size(); ++k)
            if (k != j) next.push_back(rest[k]);
        acc.emplace_back(first, partner);
        enumerate_pairings_rec(next, acc, out);
        acc.pop_back();
    }
}
} // namespace detail

/// All pair partitions of {1..n}; empty for odd n. The first element is
/// paired with each later element in increasing order, recursively.
inline std::vector<Pairing> enumerate_pairings(int n) {
    if (n < 0) throw ConfigError("enumerate_pairings: n must be >= 0");
    if (n > kPairingCap)
        throw ResourceLimitError("enumerate_pairings: n=" + std::to_string(n) + " exceeds cap " +
                                 std::to_string(kPairingCap));
    std::vector<Pairing> out;
    if (n % 2 != 0) return out;
    std::vector<int> rest(static_cast<std::size_t>(n));
    std::iota(rest.begin(), rest.end(), 1);
    std::vector<std::pair<int, int>> acc;
    detail::enumerate_pairings_rec(rest, acc, out);
    return out;
}

} // namespace qfock
