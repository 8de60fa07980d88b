#pragma once

// Vacuum moments: pair-partition (Wick) sums, the linear-algebra oracle,
// cyclic invariance and grid-refinement convergence.
//
// Sign convention: position 1 is the operator applied first (rightmost). A
// pair (a, z), a < z, contributes only when position a is a creation and
// position z an annihilation.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qfock/error.hpp"
#include "qfock/fock.hpp"
#include "qfock/kernel.hpp"
#include "qfock/symcomb.hpp"

namespace qfock {

enum class Sign { annihilation, creation };

using SignPattern = std::vector<Sign>;

/// Parses "+-+-" (position 1 first).
inline SignPattern parse_signs(const std::string& s) {
    SignPattern v;
    for (char c : s) {
        if (c == '+')
            v.push_back(Sign::creation);
        else if (c == '-')
            v.push_back(Sign::annihilation);
        else
            throw ConfigError("sign pattern: expected '+' or '-'");
    }
    return v;
}

inline std::string format_signs(const SignPattern& v) {
    std::string s;
    for (Sign x : v) s.push_back(x == Sign::creation ? '+' : '-');
    return s;
}

/// All 2^n sign patterns, bit i of the counter set means creation at position i+1.
inline std::vector<SignPattern> all_sign_patterns(int n) {
    std::vector<SignPattern> out;
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
        SignPattern v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[i] = (bits >> i) & 1u ? Sign::creation : Sign::annihilation;
        out.push_back(std::move(v));
    }
    return out;
}

inline bool compatible(const Pairing& v, const SignPattern& signs) {
    for (auto [a, z] : v.pairs())
        if (signs[a - 1] != Sign::creation || signs[z - 1] != Sign::annihilation) return false;
    return true;
}

namespace detail {

inline void check_functions(const QKernel& kernel, const std::vector<Vector>& fs) {
    if (static_cast<int>(fs.size()) > kPairingCap)
        throw ResourceLimitError("moment degree " + std::to_string(fs.size()) + " exceeds cap " +
                                 std::to_string(kPairingCap));
    for (const auto& f : fs)
        if (f.size() != kernel.size()) throw DimensionError("test function has wrong length");
}

/// sum over y in grid^p of prod_k u_k(y_k) prod_{(k,l) crossing} Q(y_k, y_l),
/// with u_k = w f_{a_k} f_{z_k}.
inline double pairing_quadrature(const QKernel& kernel, const std::vector<Vector>& fs, const Pairing& v) {
    const int p = static_cast<int>(v.size());
    if (p == 0) return 1.0;
    const int m = kernel.size();
    const double w = kernel.grid().weight();
    std::vector<Vector> u;
    for (auto [a, z] : v.pairs()) u.push_back(w * fs[a - 1].cwiseProduct(fs[z - 1]));
    // partners[k] lists earlier pairs l < k crossing pair k.
    std::vector<std::vector<int>> partners(static_cast<std::size_t>(p));
    for (auto [k, l] : v.crossings()) {
        const auto hi = std::max(k, l), lo = std::min(k, l);
        partners[hi].push_back(static_cast<int>(lo));
    }
    std::vector<int> y(static_cast<std::size_t>(p), 0);
    const Matrix& Q = kernel.values();

    std::function<double(int, double)> rec = [&](int k, double prefix) -> double {
        if (k == p) return prefix;
        double acc = 0.0;
        for (int yk = 0; yk < m; ++yk) {
            double t = prefix * u[k](yk);
            if (t == 0.0) continue;
            for (int l : partners[k]) t *= Q(yk, y[l]);
            y[k] = yk;
            acc += rec(k + 1, t);
        }
        return acc;
    };
    return rec(0, 1.0);
}

} // namespace detail

/// <a^{v_n}(f_n) ... a^{v_1}(f_1) Omega, Omega> for grid functions f_i, smeared
/// with the sqrt(eps^j) scale.
inline double wick_mixed_moment(const QKernel& kernel, const std::vector<Vector>& fs, const SignPattern& signs) {
    detail::check_functions(kernel, fs);
    if (signs.size() != fs.size()) throw DimensionError("sign pattern length differs from function count");
    const int n = static_cast<int>(fs.size());
    if (n % 2) return 0.0;
    double acc = 0.0;
    for (const auto& v : enumerate_pairings(n))
        if (compatible(v, signs)) acc += detail::pairing_quadrature(kernel, fs, v);
    return acc;
}

/// <w(f_n) ... w(f_1) Omega, Omega>.
inline double wick_field_moment(const QKernel& kernel, const std::vector<Vector>& fs) {
    detail::check_functions(kernel, fs);
    const int n = static_cast<int>(fs.size());
    if (n % 2) return 0.0;
    double acc = 0.0;
    for (const auto& v : enumerate_pairings(n)) acc += detail::pairing_quadrature(kernel, fs, v);
    return acc;
}

/// sum over pairings of {1..n} of q^{#crossings}: the field moment of a
/// repeated unit function under a constant kernel q.
inline double crossing_generating_sum(int n, double q) {
    double acc = 0.0;
    for (const auto& v : enumerate_pairings(n)) acc += std::pow(q, static_cast<double>(v.crossings().size()));
    return acc;
}

namespace detail {

/// Runs the word on Omega with explicit vectors. A null `signs` applies w(f)
/// at every position; otherwise each position is a+ or a.
inline double matrix_moment_impl(const FockSpace& s, const std::vector<Vector>& fs, const SignPattern* signs) {
    const int n = static_cast<int>(fs.size());
    std::vector<Vector> hs;
    for (const auto& f : fs) hs.push_back(smear(s.grid(), f));
    FockVector v = FockVector::vacuum(s);
    for (int i = 0; i < n; ++i) {
        const bool do_create = !signs || (*signs)[i] == Sign::creation;
        const bool do_annihilate = !signs || (*signs)[i] == Sign::annihilation;
        FockVector next = FockVector::zero(s);
        for (int k = 0; k <= s.n_max(); ++k) {
            if ((v[k].array() == 0.0).all()) continue;
            if (do_create) {
                if (k == s.n_max())
                    throw TruncationError("truncation-inexact: creation above level " +
                                          std::to_string(s.n_max()));
                next[k + 1] += tensor_left(hs[i], v[k]);
            }
            if (do_annihilate && k > 0) next[k - 1] += annihilate_apply(s, hs[i], k, v[k]);
        }
        v = std::move(next);
    }
    return v[0](0);
}

} // namespace detail

/// Linear-algebra oracle for wick_mixed_moment.
inline double matrix_vacuum_moment(const FockSpace& s, const std::vector<Vector>& fs, const SignPattern& signs) {
    if (signs.size() != fs.size()) throw DimensionError("sign pattern length differs from function count");
    for (const auto& f : fs)
        if (f.size() != s.m()) throw DimensionError("test function has wrong length");
    return detail::matrix_moment_impl(s, fs, &signs);
}

/// Linear-algebra oracle for wick_field_moment.
inline double matrix_field_moment(const FockSpace& s, const std::vector<Vector>& fs) {
    for (const auto& f : fs)
        if (f.size() != s.m()) throw DimensionError("test function has wrong length");
    return detail::matrix_moment_impl(s, fs, nullptr);
}

/// Largest |moment(rotation) - moment| over the n cyclic rotations of fs.
inline double traciality_check(const QKernel& kernel, const std::vector<Vector>& fs) {
    const double base = wick_field_moment(kernel, fs);
    double worst = 0.0;
    std::vector<Vector> rot = fs;
    for (std::size_t r = 1; r < fs.size(); ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        worst = std::max(worst, std::abs(wick_field_moment(kernel, rot) - base));
    }
    return worst;
}

/// Samples f on the grid and rescales so that eps^j sum f^2 = 1.
inline Vector sample_normalized(const Grid& grid, const std::function<double(double)>& f) {
    if (grid.dimension() != 1) throw ConfigError("sample_normalized: 1-d grids only");
    Vector v(grid.size());
    for (int k = 0; k < grid.size(); ++k) v(k) = f(grid.points()(k, 0));
    const double norm2 = grid.weight() * v.squaredNorm();
    if (!(norm2 > 0.0)) throw ConfigError("test function vanishes on the grid");
    return v / std::sqrt(norm2);
}

struct ConvergenceRow {
    int m;
    double eps;
    double moment;
    std::optional<double> difference; ///< |moment - previous moment|
};

/// Field moment of the given closed-form functions on a 1-d grid and its
/// r successive refinements (r+1 rows in total).
inline std::vector<ConvergenceRow> convergence_report(const KernelSpec& spec, const Grid& coarse,
                                                      const std::vector<std::function<double(double)>>& fs,
                                                      int refinements) {
    if (!coarse.interval() || coarse.dimension() != 1)
        throw ConfigError("convergence_report: requires a 1-d interval grid");
    if (!is_resampleable(spec)) throw ConfigError("convergence_report: kernel family cannot be re-sampled");
    if (refinements < 0 || refinements > 5) throw ConfigError("convergence_report: refinements must be in 0..5");
    if (fs.size() > 6) throw ConfigError("convergence_report: n must be <= 6");
    std::vector<ConvergenceRow> rows;
    Grid g = coarse;
    for (int r = 0; r <= refinements; ++r) {
        if (r > 0) g = refine(g);
        const QKernel k = sample_kernel(spec, g);
        std::vector<Vector> sampled;
        for (const auto& f : fs) sampled.push_back(sample_normalized(g, f));
        ConvergenceRow row{g.size(), g.spacing(), wick_field_moment(k, sampled), std::nullopt};
        if (!rows.empty()) row.difference = std::abs(row.moment - rows.back().moment);
        rows.push_back(row);
    }
    return rows;
}

} // namespace qfock
