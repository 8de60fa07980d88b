#pragma once

// The four CLI suites. Each returns a SuiteResult whose bytes depend only on
// the configuration and seed.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qfock/config.hpp"
#include "qfock/fock.hpp"
#include "qfock/moments.hpp"
#include "qfock/random.hpp"
#include "qfock/report.hpp"
#include "qfock/spectral.hpp"

namespace qfock {

/// verify builds every dense Gram matrix; keep the whole space small.
inline constexpr Index kVerifyDimCap = 1500;

namespace detail {

inline void add_common_meta(SuiteResult& r, const RunConfig& cfg, const QKernel& k) {
    r.meta.emplace_back("source", cfg.source);
    r.meta.emplace_back("grid_digest", grid_digest(cfg.grid));
    r.meta.emplace_back("kernel_digest", kernel_digest(k));
    r.meta.emplace_back("m", k.size());
    r.meta.emplace_back("q", k.sup_q());
    r.meta.emplace_back("n_max", cfg.n_max);
    r.meta.emplace_back("seed", cfg.seed);
}

inline double max_abs(const Matrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

inline double max_abs(const FockVector& v) {
    double worst = 0.0;
    for (const auto& l : v.levels)
        if (l.size()) worst = std::max(worst, l.cwiseAbs().maxCoeff());
    return worst;
}

inline std::vector<std::string> expand_names(const RunConfig& cfg, int count,
                                             const std::function<std::string(int)>& fallback) {
    if (cfg.functions.empty()) {
        std::vector<std::string> out;
        for (int i = 0; i < count; ++i) out.push_back(fallback(i));
        return out;
    }
    if (cfg.functions.size() == 1) return std::vector<std::string>(static_cast<std::size_t>(count), cfg.functions[0]);
    if (static_cast<int>(cfg.functions.size()) != count)
        throw ValidationError("$.run.functions: expected 1 or " + std::to_string(count) + " names, got " +
                              std::to_string(cfg.functions.size()));
    return cfg.functions;
}

/// "bump_k" -> k, or -1 when the name has another form.
inline int bump_index(const std::string& name, int d) {
    if (name.rfind("bump_", 0) != 0) return -1;
    const std::string digits = name.substr(5);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit) || digits.size() > 6)
        throw ValidationError("$.run.functions: malformed name '" + name + "'");
    const int k = std::stoi(digits);
    if (k >= d)
        throw ValidationError("$.run.functions: '" + name + "' needs d > " + std::to_string(k) + " (d = " +
                              std::to_string(d) + ")");
    return k;
}

inline std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

} // namespace detail

inline SuiteResult run_verify(const RunConfig& cfg) {
    const QKernel k = sample_kernel(cfg.kernel, cfg.grid);
    const FockSpace s(k, cfg.n_max);
    if (s.total_dim() > kVerifyDimCap)
        throw ConfigError("verify: truncated space has dimension " + std::to_string(s.total_dim()) +
                          ", above the cap " + std::to_string(kVerifyDimCap) + "; lower m or n_max");
    SuiteResult res;
    res.suite = "verify";
    detail::add_common_meta(res, cfg, k);
    const int m = s.m(), top = s.n_max();
    const auto& tol = cfg.tol;
    TestFunctionSource src(cfg.seed);
    using detail::max_abs;

    for (int n = 2; n <= std::min(top, 4); ++n) {
        double worst = 0.0;
        for (int i = 1; i < n; ++i)
            for (int j = 1; j < n; ++j) {
                const Matrix Ti = swap_op(s, n, i).matrix, Tj = swap_op(s, n, j).matrix;
                if (std::abs(i - j) >= 2) worst = std::max(worst, max_abs(Ti * Tj - Tj * Ti));
                if (j == i + 1) worst = std::max(worst, max_abs(Ti * Tj * Ti - Tj * Ti * Tj));
            }
        res.add(check("yang_baxter n=" + std::to_string(n), worst, Relation::le, 0.0, tol.exact));
    }

    for (int n = 0; n <= top; ++n)
        res.add(check("gram_positivity n=" + std::to_string(n), sym_eigs(s.gram_dense(n))(0), Relation::gt, 0.0));

    for (int n = 2; n <= std::min(top, 5); ++n)
        res.add(check("gram_recursion_vs_direct n=" + std::to_string(n),
                      max_abs(p_recursive(s, n).matrix - p_direct(s, n).matrix), Relation::le, 0.0, tol.exact));

    {
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const Vector h = src.coefficients(m);
            const auto f = src.fock_vector(s, top - 1), g = src.fock_vector(s, top);
            worst = std::max(worst, std::abs(q_inner(s, create(s, h).apply(f), g) -
                                             q_inner(s, f, annihilate(s, h).apply(g))));
        }
        res.add(check("adjointness", worst, Relation::le, 0.0, tol.adjoint));
    }

    {
        double worst = 0.0;
        std::vector<FockOperator> cr, an;
        for (int x = 0; x < m; ++x) {
            cr.push_back(create(s, basis_vector(m, x)));
            an.push_back(annihilate(s, basis_vector(m, x)));
        }
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y) {
                const auto lhs = an[x] * cr[y];
                const auto rhs = cr[y] * an[x];
                for (int lvl = 0; lvl < top; ++lvl) {
                    Matrix R = lhs.block(lvl, lvl);
                    if (rhs.has_block(lvl, lvl)) R -= k(x, y) * rhs.block(lvl, lvl);
                    if (x == y) R -= Matrix::Identity(R.rows(), R.cols());
                    worst = std::max(worst, max_abs(R));
                }
            }
        res.add(check("commutation_relation", worst, Relation::le, 0.0, tol.adjoint));
    }

    {
        std::set<int> domain;
        for (int lvl = 0; lvl < top; ++lvl) domain.insert(lvl);
        double worst_margin = -std::numeric_limits<double>::infinity(), norm_at = 0.0, bound_at = 0.0;
        for (int t = 0; t < 10; ++t) {
            const Vector h = src.coefficients(m);
            const double norm = q_operator_norm(s, create(s, h), domain);
            const double bound = h.norm() / std::sqrt(1.0 - s.q());
            if (norm - bound > worst_margin) {
                worst_margin = norm - bound;
                norm_at = norm;
                bound_at = bound;
            }
        }
        auto r = check("creation_norm_bound", norm_at, Relation::le, bound_at, tol.norm);
        r.note = "worst of 10 seeded h";
        res.add(r);
    }

    for (int n = 1; n <= std::min(top - 1, 3); ++n) {
        const Matrix lifted(detail::identity_kron(m, s.gram_sparse(n)));
        const Matrix diff = proof_constant(s.q()) * lifted - s.gram_dense(n + 1);
        res.add(check("gram_domination n=" + std::to_string(n), sym_eigs(diff)(0), Relation::ge, 0.0, tol.adjoint));
    }

    {
        double worst = 0.0;
        for (int n = 1; n <= std::min(top, 6); ++n) {
            std::vector<Vector> fs;
            for (int i = 0; i < n; ++i) fs.push_back(src.grid_function(cfg.grid));
            for (const auto& v : all_sign_patterns(n))
                worst = std::max(worst, std::abs(wick_mixed_moment(k, fs, v) - matrix_vacuum_moment(s, fs, v)));
            worst = std::max(worst, std::abs(wick_field_moment(k, fs) - matrix_field_moment(s, fs)));
        }
        res.add(check("wick_vs_matrix", worst, Relation::le, 0.0, tol.norm));
    }

    {
        double worst = 0.0;
        for (int n : {2, 4, 6}) {
            std::vector<Vector> fs;
            for (int i = 0; i < n; ++i) fs.push_back(src.grid_function(cfg.grid));
            worst = std::max(worst, traciality_check(k, fs));
        }
        res.add(check("traciality", worst, Relation::le, 0.0, tol.adjoint));
    }

    {
        std::vector<FockOperator> ws;
        for (int x = 0; x < m; ++x) ws.push_back(field(s, basis_vector(m, x)));
        Matrix cols(s.total_dim(), s.total_dim());
        Index col = 0;
        for (int len = 0; len <= top; ++len)
            for (Index w = 0; w < s.level_dim(len); ++w) {
                std::vector<FockOperator> word;
                for (int x : s.digits(len, w)) word.push_back(ws[x]);
                cols.col(col++) = apply_word(s, word, FockVector::vacuum(s)).vector.flatten();
            }
        const auto rank = Eigen::FullPivLU<Matrix>(cols).rank();
        res.add(check("cyclicity_rank", static_cast<double>(rank), Relation::eq, static_cast<double>(s.total_dim())));
    }

    {
        double worst = 0.0;
        for (int t = 0; t < 3; ++t) {
            const Vector h = src.coefficients(m);
            const auto adj = right_annihilate(s, h);
            const auto mirrored = right_annihilate_mirrored(s, h);
            for (const auto& [key, M] : adj.blocks()) worst = std::max(worst, max_abs(M - mirrored.block(key.first, key.second)));
        }
        auto r = check("right_annihilation_closed_form", worst, Relation::le, 0.0, tol.adjoint);
        r.note = "mirrored-R form against the Q-adjoint";
        res.add(r);
    }

    if (top >= 2) {
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            const auto w = field(s, src.coefficients(m)), wr = right_field(s, src.coefficients(m));
            const auto v = src.fock_vector(s, top - 2);
            worst = std::max(worst, max_abs(w.apply(wr.apply(v)) - wr.apply(w.apply(v))));
        }
        res.add(check("left_right_commutant", worst, Relation::le, 0.0, tol.adjoint));
    } else {
        res.notes.push_back("left_right_commutant needs n_max >= 2");
    }
    return res;
}

inline SuiteResult run_moments(const RunConfig& cfg) {
    const QKernel k = sample_kernel(cfg.kernel, cfg.grid);
    const int n = cfg.n;
    const auto names = detail::expand_names(cfg, n, [](int) { return std::string("uniform"); });
    TestFunctionSource src(cfg.seed);
    std::vector<Vector> bumps;
    std::vector<Vector> fs;
    bool all_uniform = true;
    for (const auto& name : names) {
        if (name == "uniform") {
            fs.push_back(Vector::Constant(k.size(), 1.0 / std::sqrt(cfg.grid.weight() * k.size())));
        } else if (name == "random") {
            fs.push_back(src.grid_function(cfg.grid));
            all_uniform = false;
        } else if (const int b = detail::bump_index(name, cfg.d); b >= 0) {
            if (bumps.empty()) bumps = disjoint_bumps(cfg.grid, cfg.d);
            fs.push_back(bumps[static_cast<std::size_t>(b)]);
            all_uniform = false;
        } else {
            throw ValidationError("$.run.functions: unknown function '" + name + "'");
        }
    }

    SuiteResult res;
    res.suite = "moments";
    detail::add_common_meta(res, cfg, k);
    res.meta.emplace_back("n", n);
    res.meta.emplace_back("functions", detail::join(names));
    res.meta.emplace_back("pairing_count", n % 2 ? 0 : static_cast<long>(enumerate_pairings(n).size()));
    if (n % 2) res.notes.push_back("odd n: every moment vanishes");

    const FockSpace s(k, cfg.n_max);
    const double tol = cfg.tol.norm;
    auto row = [&](const std::string& name, double wick, const std::function<double()>& matrix) {
        try {
            res.add(check(name, wick, Relation::eq, matrix(), tol));
        } catch (const TruncationError&) {
            res.add(info(name, wick, "matrix oracle unavailable: truncation-inexact at n_max=" +
                                         std::to_string(cfg.n_max)));
        }
    };
    row("field", wick_field_moment(k, fs), [&] { return matrix_field_moment(s, fs); });
    if (all_uniform && std::holds_alternative<ConstantKernelSpec>(cfg.kernel))
        res.add(check("field_vs_crossing_sum", wick_field_moment(k, fs), Relation::eq,
                      crossing_generating_sum(n, std::get<ConstantKernelSpec>(cfg.kernel).q), cfg.tol.exact));
    for (const auto& v : all_sign_patterns(n))
        row("mixed " + format_signs(v), wick_mixed_moment(k, fs, v), [&] { return matrix_vacuum_moment(s, fs, v); });
    return res;
}

inline SuiteResult run_spectrum(const RunConfig& cfg) {
    const QKernel k = sample_kernel(cfg.kernel, cfg.grid);
    if (cfg.n_max < 2) throw ValidationError("$.run.n_max: spectrum needs n_max >= 2");
    if (cfg.d > k.size())
        throw ValidationError("$.run.d: d=" + std::to_string(cfg.d) + " exceeds grid size " + std::to_string(k.size()));
    const FockSpace s(k, cfg.n_max);
    for (int lvl = 1; lvl < cfg.n_max; ++lvl)
        if (s.level_dim(lvl) > kDenseLevelCap)
            throw ConfigError("spectrum: level " + std::to_string(lvl) + " has dimension " +
                              std::to_string(s.level_dim(lvl)) + ", above the dense cap " +
                              std::to_string(kDenseLevelCap));
    SuiteResult res;
    res.suite = "spectrum";
    detail::add_common_meta(res, cfg, k);
    res.meta.emplace_back("d", cfg.d);

    const GapReport gap = nd_gap_report(s, cfg.d);
    res.add(check("vacuum_residual", gap.vacuum_residual, Relation::le, 1e-10));
    auto lam = check("lambda_min_complement", gap.lambda_min_complement, Relation::ge, gap.krolak_bound, 1e-8);
    lam.note = gap.krolak_bound < 0 ? "bound vacuous (negative)" : "bound binding";
    res.add(lam);
    if (gap.whitening_condition) res.add(info("gap_whitening_condition", *gap.whitening_condition));

    auto add_bound = [&](const BoundReport& b) {
        auto r = check(b.name, b.measured_norm, Relation::le, b.bound, kBoundTolerance);
        if (b.whitening_condition) r.note = "whitening condition " + detail::g17(*b.whitening_condition);
        res.add(r);
    };
    if (s.level_dim(cfg.n_max) <= kDenseLevelCap) {
        const auto gs = disjoint_bumps(cfg.grid, cfg.d);
        for (int n = 1; n <= std::min(3, cfg.n_max - 2); ++n) {
            const auto [l, r] = contraction_check(s, gs[0], n);
            add_bound(l);
            add_bound(r);
        }
        for (const auto& b : lemma8_checks(s, gs)) add_bound(b);
        const auto [al, ar] = ancr_check(s, gs);
        add_bound(al);
        add_bound(ar);
    } else {
        res.notes.push_back("operator-norm bounds skipped: level " + std::to_string(cfg.n_max) + " has dimension " +
                            std::to_string(s.level_dim(cfg.n_max)) + ", above the dense cap " +
                            std::to_string(kDenseLevelCap));
    }
    return res;
}

/// Closed-form functions for the refinement study on [a, b]: "uniform" is 1,
/// "bump_k" a Gaussian centred in the k-th of d equal subintervals.
inline std::function<double(double)> converge_function(const std::string& name, double a, double b, int d) {
    if (name == "uniform") return [](double) { return 1.0; };
    if (const int k = detail::bump_index(name, d); k >= 0) {
        const double width = (b - a) / d;
        const double c = a + (k + 0.5) * width, sigma = 0.5 * width;
        return [c, sigma](double x) { return std::exp(-(x - c) * (x - c) / (sigma * sigma)); };
    }
    throw ValidationError("$.run.functions: unknown function '" + name + "' for converge");
}

inline SuiteResult run_converge(const RunConfig& cfg) {
    const auto iv = cfg.grid.interval();
    if (!iv || cfg.grid.dimension() != 1) throw ValidationError("$.grid.type: converge needs an interval1d grid");
    if (!is_resampleable(cfg.kernel)) throw ValidationError("$.kernel.type: converge needs a constant or gaussian kernel");
    if (cfg.n > 6) throw ValidationError("$.run.n: converge supports n <= 6");
    const QKernel k = sample_kernel(cfg.kernel, cfg.grid);
    const auto names = detail::expand_names(cfg, cfg.n, [&](int i) { return "bump_" + std::to_string(i % cfg.d); });
    std::vector<std::function<double(double)>> fs;
    for (const auto& name : names) fs.push_back(converge_function(name, iv->a, iv->b, cfg.d));

    SuiteResult res;
    res.suite = "converge";
    detail::add_common_meta(res, cfg, k);
    res.meta.emplace_back("n", cfg.n);
    res.meta.emplace_back("functions", detail::join(names));
    res.meta.emplace_back("refinements", cfg.refinements);

    const auto rows = convergence_report(cfg.kernel, cfg.grid, fs, cfg.refinements);
    std::optional<double> prev;
    for (const auto& row : rows) {
        const std::string m = "m=" + std::to_string(row.m);
        res.add(info("moment " + m, row.moment, "eps=" + detail::g17(row.eps)));
        if (!row.difference) continue;
        if (prev)
            res.add(check("difference " + m, *row.difference, Relation::le, *prev, cfg.tol.exact));
        else
            res.add(info("difference " + m, *row.difference));
        prev = row.difference;
    }
    return res;
}

inline SuiteResult run_suite(Suite suite, const RunConfig& cfg) {
    switch (suite) {
    case Suite::verify: return run_verify(cfg);
    case Suite::moments: return run_moments(cfg);
    case Suite::spectrum: return run_spectrum(cfg);
    case Suite::converge: return run_converge(cfg);
    }
    throw ConfigError("unknown suite");
}

} // namespace qfock
