// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qfock/config.hpp"
#include "qfock/fock.hpp"
#include "qfock/moments.hpp"
#include "qfock/random.hpp"
#include "qfock/spectral.hpp"
#include "qfock/suites.hpp"

using namespace qfock;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

double max_abs(const Matrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

std::string g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

/// constant(0.3) and gaussian(0.5, 0.2) on a uniform grid of [0, 1].
std::vector<QKernel> both_families(int m) {
    const auto grid = make_grid_1d(0, 1, m);
    return {kernel_constant(grid, 0.3), kernel_gaussian(grid, 0.5, 0.2)};
}

Outcome gram_oracle() {
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m)
        for (const auto& k : both_families(m)) {
            FockSpace s(k, 5);
            for (int n = 0; n <= 5; ++n)
                worst = std::max(worst, max_abs(p_recursive(s, n).matrix - p_direct(s, n).matrix));
        }
    return {worst <= 1e-12, "max entry deviation " + g(worst)};
}

Outcome positivity() {
    double min_eig = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= 3; ++m)
        for (const auto& k : both_families(m)) {
            FockSpace s(k, 4);
            for (int n = 0; n <= 4; ++n) min_eig = std::min(min_eig, sym_eigs(s.gram_dense(n))(0));
        }
    const double q = 0.3;
    FockSpace s(kernel_constant(make_grid_1d(0, 1, 2), q), 2);
    const Vector ev = sym_eigs(s.gram_dense(2));
    Vector expected(4);
    expected << 1 - q, 1 + q, 1 + q, 1 + q;
    const double dev = (ev - expected).cwiseAbs().maxCoeff();
    return {min_eig > 0.0 && dev <= 1e-12, "min eigenvalue " + g(min_eig) + ", closed-form spectrum deviation " + g(dev)};
}

Outcome yang_baxter() {
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m)
        for (const auto& k : both_families(m)) {
            FockSpace s(k, 4);
            for (int n = 2; n <= 4; ++n)
                for (int i = 1; i < n; ++i)
                    for (int j = 1; j < n; ++j) {
                        const Matrix Ti = swap_op(s, n, i).matrix, Tj = swap_op(s, n, j).matrix;
                        if (std::abs(i - j) >= 2) worst = std::max(worst, max_abs(Ti * Tj - Tj * Ti));
                        if (j == i + 1) worst = std::max(worst, max_abs(Ti * Tj * Ti - Tj * Ti * Tj));
                    }
        }
    return {worst <= 1e-12, "max residual " + g(worst)};
}

Outcome adjointness() {
    double worst = 0.0;
    for (const auto& k : both_families(3)) {
        FockSpace s(k, 3);
        TestFunctionSource src(4);
        for (int t = 0; t < 100; ++t) {
            const Vector h = src.coefficients(3);
            const auto f = src.fock_vector(s, 2), gv = src.fock_vector(s, 3);
            worst = std::max(worst, std::abs(q_inner(s, create(s, h).apply(f), gv) -
                                             q_inner(s, f, annihilate(s, h).apply(gv))));
        }
    }
    return {worst <= 1e-10, "max deviation over 2 x 100 triples " + g(worst)};
}

Outcome commutation() {
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m)
        for (const auto& k : both_families(m)) {
            FockSpace s(k, 3);
            for (int x = 0; x < m; ++x)
                for (int y = 0; y < m; ++y) {
                    const auto cy = create(s, basis_vector(m, y));
                    const auto ax = annihilate(s, basis_vector(m, x));
                    const auto lhs = ax * cy, rhs = cy * ax;
                    for (int lvl = 0; lvl < s.n_max(); ++lvl) {
                        Matrix R = lhs.block(lvl, lvl);
                        if (rhs.has_block(lvl, lvl)) R -= k(x, y) * rhs.block(lvl, lvl);
                        if (x == y) R -= Matrix::Identity(R.rows(), R.cols());
                        worst = std::max(worst, max_abs(R));
                    }
                }
        }
    return {worst <= 1e-10, "max residual " + g(worst)};
}

Outcome norm_bound() {
    double worst = -std::numeric_limits<double>::infinity();
    for (double q : {0.0, 0.3, 0.7}) {
        FockSpace s(kernel_constant(make_grid_1d(0, 1, 3), q), 3);
        TestFunctionSource src(6);
        for (int t = 0; t < 50; ++t) {
            const Vector h = src.coefficients(3);
            const double norm = q_operator_norm(s, create(s, h), std::set<int>{0, 1, 2});
            worst = std::max(worst, norm - h.norm() / std::sqrt(1.0 - q));
        }
    }
    return {worst <= 1e-9, "max (norm - bound) " + g(worst)};
}

Outcome wick_oracle() {
    double worst = 0.0;
    TestFunctionSource src(7);
    for (int m = 1; m <= 3; ++m)
        for (const auto& k : both_families(m)) {
            FockSpace s(k, 6);
            for (int n = 0; n <= 6; ++n) {
                std::vector<Vector> fs;
                for (int i = 0; i < n; ++i) fs.push_back(src.grid_function(k.grid()));
                for (const auto& v : all_sign_patterns(n))
                    worst = std::max(worst, std::abs(wick_mixed_moment(k, fs, v) - matrix_vacuum_moment(s, fs, v)));
                worst = std::max(worst, std::abs(wick_field_moment(k, fs) - matrix_field_moment(s, fs)));
            }
        }
    const auto grid = make_grid_1d(0, 1, 2);
    const Vector unit = Vector::Constant(2, 1.0);
    double catalan_dev = 0.0;
    const double catalan[] = {1, 2, 5, 14};
    for (int p = 1; p <= 4; ++p)
        catalan_dev = std::max(catalan_dev, std::abs(wick_field_moment(kernel_constant(grid, 0.0),
                                                                       std::vector<Vector>(2 * p, unit)) -
                                                     catalan[p - 1]));
    const double q = 0.3;
    const double fourth = wick_field_moment(kernel_constant(grid, q), std::vector<Vector>(4, unit));
    const double fourth_dev = std::abs(fourth - (2 + q));
    return {worst <= 1e-9 && catalan_dev <= 1e-12 && fourth_dev <= 1e-12,
            "oracle deviation " + g(worst) + ", Catalan deviation " + g(catalan_dev) + ", 2+q deviation " +
                g(fourth_dev)};
}

Outcome traciality() {
    double worst = 0.0;
    TestFunctionSource src(8);
    for (const auto& k : both_families(4))
        for (int n : {2, 4, 6}) {
            std::vector<Vector> fs;
            for (int i = 0; i < n; ++i) fs.push_back(src.grid_function(k.grid()));
            worst = std::max(worst, traciality_check(k, fs));
        }
    return {worst <= 1e-10, "max cyclic deviation " + g(worst)};
}

Outcome convergence() {
    RunConfig cfg = preset("gaussian-small");
    cfg.n = 4;
    cfg.refinements = 2;
    std::vector<std::function<double(double)>> fs;
    for (int i = 0; i < 4; ++i) fs.push_back(converge_function("bump_" + std::to_string(i % cfg.d), 0, 1, cfg.d));
    const auto rows = convergence_report(cfg.kernel, cfg.grid, fs, cfg.refinements);
    bool ok = rows.size() == 3 && rows[0].m == 8 && rows[2].m == 32;
    std::string detail = "differences";
    for (std::size_t r = 1; r < rows.size(); ++r) {
        detail += " " + g(*rows[r].difference);
        if (r >= 2) ok = ok && *rows[r].difference < *rows[r - 1].difference;
    }
    return {ok, detail + " (m = 8, 16, 32)"};
}

Outcome section5_bounds() {
    int total = 0, failed = 0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    auto tally = [&](const BoundReport& r) {
        ++total;
        if (!r.pass) ++failed;
        worst_margin = std::max(worst_margin, r.measured_norm - r.bound);
    };
    for (int m : {4, 8})
        for (double q : {0.0, 0.3}) {
            const auto grid = make_grid_1d(0, 1, m);
            const auto k = kernel_constant(grid, q);
            for (int n = 1; n <= 3; ++n) {
                FockSpace s(k, n + 2);
                TestFunctionSource src(static_cast<std::uint64_t>(100 * m + n));
                for (const Vector& gfun : {disjoint_bumps(grid, 1)[0], src.grid_function(grid)}) {
                    const auto [l, r] = contraction_check(s, gfun, n);
                    tally(l);
                    tally(r);
                }
            }
            FockSpace s(k, 3);
            for (int d : {1, 2, 4}) {
                const auto gs = disjoint_bumps(grid, d);
                for (const auto& r : lemma8_checks(s, gs)) tally(r);
                const auto [al, ar] = ancr_check(s, gs);
                tally(al);
                tally(ar);
            }
        }
    return {failed == 0, std::to_string(total - failed) + "/" + std::to_string(total) +
                             " bound reports pass, max (measured - bound) " + g(worst_margin)};
}

Outcome spectral_gap() {
    const RunConfig cfg = preset("krolak-binding");
    const FockSpace s(sample_kernel(cfg.kernel, cfg.grid), cfg.n_max);
    const GapReport r = nd_gap_report(s, cfg.d);
    const bool ok = r.vacuum_residual <= 1e-10 && r.lambda_min_complement >= r.krolak_bound - 1e-8 &&
                    std::abs(r.krolak_bound - krolak_lower_bound(50, 0.0)) == 0.0;
    return {ok, "lambda_min " + g(r.lambda_min_complement) + " >= bound " + g(r.krolak_bound) + ", vacuum residual " +
                    g(r.vacuum_residual)};
}

Outcome determinism() {
    int compared = 0, mismatched = 0;
    for (const auto& name : preset_names())
        for (Suite suite : {Suite::verify, Suite::moments, Suite::spectrum, Suite::converge}) {
            std::string first, second;
            for (std::string* out : {&first, &second}) {
                try {
                    RunConfig cfg = preset(name);
                    cfg.seed = 12345;
                    const auto res = run_suite(suite, cfg);
                    *out = format_json(res) + format_csv(res);
                } catch (const Error& e) {
                    *out = std::string("error: ") + e.what();
                }
            }
            ++compared;
            if (first != second) ++mismatched;
        }
    return {mismatched == 0, std::to_string(compared - mismatched) + "/" + std::to_string(compared) +
                                 " preset x suite reports byte-identical across two runs"};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Gram recursion matches the permutation sum (n <= 5, m <= 3)", gram_oracle},
        {"Gram operators strictly positive; m=2, n=2 spectrum {1-q, 1+q, 1+q, 1+q}", positivity},
        {"Yang-Baxter relations (n <= 4)", yang_baxter},
        {"creation/annihilation adjointness (100 seeded triples)", adjointness},
        {"discrete commutation relation per level", commutation},
        {"creation norm bound |h|/sqrt(1-q) (50 seeded h)", norm_bound},
        {"Wick formula vs matrix oracle; Catalan and 2+q closed forms", wick_oracle},
        {"traciality under cyclic shifts (n <= 6)", traciality},
        {"refinement study: successive differences strictly decrease", convergence},
        {"contraction, eight-sum and number-operator bounds", section5_bounds},
        {"N_d gap in the binding regime (q=0, d=m=50, n_max=3)", spectral_gap},
        {"byte-identical reports for identical seeds", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::printf("criterion %2zu: %s  %s [%s] (%.1f s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
