#pragma once

// Q-operator norms, the norm estimates behind the spectral-gap argument, and
// the quadratic form of N_d = sum_i (w(g_i) - w_r(g_i))^2.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qfock/error.hpp"
#include "qfock/fock.hpp"
#include "qfock/kernel.hpp"

namespace qfock {

/// Slack on every measured-vs-bound comparison.
inline constexpr double kBoundTolerance = 1e-9;
/// Whitening condition numbers are reported above this sup-norm.
inline constexpr double kConditionReportThreshold = 0.8;

struct BoundReport {
    std::string name;
    double measured_norm = 0.0;
    double bound = 0.0;
    double margin = 0.0; ///< bound - measured_norm
    bool pass = false;
    std::optional<double> whitening_condition;
};

inline BoundReport make_bound_report(std::string name, double measured, double bound) {
    BoundReport r;
    r.name = std::move(name);
    r.measured_norm = measured;
    r.bound = bound;
    r.margin = bound - measured;
    r.pass = measured <= bound + kBoundTolerance;
    return r;
}

/// Eigenvalues of a symmetric matrix, ascending. The input is symmetrized.
inline Vector sym_eigs(const Matrix& M) {
    if (M.rows() != M.cols()) throw DimensionError("sym_eigs: matrix must be square");
    if (M.rows() == 0) return Vector();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error("sym_eigs: eigensolver did not converge");
    return es.eigenvalues();
}

namespace detail {

inline bool is_identity(const SparseMatrix& P) {
    if (P.rows() != P.cols() || P.nonZeros() != P.rows()) return false;
    for (Index c = 0; c < P.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(P, c); it; ++it)
            if (it.row() != c || it.value() != 1.0) return false;
    return true;
}

/// P^(k)^(1/2), or nothing when P^(k) is the identity.
inline const Matrix* gram_sqrt(const FockSpace& s, int k) {
    if (is_identity(s.gram_sparse(k))) return nullptr;
    return &s.gram_factor(k).sqrt;
}
inline const Matrix* gram_inv_sqrt(const FockSpace& s, int k) {
    if (is_identity(s.gram_sparse(k))) return nullptr;
    return &s.gram_factor(k).inv_sqrt;
}

inline double worst_condition(const FockSpace& s, const std::set<int>& levels) {
    double c = 1.0;
    for (int k : levels)
        if (!is_identity(s.gram_sparse(k))) c = std::max(c, s.gram_factor(k).condition());
    return c;
}

} // namespace detail

/// sup over ||f||_Q = 1 of ||A f||_Q, over input levels `domain` (default:
/// every input level carrying a block).
inline double q_operator_norm(const FockSpace& s, const FockOperator& A,
                              std::optional<std::set<int>> domain = std::nullopt) {
    const std::set<int> in = domain ? *domain : A.domain();
    std::set<int> out;
    for (const auto& [key, _] : A.blocks())
        if (in.count(key.first)) out.insert(key.second);
    if (in.empty() || out.empty()) return 0.0;

    std::map<int, Index> in_off, out_off;
    Index cols = 0, rows = 0;
    for (int k : in) {
        in_off[k] = cols;
        cols += s.level_dim(k);
    }
    for (int k : out) {
        out_off[k] = rows;
        rows += s.level_dim(k);
    }
    Matrix W = Matrix::Zero(rows, cols);
    for (const auto& [key, M] : A.blocks()) {
        const auto [from, to] = key;
        if (!in.count(from)) continue;
        Matrix B = M;
        if (const Matrix* S = detail::gram_sqrt(s, to)) B = (*S) * B;
        if (const Matrix* Si = detail::gram_inv_sqrt(s, from)) B = B * (*Si);
        W.block(out_off[to], in_off[from], B.rows(), B.cols()) += B;
    }
    // Largest eigenvalue of the smaller Gram product. Eigen 3.4's BDCSVD
    // misbehaves on deflated inputs, so no SVD here.
    const Matrix G = W.rows() < W.cols() ? Matrix(W * W.transpose()) : Matrix(W.transpose() * W);
    return std::sqrt(std::max(0.0, sym_eigs(G).maxCoeff()));
}

inline double q_operator_norm(const FockSpace& s, const LevelMap& L) {
    FockOperator A;
    A.add_block(L.from, L.to, L.matrix);
    return q_operator_norm(s, A);
}

/// d indicator functions on disjoint blocks of floor(m/d) consecutive grid
/// points, each with eps^j sum g^2 = 1.
inline std::vector<Vector> disjoint_bumps(const Grid& grid, int d) {
    const int m = grid.size();
    if (d < 1) throw ConfigError("disjoint_bumps: d must be >= 1");
    if (d > m)
        throw ConfigError("disjoint_bumps: d=" + std::to_string(d) + " exceeds grid size " +
                          std::to_string(m));
    const int block = m / d;
    const double height = 1.0 / std::sqrt(block * grid.weight());
    std::vector<Vector> gs;
    for (int i = 0; i < d; ++i) {
        Vector g = Vector::Zero(m);
        g.segment(i * block, block).setConstant(height);
        gs.push_back(std::move(g));
    }
    return gs;
}

inline double proof_constant(double q) { return 1.0 / (1.0 - q); }

/// Level-(n+2) -> level-n contraction of positions 1,2 (left) or n+1,n+2 (right).
inline SparseMatrix contraction_map(const FockSpace& s, int n, bool left) {
    const Index m = s.m();
    const Index dim = s.level_dim(n);
    std::vector<Eigen::Triplet<double>> trips;
    for (Index y = 0; y < m; ++y)
        for (Index r = 0; r < dim; ++r) {
            const Index col = left ? (y * m + y) * dim + r : r * m * m + y * m + y;
            trips.emplace_back(r, col, 1.0);
        }
    SparseMatrix L(dim, s.level_dim(n + 2));
    L.setFromTriplets(trips.begin(), trips.end());
    return L;
}

/// Q-norms of L (T_2 ... T_{n+1}) D and R (T_n ... T_1) D, D f = g (x) f (x) g,
/// against q^n. `g` is a grid function with unit L^2 norm.
inline std::pair<BoundReport, BoundReport> contraction_check(const FockSpace& s, const Vector& g, int n) {
    if (n < 0 || n + 2 > s.n_max())
        throw ConfigError("contraction_check: need n + 2 <= n_max");
    const Vector h = smear(s.grid(), g);
    const Index dim = s.level_dim(n);
    const SparseMatrix D = detail::left_tensor(h, s.level_dim(n + 1)) * detail::right_tensor(h, dim);
    const Index top = s.level_dim(n + 2);
    SparseMatrix left_chain = detail::sparse_identity(top), right_chain = detail::sparse_identity(top);
    for (int i = 2; i <= n + 1; ++i) left_chain = left_chain * s.swap_sparse(n + 2, i);
    for (int i = n; i >= 1; --i) right_chain = right_chain * s.swap_sparse(n + 2, i);
    const Matrix XL(contraction_map(s, n, true) * left_chain * D);
    const Matrix XR(contraction_map(s, n, false) * right_chain * D);
    const double bound = std::pow(s.q(), n);
    auto rl = make_bound_report("contraction_left(n=" + std::to_string(n) + ")",
                                q_operator_norm(s, LevelMap{n, n, XL}), bound);
    auto rr = make_bound_report("contraction_right(n=" + std::to_string(n) + ")",
                                q_operator_norm(s, LevelMap{n, n, XR}), bound);
    if (s.q() > kConditionReportThreshold)
        rl.whitening_condition = rr.whitening_condition = detail::worst_condition(s, {n});
    return {rl, rr};
}

namespace detail {
struct SmearedOps {
    std::vector<FockOperator> cr, an, rcr, ran;
};

inline SmearedOps smeared_ops(const FockSpace& s, const std::vector<Vector>& gs) {
    SmearedOps o;
    for (const auto& g : gs) {
        const Vector h = smear(s.grid(), g);
        o.cr.push_back(create(s, h));
        o.an.push_back(annihilate(s, h));
        o.rcr.push_back(right_create(s, h));
        o.ran.push_back(right_annihilate(s, h));
    }
    return o;
}

inline FockOperator sum_products(const std::vector<FockOperator>& lhs, const std::vector<FockOperator>& rhs) {
    FockOperator acc;
    for (std::size_t i = 0; i < lhs.size(); ++i) acc += lhs[i] * rhs[i];
    return acc;
}

inline BoundReport norm_report(const FockSpace& s, std::string name, const FockOperator& A, double bound) {
    auto r = make_bound_report(std::move(name), q_operator_norm(s, A), bound);
    if (s.q() > kConditionReportThreshold) {
        std::set<int> levels;
        for (const auto& [key, _] : A.blocks()) {
            levels.insert(key.first);
            levels.insert(key.second);
        }
        r.whitening_condition = worst_condition(s, levels);
    }
    return r;
}
} // namespace detail

/// The eight sums of two-operator products over orthonormal h_i, each against
/// C sqrt(d) with C = 1/(1-q). Products are evaluated on the levels where
/// they stay inside the truncation.
inline std::vector<BoundReport> lemma8_checks(const FockSpace& s, const std::vector<Vector>& hs) {
    if (hs.empty()) throw ConfigError("lemma8_checks: need at least one function");
    if (static_cast<int>(hs.size()) > s.m()) throw ConfigError("lemma8_checks: d too large for grid");
    const auto o = detail::smeared_ops(s, hs);
    const double bound = proof_constant(s.q()) * std::sqrt(static_cast<double>(hs.size()));
    using detail::sum_products;
    std::vector<BoundReport> out;
    out.push_back(detail::norm_report(s, "sum a+ ar+", sum_products(o.cr, o.rcr), bound));
    out.push_back(detail::norm_report(s, "sum a ar", sum_products(o.an, o.ran), bound));
    out.push_back(detail::norm_report(s, "sum a+ ar", sum_products(o.cr, o.ran), bound));
    out.push_back(detail::norm_report(s, "sum ar+ a", sum_products(o.rcr, o.an), bound));
    out.push_back(detail::norm_report(s, "sum a a", sum_products(o.an, o.an), bound));
    out.push_back(detail::norm_report(s, "sum ar ar", sum_products(o.ran, o.ran), bound));
    out.push_back(detail::norm_report(s, "sum a+ a", sum_products(o.cr, o.an), bound));
    out.push_back(detail::norm_report(s, "sum ar+ ar", sum_products(o.rcr, o.ran), bound));
    return out;
}

/// sum_i (a(g_i) a+(g_i) - 1) and its right twin on levels <= n_max - 1,
/// against C q sqrt(d).
inline std::pair<BoundReport, BoundReport> ancr_check(const FockSpace& s, const std::vector<Vector>& gs) {
    if (gs.empty()) throw ConfigError("ancr_check: need at least one function");
    const auto o = detail::smeared_ops(s, gs);
    const double d = static_cast<double>(gs.size());
    const double bound = proof_constant(s.q()) * s.q() * std::sqrt(d);
    const FockOperator ident = FockOperator::identity(s, 0, s.n_max() - 1);
    FockOperator left = detail::sum_products(o.an, o.cr) - d * ident;
    FockOperator right = detail::sum_products(o.ran, o.rcr) - d * ident;
    return {detail::norm_report(s, "sum (a a+ - 1)", left, bound),
            detail::norm_report(s, "sum (ar ar+ - 1)", right, bound)};
}

inline double krolak_lower_bound(int d, double q) {
    const double C = proof_constant(q);
    const double sd = std::sqrt(static_cast<double>(d));
    return 2.0 * d * (1.0 - q) - 2.0 * C * sd * q - 14.0 * C * sd;
}

/// Gram matrix of sum_i ||(w(g_i) - w_r(g_i)) f||_Q^2 for f on levels
/// 0..top (top = n_max - 1). Blocks couple levels k and k' with |k - k'| in {0, 2}.
struct NdForm {
    int top = 0;
    std::map<std::pair<int, int>, Matrix> blocks; ///< (k, k') with k <= k'
    /// Per-summand maps of M_i = w(g_i) - w_r(g_i): raising part level k -> k+1
    /// and lowering part level k -> k-1.
    std::vector<std::vector<SparseMatrix>> raise;
    std::vector<std::vector<SparseMatrix>> lower;

    /// Dense matrix over the given levels, in increasing level order.
    Matrix assemble(const FockSpace& s, const std::vector<int>& levels) const {
        Index n = 0;
        std::map<int, Index> off;
        for (int k : levels) {
            off[k] = n;
            n += s.level_dim(k);
        }
        Matrix G = Matrix::Zero(n, n);
        for (const auto& [key, B] : blocks) {
            const auto [k, kk] = key;
            if (!off.count(k) || !off.count(kk)) continue;
            G.block(off[k], off[kk], B.rows(), B.cols()) = B;
            if (k != kk) G.block(off[kk], off[k], B.cols(), B.rows()) = B.transpose();
        }
        return G;
    }
};

/// Assembles the N_d form on levels 0..n_max-1 where every M_i f stays within
/// the truncation.
inline NdForm build_Nd(const FockSpace& s, const std::vector<Vector>& gs) {
    if (s.n_max() < 2) throw ConfigError("build_Nd: truncation too small (need n_max >= 2)");
    if (gs.empty()) throw ConfigError("build_Nd: need at least one function");
    NdForm form;
    form.top = s.n_max() - 1;
    const int top = form.top;
    for (const auto& g : gs) {
        const Vector h = smear(s.grid(), g);
        std::vector<SparseMatrix> raise, lower;
        for (int k = 0; k <= top; ++k) {
            const Index dim = s.level_dim(k);
            raise.push_back(SparseMatrix(detail::left_tensor(h, dim) - detail::right_tensor(h, dim)));
            if (k == 0) {
                lower.emplace_back(0, 1);
                continue;
            }
            const SparseMatrix a = free_annihilate_sparse(s, h, k) * s.r_sparse(k);
            const SparseMatrix r_free = detail::right_tensor(h, s.level_dim(k - 1)).transpose();
            SparseMatrix ar = r_free * s.gram_sparse(k);
            if (k - 1 >= 2 && !detail::is_identity(s.gram_sparse(k - 1)))
                ar = (s.gram_factor(k - 1).inverse * ar).sparseView(1.0, 0.0);
            lower.push_back(SparseMatrix(a - ar));
        }
        form.raise.push_back(std::move(raise));
        form.lower.push_back(std::move(lower));
    }

    for (int k = 0; k <= top; ++k) {
        SparseMatrix diag(s.level_dim(k), s.level_dim(k));
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const auto& C = form.raise[i][k];
            diag += SparseMatrix(C.transpose() * (s.gram_sparse(k + 1) * C));
            if (k > 0) {
                const auto& A = form.lower[i][k];
                diag += SparseMatrix(A.transpose() * (s.gram_sparse(k - 1) * A));
            }
        }
        Matrix D(diag);
        form.blocks[{k, k}] = 0.5 * (D + D.transpose());
        if (k + 2 <= top) {
            SparseMatrix off(s.level_dim(k), s.level_dim(k + 2));
            for (std::size_t i = 0; i < gs.size(); ++i)
                off += SparseMatrix(form.raise[i][k].transpose() *
                                    (s.gram_sparse(k + 1) * form.lower[i][k + 2]));
            form.blocks[{k, k + 2}] = Matrix(off);
        }
    }
    return form;
}

/// Direct evaluation of sum_i ||(w(g_i) - w_r(g_i)) f||_Q^2 through the
/// operator API. `f` must vanish above level n_max - 1.
inline double nd_form_value(const FockSpace& s, const std::vector<Vector>& gs, const FockVector& f) {
    check_same_space(s, f);
    double acc = 0.0;
    for (const auto& g : gs) {
        const Vector h = smear(s.grid(), g);
        const FockOperator M = field(s, h) - right_field(s, h);
        bool exact = true;
        const FockVector Mf = M.apply(f, &exact);
        if (!exact) throw TruncationError("truncation-inexact: f has mass on level n_max");
        acc += q_inner(s, Mf, Mf);
    }
    return acc;
}

struct GapReport {
    int d = 0;
    double q = 0.0;
    int n_max = 0;
    int m = 0;
    double lambda_min_complement = 0.0;
    double vacuum_residual = 0.0;
    double krolak_bound = 0.0;
    bool verdict = false;
    std::optional<double> whitening_condition;
};

/// Smallest generalized eigenvalue of (form, P) on the given levels.
inline double form_lambda_min(const FockSpace& s, const NdForm& form, const std::vector<int>& levels) {
    Matrix G = form.assemble(s, levels);
    Index off = 0;
    for (int k : levels) {
        const Index dk = s.level_dim(k);
        if (const Matrix* Si = detail::gram_inv_sqrt(s, k)) {
            G.middleRows(off, dk) = (*Si) * G.middleRows(off, dk);
            G.middleCols(off, dk) = G.middleCols(off, dk) * (*Si);
        }
        off += dk;
    }
    return sym_eigs(G)(0);
}

/// lambda_min of N_d on levels 1..n_max-1 (the Q-complement of Omega inside
/// the exact domain), the vacuum residual ||N_d Omega||_Q and the verdict
/// against krolak_lower_bound.
inline GapReport nd_gap_report(const FockSpace& s, int d) {
    const auto gs = disjoint_bumps(s.grid(), d);
    const NdForm form = build_Nd(s, gs);
    GapReport r;
    r.d = d;
    r.q = s.q();
    r.n_max = s.n_max();
    r.m = s.m();
    r.krolak_bound = krolak_lower_bound(d, s.q());

    // Levels of equal parity decouple; solve each class separately.
    double lam = std::numeric_limits<double>::infinity();
    for (int parity = 0; parity < 2; ++parity) {
        std::vector<int> levels;
        for (int k = 1; k <= form.top; ++k)
            if (k % 2 == parity) levels.push_back(k);
        if (!levels.empty()) lam = std::min(lam, form_lambda_min(s, form, levels));
    }
    r.lambda_min_complement = lam;

    // N_d Omega = sum_i M_i M_i Omega, with M_i Omega on level 1.
    Vector level0 = Vector::Zero(1);
    Vector level2 = Vector::Zero(s.level_dim(2));
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const Vector one = form.raise[i][0] * Vector::Ones(1);
        level0 += form.lower[i][1] * one;
        level2 += form.raise[i][1] * one;
    }
    r.vacuum_residual = std::sqrt(std::max(0.0, level0.squaredNorm() + level2.dot(s.gram_sparse(2) * level2)));
    r.verdict = r.vacuum_residual <= 1e-10 && r.lambda_min_complement >= r.krolak_bound - 1e-8;
    if (s.q() > kConditionReportThreshold) {
        std::set<int> levels;
        for (int k = 1; k <= form.top; ++k) levels.insert(k);
        r.whitening_condition = detail::worst_condition(s, levels);
    }
    return r;
}

} // namespace qfock
