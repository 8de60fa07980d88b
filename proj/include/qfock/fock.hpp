#pragma once

// The truncated discrete Q-Fock space over an m-point grid.
//
// Level k holds R^(m^k), indexed lexicographically by (x_1, ..., x_k) with x_1
// the slowest digit. Basis vectors e_x are orthonormal in the undeformed inner
// product; the Q-inner product on level k is <f, P^(k) g>_0.
//
// Operators taking a one-particle vector `h` read it as coefficients in the
// orthonormal basis {e_x}. Use smear() to turn a grid function into those
// coefficients with the sqrt(eps^j) scale.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qfock/error.hpp"
#include "qfock/kernel.hpp"
#include "qfock/symcomb.hpp"

namespace qfock {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Index = Eigen::Index;

/// Largest level dimension for which dense Gram matrices are materialized.
inline constexpr Index kDenseLevelCap = 4096;

/// Symmetric eigendecomposition of a Gram operator with the derived
/// inverse and square roots.
struct GramFactor {
    Vector eigenvalues;
    Matrix eigenvectors;
    Matrix inverse;
    Matrix sqrt;
    Matrix inv_sqrt;

    double min_eigenvalue() const { return eigenvalues.size() ? eigenvalues.minCoeff() : 1.0; }
    double condition() const {
        return eigenvalues.size() ? eigenvalues.maxCoeff() / eigenvalues.minCoeff() : 1.0;
    }
};

namespace detail {

inline Index ipow(Index base, int e) {
    Index r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

inline SparseMatrix sparse_identity(Index n) {
    SparseMatrix I(n, n);
    I.setIdentity();
    return I;
}

/// T_i^(n) as a monomial sparse matrix: e_c -> Q(c_i, c_{i+1}) e_{swap_i(c)}.
inline SparseMatrix build_swap(const QKernel& kernel, int n, int i) {
    const Index m = kernel.size();
    const Index dim = ipow(m, n);
    const Index si = ipow(m, n - i);      // stride of position i
    const Index si1 = ipow(m, n - i - 1); // stride of position i+1
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(dim));
    for (Index c = 0; c < dim; ++c) {
        const Index xi = (c / si) % m;
        const Index xj = (c / si1) % m;
        const double v = kernel(static_cast<int>(xi), static_cast<int>(xj));
        if (v == 0.0) continue;
        const Index row = c - xi * si - xj * si1 + xj * si + xi * si1;
        trips.emplace_back(row, c, v);
    }
    SparseMatrix T(dim, dim);
    T.setFromTriplets(trips.begin(), trips.end());
    return T;
}

/// I_m (x) A, acting on positions 2..n+1.
inline SparseMatrix identity_kron(Index m, const SparseMatrix& A) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(m * A.nonZeros()));
    for (Index y = 0; y < m; ++y)
        for (Index col = 0; col < A.outerSize(); ++col)
            for (SparseMatrix::InnerIterator it(A, col); it; ++it)
                trips.emplace_back(y * A.rows() + it.row(), y * A.cols() + col, it.value());
    SparseMatrix out(m * A.rows(), m * A.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

/// h (x) (.) from level k (dim) to level k+1.
inline SparseMatrix left_tensor(const Vector& h, Index dim) {
    const Index m = h.size();
    std::vector<Eigen::Triplet<double>> trips;
    for (Index y = 0; y < m; ++y) {
        if (h(y) == 0.0) continue;
        for (Index c = 0; c < dim; ++c) trips.emplace_back(y * dim + c, c, h(y));
    }
    SparseMatrix out(m * dim, dim);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

/// (.) (x) h from level k (dim) to level k+1.
inline SparseMatrix right_tensor(const Vector& h, Index dim) {
    const Index m = h.size();
    std::vector<Eigen::Triplet<double>> trips;
    for (Index c = 0; c < dim; ++c)
        for (Index y = 0; y < m; ++y)
            if (h(y) != 0.0) trips.emplace_back(c * m + y, c, h(y));
    SparseMatrix out(dim * m, dim);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

inline GramFactor factorize(const Matrix& P, int level) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (P + P.transpose()));
    if (es.info() != Eigen::Success)
        throw PositivityError("positivity violation: eigensolver failed at level " +
                              std::to_string(level));
    GramFactor f;
    f.eigenvalues = es.eigenvalues();
    f.eigenvectors = es.eigenvectors();
    const double top = std::max(1.0, f.eigenvalues.cwiseAbs().maxCoeff());
    if (f.eigenvalues.size() && f.eigenvalues.minCoeff() <= 1e-13 * top)
        throw PositivityError("positivity violation: Gram operator singular at level " +
                              std::to_string(level));
    const Matrix& V = f.eigenvectors;
    const Vector& lam = f.eigenvalues;
    f.inverse = V * lam.cwiseInverse().asDiagonal() * V.transpose();
    f.sqrt = V * lam.cwiseSqrt().asDiagonal() * V.transpose();
    f.inv_sqrt = V * lam.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
    return f;
}

} // namespace detail

/// R^(n) = 1 + T_1 + T_1 T_2 + ... + T_1 ... T_{n-1}, from a table of swaps
/// where swaps[i-1] = T_i^(n).
inline SparseMatrix r_from_swaps(Index dim, const std::vector<SparseMatrix>& swaps) {
    SparseMatrix R = detail::sparse_identity(dim);
    SparseMatrix prefix = detail::sparse_identity(dim);
    for (const auto& T : swaps) {
        prefix = (prefix * T).pruned();
        R += prefix;
    }
    return R;
}

/// The mirrored partial sum 1 + T_{n-1} + T_{n-1} T_{n-2} + ... + T_{n-1} ... T_1.
inline SparseMatrix mirrored_r_from_swaps(Index dim, const std::vector<SparseMatrix>& swaps) {
    SparseMatrix R = detail::sparse_identity(dim);
    SparseMatrix prefix = detail::sparse_identity(dim);
    for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
        prefix = (prefix * *it).pruned();
        R += prefix;
    }
    return R;
}

/// Truncated Fock space: levels 0..n_max over the kernel's grid. Sparse
/// T_i, R and P operators are built eagerly; dense Gram matrices and their
/// eigendecompositions are built on first use.
class FockSpace {
public:
    FockSpace(QKernel kernel, int n_max) : kernel_(std::move(kernel)), n_max_(n_max) {
        if (n_max_ < 1) throw ConfigError("fock space: n_max must be >= 1");
        const Index m = kernel_.size();
        dims_.resize(static_cast<std::size_t>(n_max_) + 1);
        offsets_.resize(dims_.size());
        Index off = 0;
        for (int k = 0; k <= n_max_; ++k) {
            dims_[k] = detail::ipow(m, k);
            offsets_[k] = off;
            off += dims_[k];
        }
        total_ = off;

        swaps_.resize(dims_.size());
        r_.resize(dims_.size());
        gram_.resize(dims_.size());
        for (int n = 0; n <= n_max_; ++n) {
            for (int i = 1; i < n; ++i) swaps_[n].push_back(detail::build_swap(kernel_, n, i));
            r_[n] = r_from_swaps(dims_[n], swaps_[n]);
        }
        // P^(0) = P^(1) = 1, P^(n+1) = (1 (x) P^(n)) R^(n+1).
        gram_[0] = detail::sparse_identity(1);
        gram_[1] = detail::sparse_identity(m);
        for (int n = 1; n < n_max_; ++n)
            gram_[n + 1] = (detail::identity_kron(m, gram_[n]) * r_[n + 1]).pruned();

        cache_ = std::make_unique<Cache>();
        cache_->dense.resize(dims_.size());
        cache_->factor.resize(dims_.size());
    }

    FockSpace(FockSpace&&) noexcept = default;
    FockSpace& operator=(FockSpace&&) noexcept = default;

    const QKernel& kernel() const { return kernel_; }
    const Grid& grid() const { return kernel_.grid(); }
    int m() const { return kernel_.size(); }
    int n_max() const { return n_max_; }
    double q() const { return kernel_.sup_q(); }
    Index level_dim(int k) const { return dims_.at(static_cast<std::size_t>(check_level(k))); }
    Index offset(int k) const { return offsets_.at(static_cast<std::size_t>(check_level(k))); }
    Index total_dim() const { return total_; }
    const std::vector<Index>& level_dims() const { return dims_; }

    /// Lexicographic index of (x_1, ..., x_k), 0-based grid indices.
    Index index_of(std::span<const int> xs) const {
        Index idx = 0;
        for (int x : xs) {
            if (x < 0 || x >= m()) throw RangeError("grid index out of range");
            idx = idx * m() + x;
        }
        return idx;
    }

    std::vector<int> digits(int k, Index idx) const {
        std::vector<int> xs(static_cast<std::size_t>(k));
        for (int p = k - 1; p >= 0; --p) {
            xs[static_cast<std::size_t>(p)] = static_cast<int>(idx % m());
            idx /= m();
        }
        return xs;
    }

    /// T_i^(n), 1 <= i <= n-1.
    const SparseMatrix& swap_sparse(int n, int i) const {
        check_level(n);
        if (n < 2 || i < 1 || i > n - 1)
            throw RangeError("swap operator T_" + std::to_string(i) + " undefined on level " +
                             std::to_string(n));
        return swaps_[n][static_cast<std::size_t>(i - 1)];
    }
    const std::vector<SparseMatrix>& swaps(int n) const { return swaps_.at(static_cast<std::size_t>(check_level(n))); }
    const SparseMatrix& r_sparse(int n) const { return r_.at(static_cast<std::size_t>(check_level(n))); }
    const SparseMatrix& gram_sparse(int n) const { return gram_.at(static_cast<std::size_t>(check_level(n))); }

    const Matrix& gram_dense(int n) const {
        check_level(n);
        check_dense(n);
        std::lock_guard lock(cache_->mutex);
        auto& slot = cache_->dense[static_cast<std::size_t>(n)];
        if (!slot) slot = Matrix(gram_[n]);
        return *slot;
    }

    const GramFactor& gram_factor(int n) const {
        const Matrix& P = gram_dense(n);
        std::lock_guard lock(cache_->mutex);
        auto& slot = cache_->factor[static_cast<std::size_t>(n)];
        if (!slot) slot = detail::factorize(P, n);
        return *slot;
    }

private:
    int check_level(int k) const {
        if (k < 0 || k > n_max_)
            throw RangeError("level " + std::to_string(k) + " outside 0.." + std::to_string(n_max_));
        return k;
    }
    void check_dense(int n) const {
        if (dims_[n] > kDenseLevelCap)
            throw ResourceLimitError("level " + std::to_string(n) + " dimension " +
                                     std::to_string(dims_[n]) + " exceeds dense cap");
    }

    struct Cache {
        std::mutex mutex;
        std::vector<std::optional<Matrix>> dense;
        std::vector<std::optional<GramFactor>> factor;
    };

    QKernel kernel_;
    int n_max_;
    std::vector<Index> dims_;
    std::vector<Index> offsets_;
    Index total_ = 0;
    std::vector<std::vector<SparseMatrix>> swaps_;
    std::vector<SparseMatrix> r_;
    std::vector<SparseMatrix> gram_;
    std::unique_ptr<Cache> cache_;
};

/// A linear map from one level to another.
struct LevelMap {
    int from = 0;
    int to = 0;
    Matrix matrix;
};

/// Coefficients per level 0..n_max.
struct FockVector {
    std::vector<Vector> levels;

    static FockVector zero(const FockSpace& s) {
        FockVector v;
        for (int k = 0; k <= s.n_max(); ++k) v.levels.push_back(Vector::Zero(s.level_dim(k)));
        return v;
    }
    static FockVector vacuum(const FockSpace& s) {
        auto v = zero(s);
        v.levels[0](0) = 1.0;
        return v;
    }
    /// A vector supported on a single level.
    static FockVector at_level(const FockSpace& s, int k, const Vector& coeffs) {
        auto v = zero(s);
        if (coeffs.size() != s.level_dim(k)) throw DimensionError("level vector has wrong length");
        v.levels[static_cast<std::size_t>(k)] = coeffs;
        return v;
    }

    int n_max() const { return static_cast<int>(levels.size()) - 1; }
    Vector& operator[](int k) { return levels.at(static_cast<std::size_t>(k)); }
    const Vector& operator[](int k) const { return levels.at(static_cast<std::size_t>(k)); }

    /// Concatenation of all levels, level 0 first.
    Vector flatten() const {
        Index n = 0;
        for (const auto& l : levels) n += l.size();
        Vector out(n);
        Index off = 0;
        for (const auto& l : levels) {
            out.segment(off, l.size()) = l;
            off += l.size();
        }
        return out;
    }

    FockVector& operator+=(const FockVector& o) {
        if (o.levels.size() != levels.size()) throw DimensionError("fock vectors on different spaces");
        for (std::size_t k = 0; k < levels.size(); ++k) levels[k] += o.levels[k];
        return *this;
    }
    FockVector& operator-=(const FockVector& o) {
        if (o.levels.size() != levels.size()) throw DimensionError("fock vectors on different spaces");
        for (std::size_t k = 0; k < levels.size(); ++k) levels[k] -= o.levels[k];
        return *this;
    }
    friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
    friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
    friend FockVector operator*(double s, FockVector a) {
        for (auto& l : a.levels) l *= s;
        return a;
    }
};

/// Block operator on the truncated space. `truncated_from` lists input levels
/// whose image would leave the truncation and was dropped.
class FockOperator {
public:
    using Key = std::pair<int, int>; // (from, to)

    void add_block(int from, int to, const Matrix& m) {
        auto it = blocks_.find({from, to});
        if (it == blocks_.end())
            blocks_.emplace(Key{from, to}, m);
        else
            it->second += m;
    }
    void mark_truncated(int from) { truncated_.insert(from); }

    const std::map<Key, Matrix>& blocks() const { return blocks_; }
    const std::set<int>& truncated_from() const { return truncated_; }

    bool has_block(int from, int to) const { return blocks_.count({from, to}) != 0; }
    const Matrix& block(int from, int to) const {
        auto it = blocks_.find({from, to});
        if (it == blocks_.end())
            throw RangeError("no block " + std::to_string(from) + "->" + std::to_string(to));
        return it->second;
    }
    LevelMap level_map(int from, int to) const { return {from, to, block(from, to)}; }

    std::set<int> domain() const {
        std::set<int> d;
        for (const auto& [k, _] : blocks_) d.insert(k.first);
        return d;
    }

    /// Keeps only blocks whose input level lies in `levels`.
    FockOperator restricted(const std::set<int>& levels) const {
        FockOperator out;
        for (const auto& [k, M] : blocks_)
            if (levels.count(k.first)) out.blocks_.emplace(k, M);
        for (int t : truncated_)
            if (levels.count(t)) out.truncated_.insert(t);
        return out;
    }

    static FockOperator identity(const FockSpace& s, int lo, int hi) {
        FockOperator I;
        for (int k = std::max(0, lo); k <= std::min(hi, s.n_max()); ++k)
            I.add_block(k, k, Matrix::Identity(s.level_dim(k), s.level_dim(k)));
        return I;
    }

    FockOperator& operator+=(const FockOperator& o) {
        for (const auto& [k, M] : o.blocks_) add_block(k.first, k.second, M);
        truncated_.insert(o.truncated_.begin(), o.truncated_.end());
        return *this;
    }
    FockOperator& operator*=(double s) {
        for (auto& [_, M] : blocks_) M *= s;
        return *this;
    }
    friend FockOperator operator+(FockOperator a, const FockOperator& b) { return a += b; }
    friend FockOperator operator-(FockOperator a, FockOperator b) { return a += (b *= -1.0); }
    friend FockOperator operator*(double s, FockOperator a) { return a *= s; }

    /// Composition a * b (b applied first).
    friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
        FockOperator out;
        out.truncated_ = b.truncated_;
        for (const auto& [kb, Mb] : b.blocks_) {
            const int mid = kb.second;
            if (a.truncated_.count(mid)) out.truncated_.insert(kb.first);
            for (const auto& [ka, Ma] : a.blocks_)
                if (ka.first == mid) out.add_block(kb.first, ka.second, Ma * Mb);
        }
        return out;
    }

    /// Applies the operator; `exact` is cleared when nonzero input sits on a
    /// truncated level.
    FockVector apply(const FockVector& v, bool* exact = nullptr) const {
        FockVector out;
        for (const auto& l : v.levels) out.levels.push_back(Vector::Zero(l.size()));
        for (const auto& [k, M] : blocks_) out[k.second].noalias() += M * v[k.first];
        if (exact)
            for (int t : truncated_)
                if (t < static_cast<int>(v.levels.size()) && (v[t].array() != 0.0).any()) *exact = false;
        return out;
    }

private:
    std::map<Key, Matrix> blocks_;
    std::set<int> truncated_;
};

// -- one-particle helpers ---------------------------------------------------

/// Coefficients of a grid function in the orthonormal basis: sqrt(eps^j) f.
inline Vector smear(const Grid& grid, const Vector& f) {
    if (f.size() != grid.size()) throw DimensionError("grid function has wrong length");
    return std::sqrt(grid.weight()) * f;
}

/// Basis vector e_x of the one-particle space.
inline Vector basis_vector(int m, int x) {
    Vector e = Vector::Zero(m);
    e(x) = 1.0;
    return e;
}

// -- level maps ---------------------------------------------------------------

inline LevelMap swap_op(const FockSpace& s, int n, int i) {
    return {n, n, Matrix(s.swap_sparse(n, i))};
}

/// phi_n(p): product of T's along a minimal word for p.
inline LevelMap phi_op(const FockSpace& s, int n, const Permutation& p) {
    if (p.size() != n && !(n == 0 && p.size() <= 1))
        throw DimensionError("phi_op: permutation size differs from level");
    if (n > kPermutationCap) throw ResourceLimitError("phi_op: level exceeds permutation cap");
    const Index dim = s.level_dim(n);
    SparseMatrix acc = detail::sparse_identity(dim);
    for (int letter : reduced_word(p).letters) acc = acc * s.swap_sparse(n, letter);
    return {n, n, Matrix(acc)};
}

/// Same as phi_op but along a caller-supplied word (no minimality check).
inline LevelMap phi_along_word(const FockSpace& s, int n, const ReducedWord& w) {
    SparseMatrix acc = detail::sparse_identity(s.level_dim(n));
    for (int letter : w.letters) acc = acc * s.swap_sparse(n, letter);
    return {n, n, Matrix(acc)};
}

/// P_Q^(n) as the sum of phi over all of S_n.
inline LevelMap p_direct(const FockSpace& s, int n) {
    if (n > kPermutationCap)
        throw ResourceLimitError("p_direct: n=" + std::to_string(n) + " exceeds cap " +
                                 std::to_string(kPermutationCap));
    const Index dim = s.level_dim(n);
    if (n == 0) return {0, 0, Matrix::Identity(1, 1)};
    Matrix P = Matrix::Zero(dim, dim);
    for (const auto& p : enumerate_permutations(n)) P += phi_op(s, n, p).matrix;
    return {n, n, std::move(P)};
}

inline LevelMap r_op(const FockSpace& s, int n) {
    if (n < 1) throw RangeError("r_op: n must be >= 1");
    return {n, n, Matrix(s.r_sparse(n))};
}

inline LevelMap mirrored_r_op(const FockSpace& s, int n) {
    if (n < 1) throw RangeError("mirrored_r_op: n must be >= 1");
    return {n, n, Matrix(mirrored_r_from_swaps(s.level_dim(n), s.swaps(n)))};
}

/// P_Q^(n) from the recursion P^(n+1) = (1 (x) P^(n)) R^(n+1).
inline LevelMap p_recursive(const FockSpace& s, int n) {
    return {n, n, Matrix(s.gram_sparse(n))};
}

inline void check_same_space(const FockSpace& s, const FockVector& f) {
    if (f.n_max() != s.n_max()) throw DimensionError("fock vector has wrong number of levels");
    for (int k = 0; k <= s.n_max(); ++k)
        if (f[k].size() != s.level_dim(k)) throw DimensionError("fock vector level has wrong length");
}

/// sum_k <f_k, P^(k) g_k>_0.
inline double q_inner(const FockSpace& s, const FockVector& f, const FockVector& g) {
    check_same_space(s, f);
    check_same_space(s, g);
    double acc = 0.0;
    for (int k = 0; k <= s.n_max(); ++k) acc += f[k].dot(s.gram_sparse(k) * g[k]);
    return acc;
}

inline double q_norm(const FockSpace& s, const FockVector& f) {
    return std::sqrt(std::max(0.0, q_inner(s, f, f)));
}

// -- creation / annihilation ---------------------------------------------------

inline void check_one_particle(const FockSpace& s, const Vector& h) {
    if (h.size() != s.m())
        throw DimensionError("one-particle vector has length " + std::to_string(h.size()) +
                             ", expected " + std::to_string(s.m()));
}

/// a+(h) f = h (x) f; the n_max -> n_max+1 block is truncated.
inline FockOperator create(const FockSpace& s, const Vector& h) {
    check_one_particle(s, h);
    FockOperator A;
    for (int k = 0; k < s.n_max(); ++k)
        A.add_block(k, k + 1, Matrix(detail::left_tensor(h, s.level_dim(k))));
    A.mark_truncated(s.n_max());
    return A;
}

/// Free left annihilation l(h) on level k (k >= 1).
inline SparseMatrix free_annihilate_sparse(const FockSpace& s, const Vector& h, int k) {
    return SparseMatrix(detail::left_tensor(h, s.level_dim(k - 1)).transpose());
}

/// a(h) = l(h) R^(k) on each level k >= 1.
inline FockOperator annihilate(const FockSpace& s, const Vector& h) {
    check_one_particle(s, h);
    FockOperator A;
    for (int k = 1; k <= s.n_max(); ++k)
        A.add_block(k, k - 1, Matrix(free_annihilate_sparse(s, h, k) * s.r_sparse(k)));
    return A;
}

/// a_r+(h) f = f (x) h.
inline FockOperator right_create(const FockSpace& s, const Vector& h) {
    check_one_particle(s, h);
    FockOperator A;
    for (int k = 0; k < s.n_max(); ++k)
        A.add_block(k, k + 1, Matrix(detail::right_tensor(h, s.level_dim(k))));
    A.mark_truncated(s.n_max());
    return A;
}

/// Blockwise Q-adjoint: (P_from)^-1 M^T P_to for each block from -> to.
inline FockOperator q_adjoint(const FockSpace& s, const FockOperator& A) {
    FockOperator B;
    for (const auto& [key, M] : A.blocks()) {
        const auto [from, to] = key;
        if (M.rows() != s.level_dim(to) || M.cols() != s.level_dim(from))
            throw DimensionError("q_adjoint: block shape inconsistent with the space");
        Matrix MtP = M.transpose() * s.gram_sparse(to);
        if (from <= 1)
            B.add_block(to, from, MtP);
        else
            B.add_block(to, from, s.gram_factor(from).inverse * MtP);
    }
    return B;
}

inline FockOperator right_annihilate(const FockSpace& s, const Vector& h) {
    return q_adjoint(s, right_create(s, h));
}

/// r(h) R_mirror^(k) on each level: the closed form conjectured for a_r(h).
inline FockOperator right_annihilate_mirrored(const FockSpace& s, const Vector& h) {
    check_one_particle(s, h);
    FockOperator A;
    for (int k = 1; k <= s.n_max(); ++k) {
        SparseMatrix r_free = detail::right_tensor(h, s.level_dim(k - 1)).transpose();
        A.add_block(k, k - 1, Matrix(r_free * mirrored_r_from_swaps(s.level_dim(k), s.swaps(k))));
    }
    return A;
}

/// w(h) = a+(h) + a(h).
inline FockOperator field(const FockSpace& s, const Vector& h) {
    return create(s, h) + annihilate(s, h);
}

/// w_r(h) = a_r+(h) + a_r(h).
inline FockOperator right_field(const FockSpace& s, const Vector& h) {
    return right_create(s, h) + right_annihilate(s, h);
}

struct WordResult {
    FockVector vector;
    /// False when some application dropped nonzero mass above n_max.
    bool truncation_exact = true;
};

/// Applies ops right to left: ops = [X_n, ..., X_1] yields X_n ... X_1 v.
inline WordResult apply_word(const FockSpace& s, const std::vector<FockOperator>& ops, const FockVector& v) {
    check_same_space(s, v);
    WordResult r{v, true};
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) r.vector = it->apply(r.vector, &r.truncation_exact);
    return r;
}

// -- vector-level application (no operator assembly) ----------------------------

/// h (x) v for v on level k.
inline Vector tensor_left(const Vector& h, const Vector& v) {
    Vector out(h.size() * v.size());
    Eigen::Map<Matrix>(out.data(), v.size(), h.size()) = v * h.transpose();
    return out;
}

/// l(h) u for u on level k >= 1.
inline Vector contract_left(const Vector& h, const Vector& u) {
    const Index rest = u.size() / h.size();
    return Eigen::Map<const Matrix>(u.data(), rest, h.size()) * h;
}

/// a(h) applied to a level-k vector.
inline Vector annihilate_apply(const FockSpace& s, const Vector& h, int k, const Vector& u) {
    if (k == 0) return Vector::Zero(0);
    const Vector Ru = s.r_sparse(k) * u;
    return contract_left(h, Ru);
}

} // namespace qfock
