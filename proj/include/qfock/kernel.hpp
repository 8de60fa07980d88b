#pragma once

// Grids U_eps and the coupling kernel Q sampled on them.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qfock/error.hpp"

namespace qfock {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A finite set of points in R^j with spacing eps and per-point weight eps^j.
class Grid {
public:
    struct Interval {
        double a;
        double b;
    };

    /// Explicit point list; rows of `points` are points in R^j.
    Grid(Matrix points, double eps) : points_(std::move(points)), eps_(eps) {
        if (points_.rows() < 1) throw ConfigError("grid: need at least one point");
        if (points_.cols() < 1) throw ConfigError("grid: dimension must be >= 1");
        if (!(eps_ > 0.0) || !std::isfinite(eps_)) throw ConfigError("grid: eps must be positive");
        for (Eigen::Index r = 0; r < points_.rows(); ++r)
            for (Eigen::Index s = r + 1; s < points_.rows(); ++s)
                if (points_.row(r) == points_.row(s))
                    throw ConfigError("grid: points must be distinct");
        weight_ = std::pow(eps_, static_cast<double>(points_.cols()));
    }

    int size() const { return static_cast<int>(points_.rows()); }
    int dimension() const { return static_cast<int>(points_.cols()); }
    double spacing() const { return eps_; }
    /// Quadrature weight eps^j.
    double weight() const { return weight_; }
    const Matrix& points() const { return points_; }
    auto point(int k) const { return points_.row(k); }
    const std::optional<Interval>& interval() const { return interval_; }

private:
    friend Grid make_grid_1d(double a, double b, int m);

    Matrix points_;
    double eps_ = 0.0;
    double weight_ = 0.0;
    std::optional<Interval> interval_;
};

/// m cell midpoints a + (k - 1/2) eps of (a, b), eps = (b - a)/m.
inline Grid make_grid_1d(double a, double b, int m) {
    if (m <= 0) throw ConfigError("make_grid_1d: m must be >= 1");
    if (!(a < b)) throw ConfigError("make_grid_1d: require a < b");
    const double eps = (b - a) / m;
    Matrix pts(m, 1);
    for (int k = 0; k < m; ++k) pts(k, 0) = a + (k + 0.5) * eps;
    Grid g(std::move(pts), eps);
    g.interval_ = Grid::Interval{a, b};
    return g;
}

/// Halves the spacing of an interval grid (2m staggered midpoints).
inline Grid refine(const Grid& grid) {
    if (!grid.interval())
        throw ConfigError("refine: only grids built by make_grid_1d can be refined");
    return make_grid_1d(grid.interval()->a, grid.interval()->b, 2 * grid.size());
}

/// Symmetric Q sampled on a grid, with q = sup |Q| < 1.
class QKernel {
public:
    QKernel(Grid grid, Matrix values) : grid_(std::move(grid)), values_(std::move(values)) {
        const int m = grid_.size();
        if (values_.rows() != m || values_.cols() != m)
            throw DimensionError("kernel: values must be " + std::to_string(m) + "x" +
                                 std::to_string(m));
        double sup = 0.0;
        for (int x = 0; x < m; ++x)
            for (int y = 0; y < m; ++y) {
                const double v = values_(x, y);
                if (!std::isfinite(v) || std::abs(v) >= 1.0)
                    throw ValidationError("sup-norm violation: |Q(" + std::to_string(x) + "," +
                                          std::to_string(y) + ")| >= 1");
                if (values_(x, y) != values_(y, x))
                    throw ValidationError("symmetry violation at (" + std::to_string(x) + "," +
                                          std::to_string(y) + ")");
                sup = std::max(sup, std::abs(v));
            }
        sup_q_ = sup;
    }

    const Grid& grid() const { return grid_; }
    const Matrix& values() const { return values_; }
    double operator()(int x, int y) const { return values_(x, y); }
    double sup_q() const { return sup_q_; }
    int size() const { return grid_.size(); }

private:
    Grid grid_;
    Matrix values_;
    double sup_q_ = 0.0;
};

inline QKernel kernel_constant(const Grid& grid, double q) {
    if (!(std::abs(q) < 1.0)) throw ValidationError("sup-norm violation: |q| must be < 1");
    return QKernel(grid, Matrix::Constant(grid.size(), grid.size(), q));
}

/// Q(x, y) = q0 exp(-|x - y|^2 / length^2).
inline QKernel kernel_gaussian(const Grid& grid, double q0, double length) {
    if (!(std::abs(q0) < 1.0)) throw ValidationError("sup-norm violation: |q0| must be < 1");
    if (!(length > 0.0)) throw ConfigError("kernel_gaussian: length must be positive");
    const int m = grid.size();
    Matrix v(m, m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y <= x; ++y) {
            const double r2 = (grid.point(x) - grid.point(y)).squaredNorm();
            v(x, y) = v(y, x) = q0 * std::exp(-r2 / (length * length));
        }
    return QKernel(grid, std::move(v));
}

inline QKernel kernel_from_matrix(const Grid& grid, Matrix values) {
    return QKernel(grid, std::move(values));
}

/// A kernel family that can be re-sampled on any grid.
struct ConstantKernelSpec {
    double q;
};
struct GaussianKernelSpec {
    double q0;
    double length;
};
struct MatrixKernelSpec {
    Matrix values;
};
using KernelSpec = std::variant<ConstantKernelSpec, GaussianKernelSpec, MatrixKernelSpec>;

inline QKernel sample_kernel(const KernelSpec& spec, const Grid& grid) {
    struct Visitor {
        const Grid& grid;
        QKernel operator()(const ConstantKernelSpec& s) const { return kernel_constant(grid, s.q); }
        QKernel operator()(const GaussianKernelSpec& s) const {
            return kernel_gaussian(grid, s.q0, s.length);
        }
        QKernel operator()(const MatrixKernelSpec& s) const { return kernel_from_matrix(grid, s.values); }
    };
    return std::visit(Visitor{grid}, spec);
}

inline bool is_resampleable(const KernelSpec& spec) {
    return !std::holds_alternative<MatrixKernelSpec>(spec);
}

namespace detail {
inline std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t h = 1469598103934665603ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return s;
}
} // namespace detail

/// FNV-1a digest of the grid points and spacing.
inline std::string grid_digest(const Grid& g) {
    std::uint64_t h = detail::fnv1a(g.points().data(),
                                    static_cast<std::size_t>(g.points().size()) * sizeof(double));
    const double eps = g.spacing();
    h = detail::fnv1a(&eps, sizeof eps, h);
    return detail::hex64(h);
}

inline std::string kernel_digest(const QKernel& k) {
    return detail::hex64(detail::fnv1a(k.values().data(),
                                       static_cast<std::size_t>(k.values().size()) * sizeof(double)));
}

} // namespace qfock
