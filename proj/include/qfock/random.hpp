#pragma once

// Seeded test functions. The generator is std::mt19937_64; a draw maps the
// top 53 bits of one output word u to 2 * u * 2^-53 - 1, a uniform value in
// [-1, 1). Both steps are fully specified, so sequences reproduce across
// standard libraries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "qfock/fock.hpp"
#include "qfock/kernel.hpp"

namespace qfock {

class TestFunctionSource {
public:
    explicit TestFunctionSource(std::uint64_t seed) : engine_(seed) {}

    double uniform_pm1() {
        const std::uint64_t u = engine_() >> 11;
        return 2.0 * (static_cast<double>(u) * 0x1.0p-53) - 1.0;
    }

    Vector coefficients(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v(i) = uniform_pm1();
        return v;
    }

    /// Uniform coefficients rescaled so eps^j sum f^2 = 1.
    Vector grid_function(const Grid& grid) {
        Vector v = coefficients(grid.size());
        const double norm2 = grid.weight() * v.squaredNorm();
        return v / std::sqrt(norm2);
    }

    /// Unit vector in the orthonormal one-particle basis.
    Vector unit_vector(int m) {
        Vector v = coefficients(m);
        return v / v.norm();
    }

    /// Uniform coefficients on levels 0..max_level, zero above.
    FockVector fock_vector(const FockSpace& s, int max_level) {
        auto f = FockVector::zero(s);
        for (int k = 0; k <= std::min(max_level, s.n_max()); ++k) f[k] = coefficients(s.level_dim(k));
        return f;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace qfock
