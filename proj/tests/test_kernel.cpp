#include <gtest/gtest.h>

#include <cmath>

#include "qfock/kernel.hpp"

using namespace qfock;

TEST(Grid, Interval1d) {
    const auto g1 = make_grid_1d(0, 1, 1);
    EXPECT_EQ(g1.size(), 1);
    EXPECT_DOUBLE_EQ(g1.points()(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(g1.spacing(), 1.0);

    const auto g4 = make_grid_1d(0, 1, 4);
    const double expected[] = {0.125, 0.375, 0.625, 0.875};
    for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(g4.points()(k, 0), expected[k]);
    EXPECT_DOUBLE_EQ(g4.spacing(), 0.25);
    EXPECT_DOUBLE_EQ(g4.weight(), 0.25);

    EXPECT_DOUBLE_EQ(make_grid_1d(0, 2, 4).spacing(), 0.5);
}

TEST(Grid, Errors) {
    EXPECT_THROW(make_grid_1d(0, 1, 0), ConfigError);
    EXPECT_THROW(make_grid_1d(0, 1, -3), ConfigError);
    EXPECT_THROW(make_grid_1d(1, 1, 2), ConfigError);
    Matrix dup(2, 2);
    dup << 0, 0, 0, 0;
    EXPECT_THROW(Grid(dup, 0.1), ConfigError);
    EXPECT_THROW(Grid(Matrix::Zero(1, 2), 0.0), ConfigError);
}

TEST(Grid, PointListWeightIsEpsToTheJ) {
    Matrix pts(3, 2);
    pts << 0, 0, 0.1, 0, 0, 0.1;
    Grid g(pts, 0.1);
    EXPECT_EQ(g.dimension(), 2);
    EXPECT_NEAR(g.weight(), 0.01, 1e-15);
    EXPECT_FALSE(g.interval().has_value());
    EXPECT_THROW(refine(g), ConfigError);
}

TEST(Grid, Refine) {
    const auto g = refine(make_grid_1d(0, 1, 2));
    EXPECT_EQ(g.size(), 4);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.25);
    EXPECT_EQ(refine(refine(make_grid_1d(0, 1, 3))).size(), 12);
    const auto base = make_grid_1d(-1, 2, 5);
    EXPECT_DOUBLE_EQ(refine(base).weight(), base.weight() / 2);
}

TEST(Kernel, Constant) {
    const auto g = make_grid_1d(0, 1, 2);
    const auto k0 = kernel_constant(g, 0.0);
    EXPECT_TRUE(k0.values().isZero(0));
    EXPECT_EQ(k0.sup_q(), 0.0);
    const auto k = kernel_constant(g, 0.5);
    EXPECT_EQ(k.values(), Matrix::Constant(2, 2, 0.5));
    EXPECT_EQ(k.sup_q(), 0.5);
    EXPECT_EQ(kernel_constant(g, -0.4).sup_q(), 0.4);
    EXPECT_THROW(kernel_constant(g, 1.0), ValidationError);
    EXPECT_THROW(kernel_constant(g, -1.0), ValidationError);
}

TEST(Kernel, Gaussian) {
    const auto g = make_grid_1d(0, 1, 8);
    const auto k = kernel_gaussian(g, 0.5, 0.2);
    for (int x = 0; x < 8; ++x) EXPECT_EQ(k(x, x), 0.5);
    EXPECT_EQ(k.sup_q(), 0.5);
    EXPECT_TRUE(kernel_gaussian(g, 0.0, 0.2).values().isZero(0));

    // Points 0.125 apart with length 0.125: 0.5 e^{-1}.
    const auto k2 = kernel_gaussian(g, 0.5, 0.125);
    EXPECT_NEAR(k2(0, 1), 0.5 * std::exp(-1.0), 1e-15);
    EXPECT_THROW(kernel_gaussian(g, 1.2, 0.2), ValidationError);
    EXPECT_THROW(kernel_gaussian(g, 0.5, 0.0), ConfigError);
}

TEST(Kernel, GaussianResamplingMatchesClosedForm) {
    auto g = make_grid_1d(0, 1, 4);
    for (int r = 0; r < 3; ++r, g = refine(g)) {
        const auto k = kernel_gaussian(g, 0.7, 0.3);
        for (int x = 0; x < g.size(); ++x)
            for (int y = 0; y < g.size(); ++y) {
                const double dx = g.points()(x, 0) - g.points()(y, 0);
                EXPECT_NEAR(k(x, y), 0.7 * std::exp(-dx * dx / 0.09), 1e-15);
                EXPECT_EQ(k(x, y), k(y, x));
            }
    }
}

TEST(Kernel, FromMatrix) {
    const auto g = make_grid_1d(0, 1, 3);
    const auto k = kernel_from_matrix(g, Matrix::Constant(3, 3, 0.9));
    EXPECT_EQ(k.sup_q(), 0.9);
    Matrix bad = Matrix::Zero(3, 3);
    bad(1, 2) = bad(2, 1) = 1.0;
    EXPECT_THROW(kernel_from_matrix(g, bad), ValidationError);
    Matrix asym = Matrix::Zero(3, 3);
    asym(0, 1) = 0.2;
    asym(1, 0) = 0.3;
    try {
        kernel_from_matrix(g, asym);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("symmetry violation"), std::string::npos);
    }
    EXPECT_THROW(kernel_from_matrix(g, Matrix::Zero(2, 2)), DimensionError);
}

TEST(Kernel, SampleSpec) {
    const auto g = make_grid_1d(0, 1, 4);
    EXPECT_EQ(sample_kernel(ConstantKernelSpec{0.3}, g).values(), kernel_constant(g, 0.3).values());
    EXPECT_TRUE(is_resampleable(GaussianKernelSpec{0.5, 0.2}));
    EXPECT_FALSE(is_resampleable(MatrixKernelSpec{Matrix::Zero(4, 4)}));
}

TEST(Kernel, DigestsAreStable) {
    const auto g = make_grid_1d(0, 1, 4);
    EXPECT_EQ(grid_digest(g), grid_digest(make_grid_1d(0, 1, 4)));
    EXPECT_NE(grid_digest(g), grid_digest(make_grid_1d(0, 1, 5)));
    EXPECT_EQ(kernel_digest(kernel_constant(g, 0.3)).size(), 16u);
    EXPECT_NE(kernel_digest(kernel_constant(g, 0.3)), kernel_digest(kernel_constant(g, 0.2)));
}
