#include "ensel/errors.hpp"
#include "ensel/numerics.hpp"
#include "ensel/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace ensel;

namespace {

SymmetricMatrix random_symmetric(Rng& rng, std::size_t dim) {
    SymmetricMatrix a(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) a.set(i, j, 2 * rng.uniform() - 1);
    }
    return a;
}

}  // namespace

TEST(StdNormalCdf, Examples) {
    EXPECT_EQ(std_normal_cdf(0.0), 0.5);
    EXPECT_NEAR(std_normal_cdf(-0.67449), 0.25, 1e-5);
    EXPECT_NEAR(std_normal_cdf(-0.67449), 0.249999920618, 1e-11);  // scipy
    EXPECT_DOUBLE_EQ(std_normal_cdf(38.0), 1.0);
    EXPECT_GE(std_normal_cdf(-38.0), 0.0);
}

TEST(StdNormalCdf, RejectsNonFinite) {
    EXPECT_THROW(std_normal_cdf(std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
    EXPECT_THROW(std_normal_cdf(std::numeric_limits<double>::infinity()), InvalidArgument);
}

TEST(StdNormalCdf, SymmetryOnRandomPoints) {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double x = 16 * rng.uniform() - 8;
        EXPECT_LE(std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0), 1e-12);
    }
}

TEST(StdNormalCdf, Monotone) {
    double prev = 0.0;
    for (double x = -10; x <= 10; x += 0.01) {
        const double v = std_normal_cdf(x);
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(StdNormalQuantile, Examples) {
    EXPECT_EQ(std_normal_quantile(0.5), 0.0);
    EXPECT_NEAR(std_normal_quantile(0.25), -0.67449, 1e-4);
    EXPECT_NEAR(std_normal_quantile(0.25), -0.674489750196, 1e-11);  // scipy
    for (double p : {1e-6, 0.01, 0.2, 0.37, 0.49}) {
        EXPECT_LE(std::abs(std_normal_quantile(p) + std_normal_quantile(1 - p)), 1e-10);
    }
}

TEST(StdNormalQuantile, RejectsOutsideUnitInterval) {
    for (double p : {0.0, 1.0, -0.1, 1.5, std::numeric_limits<double>::quiet_NaN()}) {
        EXPECT_THROW(std_normal_quantile(p), InvalidArgument) << p;
    }
}

TEST(StdNormalQuantile, RoundTrip) {
    for (int i = 0; i <= 2000; ++i) {
        const double p = 1e-6 + (1 - 2e-6) * i / 2000.0;
        EXPECT_NEAR(std_normal_cdf(std_normal_quantile(p)), p, 1e-8);
    }
}

TEST(BivariateNormalCdf, Examples) {
    EXPECT_NEAR(bivariate_normal_cdf(0, 0, 0), 0.25, 1e-15);
    EXPECT_NEAR(bivariate_normal_cdf(0, 0, 0.5), 1.0 / 3.0, 1e-4);
    EXPECT_NEAR(bivariate_normal_cdf(0, 0, 0.5), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(bivariate_normal_cdf(0.7, kPlusInfinity, 0.3), std_normal_cdf(0.7), 1e-15);
    EXPECT_NEAR(bivariate_normal_cdf(kPlusInfinity, -1.1, -0.8), std_normal_cdf(-1.1), 1e-15);
    EXPECT_EQ(bivariate_normal_cdf(kPlusInfinity, kPlusInfinity, 0.2), 1.0);
    EXPECT_EQ(bivariate_normal_cdf(-kPlusInfinity, 0.4, 0.2), 0.0);
}

// Values from 2-D adaptive quadrature of the density (scipy dblquad, tol 1e-13).
TEST(BivariateNormalCdf, MatchesQuadratureOracle) {
    struct Case {
        double x, y, rho, expected;
    };
    for (const Case c : {Case{-0.5, 0.3, 0.3, 0.23038944960565}, Case{-1.2, -0.8, -0.6, 0.00167827768387},
                         Case{1.0, 2.0, 0.9, 0.84109618703678}, Case{-0.8416, -0.8416, 0.5, 0.08715429416592}}) {
        EXPECT_NEAR(bivariate_normal_cdf(c.x, c.y, c.rho), c.expected, 1e-10) << c.x << " " << c.y << " " << c.rho;
    }
}

TEST(BivariateNormalCdf, RejectsDegenerateCorrelation) {
    EXPECT_THROW(bivariate_normal_cdf(0, 0, 1.0), InvalidArgument);
    EXPECT_THROW(bivariate_normal_cdf(0, 0, -1.0), InvalidArgument);
    EXPECT_THROW(bivariate_normal_cdf(0, 0, 1.5), InvalidArgument);
    EXPECT_THROW(bivariate_normal_cdf(0, 0, std::numeric_limits<double>::quiet_NaN()), InvalidArgument);
}

TEST(BivariateNormalCdf, IndependenceFactorizes) {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double x = 8 * rng.uniform() - 4, y = 8 * rng.uniform() - 4;
        EXPECT_NEAR(bivariate_normal_cdf(x, y, 0.0), std_normal_cdf(x) * std_normal_cdf(y), 1e-7);
    }
}

TEST(BivariateNormalCdf, ExchangeableAndWithinFrechetBounds) {
    Rng rng(4);
    for (int i = 0; i < 5000; ++i) {
        const double x = 8 * rng.uniform() - 4, y = 8 * rng.uniform() - 4;
        const double rho = 1.998 * rng.uniform() - 0.999;
        const double v = bivariate_normal_cdf(x, y, rho);
        EXPECT_NEAR(v, bivariate_normal_cdf(y, x, rho), 1e-14);
        const double px = std_normal_cdf(x), py = std_normal_cdf(y);
        EXPECT_GE(v, std::max(0.0, px + py - 1) - 1e-12);
        EXPECT_LE(v, std::min(px, py) + 1e-12);
    }
}

TEST(BivariateNormalCdf, MonotoneInEachArgument) {
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
        const double x = 6 * rng.uniform() - 3, y = 6 * rng.uniform() - 3;
        const double rho = 1.9 * rng.uniform() - 0.95;
        const double v = bivariate_normal_cdf(x, y, rho);
        EXPECT_GE(bivariate_normal_cdf(x + 0.05, y, rho), v - 1e-14);
        EXPECT_GE(bivariate_normal_cdf(x, y + 0.05, rho), v - 1e-14);
        EXPECT_GE(bivariate_normal_cdf(x, y, std::min(rho + 0.04, 0.999)), v - 1e-14);
    }
}

TEST(SymmetricMatrix, RejectsAsymmetricInput) {
    EXPECT_THROW(SymmetricMatrix(2, {1.0, 0.5, 0.4, 1.0}), InvalidArgument);
    EXPECT_THROW((SymmetricMatrix{{1.0, 0.2}, {0.3, 1.0}}), InvalidArgument);
    EXPECT_NO_THROW((SymmetricMatrix{{1.0, 0.2}, {0.2 + 1e-13, 1.0}}));
    EXPECT_THROW(SymmetricMatrix(2, {1.0, 0.0, 0.0}), InvalidArgument);
}

TEST(SymmetricEigendecomposition, Examples) {
    const auto id = symmetric_eigendecomposition(SymmetricMatrix::identity(3));
    for (double v : id.eigenvalues) EXPECT_NEAR(v, 1.0, 1e-14);

    const auto two = symmetric_eigendecomposition(SymmetricMatrix{{1.0, 1.2}, {1.2, 1.0}});
    EXPECT_NEAR(two.eigenvalues[0], -0.2, 1e-14);
    EXPECT_NEAR(two.eigenvalues[1], 2.2, 1e-14);

    const auto diag = symmetric_eigendecomposition(SymmetricMatrix{{3.0, 0, 0}, {0, -1.0, 0}, {0, 0, 0.5}});
    EXPECT_NEAR(diag.eigenvalues[0], -1.0, 1e-14);
    EXPECT_NEAR(diag.eigenvalues[1], 0.5, 1e-14);
    EXPECT_NEAR(diag.eigenvalues[2], 3.0, 1e-14);
}

TEST(SymmetricEigendecomposition, ReconstructsRandomMatrices) {
    Rng rng(6);
    for (std::size_t dim = 1; dim <= 16; ++dim) {
        const auto a = random_symmetric(rng, dim);
        const auto e = symmetric_eigendecomposition(a);
        ASSERT_EQ(e.eigenvalues.size(), dim);
        for (std::size_t k = 1; k < dim; ++k) EXPECT_LE(e.eigenvalues[k - 1], e.eigenvalues[k]);
        SymmetricMatrix rebuilt(dim);
        double ortho = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = i; j < dim; ++j) {
                double s = 0.0, g = 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    s += e.vector_entry(i, k) * e.eigenvalues[k] * e.vector_entry(j, k);
                    g += e.vector_entry(k, i) * e.vector_entry(k, j);
                }
                rebuilt.set(i, j, s);
                ortho += (g - (i == j ? 1.0 : 0.0)) * (g - (i == j ? 1.0 : 0.0));
            }
        }
        EXPECT_LE(frobenius_distance(a, rebuilt), 1e-8) << dim;
        EXPECT_LE(std::sqrt(ortho), 1e-8) << dim;
    }
}
