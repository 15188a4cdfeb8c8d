#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace ensel {

// Passing this as an argument of bivariate_normal_cdf marginalizes that coordinate out:
// bivariate_normal_cdf(x, kPlusInfinity, rho) == std_normal_cdf(x).
inline constexpr double kPlusInfinity = std::numeric_limits<double>::infinity();

/// Dense row-major square matrix that is symmetric to within 1e-12.
/// Construction rejects asymmetric input with InvalidArgument.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(std::size_t dim);  // zero matrix
    SymmetricMatrix(std::size_t dim, std::vector<double> entries);
    SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SymmetricMatrix identity(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * dim_ + j]; }

    // Writes both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double value);

    std::span<const double> entries() const noexcept { return entries_; }

    friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> entries_;
};

double frobenius_distance(const SymmetricMatrix& a, const SymmetricMatrix& b);

struct Eigendecomposition {
    std::vector<double> eigenvalues;   // ascending
    std::vector<double> eigenvectors;  // dim x dim row-major; column k pairs with eigenvalues[k]
    std::size_t dim = 0;

    double vector_entry(std::size_t row, std::size_t k) const { return eigenvectors[row * dim + k]; }
};

// Phi(x). Accurate to ~1e-16 absolute; rejects NaN/inf with InvalidArgument.
double std_normal_cdf(double x);

// Phi^-1(p) for p in (0, 1).
double std_normal_quantile(double p);

// Phi_2(x, y; rho) = P(Z1 <= x, Z2 <= y) for standard normals with correlation rho.
// Uses the Drezner-Wesolowsky/Genz Gauss-Legendre scheme (6, 12 or 20 nodes depending
// on |rho|), absolute error well below 1e-12. Either argument may be kPlusInfinity.
double bivariate_normal_cdf(double x, double y, double rho);

Eigendecomposition symmetric_eigendecomposition(const SymmetricMatrix& a);

}  // namespace ensel
