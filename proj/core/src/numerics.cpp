#include "ensel/numerics.hpp"

#include "ensel/errors.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace ensel {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

void check_symmetric(std::size_t dim, const std::vector<double>& entries) {
    if (entries.size() != dim * dim) {
        throw InvalidArgument("SymmetricMatrix: expected " + std::to_string(dim * dim) +
                              " entries, got " + std::to_string(entries.size()));
    }
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i + 1; j < dim; ++j) {
            const double a = entries[i * dim + j];
            const double b = entries[j * dim + i];
            if (!(std::abs(a - b) <= kSymmetryTolerance)) {
                throw InvalidArgument("SymmetricMatrix: entries (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") and its transpose differ");
            }
        }
    }
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {}

SymmetricMatrix::SymmetricMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
    check_symmetric(dim_, entries_);
}

SymmetricMatrix::SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : dim_(rows.size()) {
    entries_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw InvalidArgument("SymmetricMatrix: rows must be square");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    check_symmetric(dim_, entries_);
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t dim) {
    SymmetricMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.entries_[i * dim + i] = 1.0;
    return m;
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double value) {
    entries_[i * dim_ + j] = value;
    entries_[j * dim_ + i] = value;
}

double frobenius_distance(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    if (a.dim() != b.dim()) throw InvalidArgument("frobenius_distance: dimension mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        const double d = a.entries()[k] - b.entries()[k];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double std_normal_cdf(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("std_normal_cdf: argument must be finite");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("std_normal_quantile: p must lie in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

namespace {

// Same as std_normal_cdf but defined on the extended reals.
double phi_extended(double x) {
    if (x == kPlusInfinity) return 1.0;
    if (x == -kPlusInfinity) return 0.0;
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

struct GaussLegendreHalf {
    std::array<double, 10> nodes;
    std::array<double, 10> weights;
    int count;
};

// Positive half of the 6-, 12- and 20-point Gauss-Legendre rules on [-1, 1].
constexpr std::array<GaussLegendreHalf, 3> kRules{{
    {{0.9324695142031522, 0.6612093864662647, 0.2386191860831970},
     {0.1713244923791705, 0.3607615730481384, 0.4679139345726904},
     3},
    {{0.9815606342467191, 0.9041172563704750, 0.7699026741943050, 0.5873179542866171,
      0.3678314989981802, 0.1252334085114692},
     {0.04717533638651177, 0.1069393259953183, 0.1600783285433464, 0.2031674267230659,
      0.2334925365383547, 0.2491470458134029},
     6},
    {{0.9931285991850949, 0.9639719272779138, 0.9122344282513259, 0.8391169718222188,
      0.7463319064601508, 0.6360536807265150, 0.5108670019508271, 0.3737060887154196,
      0.2277858511416451, 0.07652652113349733},
     {0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
      0.1019301198172404, 0.1181945319615184, 0.1316886384491766, 0.1420961093183821,
      0.1491729864726037, 0.1527533871307259},
     10},
}};

// Upper orthant P(Z1 > h, Z2 > k) for finite h, k and |r| < 1.
double upper_orthant(double h, double k, double r) {
    const double abs_r = std::abs(r);
    const GaussLegendreHalf& rule = abs_r < 0.3 ? kRules[0] : (abs_r < 0.75 ? kRules[1] : kRules[2]);
    double hk = h * k;
    double bvn = 0.0;

    if (abs_r < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r);
        for (int i = 0; i < rule.count; ++i) {
            for (double sign : {-1.0, 1.0}) {
                const double sn = std::sin(asr * (1.0 + sign * rule.nodes[i]) / 2.0);
                bvn += rule.weights[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        bvn = bvn * asr / (4.0 * std::numbers::pi);
        return bvn + phi_extended(-h) * phi_extended(-k);
    }

    if (r < 0.0) {
        k = -k;
        hk = -hk;
    }
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    double asr = -(bs / as + hk) / 2.0;
    if (asr > -100.0) {
        bvn = a * std::exp(asr) *
              (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    }
    if (hk > -100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(2.0 * std::numbers::pi) * phi_extended(-b / a);
        bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (int i = 0; i < rule.count; ++i) {
        for (double sign : {-1.0, 1.0}) {
            const double xs = (a + a * sign * rule.nodes[i]) * (a + a * sign * rule.nodes[i]);
            const double rs = std::sqrt(1.0 - xs);
            asr = -(bs / xs + hk) / 2.0;
            if (asr > -100.0) {
                const double sp = 1.0 + c * xs * (1.0 + d * xs);
                const double ep = std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs;
                bvn += a * rule.weights[i] * std::exp(asr) * (ep - sp);
            }
        }
    }
    bvn = -bvn / (2.0 * std::numbers::pi);

    if (r > 0.0) return bvn + phi_extended(-std::max(h, k));
    if (h >= k) return -bvn;
    const double span = h < 0.0 ? phi_extended(k) - phi_extended(h) : phi_extended(-h) - phi_extended(-k);
    return span - bvn;
}

}  // namespace

double bivariate_normal_cdf(double x, double y, double rho) {
    if (!(std::abs(rho) < 1.0)) throw InvalidArgument("bivariate_normal_cdf: |rho| must be < 1");
    if (std::isnan(x) || std::isnan(y)) throw InvalidArgument("bivariate_normal_cdf: NaN argument");
    if (x == -kPlusInfinity || y == -kPlusInfinity) return 0.0;
    if (x == kPlusInfinity) return phi_extended(y);
    if (y == kPlusInfinity) return phi_extended(x);
    // P(Z1 <= x, Z2 <= y) = P(-Z1 > -x, -Z2 > -y).
    const double p = upper_orthant(-x, -y, rho);
    return std::clamp(p, 0.0, 1.0);
}

Eigendecomposition symmetric_eigendecomposition(const SymmetricMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.dim());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(i, j);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw InternalError("symmetric_eigendecomposition: solver did not converge");
    }
    Eigendecomposition out;
    out.dim = a.dim();
    out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    out.eigenvectors.resize(a.dim() * a.dim());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            out.eigenvectors[static_cast<std::size_t>(i * n + k)] = solver.eigenvectors()(i, k);
        }
    }
    return out;
}

}  // namespace ensel
