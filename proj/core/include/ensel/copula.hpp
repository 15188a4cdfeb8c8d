#pragma once

#include "ensel/data_io.hpp"
#include "ensel/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ensel {

// Marginal error rates are clamped to [kClampEps, 1 - kClampEps] before Phi^-1.
inline constexpr double kClampEps = 1e-6;
// Eigenvalue floor used when a fitted matrix has to be projected back to PSD.
inline constexpr double kEigEps = 1e-6;
// Tetrachoric correlations live in [-1 + kRhoEps, 1 - kRhoEps].
inline constexpr double kRhoEps = 1e-6;

/// Gaussian-copula error model: E_j = 1(Z_j < tau_j) with Z ~ N(0, sigma).
struct CopulaModel {
    std::vector<std::string> model_names;
    std::vector<double> error_rates;  // epsilon_j
    std::vector<double> thresholds;   // tau_j = Phi^-1(epsilon_j)
    SymmetricMatrix sigma;            // unit diagonal, PSD

    std::size_t models() const noexcept { return error_rates.size(); }

    // Checks every documented invariant; throws InvalidArgument on the first failure.
    void validate() const;
};

/// One-factor model Z_j = sqrt(rho) U + sqrt(1 - rho) xi_j with common accuracy alpha.
struct EquicorrelatedSpec {
    std::size_t m = 1;
    double rho = 0.0;    // [0, 1)
    double alpha = 0.8;  // (1/2, 1)

    void validate() const;
    double threshold() const;  // Phi^-1(1 - alpha)
};

struct Marginals {
    std::vector<double> error_rates;
    std::vector<double> thresholds;
};

Marginals fit_marginals(const ErrorMatrix& e);

struct TetrachoricSolution {
    double rho = 0.0;
    // True when joint_err fell outside [Phi_2(.;-1+eps), Phi_2(.;1-eps)] and was pinned
    // to the nearest end of the bracket.
    bool clamped = false;
};

/// Solves Phi_2(tau_i, tau_j; rho) = joint_err for rho by bisection on
/// [-1 + kRhoEps, 1 - kRhoEps]; the map is strictly increasing in rho.
TetrachoricSolution solve_tetrachoric(double tau_i, double tau_j, double joint_err);

/// Eigen-decomposes `a`; if any eigenvalue is numerically negative (< -1e-12), raises
/// every eigenvalue below kEigEps to kEigEps, rebuilds V D V^T and rescales to unit
/// diagonal. Valid correlation matrices come back unchanged, so the map is idempotent.
SymmetricMatrix project_to_correlation(const SymmetricMatrix& a);

/// Marginals from the error matrix, pairwise tetrachoric correlations from empirical
/// joint error rates, then project_to_correlation. Clamped pairs and pairs involving a
/// degenerate marginal (rate at the clamp, rho set to 0) are reported in `warnings`.
CopulaModel fit_copula(const Dataset& d, std::vector<std::string>* warnings = nullptr);

/// Draws n rows: Y uniform on {-1,+1} (one coin per row), Z = L xi with L = V sqrt(D)
/// from the eigendecomposition of sigma, E_j = 1(Z_j < tau_j), X_j = Y (1 - 2 E_j).
/// Single-threaded; identical (model, n, seed) give bit-identical datasets.
Dataset sample(const CopulaModel& model, std::size_t n, std::uint64_t seed);

/// Same law as `sample` with every off-diagonal equal to rho, drawn through the shared
/// factor U. Model names are model_1..model_m.
Dataset sample_equicorrelated(const EquicorrelatedSpec& spec, std::size_t n, std::uint64_t seed);

// Copula model with every off-diagonal equal to rho and every rate 1 - alpha.
CopulaModel equicorrelated_model(const EquicorrelatedSpec& spec);

struct CopulaDiagnostics {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (i, j), i < j, lexicographic
    std::vector<double> pairwise_joint_empirical;
    std::vector<double> pairwise_joint_model;
    // Entry k is the frequency of rows where exactly k models err together.
    std::vector<double> simultaneous_error_hist_empirical;
    std::vector<double> simultaneous_error_hist_model;
    double mean_offdiag_rho = 0.0;
};

CopulaDiagnostics copula_diagnostics(const Dataset& real, const CopulaModel& model, std::size_t n_synth,
                                     std::uint64_t seed);

// JSON: {"format": 1, "model_names": [...], "error_rates": [...], "thresholds": [...],
//        "sigma": [row-major M*M values]}
std::string copula_to_json(const CopulaModel& model);
CopulaModel copula_from_json(std::string_view text);

}  // namespace ensel
