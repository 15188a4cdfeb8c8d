#pragma once

#include "ensel/data_io.hpp"
#include "ensel/information.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace ensel {

// Phi(Phi^-1(1 - alpha) / sqrt(rho)) for alpha in (1/2, 1), rho in (0, 1).
double saturation_floor(double alpha, double rho);

// P(E_j = 1 | U = u) = Phi((tau - sqrt(rho) u) / sqrt(1 - rho)); u may be infinite.
double conditional_error_rate(double u, double tau, double rho);

// delta with eps1 + delta (1 - 2 eps1) = eps2, for 0 <= eps1 <= eps2 < 1/2.
double degradation_parameter(double eps1, double eps2);

inline constexpr std::size_t kMaxBscSubset = 20;

struct BscPool {
    std::vector<double> epsilons;  // each strictly inside (0, 1/2)

    void validate() const;
};

/// Exact MAP error of the channels in s under a balanced prior and independent errors:
/// half the sum over patterns of min(P(x|+1), P(x|-1)), accumulated in log space.
double exact_bsc_error(const BscPool& pool, std::span<const std::size_t> s);
/// Exact I(Y; X_S) in bits for the same setting.
double exact_bsc_mi(const BscPool& pool, std::span<const std::size_t> s);
// Raw forms over the listed rates; any rate in [0, 1] is accepted.
double exact_bsc_error(std::span<const double> epsilons);
double exact_bsc_mi(std::span<const double> epsilons);

// Weight multiplier used when an exact distribution is written out as dataset rows.
inline constexpr double kExactWeightScale = 1e12;

/// One row per (y, x) in {-1,+1}^(1+m) with weight kExactWeightScale * probability.
/// Rows with zero probability are kept (weight 0). Names are model_1..model_m.
Dataset enumerated_dataset(std::size_t m, const std::function<double(Label, std::span<const Label>)>& probability);
// Balanced prior, independent BSC errors.
Dataset independent_bsc_dataset(std::span<const double> epsilons);

/// Joint over (Y, D, X_1..X_m): variable 0 is Y (1 means +1), 1 is D, 2 + j is X_j.
struct DifficultyJoint {
    std::size_t m = 0;
    std::size_t difficulty_levels = 1;
    JointDistribution table{std::vector<std::size_t>{2, 1}};

    std::size_t y_var() const noexcept { return 0; }
    std::size_t d_var() const noexcept { return 1; }
    std::size_t x_var(std::size_t j) const noexcept { return 2 + j; }
};

inline constexpr std::size_t kMaxDifficultyModels = 4;

/// P(Y) balanced, P(D) random, P(X_j = +1 | Y, D) uniform in [0.02, 0.98], all drawn from
/// Rng(seed). The result satisfies D independent of Y and conditional independence of
/// the X_j given (Y, D) by construction.
DifficultyJoint build_difficulty_joint(std::size_t m, std::size_t difficulty_levels, std::uint64_t seed);

// Table sums to 1 within 1e-12.
bool is_normalized(const DifficultyJoint& j);
// |P(y, d) - P(y) P(d)| <= 1e-12 everywhere.
bool difficulty_independent_of_label(const DifficultyJoint& j);
// |P(x | y, d) - prod_j P(x_j | y, d)| <= 1e-12 wherever P(y, d) > 0.
bool conditionally_independent(const DifficultyJoint& j);

struct DifficultyDecomposition {
    double lhs = 0.0;          // I(Y; X_S)
    double oracle_term = 0.0;  // I(Y; X_S | D)
    double price = 0.0;        // I(Y; D | X_S)
};

/// Throws InvalidArgument unless the joint is normalized with D independent of Y, which
/// is what the identity lhs = oracle_term - price needs.
DifficultyDecomposition difficulty_decomposition(const DifficultyJoint& j, std::span<const std::size_t> s);

// F(S) = I(Y; X_S | D).
double difficulty_aware_mi(const DifficultyJoint& j, std::span<const std::size_t> s);

struct SubmodularityViolation {
    enum class Kind { Monotonicity, DiminishingReturns };
    Kind kind;
    std::uint32_t s_mask;  // bit t set means model t is in the set
    std::uint32_t t_mask;  // equals s_mask for monotonicity violations
    std::size_t j;
    double amount;  // how far past the 1e-9 slack the inequality fails
};

/// Checks F(S+j) >= F(S) - 1e-9 and F(S+j) - F(S) >= F(T+j) - F(T) - 1e-9 for every
/// S subset of T and j outside T. m is capped at kMaxDifficultyModels.
std::vector<SubmodularityViolation> submodularity_check(const DifficultyJoint& j);

struct SubsetValue {
    std::vector<std::size_t> subset;
    double value = 0.0;
};

// Greedy maximization of F with lowest-index tie-break.
SubsetValue greedy_difficulty_aware(const DifficultyJoint& j, std::size_t k);
// Exhaustive maximum of F over size-k subsets.
SubsetValue best_difficulty_aware(const DifficultyJoint& j, std::size_t k);

}  // namespace ensel
