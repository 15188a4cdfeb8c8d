#pragma once

#include "ensel/data_io.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ensel {

inline constexpr std::size_t kMaxMapSubset = 24;
// Accuracies are clamped to [kAccuracyClamp, 1 - kAccuracyClamp] before log-odds.
inline constexpr double kAccuracyClamp = 1e-6;

/// 1 + sum_j (x_j + 1)/2 * 2^(j-1), so (-1,...,-1) -> 1 and (+1,...,+1) -> 2^k.
std::uint64_t pattern_index(std::span<const Label> x);

/// Laplace-smoothed class counts per prediction pattern. Entry l - 1 holds pattern l.
/// Counts are doubles so weighted training data works unchanged.
struct MapTable {
    std::size_t k = 0;
    std::vector<double> c_plus;
    std::vector<double> c_minus;
};

MapTable fit_map(const Dataset& train, std::span<const std::size_t> s);

// +1 when c_plus >= c_minus.
Label predict_map(const MapTable& table, std::span<const Label> x);

/// Sign of the vote sum. A zero sum is settled by the top bit of splitmix64(seed).
Label majority_vote(std::span<const Label> x, std::uint64_t seed);

struct WeightVector {
    std::vector<double> weights;
};

// w_j = ln(p_j / (1 - p_j)) after clamping.
WeightVector log_odds_weights(std::span<const double> accuracies);
// Weighted training accuracies of the models in s, then log_odds_weights.
WeightVector fit_weights(const Dataset& train, std::span<const std::size_t> s);

// sign(sum w_j x_j), exact zero -> +1.
Label weighted_majority_vote(std::span<const Label> x, const WeightVector& w);

// Weighted fraction of rows where model j is right.
double model_accuracy(const Dataset& d, std::size_t j);

// Row i of d restricted to the columns in s.
std::vector<Label> row_pattern(const Dataset& d, std::size_t i, std::span<const std::size_t> s);

}  // namespace ensel
