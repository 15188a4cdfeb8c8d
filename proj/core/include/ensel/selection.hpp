#pragma once

#include "ensel/data_io.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ensel {

struct SelectionResult {
    std::string method;
    std::vector<std::size_t> order;   // selection order, 0-based model indices
    std::vector<double> step_scores;  // same length as order
};

enum class GreedyMode { DirectCmi, ThreeTerm };

/// Greedy MI: at each step add the model with the largest estimated gain, either
/// I(Y;X_j|X_S) directly or relevance - redundancy + error_correlation. Lowest index wins ties.
SelectionResult greedy_mi_select(const Dataset& train, std::size_t k, GreedyMode mode = GreedyMode::DirectCmi,
                                 double alpha = 1.0);

// Ascending training error, scores are training accuracies.
SelectionResult top_k_select(const Dataset& train, std::size_t k);

// One ranking by I(Y;X_j), prefix of length k.
SelectionResult term1_select(const Dataset& train, std::size_t k, double alpha = 1.0);

// Greedy with score I(Y;X_j) - I(X_j;X_S).
SelectionResult mrmr_select(const Dataset& train, std::size_t k, double alpha = 1.0);

enum class ExhaustiveObjective { MinMapError, MaxMi };

/// How exhaustive_select scores a subset.
/// Exact: train is a weighted enumeration of the true joint; MAP error and I(Y;X_S) are
/// computed from the normalized weights with no smoothing.
/// HeldOut: MAP is fit on train and its error measured on `eval`; MI is smoothed on `eval`.
struct EvaluationContext {
    enum class Kind { Exact, HeldOut };
    Kind kind = Kind::Exact;
    std::optional<Dataset> eval;
    double alpha = 1.0;

    static EvaluationContext exact() { return {}; }
    static EvaluationContext held_out(Dataset eval, double alpha = 1.0) {
        return {Kind::HeldOut, std::move(eval), alpha};
    }
};

inline constexpr std::size_t kDefaultExhaustiveCap = 10000;

/// Scores every size-k subset in lexicographic order and keeps the first one within
/// 1e-12 of the optimum. step_scores repeats the optimal objective value k times.
SelectionResult exhaustive_select(const Dataset& train, const EvaluationContext& context, std::size_t k,
                                  ExhaustiveObjective objective, std::size_t cap = kDefaultExhaustiveCap);

// Number of size-k subsets of m, saturating at SIZE_MAX.
std::size_t binomial(std::size_t m, std::size_t k);

// Exact (unsmoothed) MAP error and I(Y;X_S) of a weighted dataset.
double plugin_map_error(const Dataset& d, std::span<const std::size_t> s);
double plugin_mi(const Dataset& d, std::span<const std::size_t> s);

// {"method": ..., "order": [model names], "step_scores": [...]}
std::string selection_to_json(const SelectionResult& r, const std::vector<std::string>& model_names);

}  // namespace ensel
