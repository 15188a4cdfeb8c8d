#include "ensel/aggregation.hpp"

#include "ensel/errors.hpp"
#include "ensel/rng.hpp"

#include <algorithm>
#include <cmath>

namespace ensel {

namespace {

void check_pattern(std::span<const Label> x) {
    for (Label v : x) {
        if (v != 1 && v != -1) throw InvalidArgument("pattern entries must be -1 or +1");
    }
}

void check_subset(const Dataset& d, std::span<const std::size_t> s) {
    if (s.empty()) throw InvalidArgument("subset must be nonempty");
    for (std::size_t j : s) {
        if (j >= d.models()) throw InvalidArgument("subset index out of range");
    }
}

}  // namespace

std::uint64_t pattern_index(std::span<const Label> x) {
    if (x.size() >= 64) throw ResourceLimit("pattern_index: k must be below 64");
    check_pattern(x);
    std::uint64_t idx = 1;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] > 0) idx += std::uint64_t{1} << j;
    }
    return idx;
}

MapTable fit_map(const Dataset& train, std::span<const std::size_t> s) {
    check_subset(train, s);
    if (s.size() > kMaxMapSubset) throw ResourceLimit("fit_map: subset larger than 24 models");
    MapTable t;
    t.k = s.size();
    const std::size_t cells = std::size_t{1} << t.k;
    t.c_plus.assign(cells, 1.0);
    t.c_minus.assign(cells, 1.0);
    for (std::size_t i = 0; i < train.rows(); ++i) {
        std::size_t idx = 0;
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (train.prediction(i, s[b]) > 0) idx |= std::size_t{1} << b;
        }
        (train.label(i) > 0 ? t.c_plus : t.c_minus)[idx] += train.weight(i);
    }
    return t;
}

Label predict_map(const MapTable& table, std::span<const Label> x) {
    if (x.size() != table.k) throw InvalidArgument("predict_map: pattern length mismatch");
    const auto idx = static_cast<std::size_t>(pattern_index(x) - 1);
    return table.c_plus[idx] >= table.c_minus[idx] ? Label{1} : Label{-1};
}

Label majority_vote(std::span<const Label> x, std::uint64_t seed) {
    if (x.empty()) throw InvalidArgument("majority_vote: empty pattern");
    check_pattern(x);
    long sum = 0;
    for (Label v : x) sum += v;
    if (sum > 0) return 1;
    if (sum < 0) return -1;
    return (splitmix64(seed) >> 63) ? Label{1} : Label{-1};
}

WeightVector log_odds_weights(std::span<const double> accuracies) {
    WeightVector w;
    for (double p : accuracies) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("log_odds_weights: accuracy outside [0, 1]");
        const double c = std::clamp(p, kAccuracyClamp, 1.0 - kAccuracyClamp);
        w.weights.push_back(std::log(c / (1.0 - c)));
    }
    return w;
}

double model_accuracy(const Dataset& d, std::size_t j) {
    if (j >= d.models()) throw InvalidArgument("model index out of range");
    double right = 0.0;
    const auto col = d.column(j);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        if (col[i] == d.label(i)) right += d.weight(i);
    }
    const double total = d.total_weight();
    if (!(total > 0.0)) throw InvalidArgument("model_accuracy: zero total weight");
    return right / total;
}

WeightVector fit_weights(const Dataset& train, std::span<const std::size_t> s) {
    check_subset(train, s);
    std::vector<double> acc;
    for (std::size_t j : s) acc.push_back(model_accuracy(train, j));
    return log_odds_weights(acc);
}

Label weighted_majority_vote(std::span<const Label> x, const WeightVector& w) {
    if (x.size() != w.weights.size()) throw InvalidArgument("weighted_majority_vote: dimension mismatch");
    check_pattern(x);
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) sum += w.weights[j] * x[j];
    return sum >= 0.0 ? Label{1} : Label{-1};
}

std::vector<Label> row_pattern(const Dataset& d, std::size_t i, std::span<const std::size_t> s) {
    std::vector<Label> x;
    x.reserve(s.size());
    for (std::size_t j : s) x.push_back(d.prediction(i, j));
    return x;
}

}  // namespace ensel
