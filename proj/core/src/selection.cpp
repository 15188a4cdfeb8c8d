#include "ensel/selection.hpp"

#include "ensel/aggregation.hpp"
#include "ensel/errors.hpp"
#include "ensel/information.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ensel {

namespace {

void check_budget(const Dataset& d, std::size_t k) {
    if (k < 1 || k > d.models()) {
        throw InvalidArgument("selection budget k must lie in [1, M]; got " + std::to_string(k));
    }
}

// Stable ranking by descending score; equal scores keep the lower index first.
SelectionResult rank_prefix(std::string method, const std::vector<double>& scores, std::size_t k) {
    std::vector<std::size_t> idx(scores.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    SelectionResult r{std::move(method), {}, {}};
    for (std::size_t t = 0; t < k; ++t) {
        r.order.push_back(idx[t]);
        r.step_scores.push_back(scores[idx[t]]);
    }
    return r;
}

template <class Score>
SelectionResult greedy(std::string method, const Dataset& d, std::size_t k, Score&& score) {
    SelectionResult r{std::move(method), {}, {}};
    std::vector<bool> chosen(d.models(), false);
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = d.models();
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < d.models(); ++j) {
            if (chosen[j]) continue;
            const double v = score(j, r.order);
            if (best == d.models() || v > best_score) {
                best = j;
                best_score = v;
            }
        }
        chosen[best] = true;
        r.order.push_back(best);
        r.step_scores.push_back(best_score);
    }
    return r;
}

}  // namespace

SelectionResult greedy_mi_select(const Dataset& train, std::size_t k, GreedyMode mode, double alpha) {
    check_budget(train, k);
    const auto w = train.weights();
    const DiscreteSequence y = label_sequence(train);
    std::vector<DiscreteSequence> x, e;
    std::vector<double> relevance;
    for (std::size_t j = 0; j < train.models(); ++j) {
        x.push_back(prediction_sequence(train, j));
        e.push_back(error_sequence(train, j));
        relevance.push_back(smoothed_mi(y, x.back(), alpha, w));
    }
    if (mode == GreedyMode::DirectCmi) {
        return greedy("greedy_mi", train, k, [&](std::size_t j, const std::vector<std::size_t>& s) {
            if (s.empty()) return relevance[j];
            return smoothed_conditional_mi(y, x[j], predictions_of(train, s), alpha, w);
        });
    }
    return greedy("greedy_mi_three_term", train, k, [&](std::size_t j, const std::vector<std::size_t>& s) {
        if (s.empty()) return relevance[j];
        return relevance[j] - smoothed_mi(x[j], predictions_of(train, s), alpha, w) +
               smoothed_mi(e[j], errors_of(train, s), alpha, w);
    });
}

SelectionResult top_k_select(const Dataset& train, std::size_t k) {
    check_budget(train, k);
    std::vector<double> acc;
    for (std::size_t j = 0; j < train.models(); ++j) acc.push_back(model_accuracy(train, j));
    return rank_prefix("top_k", acc, k);
}

SelectionResult term1_select(const Dataset& train, std::size_t k, double alpha) {
    check_budget(train, k);
    const DiscreteSequence y = label_sequence(train);
    std::vector<double> rel;
    for (std::size_t j = 0; j < train.models(); ++j) {
        rel.push_back(smoothed_mi(y, prediction_sequence(train, j), alpha, train.weights()));
    }
    return rank_prefix("term1", rel, k);
}

SelectionResult mrmr_select(const Dataset& train, std::size_t k, double alpha) {
    check_budget(train, k);
    const auto w = train.weights();
    const DiscreteSequence y = label_sequence(train);
    std::vector<DiscreteSequence> x;
    std::vector<double> relevance;
    for (std::size_t j = 0; j < train.models(); ++j) {
        x.push_back(prediction_sequence(train, j));
        relevance.push_back(smoothed_mi(y, x.back(), alpha, w));
    }
    return greedy("mrmr", train, k, [&](std::size_t j, const std::vector<std::size_t>& s) {
        if (s.empty()) return relevance[j];
        return relevance[j] - smoothed_mi(x[j], predictions_of(train, s), alpha, w);
    });
}

std::size_t binomial(std::size_t m, std::size_t k) {
    if (k > m) return 0;
    k = std::min(k, m - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // r * (m - k + i) / i is exact at every step
        const std::size_t num = m - k + i;
        if (r > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
        r = r * num / i;
    }
    return r;
}

namespace {

// Weighted mass of (pattern, label) cells, pattern bit t = column s[t] is +1.
std::vector<double> pattern_label_mass(const Dataset& d, std::span<const std::size_t> s) {
    if (s.size() > kMaxMapSubset) throw ResourceLimit("subset larger than 24 models");
    const std::size_t cells = std::size_t{1} << s.size();
    std::vector<double> mass(2 * cells, 0.0);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        std::size_t idx = 0;
        for (std::size_t t = 0; t < s.size(); ++t) {
            if (d.prediction(i, s[t]) > 0) idx |= std::size_t{1} << t;
        }
        mass[2 * idx + (d.label(i) > 0 ? 1 : 0)] += d.weight(i);
    }
    return mass;
}

}  // namespace

double plugin_map_error(const Dataset& d, std::span<const std::size_t> s) {
    const auto mass = pattern_label_mass(d, s);
    double err = 0.0;
    for (std::size_t c = 0; c < mass.size(); c += 2) {
        // ties go to +1, so the error is the -1 mass
        err += mass[c + 1] >= mass[c] ? mass[c] : mass[c + 1];
    }
    return err / d.total_weight();
}

double plugin_mi(const Dataset& d, std::span<const std::size_t> s) {
    auto mass = pattern_label_mass(d, s);
    const double total = d.total_weight();
    ProbabilityTable t{mass.size() / 2, 2, {}};
    for (double& v : mass) v /= total;
    t.p = std::move(mass);
    const double sum = std::accumulate(t.p.begin(), t.p.end(), 0.0);
    for (double& v : t.p) v /= sum;
    return exact_mi(t);
}

namespace {

double held_out_map_error(const Dataset& train, const Dataset& eval, std::span<const std::size_t> s) {
    const MapTable table = fit_map(train, s);
    double wrong = 0.0;
    for (std::size_t i = 0; i < eval.rows(); ++i) {
        if (predict_map(table, row_pattern(eval, i, s)) != eval.label(i)) wrong += eval.weight(i);
    }
    return wrong / eval.total_weight();
}

}  // namespace

SelectionResult exhaustive_select(const Dataset& train, const EvaluationContext& context, std::size_t k,
                                  ExhaustiveObjective objective, std::size_t cap) {
    check_budget(train, k);
    const std::size_t m = train.models();
    const std::size_t count = binomial(m, k);
    if (count > cap) {
        throw ResourceLimit("exhaustive_select: C(" + std::to_string(m) + ", " + std::to_string(k) +
                            ") subsets exceed the cap of " + std::to_string(cap));
    }
    if (context.kind == EvaluationContext::Kind::HeldOut) {
        if (!context.eval) throw InvalidArgument("exhaustive_select: held-out context without eval data");
        if (context.eval->models() != m) throw InvalidArgument("exhaustive_select: eval model count mismatch");
    }

    // Larger is better for both objectives once MAP error is negated.
    auto evaluate = [&](std::span<const std::size_t> s) {
        const bool exact = context.kind == EvaluationContext::Kind::Exact;
        if (objective == ExhaustiveObjective::MinMapError) {
            return -(exact ? plugin_map_error(train, s) : held_out_map_error(train, *context.eval, s));
        }
        if (exact) return plugin_mi(train, s);
        const Dataset& ev = *context.eval;
        return smoothed_mi(label_sequence(ev), predictions_of(ev, s), context.alpha, ev.weights());
    };

    std::vector<std::vector<std::size_t>> subsets;
    std::vector<double> values;
    subsets.reserve(count);
    std::vector<std::size_t> s(k);
    std::iota(s.begin(), s.end(), std::size_t{0});
    while (true) {
        subsets.push_back(s);
        values.push_back(evaluate(s));
        // next combination in lexicographic order
        std::size_t t = k;
        while (t > 0 && s[t - 1] == m - k + t - 1) --t;
        if (t == 0) break;
        ++s[t - 1];
        for (std::size_t u = t; u < k; ++u) s[u] = s[u - 1] + 1;
    }
    const double best = *std::max_element(values.begin(), values.end());
    std::size_t pick = 0;
    while (values[pick] < best - 1e-12) ++pick;

    const double reported = objective == ExhaustiveObjective::MinMapError ? -values[pick] : values[pick];
    SelectionResult r{objective == ExhaustiveObjective::MinMapError ? "exhaustive_min_map_error"
                                                                     : "exhaustive_max_mi",
                      subsets[pick], std::vector<double>(k, reported)};
    return r;
}

std::string selection_to_json(const SelectionResult& r, const std::vector<std::string>& model_names) {
    nlohmann::json j;
    j["method"] = r.method;
    std::vector<std::string> names;
    for (std::size_t idx : r.order) names.push_back(model_names.at(idx));
    j["order"] = names;
    j["step_scores"] = r.step_scores;
    return j.dump();
}

}  // namespace ensel
