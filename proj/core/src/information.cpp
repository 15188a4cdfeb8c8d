#include "ensel/information.hpp"

#include "ensel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace ensel {

namespace {

constexpr std::uint64_t kMaxAlphabet = std::uint64_t{1} << 63;
constexpr std::uint64_t kDenseCountLimit = std::uint64_t{1} << 20;

std::uint64_t checked_product(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kMaxAlphabet / a) {
        throw ResourceLimit("joint alphabet exceeds 2^63 cells");
    }
    return a * b;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("smoothing alpha must be > 0");
}

void check_weights(std::span<const double> weights, std::size_t n) {
    if (!weights.empty() && weights.size() != n) {
        throw InvalidArgument("weight count must equal sequence length");
    }
}

// Weighted counts of the observed cells in ascending key order, plus total mass.
struct CellCounts {
    std::vector<double> observed;
    double total = 0.0;
};

CellCounts count_cells(std::span<const std::uint64_t> keys, std::uint64_t alphabet,
                       std::span<const double> weights) {
    CellCounts out;
    const std::size_t n = keys.size();
    if (alphabet <= kDenseCountLimit) {
        std::vector<double> dense(static_cast<std::size_t>(alphabet), 0.0);
        std::vector<std::uint8_t> seen(static_cast<std::size_t>(alphabet), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const double w = weights.empty() ? 1.0 : weights[i];
            dense[keys[i]] += w;
            seen[keys[i]] = 1;
        }
        for (std::size_t c = 0; c < dense.size(); ++c) {
            if (seen[c]) out.observed.push_back(dense[c]);
        }
    } else {
        std::vector<std::pair<std::uint64_t, double>> pairs(n);
        for (std::size_t i = 0; i < n; ++i) pairs[i] = {keys[i], weights.empty() ? 1.0 : weights[i]};
        std::sort(pairs.begin(), pairs.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        for (std::size_t i = 0; i < n;) {
            double c = 0.0;
            std::size_t k = i;
            for (; k < n && pairs[k].first == pairs[i].first; ++k) c += pairs[k].second;
            out.observed.push_back(c);
            i = k;
        }
    }
    if (weights.empty()) {
        out.total = static_cast<double>(n);
    } else {
        out.total = std::accumulate(weights.begin(), weights.end(), 0.0);
    }
    return out;
}

double smoothed_entropy_of_keys(std::span<const std::uint64_t> keys, std::uint64_t alphabet,
                                double alpha, std::span<const double> weights) {
    const CellCounts counts = count_cells(keys, alphabet, weights);
    const double k = static_cast<double>(alphabet);
    const double denom = counts.total + alpha * k;
    double h = 0.0;
    for (double c : counts.observed) {
        const double p = (c + alpha) / denom;
        h -= p * std::log2(p);
    }
    const double unobserved = k - static_cast<double>(counts.observed.size());
    if (unobserved > 0.0) {
        const double p0 = alpha / denom;
        h -= unobserved * p0 * std::log2(p0);
    }
    return h;
}

// keys_i = a_i + K_a * b_i
std::vector<std::uint64_t> pair_keys(const DiscreteSequence& a, const DiscreteSequence& b) {
    std::vector<std::uint64_t> keys(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) keys[i] = a.values[i] + a.alphabet_size * b.values[i];
    return keys;
}

void check_same_length(const DiscreteSequence& a, const DiscreteSequence& b) {
    if (a.size() != b.size()) throw InvalidArgument("sequence lengths differ");
}

}  // namespace

DiscreteSequence make_sequence(std::vector<std::uint64_t> values, std::uint64_t alphabet_size) {
    if (alphabet_size == 0 || alphabet_size > kMaxAlphabet) {
        throw InvalidArgument("alphabet size must be in [1, 2^63]");
    }
    for (auto v : values) {
        if (v >= alphabet_size) throw InvalidArgument("sequence value outside its alphabet");
    }
    return DiscreteSequence{std::move(values), alphabet_size};
}

DiscreteSequence constant_sequence(std::size_t n) {
    return DiscreteSequence{std::vector<std::uint64_t>(n, 0), 1};
}

DiscreteSequence joint_encode(std::span<const DiscreteSequence* const> parts) {
    if (parts.empty()) throw InvalidArgument("joint_encode: no parts");
    const std::size_t n = parts.front()->size();
    DiscreteSequence out{std::vector<std::uint64_t>(n, 0), 1};
    // Fold from the last part inward so the first part varies fastest.
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        const DiscreteSequence& p = **it;
        if (p.size() != n) throw InvalidArgument("joint_encode: sequence lengths differ");
        out.alphabet_size = checked_product(out.alphabet_size, p.alphabet_size);
        for (std::size_t i = 0; i < n; ++i) out.values[i] = p.values[i] + p.alphabet_size * out.values[i];
    }
    return out;
}

DiscreteSequence label_sequence(const Dataset& d) {
    DiscreteSequence out{std::vector<std::uint64_t>(d.rows()), 2};
    const auto labels = d.labels();
    for (std::size_t i = 0; i < d.rows(); ++i) out.values[i] = labels[i] > 0 ? 1 : 0;
    return out;
}

DiscreteSequence prediction_sequence(const Dataset& d, std::size_t j) {
    if (j >= d.models()) throw InvalidArgument("model index out of range");
    DiscreteSequence out{std::vector<std::uint64_t>(d.rows()), 2};
    const auto col = d.column(j);
    for (std::size_t i = 0; i < d.rows(); ++i) out.values[i] = col[i] > 0 ? 1 : 0;
    return out;
}

DiscreteSequence error_sequence(const Dataset& d, std::size_t j) {
    if (j >= d.models()) throw InvalidArgument("model index out of range");
    DiscreteSequence out{std::vector<std::uint64_t>(d.rows()), 2};
    const auto col = d.column(j);
    const auto labels = d.labels();
    for (std::size_t i = 0; i < d.rows(); ++i) out.values[i] = col[i] != labels[i] ? 1 : 0;
    return out;
}

namespace {

template <class ColumnFn>
DiscreteSequence encode_columns(const Dataset& d, std::span<const std::size_t> s, ColumnFn&& column) {
    if (s.empty()) return constant_sequence(d.rows());
    if (s.size() >= 63) throw ResourceLimit("cannot jointly encode 63 or more binary columns");
    DiscreteSequence out{std::vector<std::uint64_t>(d.rows(), 0), std::uint64_t{1} << s.size()};
    for (std::size_t t = 0; t < s.size(); ++t) {
        const DiscreteSequence col = column(d, s[t]);
        for (std::size_t i = 0; i < d.rows(); ++i) out.values[i] |= col.values[i] << t;
    }
    return out;
}

}  // namespace

DiscreteSequence predictions_of(const Dataset& d, std::span<const std::size_t> s) {
    return encode_columns(d, s, prediction_sequence);
}

DiscreteSequence errors_of(const Dataset& d, std::span<const std::size_t> s) {
    return encode_columns(d, s, error_sequence);
}

double smoothed_entropy(const DiscreteSequence& a, double alpha, std::span<const double> weights) {
    check_alpha(alpha);
    check_weights(weights, a.size());
    return smoothed_entropy_of_keys(a.values, a.alphabet_size, alpha, weights);
}

double smoothed_mi(const DiscreteSequence& a, const DiscreteSequence& b, double alpha,
                   std::span<const double> weights) {
    check_alpha(alpha);
    check_same_length(a, b);
    check_weights(weights, a.size());
    const std::uint64_t k_ab = checked_product(a.alphabet_size, b.alphabet_size);
    const double h_a = smoothed_entropy_of_keys(a.values, a.alphabet_size, alpha, weights);
    const double h_b = smoothed_entropy_of_keys(b.values, b.alphabet_size, alpha, weights);
    const double h_ab = smoothed_entropy_of_keys(pair_keys(a, b), k_ab, alpha, weights);
    return std::max(h_a + h_b - h_ab, 0.0);
}

double smoothed_conditional_mi(const DiscreteSequence& y, const DiscreteSequence& x,
                               const DiscreteSequence& given, double alpha,
                               std::span<const double> weights) {
    check_alpha(alpha);
    check_same_length(y, x);
    check_same_length(y, given);
    check_weights(weights, y.size());
    const std::uint64_t k_yz = checked_product(y.alphabet_size, given.alphabet_size);
    const std::uint64_t k_xz = checked_product(x.alphabet_size, given.alphabet_size);
    const std::uint64_t k_yx = checked_product(y.alphabet_size, x.alphabet_size);
    const std::uint64_t k_yxz = checked_product(k_yx, given.alphabet_size);

    const std::size_t n = y.size();
    std::vector<std::uint64_t> yz(n), xz(n), yxz(n);
    for (std::size_t i = 0; i < n; ++i) {
        yz[i] = y.values[i] + y.alphabet_size * given.values[i];
        xz[i] = x.values[i] + x.alphabet_size * given.values[i];
        yxz[i] = y.values[i] + y.alphabet_size * (x.values[i] + x.alphabet_size * given.values[i]);
    }
    const double h_yz = smoothed_entropy_of_keys(yz, k_yz, alpha, weights);
    const double h_xz = smoothed_entropy_of_keys(xz, k_xz, alpha, weights);
    const double h_z = smoothed_entropy_of_keys(given.values, given.alphabet_size, alpha, weights);
    const double h_yxz = smoothed_entropy_of_keys(yxz, k_yxz, alpha, weights);
    return std::max(h_yz + h_xz - h_z - h_yxz, 0.0);
}

double exact_mi(const ProbabilityTable& joint) {
    if (joint.rows == 0 || joint.cols == 0 || joint.p.size() != joint.rows * joint.cols) {
        throw InvalidArgument("exact_mi: table shape mismatch");
    }
    double total = 0.0;
    for (double v : joint.p) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("exact_mi: negative or non-finite entry");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("exact_mi: table does not sum to 1");

    std::vector<double> pa(joint.rows, 0.0), pb(joint.cols, 0.0);
    for (std::size_t a = 0; a < joint.rows; ++a) {
        for (std::size_t b = 0; b < joint.cols; ++b) {
            pa[a] += joint(a, b);
            pb[b] += joint(a, b);
        }
    }
    double mi = 0.0;
    for (std::size_t a = 0; a < joint.rows; ++a) {
        for (std::size_t b = 0; b < joint.cols; ++b) {
            const double pab = joint(a, b);
            if (pab > 0.0) mi += pab * std::log2(pab / (pa[a] * pb[b]));
        }
    }
    return std::max(mi, 0.0);
}

JointDistribution::JointDistribution(std::vector<std::size_t> cardinalities) : cards_(std::move(cardinalities)) {
    std::size_t cells = 1;
    strides_.reserve(cards_.size());
    for (std::size_t c : cards_) {
        if (c == 0) throw InvalidArgument("JointDistribution: zero cardinality");
        strides_.push_back(cells);
        if (cells > (std::size_t{1} << 26) / c) throw ResourceLimit("JointDistribution: table too large");
        cells *= c;
    }
    probs_.assign(cells, 0.0);
}

std::size_t JointDistribution::index_of(std::span<const std::size_t> outcome) const {
    if (outcome.size() != cards_.size()) throw InvalidArgument("JointDistribution: outcome arity mismatch");
    std::size_t idx = 0;
    for (std::size_t v = 0; v < cards_.size(); ++v) {
        if (outcome[v] >= cards_[v]) throw InvalidArgument("JointDistribution: value out of range");
        idx += outcome[v] * strides_[v];
    }
    return idx;
}

void JointDistribution::set(std::span<const std::size_t> outcome, double probability) {
    probs_[index_of(outcome)] = probability;
}

void JointDistribution::add(std::span<const std::size_t> outcome, double probability) {
    probs_[index_of(outcome)] += probability;
}

double JointDistribution::probability(std::span<const std::size_t> outcome) const {
    return probs_[index_of(outcome)];
}

std::vector<std::size_t> JointDistribution::outcome(std::size_t index) const {
    std::vector<std::size_t> out(cards_.size());
    for (std::size_t v = 0; v < cards_.size(); ++v) out[v] = (index / strides_[v]) % cards_[v];
    return out;
}

double JointDistribution::total() const { return std::accumulate(probs_.begin(), probs_.end(), 0.0); }

double JointDistribution::entropy(std::span<const std::size_t> vars) const {
    if (vars.empty()) return 0.0;
    std::size_t marginal_cells = 1;
    std::vector<std::size_t> marginal_strides;
    for (std::size_t v : vars) {
        if (v >= cards_.size()) throw InvalidArgument("JointDistribution: variable index out of range");
        marginal_strides.push_back(marginal_cells);
        marginal_cells *= cards_[v];
    }
    std::vector<double> marginal(marginal_cells, 0.0);
    for (std::size_t idx = 0; idx < probs_.size(); ++idx) {
        const double p = probs_[idx];
        if (p == 0.0) continue;
        std::size_t m = 0;
        for (std::size_t t = 0; t < vars.size(); ++t) {
            m += ((idx / strides_[vars[t]]) % cards_[vars[t]]) * marginal_strides[t];
        }
        marginal[m] += p;
    }
    double h = 0.0;
    for (double p : marginal) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

namespace {

std::vector<std::size_t> concat(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    std::vector<std::size_t> out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace

double JointDistribution::mutual_information(std::span<const std::size_t> a,
                                             std::span<const std::size_t> b) const {
    return entropy(a) + entropy(b) - entropy(concat(a, b));
}

double JointDistribution::conditional_mutual_information(std::span<const std::size_t> a,
                                                         std::span<const std::size_t> b,
                                                         std::span<const std::size_t> given) const {
    const auto ac = concat(a, given);
    const auto bc = concat(b, given);
    const auto abc = concat(concat(a, b), given);
    return entropy(ac) + entropy(bc) - entropy(given) - entropy(abc);
}

namespace {

void check_candidate(std::size_t m, std::size_t j, std::span<const std::size_t> s) {
    if (j >= m) throw InvalidArgument("gain_breakdown: model index out of range");
    for (std::size_t t : s) {
        if (t >= m) throw InvalidArgument("gain_breakdown: subset index out of range");
        if (t == j) throw InvalidArgument("gain_breakdown: candidate already in subset");
    }
}

}  // namespace

GainBreakdown gain_breakdown(const Dataset& d, std::size_t j, std::span<const std::size_t> s, double alpha) {
    check_candidate(d.models(), j, s);
    const auto w = d.weights();
    const DiscreteSequence y = label_sequence(d);
    const DiscreteSequence xj = prediction_sequence(d, j);
    const DiscreteSequence ej = error_sequence(d, j);
    const DiscreteSequence xs = predictions_of(d, s);
    const DiscreteSequence es = errors_of(d, s);

    GainBreakdown g;
    g.relevance = smoothed_mi(y, xj, alpha, w);
    g.redundancy = smoothed_mi(xj, xs, alpha, w);
    g.error_correlation = smoothed_mi(ej, es, alpha, w);
    g.error_label_dependence = smoothed_mi(ej, y, alpha, w);
    g.correction = smoothed_conditional_mi(ej, y, es, alpha, w) - g.error_label_dependence;
    g.total_cmi = smoothed_conditional_mi(y, xj, xs, alpha, w);
    return g;
}

GainBreakdown exact_gain_breakdown(const JointDistribution& ensemble, std::size_t m, std::size_t j,
                                   std::span<const std::size_t> s) {
    check_candidate(m, j, s);
    if (ensemble.variables() != 2 * m + 1) throw InvalidArgument("exact_gain_breakdown: not an ensemble joint");
    const std::size_t y[] = {0};
    const std::size_t xj[] = {1 + j};
    const std::size_t ej[] = {1 + m + j};
    std::vector<std::size_t> xs, es;
    for (std::size_t t : s) {
        xs.push_back(1 + t);
        es.push_back(1 + m + t);
    }
    GainBreakdown g;
    g.relevance = ensemble.mutual_information(y, xj);
    g.redundancy = ensemble.mutual_information(xj, xs);
    g.error_correlation = ensemble.mutual_information(ej, es);
    g.error_label_dependence = ensemble.mutual_information(ej, y);
    g.correction = ensemble.conditional_mutual_information(ej, y, es) - g.error_label_dependence;
    g.total_cmi = ensemble.conditional_mutual_information(y, xj, xs);
    return g;
}

}  // namespace ensel
