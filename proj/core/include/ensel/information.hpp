#pragma once

#include "ensel/data_io.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ensel {

/// A length-N sequence over the alphabet {0, ..., alphabet_size - 1}.
struct DiscreteSequence {
    std::vector<std::uint64_t> values;
    std::uint64_t alphabet_size = 1;

    std::size_t size() const noexcept { return values.size(); }
};

// Validates that every value is inside the alphabet.
DiscreteSequence make_sequence(std::vector<std::uint64_t> values, std::uint64_t alphabet_size);

// Length-n sequence of zeros over a one-letter alphabet (conditioning on nothing).
DiscreteSequence constant_sequence(std::size_t n);

// Mixed-radix tuple encoding: value = v_0 + K_0 * (v_1 + K_1 * (v_2 + ...)); alphabet is
// the product of the parts' alphabets. Throws ResourceLimit if the product overflows 2^63.
DiscreteSequence joint_encode(std::span<const DiscreteSequence* const> parts);

// Y mapped to {0, 1} (-1 -> 0, +1 -> 1).
DiscreteSequence label_sequence(const Dataset& d);
DiscreteSequence prediction_sequence(const Dataset& d, std::size_t j);
DiscreteSequence error_sequence(const Dataset& d, std::size_t j);
// Joint encoding of the listed prediction (or error) columns; constant when s is empty.
DiscreteSequence predictions_of(const Dataset& d, std::span<const std::size_t> s);
DiscreteSequence errors_of(const Dataset& d, std::span<const std::size_t> s);

/// Add-alpha smoothed entropy (bits) of a sequence over its full declared alphabet.
/// Cell probabilities are (count + alpha) / (N + alpha * K), unobserved cells included.
double smoothed_entropy(const DiscreteSequence& a, double alpha, std::span<const double> weights = {});

/// I(A;B) = max(H(A) + H(B) - H(A,B), 0), each entropy smoothed over K_A, K_B and
/// K_A * K_B cells respectively. Weights, when given, replace unit row counts.
double smoothed_mi(const DiscreteSequence& a, const DiscreteSequence& b, double alpha,
                   std::span<const double> weights = {});

/// I(Y;X|Z) = max(H(Y,Z) + H(X,Z) - H(Z) - H(Y,X,Z), 0) with every term smoothed over
/// its own full product alphabet.
double smoothed_conditional_mi(const DiscreteSequence& y, const DiscreteSequence& x,
                               const DiscreteSequence& given, double alpha,
                               std::span<const double> weights = {});

/// Explicit joint probability table p(a, b), row-major rows x cols.
struct ProbabilityTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> p;

    double operator()(std::size_t a, std::size_t b) const { return p[a * cols + b]; }
};

// I(A;B) = sum p(a,b) log2 [p(a,b) / (p(a) p(b))], 0 log 0 = 0. Rejects tables that do
// not sum to 1 within 1e-12.
double exact_mi(const ProbabilityTable& joint);

/// Exact joint distribution over a handful of finite variables, stored densely.
/// Variable v takes values in {0, ..., cardinality(v) - 1}; cell index is mixed radix
/// with variable 0 varying fastest. Used as the exact oracle for information identities.
class JointDistribution {
public:
    explicit JointDistribution(std::vector<std::size_t> cardinalities);

    std::size_t variables() const noexcept { return cards_.size(); }
    std::size_t cardinality(std::size_t v) const { return cards_.at(v); }
    std::size_t cells() const noexcept { return probs_.size(); }

    void set(std::span<const std::size_t> outcome, double probability);
    void add(std::span<const std::size_t> outcome, double probability);
    double probability(std::span<const std::size_t> outcome) const;
    double cell(std::size_t index) const { return probs_[index]; }
    std::vector<std::size_t> outcome(std::size_t index) const;

    double total() const;

    // Shannon entropy in bits of the listed variables' marginal.
    double entropy(std::span<const std::size_t> vars) const;
    double mutual_information(std::span<const std::size_t> a, std::span<const std::size_t> b) const;
    double conditional_mutual_information(std::span<const std::size_t> a, std::span<const std::size_t> b,
                                          std::span<const std::size_t> given) const;

private:
    std::size_t index_of(std::span<const std::size_t> outcome) const;

    std::vector<std::size_t> cards_;
    std::vector<std::size_t> strides_;
    std::vector<double> probs_;
};

/// Binary ensemble over (Y, X_1..X_m) extended with the error indicators: variable 0 is
/// Y, variables 1..m are X_j, variables m+1..2m are E_j = 1(X_j != Y). Value 1 encodes
/// +1 for Y/X and "error" for E.
/// `pattern_probability(y, x)` is queried for every y in {-1,+1}, x in {-1,+1}^m.
template <class PatternProbability>
JointDistribution ensemble_joint(std::size_t m, PatternProbability&& pattern_probability);

// I(Y;X_j), I(X_j;X_S), I(E_j;E_S), Lambda_j(S) and I(Y;X_j|X_S), all in bits.
struct GainBreakdown {
    double relevance = 0.0;
    double redundancy = 0.0;
    double error_correlation = 0.0;
    double correction = 0.0;
    double total_cmi = 0.0;
    // I(E_j;Y), needed for the correction-term bounds.
    double error_label_dependence = 0.0;

    // relevance - redundancy + error_correlation (the score without the correction).
    double three_term() const noexcept { return relevance - redundancy + error_correlation; }
};

/// Smoothed estimates of every term of the marginal gain of adding model j to s.
GainBreakdown gain_breakdown(const Dataset& d, std::size_t j, std::span<const std::size_t> s,
                             double alpha = 1.0);

/// The same five quantities computed exactly from an ensemble_joint() table.
GainBreakdown exact_gain_breakdown(const JointDistribution& ensemble, std::size_t m, std::size_t j,
                                   std::span<const std::size_t> s);

// ---------------------------------------------------------------------------

template <class PatternProbability>
JointDistribution ensemble_joint(std::size_t m, PatternProbability&& pattern_probability) {
    JointDistribution joint(std::vector<std::size_t>(2 * m + 1, 2));
    std::vector<Label> x(m);
    std::vector<std::size_t> outcome(2 * m + 1);
    for (int y : {-1, 1}) {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
            outcome[0] = y > 0 ? 1 : 0;
            for (std::size_t j = 0; j < m; ++j) {
                x[j] = ((bits >> j) & 1U) ? Label{1} : Label{-1};
                outcome[1 + j] = x[j] > 0 ? 1 : 0;
                outcome[1 + m + j] = x[j] != y ? 1 : 0;
            }
            joint.set(outcome, pattern_probability(static_cast<Label>(y), std::span<const Label>(x)));
        }
    }
    return joint;
}

}  // namespace ensel
