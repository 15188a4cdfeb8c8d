#include "ensel/theory.hpp"

#include "ensel/errors.hpp"
#include "ensel/numerics.hpp"
#include "ensel/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ensel {

double saturation_floor(double alpha, double rho) {
    if (!(alpha > 0.5 && alpha < 1.0)) throw InvalidArgument("saturation_floor: alpha must lie in (1/2, 1)");
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("saturation_floor: rho must lie in (0, 1)");
    return std_normal_cdf(std_normal_quantile(1.0 - alpha) / std::sqrt(rho));
}

double conditional_error_rate(double u, double tau, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("conditional_error_rate: rho must lie in (0, 1)");
    if (std::isnan(u) || !std::isfinite(tau)) throw InvalidArgument("conditional_error_rate: bad argument");
    if (std::isinf(u)) return u > 0 ? 0.0 : 1.0;
    return std_normal_cdf((tau - std::sqrt(rho) * u) / std::sqrt(1.0 - rho));
}

double degradation_parameter(double eps1, double eps2) {
    if (!(eps1 >= 0.0 && eps2 < 0.5)) throw InvalidArgument("degradation_parameter: rates must lie in [0, 1/2)");
    if (eps1 > eps2) throw InvalidArgument("degradation_parameter: eps1 must not exceed eps2");
    return (eps2 - eps1) / (1.0 - 2.0 * eps1);
}

void BscPool::validate() const {
    if (epsilons.empty()) throw InvalidArgument("BscPool: no channels");
    for (double e : epsilons) {
        if (!(e > 0.0 && e < 0.5)) throw InvalidArgument("BscPool: error rates must lie in (0, 1/2)");
    }
}

namespace {

std::vector<double> pick(const BscPool& pool, std::span<const std::size_t> s) {
    pool.validate();
    std::vector<double> out;
    for (std::size_t j : s) {
        if (j >= pool.epsilons.size()) throw InvalidArgument("BscPool: index out of range");
        out.push_back(pool.epsilons[j]);
    }
    return out;
}

// Calls f(log P(x | +1), log P(x | -1)) for every pattern x of the channels.
template <class F>
void for_each_pattern(std::span<const double> eps, F&& f) {
    if (eps.size() > kMaxBscSubset) throw ResourceLimit("exact BSC enumeration is capped at 20 channels");
    for (double e : eps) {
        if (!(e >= 0.0 && e <= 1.0)) throw InvalidArgument("error rates must lie in [0, 1]");
    }
    const std::size_t k = eps.size();
    std::vector<double> log_right(k), log_wrong(k);
    for (std::size_t j = 0; j < k; ++j) {
        log_right[j] = std::log1p(-eps[j]);
        log_wrong[j] = std::log(eps[j]);
    }
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
        double lp = 0.0, lm = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            // bit set: X_j = +1, right under Y = +1, wrong under Y = -1
            if ((bits >> j) & 1U) {
                lp += log_right[j];
                lm += log_wrong[j];
            } else {
                lp += log_wrong[j];
                lm += log_right[j];
            }
        }
        f(lp, lm);
    }
}

}  // namespace

double exact_bsc_error(std::span<const double> epsilons) {
    double pe = 0.0;
    for_each_pattern(epsilons, [&](double lp, double lm) { pe += 0.5 * std::exp(std::min(lp, lm)); });
    return pe;
}

double exact_bsc_mi(std::span<const double> epsilons) {
    double mi = 0.0;
    for_each_pattern(epsilons, [&](double lp, double lm) {
        const double hi = std::max(lp, lm);
        if (hi == -std::numeric_limits<double>::infinity()) return;
        const double lse = hi + std::log(std::exp(lp - hi) + std::exp(lm - hi));
        for (double l : {lp, lm}) {
            if (l == -std::numeric_limits<double>::infinity()) continue;
            mi += 0.5 * std::exp(l) * (1.0 + (l - lse) / std::log(2.0));
        }
    });
    return std::max(mi, 0.0);
}

double exact_bsc_error(const BscPool& pool, std::span<const std::size_t> s) { return exact_bsc_error(pick(pool, s)); }

double exact_bsc_mi(const BscPool& pool, std::span<const std::size_t> s) { return exact_bsc_mi(pick(pool, s)); }

Dataset enumerated_dataset(std::size_t m, const std::function<double(Label, std::span<const Label>)>& probability) {
    if (m == 0 || m > kMaxBscSubset) throw InvalidArgument("enumerated_dataset: m must lie in [1, 20]");
    std::vector<Label> labels;
    std::vector<std::vector<Label>> columns(m);
    std::vector<double> weights;
    std::vector<Label> x(m);
    for (Label y : {Label{-1}, Label{1}}) {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
            for (std::size_t j = 0; j < m; ++j) x[j] = ((bits >> j) & 1U) ? Label{1} : Label{-1};
            const double p = probability(y, x);
            if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("enumerated_dataset: bad probability");
            labels.push_back(y);
            for (std::size_t j = 0; j < m; ++j) columns[j].push_back(x[j]);
            weights.push_back(p * kExactWeightScale);
        }
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < m; ++j) names.push_back("model_" + std::to_string(j + 1));
    return Dataset(std::move(labels), std::move(columns), std::move(names), std::move(weights));
}

Dataset independent_bsc_dataset(std::span<const double> epsilons) {
    const std::vector<double> eps(epsilons.begin(), epsilons.end());
    return enumerated_dataset(eps.size(), [&](Label y, std::span<const Label> x) {
        double p = 0.5;
        for (std::size_t j = 0; j < x.size(); ++j) p *= x[j] == y ? 1.0 - eps[j] : eps[j];
        return p;
    });
}

DifficultyJoint build_difficulty_joint(std::size_t m, std::size_t difficulty_levels, std::uint64_t seed) {
    if (m == 0 || m > kMaxDifficultyModels) throw ResourceLimit("difficulty joints support 1..4 models");
    if (difficulty_levels == 0) throw InvalidArgument("difficulty_levels must be >= 1");
    Rng rng(seed);
    std::vector<double> pd(difficulty_levels);
    for (double& v : pd) v = 0.1 + rng.uniform();
    const double total = std::accumulate(pd.begin(), pd.end(), 0.0);
    for (double& v : pd) v /= total;
    // q[(y * L + d) * m + j] = P(X_j = +1 | y, d)
    std::vector<double> q(2 * difficulty_levels * m);
    for (double& v : q) v = 0.02 + 0.96 * rng.uniform();

    std::vector<std::size_t> cards{2, difficulty_levels};
    cards.insert(cards.end(), m, 2);
    DifficultyJoint out;
    out.m = m;
    out.difficulty_levels = difficulty_levels;
    out.table = JointDistribution(cards);
    for (std::size_t idx = 0; idx < out.table.cells(); ++idx) {
        const auto o = out.table.outcome(idx);
        const std::size_t y = o[0], d = o[1];
        double p = 0.5 * pd[d];
        for (std::size_t j = 0; j < m; ++j) {
            const double up = q[(y * difficulty_levels + d) * m + j];
            p *= o[2 + j] ? up : 1.0 - up;
        }
        out.table.set(o, p);
    }
    return out;
}

bool is_normalized(const DifficultyJoint& j) { return std::abs(j.table.total() - 1.0) <= 1e-12; }

namespace {

// P(y, d) for every (y, d), index y * L + d, plus optional per-model marginals.
std::vector<double> label_difficulty_mass(const DifficultyJoint& j) {
    std::vector<double> mass(2 * j.difficulty_levels, 0.0);
    for (std::size_t idx = 0; idx < j.table.cells(); ++idx) {
        const auto o = j.table.outcome(idx);
        mass[o[0] * j.difficulty_levels + o[1]] += j.table.cell(idx);
    }
    return mass;
}

void check_structure(const DifficultyJoint& j) {
    if (j.table.variables() != j.m + 2 || j.table.cardinality(0) != 2 ||
        j.table.cardinality(1) != j.difficulty_levels) {
        throw InvalidArgument("DifficultyJoint: table layout does not match (Y, D, X_1..X_m)");
    }
}

std::vector<std::size_t> x_vars(const DifficultyJoint& j, std::span<const std::size_t> s) {
    std::vector<std::size_t> out;
    for (std::size_t t : s) {
        if (t >= j.m) throw InvalidArgument("DifficultyJoint: model index out of range");
        out.push_back(j.x_var(t));
    }
    return out;
}

}  // namespace

bool difficulty_independent_of_label(const DifficultyJoint& j) {
    check_structure(j);
    const auto mass = label_difficulty_mass(j);
    const std::size_t levels = j.difficulty_levels;
    double py[2] = {0.0, 0.0};
    std::vector<double> pd(levels, 0.0);
    for (std::size_t y = 0; y < 2; ++y) {
        for (std::size_t d = 0; d < levels; ++d) {
            py[y] += mass[y * levels + d];
            pd[d] += mass[y * levels + d];
        }
    }
    for (std::size_t y = 0; y < 2; ++y) {
        for (std::size_t d = 0; d < levels; ++d) {
            if (std::abs(mass[y * levels + d] - py[y] * pd[d]) > 1e-12) return false;
        }
    }
    return true;
}

bool conditionally_independent(const DifficultyJoint& j) {
    check_structure(j);
    const std::size_t levels = j.difficulty_levels;
    const auto mass = label_difficulty_mass(j);
    // up[(y * L + d) * m + t] = P(y, d, X_t = +1)
    std::vector<double> up(2 * levels * j.m, 0.0);
    for (std::size_t idx = 0; idx < j.table.cells(); ++idx) {
        const auto o = j.table.outcome(idx);
        for (std::size_t t = 0; t < j.m; ++t) {
            if (o[2 + t]) up[(o[0] * levels + o[1]) * j.m + t] += j.table.cell(idx);
        }
    }
    for (std::size_t idx = 0; idx < j.table.cells(); ++idx) {
        const auto o = j.table.outcome(idx);
        const std::size_t cell = o[0] * levels + o[1];
        const double pyd = mass[cell];
        if (pyd <= 0.0) continue;
        double prod = 1.0;
        for (std::size_t t = 0; t < j.m; ++t) {
            const double q = up[cell * j.m + t] / pyd;
            prod *= o[2 + t] ? q : 1.0 - q;
        }
        if (std::abs(j.table.cell(idx) / pyd - prod) > 1e-12) return false;
    }
    return true;
}

double difficulty_aware_mi(const DifficultyJoint& j, std::span<const std::size_t> s) {
    check_structure(j);
    const std::size_t y[] = {j.y_var()};
    const std::size_t d[] = {j.d_var()};
    return j.table.conditional_mutual_information(y, x_vars(j, s), d);
}

DifficultyDecomposition difficulty_decomposition(const DifficultyJoint& j, std::span<const std::size_t> s) {
    check_structure(j);
    if (!is_normalized(j)) throw InvalidArgument("difficulty_decomposition: table does not sum to 1");
    if (!difficulty_independent_of_label(j)) {
        throw InvalidArgument("difficulty_decomposition: D is not independent of Y");
    }
    const std::size_t y[] = {j.y_var()};
    const std::size_t d[] = {j.d_var()};
    const auto xs = x_vars(j, s);
    DifficultyDecomposition out;
    out.lhs = j.table.mutual_information(y, xs);
    out.oracle_term = j.table.conditional_mutual_information(y, xs, d);
    out.price = j.table.conditional_mutual_information(y, d, xs);
    return out;
}

namespace {

std::vector<std::size_t> mask_members(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < 32; ++t) {
        if ((mask >> t) & 1U) out.push_back(t);
    }
    return out;
}

}  // namespace

std::vector<SubmodularityViolation> submodularity_check(const DifficultyJoint& j) {
    check_structure(j);
    if (j.m > kMaxDifficultyModels) throw ResourceLimit("submodularity_check: m is capped at 4");
    const std::uint32_t full = (1U << j.m) - 1U;
    std::vector<double> f(full + 1);
    for (std::uint32_t mask = 0; mask <= full; ++mask) f[mask] = difficulty_aware_mi(j, mask_members(mask));

    std::vector<SubmodularityViolation> out;
    for (std::uint32_t t_mask = 0; t_mask <= full; ++t_mask) {
        for (std::size_t x = 0; x < j.m; ++x) {
            const std::uint32_t bit = 1U << x;
            if (t_mask & bit) continue;
            const double gain_t = f[t_mask | bit] - f[t_mask];
            if (gain_t < -1e-9) {
                out.push_back({SubmodularityViolation::Kind::Monotonicity, t_mask, t_mask, x, -1e-9 - gain_t});
            }
            // every S contained in T
            for (std::uint32_t s_mask = t_mask;; s_mask = (s_mask - 1) & t_mask) {
                if (s_mask != t_mask) {
                    const double gain_s = f[s_mask | bit] - f[s_mask];
                    if (gain_s < gain_t - 1e-9) {
                        out.push_back({SubmodularityViolation::Kind::DiminishingReturns, s_mask, t_mask, x,
                                       gain_t - 1e-9 - gain_s});
                    }
                }
                if (s_mask == 0) break;
            }
        }
    }
    return out;
}

SubsetValue greedy_difficulty_aware(const DifficultyJoint& j, std::size_t k) {
    if (k < 1 || k > j.m) throw InvalidArgument("greedy_difficulty_aware: k must lie in [1, m]");
    SubsetValue out;
    std::vector<bool> used(j.m, false);
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = j.m;
        double best_value = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < j.m; ++c) {
            if (used[c]) continue;
            auto trial = out.subset;
            trial.push_back(c);
            const double v = difficulty_aware_mi(j, trial);
            if (v > best_value) {
                best = c;
                best_value = v;
            }
        }
        used[best] = true;
        out.subset.push_back(best);
        out.value = best_value;
    }
    return out;
}

SubsetValue best_difficulty_aware(const DifficultyJoint& j, std::size_t k) {
    if (k < 1 || k > j.m) throw InvalidArgument("best_difficulty_aware: k must lie in [1, m]");
    SubsetValue out;
    out.value = -std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1U << j.m); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
        const auto members = mask_members(mask);
        const double v = difficulty_aware_mi(j, members);
        if (v > out.value) {
            out.value = v;
            out.subset = members;
        }
    }
    return out;
}

}  // namespace ensel
