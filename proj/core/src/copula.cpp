#include "ensel/copula.hpp"

#include "ensel/errors.hpp"
#include "ensel/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace ensel {

namespace {

constexpr double kNegativeEigenvalueTrigger = -1e-12;

double weighted_column_mean(const ErrorMatrix& e, std::size_t j) {
    const auto col = e.column(j);
    double hits = 0.0;
    for (std::size_t i = 0; i < e.rows(); ++i) {
        if (col[i]) hits += e.weight(i);
    }
    return hits / e.total_weight();
}

double weighted_joint_rate(const ErrorMatrix& e, std::size_t a, std::size_t b) {
    const auto ca = e.column(a);
    const auto cb = e.column(b);
    double hits = 0.0;
    for (std::size_t i = 0; i < e.rows(); ++i) {
        if (ca[i] && cb[i]) hits += e.weight(i);
    }
    return hits / e.total_weight();
}

bool at_clamp(double rate) { return rate <= kClampEps || rate >= 1.0 - kClampEps; }

// Row-major M x M factor L with L L^T = sigma.
std::vector<double> factorize(const SymmetricMatrix& sigma) {
    const auto eig = symmetric_eigendecomposition(sigma);
    const std::size_t m = sigma.dim();
    std::vector<double> factor(m * m);
    for (std::size_t k = 0; k < m; ++k) {
        if (eig.eigenvalues[k] < -1e-8) {
            throw InternalError("sample: correlation matrix is not positive semidefinite");
        }
        const double scale = std::sqrt(std::max(eig.eigenvalues[k], 0.0));
        for (std::size_t i = 0; i < m; ++i) factor[i * m + k] = eig.vector_entry(i, k) * scale;
    }
    return factor;
}

std::string pair_name(const std::vector<std::string>& names, std::size_t a, std::size_t b) {
    return "(" + names[a] + ", " + names[b] + ")";
}

}  // namespace

void CopulaModel::validate() const {
    const std::size_t m = error_rates.size();
    if (m == 0) throw InvalidArgument("CopulaModel: no models");
    if (thresholds.size() != m || model_names.size() != m || sigma.dim() != m) {
        throw InvalidArgument("CopulaModel: component sizes disagree");
    }
    for (std::size_t j = 0; j < m; ++j) {
        const double eps = error_rates[j];
        if (!(eps >= kClampEps * (1 - 1e-9) && eps <= 1.0 - kClampEps * (1 - 1e-9))) {
            throw InvalidArgument("CopulaModel: error rate outside [clamp_eps, 1 - clamp_eps]");
        }
        if (!(std::abs(thresholds[j] - std_normal_quantile(eps)) <= 1e-8)) {
            throw InvalidArgument("CopulaModel: threshold does not match Phi^-1(error rate)");
        }
        if (std::abs(sigma(j, j) - 1.0) > 1e-12) throw InvalidArgument("CopulaModel: sigma diagonal must be 1");
    }
    const auto eig = symmetric_eigendecomposition(sigma);
    if (eig.eigenvalues.front() < -1e-8) throw InvalidArgument("CopulaModel: sigma is not PSD");
}

void EquicorrelatedSpec::validate() const {
    if (m == 0) throw InvalidArgument("EquicorrelatedSpec: m must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0)) throw InvalidArgument("EquicorrelatedSpec: rho must lie in [0, 1)");
    if (!(alpha > 0.5 && alpha < 1.0)) throw InvalidArgument("EquicorrelatedSpec: alpha must lie in (1/2, 1)");
}

double EquicorrelatedSpec::threshold() const { return std_normal_quantile(1.0 - alpha); }

Marginals fit_marginals(const ErrorMatrix& e) {
    if (e.rows() == 0 || !(e.total_weight() > 0.0)) throw InvalidArgument("fit_marginals: no rows");
    Marginals out;
    for (std::size_t j = 0; j < e.models(); ++j) {
        const double rate = std::clamp(weighted_column_mean(e, j), kClampEps, 1.0 - kClampEps);
        out.error_rates.push_back(rate);
        out.thresholds.push_back(std_normal_quantile(rate));
    }
    return out;
}

TetrachoricSolution solve_tetrachoric(double tau_i, double tau_j, double joint_err) {
    if (!std::isfinite(tau_i) || !std::isfinite(tau_j)) throw InvalidArgument("solve_tetrachoric: thresholds must be finite");
    if (!(joint_err >= 0.0 && joint_err <= 1.0)) throw InvalidArgument("solve_tetrachoric: joint_err must be a probability");
    double lo = -1.0 + kRhoEps;
    double hi = 1.0 - kRhoEps;
    const double f_lo = bivariate_normal_cdf(tau_i, tau_j, lo);
    const double f_hi = bivariate_normal_cdf(tau_i, tau_j, hi);
    if (joint_err <= f_lo) return {lo, joint_err < f_lo};
    if (joint_err >= f_hi) return {hi, joint_err > f_hi};
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (bivariate_normal_cdf(tau_i, tau_j, mid) < joint_err) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {0.5 * (lo + hi), false};
}

SymmetricMatrix project_to_correlation(const SymmetricMatrix& a) {
    const std::size_t m = a.dim();
    for (std::size_t i = 0; i < m; ++i) {
        if (!(a(i, i) > 0.0)) throw InvalidArgument("project_to_correlation: diagonal must be positive");
    }
    SymmetricMatrix rebuilt = a;
    const auto eig = symmetric_eigendecomposition(a);
    if (eig.eigenvalues.front() < kNegativeEigenvalueTrigger) {
        std::vector<double> clipped(eig.eigenvalues);
        for (double& v : clipped) v = std::max(v, kEigEps);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i; j < m; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < m; ++k) s += eig.vector_entry(i, k) * clipped[k] * eig.vector_entry(j, k);
                rebuilt.set(i, j, s);
            }
        }
    }
    SymmetricMatrix out(m);
    for (std::size_t i = 0; i < m; ++i) {
        out.set(i, i, 1.0);
        for (std::size_t j = i + 1; j < m; ++j) {
            out.set(i, j, rebuilt(i, j) / std::sqrt(rebuilt(i, i) * rebuilt(j, j)));
        }
    }
    return out;
}

CopulaModel fit_copula(const Dataset& d, std::vector<std::string>* warnings) {
    if (d.rows() < 2) throw InvalidArgument("fit_copula: at least two rows are required");
    const ErrorMatrix e = error_matrix(d);
    Marginals marg = fit_marginals(e);
    const std::size_t m = d.models();
    const auto& names = d.model_names();

    auto warn = [&](std::string msg) {
        if (warnings) warnings->push_back(std::move(msg));
    };
    for (std::size_t j = 0; j < m; ++j) {
        if (at_clamp(marg.error_rates[j])) {
            warn("model " + names[j] + ": error rate clamped to " + std::to_string(marg.error_rates[j]) +
                 "; its correlations are set to 0");
        }
    }

    SymmetricMatrix raw = SymmetricMatrix::identity(m);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            if (at_clamp(marg.error_rates[a]) || at_clamp(marg.error_rates[b])) continue;
            const double joint = weighted_joint_rate(e, a, b);
            const auto sol = solve_tetrachoric(marg.thresholds[a], marg.thresholds[b], joint);
            if (sol.clamped) {
                warn("pair " + pair_name(names, a, b) + ": joint error rate " + std::to_string(joint) +
                     " outside the attainable range; rho clamped to " + std::to_string(sol.rho));
            }
            raw.set(a, b, sol.rho);
        }
    }

    const auto eig = symmetric_eigendecomposition(raw);
    if (eig.eigenvalues.front() < kNegativeEigenvalueTrigger) {
        warn("pairwise correlation matrix was not PSD (min eigenvalue " + std::to_string(eig.eigenvalues.front()) +
             "); projected");
    }

    CopulaModel model;
    model.model_names = names;
    model.error_rates = std::move(marg.error_rates);
    model.thresholds = std::move(marg.thresholds);
    model.sigma = project_to_correlation(raw);
    return model;
}

Dataset sample(const CopulaModel& model, std::size_t n, std::uint64_t seed) {
    model.validate();
    if (n == 0) throw InvalidArgument("sample: n must be >= 1");
    const std::size_t m = model.models();
    const auto factor = factorize(model.sigma);

    Rng rng(seed);
    std::vector<Label> labels(n);
    std::vector<std::vector<Label>> columns(m, std::vector<Label>(n));
    std::vector<double> xi(m);
    for (std::size_t i = 0; i < n; ++i) {
        const Label y = rng.coin() ? Label{1} : Label{-1};
        labels[i] = y;
        for (double& v : xi) v = rng.normal();
        for (std::size_t j = 0; j < m; ++j) {
            double z = 0.0;
            for (std::size_t k = 0; k < m; ++k) z += factor[j * m + k] * xi[k];
            const bool err = z < model.thresholds[j];
            columns[j][i] = err ? static_cast<Label>(-y) : y;
        }
    }
    return Dataset(std::move(labels), std::move(columns), model.model_names);
}

namespace {

std::vector<std::string> default_names(std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < m; ++j) names.push_back("model_" + std::to_string(j + 1));
    return names;
}

}  // namespace

Dataset sample_equicorrelated(const EquicorrelatedSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n == 0) throw InvalidArgument("sample_equicorrelated: n must be >= 1");
    const double tau = spec.threshold();
    const double load = std::sqrt(spec.rho);
    const double noise = std::sqrt(1.0 - spec.rho);

    Rng rng(seed);
    std::vector<Label> labels(n);
    std::vector<std::vector<Label>> columns(spec.m, std::vector<Label>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const Label y = rng.coin() ? Label{1} : Label{-1};
        labels[i] = y;
        const double common = load * rng.normal();
        for (std::size_t j = 0; j < spec.m; ++j) {
            const double z = common + noise * rng.normal();
            columns[j][i] = z < tau ? static_cast<Label>(-y) : y;
        }
    }
    return Dataset(std::move(labels), std::move(columns), default_names(spec.m));
}

CopulaModel equicorrelated_model(const EquicorrelatedSpec& spec) {
    spec.validate();
    CopulaModel model;
    model.model_names = default_names(spec.m);
    model.error_rates.assign(spec.m, 1.0 - spec.alpha);
    model.thresholds.assign(spec.m, spec.threshold());
    model.sigma = SymmetricMatrix::identity(spec.m);
    for (std::size_t a = 0; a < spec.m; ++a) {
        for (std::size_t b = a + 1; b < spec.m; ++b) model.sigma.set(a, b, spec.rho);
    }
    return model;
}

namespace {

std::vector<double> simultaneous_error_histogram(const ErrorMatrix& e) {
    std::vector<double> hist(e.models() + 1, 0.0);
    for (std::size_t i = 0; i < e.rows(); ++i) {
        std::size_t errs = 0;
        for (std::size_t j = 0; j < e.models(); ++j) errs += e(i, j);
        hist[errs] += e.weight(i);
    }
    const double total = e.total_weight();
    for (double& h : hist) h /= total;
    return hist;
}

}  // namespace

CopulaDiagnostics copula_diagnostics(const Dataset& real, const CopulaModel& model, std::size_t n_synth,
                                     std::uint64_t seed) {
    if (real.models() != model.models()) throw InvalidArgument("copula_diagnostics: model count mismatch");
    const ErrorMatrix e_real = error_matrix(real);
    const ErrorMatrix e_synth = error_matrix(sample(model, n_synth, seed));
    const std::size_t m = model.models();

    CopulaDiagnostics out;
    double rho_sum = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            out.pairs.emplace_back(a, b);
            out.pairwise_joint_empirical.push_back(weighted_joint_rate(e_real, a, b));
            out.pairwise_joint_model.push_back(weighted_joint_rate(e_synth, a, b));
            rho_sum += model.sigma(a, b);
        }
    }
    out.mean_offdiag_rho = out.pairs.empty() ? 0.0 : rho_sum / static_cast<double>(out.pairs.size());
    out.simultaneous_error_hist_empirical = simultaneous_error_histogram(e_real);
    out.simultaneous_error_hist_model = simultaneous_error_histogram(e_synth);
    return out;
}

std::string copula_to_json(const CopulaModel& model) {
    nlohmann::json j;
    j["format"] = 1;
    j["model_names"] = model.model_names;
    j["error_rates"] = model.error_rates;
    j["thresholds"] = model.thresholds;
    j["sigma"] = std::vector<double>(model.sigma.entries().begin(), model.sigma.entries().end());
    return j.dump(2) + "\n";
}

CopulaModel copula_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw ConfigError(std::string("copula model JSON: ") + ex.what());
    }
    try {
        if (j.at("format").get<int>() != 1) throw ConfigError("copula model JSON: unsupported format version");
        CopulaModel model;
        model.model_names = j.at("model_names").get<std::vector<std::string>>();
        model.error_rates = j.at("error_rates").get<std::vector<double>>();
        if (j.contains("thresholds")) {
            model.thresholds = j.at("thresholds").get<std::vector<double>>();
        } else {
            for (double eps : model.error_rates) model.thresholds.push_back(std_normal_quantile(eps));
        }
        auto sigma = j.at("sigma").get<std::vector<double>>();
        const std::size_t m = model.error_rates.size();
        model.sigma = SymmetricMatrix(m, std::move(sigma));
        model.validate();
        return model;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("copula model JSON: ") + ex.what());
    }
}

}  // namespace ensel
