#include "ensel/harness.hpp"

#include "ensel/aggregation.hpp"
#include "ensel/errors.hpp"
#include "ensel/numerics.hpp"
#include "ensel/rng.hpp"
#include "ensel/theory.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ensel {

using nlohmann::json;

std::string_view library_version() noexcept { return ENSEL_VERSION; }

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::GreedyMiDirect, "greedy_mi_direct"}, {Method::GreedyMiThreeTerm, "greedy_mi_three_term"},
    {Method::TopK, "top_k"},                      {Method::Term1, "term1"},
    {Method::Mrmr, "mrmr"},                       {Method::Exhaustive, "exhaustive"},
};

constexpr std::pair<Aggregator, std::string_view> kAggregatorNames[] = {
    {Aggregator::Map, "map"}, {Aggregator::Mv, "mv"}, {Aggregator::Wmv, "wmv"}};

}  // namespace

std::string_view to_string(Method m) noexcept {
    for (const auto& [k, v] : kMethodNames) {
        if (k == m) return v;
    }
    return "?";
}

std::string_view to_string(Aggregator a) noexcept {
    for (const auto& [k, v] : kAggregatorNames) {
        if (k == a) return v;
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (const auto& [k, v] : kMethodNames) {
        if (v == name) return k;
    }
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

Aggregator parse_aggregator(std::string_view name) {
    for (const auto& [k, v] : kAggregatorNames) {
        if (v == name) return k;
    }
    throw ConfigError("unknown aggregator '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// config

namespace {

void only_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || item.key() == a;
        if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
    }
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    return obj.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) path = base / path;
    return path;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CopulaModel inline_copula(const json& j) {
    only_keys(j, {"kind", "n", "error_rates", "sigma", "model_names"}, "synthetic");
    CopulaModel model;
    model.error_rates = j.at("error_rates").get<std::vector<double>>();
    const std::size_t m = model.error_rates.size();
    if (m == 0) throw ConfigError("synthetic.error_rates is empty");
    for (double e : model.error_rates) {
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("synthetic.error_rates must lie in (0, 1)");
        model.thresholds.push_back(std_normal_quantile(e));
    }
    if (j.contains("model_names")) {
        model.model_names = j.at("model_names").get<std::vector<std::string>>();
    } else {
        for (std::size_t t = 0; t < m; ++t) model.model_names.push_back("model_" + std::to_string(t + 1));
    }
    model.sigma = SymmetricMatrix::identity(m);
    if (j.contains("sigma")) {
        const json& s = j.at("sigma");
        std::vector<double> flat;
        if (!s.empty() && s.front().is_array()) {
            for (const auto& row : s) {
                auto r = row.get<std::vector<double>>();
                flat.insert(flat.end(), r.begin(), r.end());
            }
        } else {
            flat = s.get<std::vector<double>>();
        }
        if (flat.size() != m * m) throw ConfigError("synthetic.sigma must be M x M");
        model.sigma = SymmetricMatrix(m, std::move(flat));
    }
    model.validate();
    return model;
}

DataSource parse_source(const json& root, const std::filesystem::path& base) {
    DataSource src;
    if (root.contains("dataset") && root.contains("synthetic")) {
        throw ConfigError("give either 'dataset' or 'synthetic', not both");
    }
    if (root.contains("dataset")) {
        src.dataset = resolve(base, root.at("dataset").get<std::string>());
        return src;
    }
    if (!root.contains("synthetic")) return src;
    const json& syn = root.at("synthetic");
    if (!syn.is_object()) throw ConfigError("synthetic must be a JSON object");
    const auto kind = syn.at("kind").get<std::string>();
    src.n = syn.at("n").get<std::size_t>();
    if (src.n == 0) throw ConfigError("synthetic.n must be >= 1");
    if (kind == "equicorrelated") {
        only_keys(syn, {"kind", "n", "m", "rho", "alpha"}, "synthetic");
        EquicorrelatedSpec spec;
        spec.m = syn.at("m").get<std::size_t>();
        spec.rho = syn.at("rho").get<double>();
        spec.alpha = syn.at("alpha").get<double>();
        spec.validate();
        src.equicorrelated = spec;
    } else if (kind == "copula") {
        if (syn.contains("model")) {
            only_keys(syn, {"kind", "n", "model"}, "synthetic");
            const json& m = syn.at("model");
            src.copula = copula_from_json(m.is_string() ? read_file(resolve(base, m.get<std::string>())) : m.dump());
        } else {
            src.copula = inline_copula(syn);
        }
    } else {
        throw ConfigError("synthetic.kind must be 'copula' or 'equicorrelated'");
    }
    return src;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::string_view json_text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    c.raw_json = std::string(json_text);
    try {
        only_keys(root,
                  {"dataset", "synthetic", "methods", "aggregators", "k_range", "split", "alpha", "seed",
                   "exhaustive", "copula_validation", "saturation", "output_dir"},
                  "config");
        c.source = parse_source(root, base_dir);
        if (root.contains("methods")) {
            c.methods.clear();
            for (const auto& m : root.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
            if (c.methods.empty()) throw ConfigError("methods must not be empty");
        }
        if (root.contains("aggregators")) {
            c.aggregators.clear();
            for (const auto& a : root.at("aggregators")) c.aggregators.push_back(parse_aggregator(a.get<std::string>()));
            if (c.aggregators.empty()) throw ConfigError("aggregators must not be empty");
        }
        if (root.contains("k_range")) {
            const auto k = root.at("k_range").get<std::vector<std::size_t>>();
            if (k.size() != 2 || k[0] < 1 || k[0] > k[1]) throw ConfigError("k_range must be [lo, hi] with 1 <= lo <= hi");
            c.k_range = std::make_pair(k[0], k[1]);
        }
        if (root.contains("split")) {
            const json& s = root.at("split");
            only_keys(s, {"train_fraction", "num_splits"}, "split");
            c.train_fraction = get_or(s, "train_fraction", c.train_fraction);
            c.num_splits = get_or(s, "num_splits", c.num_splits);
            if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) {
                throw ConfigError("split.train_fraction must lie in (0, 1)");
            }
            if (c.num_splits == 0) throw ConfigError("split.num_splits must be >= 1");
        }
        c.alpha = get_or(root, "alpha", c.alpha);
        if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) throw ConfigError("alpha must be > 0");
        c.seed = get_or(root, "seed", c.seed);
        if (root.contains("exhaustive")) {
            const json& e = root.at("exhaustive");
            only_keys(e, {"cap", "objective"}, "exhaustive");
            c.exhaustive_cap = get_or(e, "cap", c.exhaustive_cap);
            const auto obj = get_or<std::string>(e, "objective", "max_mi");
            if (obj == "max_mi") {
                c.exhaustive_objective = ExhaustiveObjective::MaxMi;
            } else if (obj == "min_map_error") {
                c.exhaustive_objective = ExhaustiveObjective::MinMapError;
            } else {
                throw ConfigError("exhaustive.objective must be 'max_mi' or 'min_map_error'");
            }
        }
        if (root.contains("copula_validation")) {
            const json& v = root.at("copula_validation");
            only_keys(v, {"samples"}, "copula_validation");
            c.copula_samples = get_or(v, "samples", c.copula_samples);
            if (c.copula_samples == 0) throw ConfigError("copula_validation.samples must be >= 1");
        }
        if (root.contains("saturation")) {
            const json& s = root.at("saturation");
            only_keys(s, {"alpha", "rho", "m_schedule", "n"}, "saturation");
            c.saturation.alpha = get_or(s, "alpha", c.saturation.alpha);
            c.saturation.rho = get_or(s, "rho", c.saturation.rho);
            c.saturation.m_schedule = get_or(s, "m_schedule", c.saturation.m_schedule);
            c.saturation.n = get_or(s, "n", c.saturation.n);
            EquicorrelatedSpec probe{1, c.saturation.rho, c.saturation.alpha};
            probe.validate();
            if (c.saturation.m_schedule.empty() || c.saturation.n == 0) {
                throw ConfigError("saturation needs a nonempty m_schedule and n >= 1");
            }
            for (std::size_t t = 0; t < c.saturation.m_schedule.size(); ++t) {
                if (c.saturation.m_schedule[t] == 0 ||
                    (t > 0 && c.saturation.m_schedule[t] <= c.saturation.m_schedule[t - 1])) {
                    throw ConfigError("saturation.m_schedule must be strictly increasing and positive");
                }
            }
        }
        if (root.contains("output_dir")) c.output_dir = resolve(base_dir, root.at("output_dir").get<std::string>());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    return parse(read_file(path), path.parent_path());
}

Dataset load_source(const ExperimentConfig& config) {
    const DataSource& src = config.source;
    const std::uint64_t seed = derive_seed(config.seed, "synthetic");
    if (src.dataset) return load_dataset(*src.dataset);
    if (src.copula) return sample(*src.copula, src.n, seed);
    if (src.equicorrelated) return sample_equicorrelated(*src.equicorrelated, src.n, seed);
    throw ConfigError("config has neither 'dataset' nor 'synthetic'");
}

// ---------------------------------------------------------------------------
// error curve

namespace {

double aggregate_error(Aggregator agg, const Dataset& train, const Dataset& test, std::span<const std::size_t> s,
                       std::uint64_t mv_seed) {
    double wrong = 0.0;
    switch (agg) {
        case Aggregator::Map: {
            const MapTable table = fit_map(train, s);
            for (std::size_t i = 0; i < test.rows(); ++i) {
                if (predict_map(table, row_pattern(test, i, s)) != test.label(i)) wrong += test.weight(i);
            }
            break;
        }
        case Aggregator::Mv:
            for (std::size_t i = 0; i < test.rows(); ++i) {
                if (majority_vote(row_pattern(test, i, s), mv_seed + i) != test.label(i)) wrong += test.weight(i);
            }
            break;
        case Aggregator::Wmv: {
            const WeightVector w = fit_weights(train, s);
            for (std::size_t i = 0; i < test.rows(); ++i) {
                if (weighted_majority_vote(row_pattern(test, i, s), w) != test.label(i)) wrong += test.weight(i);
            }
            break;
        }
    }
    return wrong / test.total_weight();
}

SelectionResult run_ranked(Method m, const Dataset& train, std::size_t k, double alpha) {
    switch (m) {
        case Method::GreedyMiDirect: return greedy_mi_select(train, k, GreedyMode::DirectCmi, alpha);
        case Method::GreedyMiThreeTerm: return greedy_mi_select(train, k, GreedyMode::ThreeTerm, alpha);
        case Method::TopK: return top_k_select(train, k);
        case Method::Term1: return term1_select(train, k, alpha);
        case Method::Mrmr: return mrmr_select(train, k, alpha);
        case Method::Exhaustive: break;
    }
    throw InternalError("run_ranked: exhaustive is not a ranking method");
}

SelectionResult prefix(const SelectionResult& full, std::size_t k) {
    SelectionResult r{full.method, {}, {}};
    r.order.assign(full.order.begin(), full.order.begin() + static_cast<std::ptrdiff_t>(k));
    r.step_scores.assign(full.step_scores.begin(), full.step_scores.begin() + static_cast<std::ptrdiff_t>(k));
    return r;
}

}  // namespace

ExperimentReport run_error_curve(const ExperimentConfig& config, const Dataset& data) {
    const std::size_t m = data.models();
    std::size_t lo = 1, hi = m;
    if (config.k_range) {
        std::tie(lo, hi) = *config.k_range;
        if (hi > m) throw ConfigError("k_range upper end " + std::to_string(hi) + " exceeds M = " + std::to_string(m));
    }
    if (config.methods.empty() || config.aggregators.empty()) throw ConfigError("need at least one method and aggregator");

    ExperimentReport report;
    report.model_names = data.model_names();
    const SplitSpec split{config.train_fraction, derive_seed(config.seed, "split"), config.num_splits};
    std::set<std::size_t> skipped_k;

    for (std::size_t sp = 0; sp < config.num_splits; ++sp) {
        const auto [train, test] = split_train_test(data, split, sp);
        const auto context = EvaluationContext::held_out(train, config.alpha);
        for (const Method method : config.methods) {
            std::optional<SelectionResult> full;
            if (method != Method::Exhaustive) full = run_ranked(method, train, hi, config.alpha);
            for (std::size_t k = lo; k <= hi; ++k) {
                SelectionResult sel;
                if (full) {
                    sel = prefix(*full, k);
                } else {
                    if (binomial(m, k) > config.exhaustive_cap) {
                        if (skipped_k.insert(k).second) {
                            report.warnings.push_back("exhaustive skipped at k=" + std::to_string(k) + ": C(" +
                                                      std::to_string(m) + "," + std::to_string(k) +
                                                      ") exceeds cap " + std::to_string(config.exhaustive_cap));
                        }
                        continue;
                    }
                    sel = exhaustive_select(train, context, k, config.exhaustive_objective, config.exhaustive_cap);
                }
                sel.method = std::string(to_string(method));
                for (Aggregator agg : config.aggregators) {
                    const std::uint64_t mv_seed = derive_seed(config.seed, "mv", {sp, k});
                    report.rows.push_back({std::string(to_string(method)), std::string(to_string(agg)), k, sp,
                                           aggregate_error(agg, train, test, sel.order, mv_seed)});
                }
                report.selections.push_back({sp, k, std::move(sel)});
            }
        }
    }
    report.summary = summarize(report.rows);
    return report;
}

ExperimentReport run_error_curve(const ExperimentConfig& config) { return run_error_curve(config, load_source(config)); }

std::vector<CurveSummary> summarize(const std::vector<CurveRow>& rows) {
    std::vector<CurveSummary> out;
    std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> groups;
    for (const auto& r : rows) {
        auto key = std::make_tuple(r.method, r.aggregator, r.k);
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) out.push_back({r.method, r.aggregator, r.k, 0, 0.0, 0.0, 0.0});
        it->second.push_back(r.test_error);
    }
    for (auto& s : out) {
        const auto& v = groups.at(std::make_tuple(s.method, s.aggregator, s.k));
        s.count = v.size();
        double sum = 0.0;
        for (double x : v) sum += x;
        s.mean = sum / static_cast<double>(v.size());
        if (v.size() > 1) {
            double ss = 0.0;
            for (double x : v) ss += (x - s.mean) * (x - s.mean);
            s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
        }
        s.sem = s.std / std::sqrt(static_cast<double>(v.size()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// copula validation and saturation

CopulaValidation run_copula_validation(const ExperimentConfig& config, const Dataset& data) {
    CopulaValidation v;
    v.model = fit_copula(data, &v.warnings);
    v.diagnostics = copula_diagnostics(data, v.model, config.copula_samples, derive_seed(config.seed, "copula_validation"));
    return v;
}

SaturationRow simulate_majority_error(const EquicorrelatedSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n == 0) throw InvalidArgument("simulate_majority_error: n must be >= 1");
    const double tau = spec.threshold();
    const double load = std::sqrt(spec.rho);
    const double noise = std::sqrt(1.0 - spec.rho);
    const std::uint64_t tie_seed = derive_seed(seed, "mv_tie");
    Rng rng(seed);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        (void)rng.coin();  // the label; errors do not depend on it
        const double common = load * rng.normal();
        std::size_t errs = 0;
        for (std::size_t j = 0; j < spec.m; ++j) {
            if (common + noise * rng.normal() < tau) ++errs;
        }
        if (2 * errs > spec.m) {
            ++wrong;
        } else if (2 * errs == spec.m && (splitmix64(tie_seed + i) >> 63) == 0) {
            // tie: the vote coin landed on the wrong label
            ++wrong;
        }
    }
    SaturationRow row;
    row.m = spec.m;
    row.empirical_error = static_cast<double>(wrong) / static_cast<double>(n);
    row.standard_error = std::sqrt(row.empirical_error * (1.0 - row.empirical_error) / static_cast<double>(n));
    row.floor = saturation_floor(spec.alpha, spec.rho);
    return row;
}

std::vector<SaturationRow> run_saturation(const SaturationConfig& config, std::uint64_t seed) {
    std::vector<SaturationRow> rows;
    for (std::size_t m : config.m_schedule) {
        rows.push_back(simulate_majority_error({m, config.rho, config.alpha}, config.n, derive_seed(seed, "saturation", {m})));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// writers

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t t = 0; t < parts.size(); ++t) {
        if (t) out += sep;
        out += parts[t];
    }
    return out;
}

}  // namespace

std::string curve_csv(const ExperimentReport& r) {
    std::string out = "method,aggregator,k,split,test_error\n";
    for (const auto& row : r.rows) {
        out += row.method + "," + row.aggregator + "," + std::to_string(row.k) + "," + std::to_string(row.split) + "," +
               format_double(row.test_error) + "\n";
    }
    return out;
}

std::string summary_csv(const ExperimentReport& r) {
    std::string out = "method,aggregator,k,count,mean,std,sem\n";
    for (const auto& s : r.summary) {
        out += s.method + "," + s.aggregator + "," + std::to_string(s.k) + "," + std::to_string(s.count) + "," +
               format_double(s.mean) + "," + format_double(s.std) + "," + format_double(s.sem) + "\n";
    }
    return out;
}

std::string selections_csv(const ExperimentReport& r) {
    std::string out = "split,method,k,order,step_scores\n";
    for (const auto& rec : r.selections) {
        std::vector<std::string> names, scores;
        for (std::size_t j : rec.result.order) names.push_back(r.model_names.at(j));
        for (double s : rec.result.step_scores) scores.push_back(format_double(s));
        out += std::to_string(rec.split) + "," + rec.result.method + "," + std::to_string(rec.k) + "," +
               join(names, ';') + "," + join(scores, ';') + "\n";
    }
    return out;
}

std::string pairwise_csv(const CopulaValidation& v) {
    std::string out = "pair_i,pair_j,empirical,model,rho\n";
    const auto& d = v.diagnostics;
    for (std::size_t t = 0; t < d.pairs.size(); ++t) {
        const auto [a, b] = d.pairs[t];
        out += v.model.model_names[a] + "," + v.model.model_names[b] + "," + format_double(d.pairwise_joint_empirical[t]) +
               "," + format_double(d.pairwise_joint_model[t]) + "," + format_double(v.model.sigma(a, b)) + "\n";
    }
    return out;
}

std::string histogram_csv(const CopulaValidation& v) {
    std::string out = "k,empirical,model\n";
    const auto& d = v.diagnostics;
    for (std::size_t t = 0; t < d.simultaneous_error_hist_empirical.size(); ++t) {
        out += std::to_string(t) + "," + format_double(d.simultaneous_error_hist_empirical[t]) + "," +
               format_double(d.simultaneous_error_hist_model[t]) + "\n";
    }
    return out;
}

std::string saturation_csv(const std::vector<SaturationRow>& rows) {
    std::string out = "m,empirical_error,standard_error,floor\n";
    for (const auto& r : rows) {
        out += std::to_string(r.m) + "," + format_double(r.empirical_error) + "," + format_double(r.standard_error) +
               "," + format_double(r.floor) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// commands

namespace {

class OutputDir {
public:
    explicit OutputDir(const std::filesystem::path& dir) : dir_(dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw ParseError(ParseErrorKind::Io, 0, "cannot create " + dir_.string() + ": " + ec.message());
    }

    void write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        out << content;
        if (!out) throw ParseError(ParseErrorKind::Io, 0, "cannot write " + path.string());
        files_.push_back(path);
    }

    std::vector<std::filesystem::path> files() const { return files_; }

private:
    std::filesystem::path dir_;
    std::vector<std::filesystem::path> files_;
};

using Clock = std::chrono::steady_clock;

void write_manifest(OutputDir& out, const ExperimentConfig& config, std::string_view command,
                    const std::vector<std::string>& warnings, Clock::time_point start) {
    json m;
    m["tool"] = "ensel";
    m["version"] = std::string(library_version());
    m["command"] = std::string(command);
    m["seed"] = config.seed;
    json echo = json::parse(config.raw_json, nullptr, false);
    m["config"] = echo.is_discarded() ? json(config.raw_json) : echo;
    m["warnings"] = warnings;
    std::vector<std::string> names;
    for (const auto& f : out.files()) names.push_back(f.filename().string());
    m["files"] = names;
    m["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    out.write("manifest.json", m.dump(2) + "\n");
}

}  // namespace

std::vector<std::filesystem::path> command_curve(const ExperimentConfig& config) {
    const auto start = Clock::now();
    const ExperimentReport report = run_error_curve(config);
    OutputDir out(config.output_dir);
    out.write("curve.csv", curve_csv(report));
    out.write("summary.csv", summary_csv(report));
    out.write("selections.csv", selections_csv(report));
    write_manifest(out, config, "curve", report.warnings, start);
    return out.files();
}

std::vector<std::filesystem::path> command_validate_copula(const ExperimentConfig& config) {
    const auto start = Clock::now();
    const CopulaValidation v = run_copula_validation(config, load_source(config));
    OutputDir out(config.output_dir);
    out.write("copula_model.json", copula_to_json(v.model));
    out.write("pairwise.csv", pairwise_csv(v));
    out.write("histogram.csv", histogram_csv(v));
    write_manifest(out, config, "validate-copula", v.warnings, start);
    return out.files();
}

std::vector<std::filesystem::path> command_saturate(const ExperimentConfig& config) {
    const auto start = Clock::now();
    const auto rows = run_saturation(config.saturation, config.seed);
    OutputDir out(config.output_dir);
    out.write("saturation.csv", saturation_csv(rows));
    write_manifest(out, config, "saturate", {}, start);
    return out.files();
}

std::vector<std::filesystem::path> command_fit_copula(const ExperimentConfig& config) {
    const auto start = Clock::now();
    std::vector<std::string> warnings;
    const CopulaModel model = fit_copula(load_source(config), &warnings);
    OutputDir out(config.output_dir);
    out.write("copula_model.json", copula_to_json(model));
    write_manifest(out, config, "fit-copula", warnings, start);
    return out.files();
}

std::vector<std::filesystem::path> command_sample(const ExperimentConfig& config) {
    const auto start = Clock::now();
    if (!config.source.copula && !config.source.equicorrelated) {
        throw ConfigError("sample needs a 'synthetic' source");
    }
    const Dataset d = load_source(config);
    std::ostringstream csv;
    write_dataset(csv, d);
    OutputDir out(config.output_dir);
    out.write("samples.csv", csv.str());
    write_manifest(out, config, "sample", {}, start);
    return out.files();
}

}  // namespace ensel
