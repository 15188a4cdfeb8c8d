#pragma once

#include "ensel/copula.hpp"
#include "ensel/data_io.hpp"
#include "ensel/selection.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ensel {

std::string_view library_version() noexcept;

enum class Method { GreedyMiDirect, GreedyMiThreeTerm, TopK, Term1, Mrmr, Exhaustive };
enum class Aggregator { Map, Mv, Wmv };

std::string_view to_string(Method m) noexcept;
std::string_view to_string(Aggregator a) noexcept;
Method parse_method(std::string_view name);          // throws ConfigError
Aggregator parse_aggregator(std::string_view name);  // throws ConfigError

/// Where the rows come from: a CSV file, or n rows sampled from a copula model or an
/// equicorrelated spec.
struct DataSource {
    std::optional<std::filesystem::path> dataset;
    std::optional<CopulaModel> copula;
    std::optional<EquicorrelatedSpec> equicorrelated;
    std::size_t n = 0;
};

struct SaturationConfig {
    double alpha = 0.8;
    double rho = 0.5;
    std::vector<std::size_t> m_schedule{1, 5, 25, 125, 625};
    std::size_t n = 200000;
};

struct ExperimentConfig {
    DataSource source;
    std::vector<Method> methods{Method::GreedyMiDirect, Method::TopK};
    std::vector<Aggregator> aggregators{Aggregator::Map, Aggregator::Mv, Aggregator::Wmv};
    std::optional<std::pair<std::size_t, std::size_t>> k_range;  // inclusive; default [1, M]
    double train_fraction = 0.8;
    std::size_t num_splits = 5;
    double alpha = 1.0;
    std::uint64_t seed = 0;
    std::size_t exhaustive_cap = kDefaultExhaustiveCap;
    ExhaustiveObjective exhaustive_objective = ExhaustiveObjective::MaxMi;
    std::size_t copula_samples = 200000;
    SaturationConfig saturation;
    std::filesystem::path output_dir = "out";
    std::string raw_json;  // the config text as given, echoed into manifests

    /// Parses the JSON schema described in the README. Relative paths resolve against
    /// base_dir. Throws ConfigError on any schema problem.
    static ExperimentConfig parse(std::string_view json_text, const std::filesystem::path& base_dir = {});
    static ExperimentConfig load(const std::filesystem::path& path);
};

// Reads the CSV or samples the synthetic source with derive_seed(seed, "synthetic").
Dataset load_source(const ExperimentConfig& config);

struct CurveRow {
    std::string method;
    std::string aggregator;
    std::size_t k = 0;
    std::size_t split = 0;
    double test_error = 0.0;
};

struct CurveSummary {
    std::string method;
    std::string aggregator;
    std::size_t k = 0;
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single split
    double sem = 0.0;  // std / sqrt(count)
};

struct SelectionRecord {
    std::size_t split = 0;
    std::size_t k = 0;
    SelectionResult result;
};

struct ExperimentReport {
    std::vector<CurveRow> rows;
    std::vector<CurveSummary> summary;
    std::vector<SelectionRecord> selections;
    std::vector<std::string> model_names;
    std::vector<std::string> warnings;
};

/// For every split: select on train, fit the aggregator on train, score on test.
/// Rows are ordered by (split, method, k, aggregator) in config order.
ExperimentReport run_error_curve(const ExperimentConfig& config, const Dataset& data);
ExperimentReport run_error_curve(const ExperimentConfig& config);

// Mean and sample std per (method, aggregator, k), in first-appearance order.
std::vector<CurveSummary> summarize(const std::vector<CurveRow>& rows);

struct CopulaValidation {
    CopulaModel model;
    CopulaDiagnostics diagnostics;
    std::vector<std::string> warnings;
};

// Fits on all rows (no split) and compares against copula_samples synthetic rows.
CopulaValidation run_copula_validation(const ExperimentConfig& config, const Dataset& data);

struct SaturationRow {
    std::size_t m = 0;
    double empirical_error = 0.0;
    double standard_error = 0.0;
    double floor = 0.0;
};

/// Majority-vote error of m equicorrelated models over n fresh rows per m, streamed
/// without materializing the dataset. Draws follow sample_equicorrelated exactly.
std::vector<SaturationRow> run_saturation(const SaturationConfig& config, std::uint64_t seed);

// Single entry for one schedule point; used by run_saturation.
SaturationRow simulate_majority_error(const EquicorrelatedSpec& spec, std::size_t n, std::uint64_t seed);

// Writers. Numbers use %.17g so re-runs are byte-identical.
std::string format_double(double v);
std::string curve_csv(const ExperimentReport& r);
std::string summary_csv(const ExperimentReport& r);
std::string selections_csv(const ExperimentReport& r);
std::string pairwise_csv(const CopulaValidation& v);
std::string histogram_csv(const CopulaValidation& v);
std::string saturation_csv(const std::vector<SaturationRow>& rows);

/// The CLI subcommands. Each writes its files plus manifest.json into output_dir and
/// returns the list of files written.
std::vector<std::filesystem::path> command_curve(const ExperimentConfig& config);
std::vector<std::filesystem::path> command_validate_copula(const ExperimentConfig& config);
std::vector<std::filesystem::path> command_saturate(const ExperimentConfig& config);
std::vector<std::filesystem::path> command_fit_copula(const ExperimentConfig& config);
std::vector<std::filesystem::path> command_sample(const ExperimentConfig& config);

}  // namespace ensel
