#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ensel {

// A binary label or prediction: -1 or +1.
using Label = std::int8_t;

/// Labels Y (length N), predictions X (N x M, stored column-major so each model's
/// column is contiguous), and M unique model names.
///
/// Rows may carry non-negative weights. An unweighted dataset counts every row once;
/// a weighted one is how exact distributions are injected (one row per pattern, weight
/// proportional to its probability). Every counting estimator in the library honours
/// the weights.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Label> labels, std::vector<std::vector<Label>> columns,
            std::vector<std::string> model_names, std::vector<double> weights = {});

    std::size_t rows() const noexcept { return labels_.size(); }
    std::size_t models() const noexcept { return names_.size(); }

    Label label(std::size_t i) const { return labels_[i]; }
    Label prediction(std::size_t i, std::size_t j) const { return predictions_[j * rows() + i]; }
    std::span<const Label> labels() const noexcept { return labels_; }
    std::span<const Label> column(std::size_t j) const;
    const std::vector<std::string>& model_names() const noexcept { return names_; }

    bool weighted() const noexcept { return !weights_.empty(); }
    // Empty when unweighted.
    std::span<const double> weights() const noexcept { return weights_; }
    double weight(std::size_t i) const { return weights_.empty() ? 1.0 : weights_[i]; }
    double total_weight() const;

    Dataset select_rows(std::span<const std::size_t> rows) const;
    Dataset select_models(std::span<const std::size_t> models) const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::vector<Label> labels_;
    std::vector<Label> predictions_;
    std::vector<std::string> names_;
    std::vector<double> weights_;
};

/// E[i][j] = 1 exactly when model j mispredicts row i. Column-major, shares the
/// dataset's row weights.
class ErrorMatrix {
public:
    ErrorMatrix(std::size_t rows, std::size_t models, std::vector<std::uint8_t> entries,
                std::vector<double> weights = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t models() const noexcept { return models_; }
    std::uint8_t operator()(std::size_t i, std::size_t j) const { return entries_[j * rows_ + i]; }
    std::span<const std::uint8_t> column(std::size_t j) const;
    std::span<const double> weights() const noexcept { return weights_; }
    double weight(std::size_t i) const { return weights_.empty() ? 1.0 : weights_[i]; }
    double total_weight() const;

private:
    std::size_t rows_;
    std::size_t models_;
    std::vector<std::uint8_t> entries_;
    std::vector<double> weights_;
};

ErrorMatrix error_matrix(const Dataset& d);

// Inverse of error_matrix given the labels: X_ij = Y_i * (-1)^E_ij.
Dataset reconstruct_predictions(std::span<const Label> labels, const ErrorMatrix& errors,
                                std::vector<std::string> model_names);

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
    std::size_t num_splits = 5;
};

struct SplitIndices {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
};

/// Row permutation used by every split: Fisher-Yates (last position first) driven by
/// Rng(seed), i.e. std::mt19937_64 seeded directly, with j = Rng::bounded(i + 1).
std::vector<std::size_t> split_permutation(std::size_t n, std::uint64_t seed);

/// Train rows are the first round(N * train_fraction) entries of
/// split_permutation(N, spec.seed + split_index); test rows are the rest. Both lists
/// are returned in ascending order so the original row order is preserved.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec, std::size_t split_index);

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, const SplitSpec& spec,
                                             std::size_t split_index);

// CSV: header `label,<name_1>,...,<name_M>`; rows of M+1 fields, each +1 or -1.
Dataset parse_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const Dataset& d);
void save_dataset(const std::filesystem::path& path, const Dataset& d);

}  // namespace ensel
