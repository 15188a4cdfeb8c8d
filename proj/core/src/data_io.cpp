#include "ensel/data_io.hpp"

#include "ensel/errors.hpp"
#include "ensel/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

namespace ensel {

namespace {

bool is_label(Label v) { return v == 1 || v == -1; }

void validate_weights(const std::vector<double>& weights, std::size_t n) {
    if (weights.empty()) return;
    if (weights.size() != n) throw InvalidArgument("Dataset: weight count must equal row count");
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("Dataset: weights must be finite and >= 0");
    }
}

double sum_weights(std::span<const double> weights, std::size_t n) {
    if (weights.empty()) return static_cast<double>(n);
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

}  // namespace

Dataset::Dataset(std::vector<Label> labels, std::vector<std::vector<Label>> columns,
                 std::vector<std::string> model_names, std::vector<double> weights)
    : labels_(std::move(labels)), names_(std::move(model_names)), weights_(std::move(weights)) {
    const std::size_t n = labels_.size();
    if (n == 0) throw InvalidArgument("Dataset: at least one row is required");
    if (names_.empty()) throw InvalidArgument("Dataset: at least one model is required");
    if (columns.size() != names_.size()) {
        throw InvalidArgument("Dataset: column count must equal model-name count");
    }
    std::set<std::string> seen;
    for (const auto& name : names_) {
        if (!seen.insert(name).second) throw InvalidArgument("Dataset: duplicate model name '" + name + "'");
    }
    if (!std::all_of(labels_.begin(), labels_.end(), is_label)) {
        throw InvalidArgument("Dataset: labels must be -1 or +1");
    }
    predictions_.reserve(n * columns.size());
    for (const auto& col : columns) {
        if (col.size() != n) throw InvalidArgument("Dataset: every column must have N entries");
        if (!std::all_of(col.begin(), col.end(), is_label)) {
            throw InvalidArgument("Dataset: predictions must be -1 or +1");
        }
        predictions_.insert(predictions_.end(), col.begin(), col.end());
    }
    validate_weights(weights_, n);
}

std::span<const Label> Dataset::column(std::size_t j) const {
    return std::span<const Label>(predictions_).subspan(j * rows(), rows());
}

double Dataset::total_weight() const { return sum_weights(weights_, rows()); }

Dataset Dataset::select_rows(std::span<const std::size_t> rows_to_keep) const {
    std::vector<Label> labels;
    labels.reserve(rows_to_keep.size());
    std::vector<double> weights;
    if (weighted()) weights.reserve(rows_to_keep.size());
    for (std::size_t i : rows_to_keep) {
        labels.push_back(labels_.at(i));
        if (weighted()) weights.push_back(weights_[i]);
    }
    std::vector<std::vector<Label>> columns(models());
    for (std::size_t j = 0; j < models(); ++j) {
        const auto src = column(j);
        columns[j].reserve(rows_to_keep.size());
        for (std::size_t i : rows_to_keep) columns[j].push_back(src[i]);
    }
    return Dataset(std::move(labels), std::move(columns), names_, std::move(weights));
}

Dataset Dataset::select_models(std::span<const std::size_t> models_to_keep) const {
    std::vector<std::vector<Label>> columns;
    std::vector<std::string> names;
    for (std::size_t j : models_to_keep) {
        if (j >= models()) throw InvalidArgument("Dataset::select_models: index out of range");
        const auto src = column(j);
        columns.emplace_back(src.begin(), src.end());
        names.push_back(names_[j]);
    }
    return Dataset(labels_, std::move(columns), std::move(names), weights_);
}

ErrorMatrix::ErrorMatrix(std::size_t rows, std::size_t models, std::vector<std::uint8_t> entries,
                         std::vector<double> weights)
    : rows_(rows), models_(models), entries_(std::move(entries)), weights_(std::move(weights)) {
    if (entries_.size() != rows_ * models_) throw InvalidArgument("ErrorMatrix: size mismatch");
    for (auto e : entries_) {
        if (e > 1) throw InvalidArgument("ErrorMatrix: entries must be 0 or 1");
    }
    validate_weights(weights_, rows_);
}

std::span<const std::uint8_t> ErrorMatrix::column(std::size_t j) const {
    return std::span<const std::uint8_t>(entries_).subspan(j * rows_, rows_);
}

double ErrorMatrix::total_weight() const { return sum_weights(weights_, rows_); }

ErrorMatrix error_matrix(const Dataset& d) {
    const std::size_t n = d.rows();
    std::vector<std::uint8_t> entries(n * d.models());
    const auto labels = d.labels();
    for (std::size_t j = 0; j < d.models(); ++j) {
        const auto col = d.column(j);
        for (std::size_t i = 0; i < n; ++i) entries[j * n + i] = col[i] != labels[i] ? 1 : 0;
    }
    return ErrorMatrix(n, d.models(), std::move(entries),
                       std::vector<double>(d.weights().begin(), d.weights().end()));
}

Dataset reconstruct_predictions(std::span<const Label> labels, const ErrorMatrix& errors,
                                std::vector<std::string> model_names) {
    if (labels.size() != errors.rows()) throw InvalidArgument("reconstruct_predictions: row mismatch");
    std::vector<std::vector<Label>> columns(errors.models(), std::vector<Label>(labels.size()));
    for (std::size_t j = 0; j < errors.models(); ++j) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            columns[j][i] = static_cast<Label>(errors(i, j) ? -labels[i] : labels[i]);
        }
    }
    return Dataset(std::vector<Label>(labels.begin(), labels.end()), std::move(columns),
                   std::move(model_names),
                   std::vector<double>(errors.weights().begin(), errors.weights().end()));
}

std::vector<std::size_t> split_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i-- > 1;) {
        const auto j = static_cast<std::size_t>(rng.bounded(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec, std::size_t split_index) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw InvalidArgument("split: train_fraction must lie strictly between 0 and 1");
    }
    if (spec.num_splits == 0 || split_index >= spec.num_splits) {
        throw InvalidArgument("split: split_index must be below num_splits");
    }
    const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.train_fraction));
    if (n_train == 0 || n_train >= n) {
        throw InvalidArgument("split: degenerate split (empty train or test set)");
    }
    const auto perm = split_permutation(n, spec.seed + split_index);
    SplitIndices out;
    out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& d, const SplitSpec& spec,
                                             std::size_t split_index) {
    const auto idx = split_indices(d.rows(), spec, split_index);
    return {d.select_rows(idx.train), d.select_rows(idx.test)};
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

Label parse_label(std::string_view field, std::size_t line_no) {
    if (field == "+1" || field == "1") return 1;
    if (field == "-1") return -1;
    throw ParseError(ParseErrorKind::InvalidValue, line_no,
                     "expected +1 or -1, got '" + std::string(field) + "'");
}

}  // namespace

Dataset parse_dataset(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw ParseError(ParseErrorKind::EmptyFile, 1, "no header");
    }
    ++line_no;
    const auto header = split_fields(line);
    if (header.size() < 2 || header.front() != "label") {
        throw ParseError(ParseErrorKind::BadHeader, line_no,
                         "expected 'label,<model_1>,...,<model_M>'");
    }
    std::vector<std::string> names;
    std::set<std::string, std::less<>> seen;
    for (std::size_t f = 1; f < header.size(); ++f) {
        if (header[f].empty()) throw ParseError(ParseErrorKind::BadHeader, line_no, "empty model name");
        if (!seen.emplace(header[f]).second) {
            throw ParseError(ParseErrorKind::DuplicateModelName, line_no, std::string(header[f]));
        }
        names.emplace_back(header[f]);
    }
    const std::size_t m = names.size();

    std::vector<Label> labels;
    std::vector<std::vector<Label>> columns(m);
    bool pending_blank = false;
    std::size_t blank_line = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            if (!pending_blank) blank_line = line_no;
            pending_blank = true;
            continue;
        }
        // Blank lines are only tolerated at the end of the file.
        if (pending_blank) throw ParseError(ParseErrorKind::MalformedRow, blank_line, "empty row");
        const auto fields = split_fields(line);
        if (fields.size() != m + 1) {
            throw ParseError(ParseErrorKind::MalformedRow, line_no,
                             "expected " + std::to_string(m + 1) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        labels.push_back(parse_label(fields[0], line_no));
        for (std::size_t j = 0; j < m; ++j) columns[j].push_back(parse_label(fields[j + 1], line_no));
    }
    if (labels.empty()) throw ParseError(ParseErrorKind::EmptyFile, line_no, "no data rows");
    return Dataset(std::move(labels), std::move(columns), std::move(names));
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(ParseErrorKind::Io, 0, "cannot open " + path.string());
    return parse_dataset(in);
}

void write_dataset(std::ostream& out, const Dataset& d) {
    out << "label";
    for (const auto& name : d.model_names()) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < d.rows(); ++i) {
        out << (d.label(i) > 0 ? "+1" : "-1");
        for (std::size_t j = 0; j < d.models(); ++j) out << (d.prediction(i, j) > 0 ? ",+1" : ",-1");
        out << '\n';
    }
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) {
    std::ofstream out(path);
    if (!out) throw ParseError(ParseErrorKind::Io, 0, "cannot write " + path.string());
    write_dataset(out, d);
    if (!out) throw ParseError(ParseErrorKind::Io, 0, "write failed for " + path.string());
}

}  // namespace ensel
