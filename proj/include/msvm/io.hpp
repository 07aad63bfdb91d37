#pragma once

#include "msvm/types.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace msvm {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// How to find the label column of a CSV: by header name, by 0-based index,
// the last column, or absent (features only).
struct LabelColumn {
  enum class Mode { ByName, ByIndex, Last, None };
  Mode mode = Mode::Last;
  std::string name;
  Index index = 0;

  static LabelColumn by_name(std::string s) { return {Mode::ByName, std::move(s), 0}; }
  static LabelColumn by_index(Index i) { return {Mode::ByIndex, {}, i}; }
  static LabelColumn last() { return {Mode::Last, {}, 0}; }
  static LabelColumn none() { return {Mode::None, {}, 0}; }
};

struct CsvTable {
  Matrix features;                  // p x n (column per sample)
  std::optional<IntVector> labels;  // present unless LabelColumn::none
  std::vector<std::string> header;  // empty when the file had none

  // num_classes 0 infers J as the largest label seen.
  Dataset to_dataset(int num_classes = 0) const {
    if (!labels) throw CsvError("file has no label column; cannot build a labeled dataset");
    int inferred = num_classes;
    if (inferred == 0)
      for (Index i = 0; i < labels->size(); ++i) inferred = std::max(inferred, (*labels)[i]);
    return Dataset(features, *labels, inferred);
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + cell.size() && std::isfinite(out);
}

inline double parse_cell(const std::string& cell, Index file_row, Index column) {
  double value = 0.0;
  if (!parse_double(cell, value))
    throw CsvError("malformed numeric value at row " + std::to_string(file_row) + ", column " +
                   std::to_string(column + 1) + ": '" + cell + "'");
  return value;
}

}  // namespace detail

// One sample per row; values comma-separated; optional header (detected by a
// non-numeric first line). Errors carry 1-based file row and column positions.
inline CsvTable load_csv(const std::string& path, const LabelColumn& label = LabelColumn::last()) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::vector<std::vector<std::string>> rows;
  std::vector<Index> file_rows;
  std::string line;
  Index file_row = 0;
  CsvTable table;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++file_row;
    if (detail::trim(line).empty()) continue;
    std::vector<std::string> cells = detail::split_csv_line(line);
    if (first_content_line) {
      first_content_line = false;
      bool numeric = true;
      double unused;
      for (const auto& cell : cells)
        if (!detail::parse_double(cell, unused)) {
          numeric = false;
          break;
        }
      if (!numeric) {
        table.header = cells;
        continue;
      }
    }
    rows.push_back(std::move(cells));
    file_rows.push_back(file_row);
  }
  if (rows.empty()) throw CsvError("'" + path + "' contains no data rows");

  const Index width = static_cast<Index>(rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (static_cast<Index>(rows[r].size()) != width)
      throw CsvError("row " + std::to_string(file_rows[r]) + " has " +
                     std::to_string(rows[r].size()) + " cells, expected " + std::to_string(width));

  Index label_col = -1;
  switch (label.mode) {
    case LabelColumn::Mode::None: break;
    case LabelColumn::Mode::Last: label_col = width - 1; break;
    case LabelColumn::Mode::ByIndex:
      if (label.index < 0 || label.index >= width)
        throw CsvError("label column index " + std::to_string(label.index) + " out of range");
      label_col = label.index;
      break;
    case LabelColumn::Mode::ByName: {
      if (table.header.empty())
        throw CsvError("label column '" + label.name + "' requested but the file has no header");
      for (std::size_t c = 0; c < table.header.size(); ++c)
        if (table.header[c] == label.name) label_col = static_cast<Index>(c);
      if (label_col < 0) throw CsvError("label column '" + label.name + "' not found in header");
      break;
    }
  }
  const Index n = static_cast<Index>(rows.size());
  const Index p = label_col >= 0 ? width - 1 : width;
  if (p < 1) throw CsvError("'" + path + "' has no feature columns");

  table.features.resize(p, n);
  if (label_col >= 0) table.labels.emplace(n);
  for (Index i = 0; i < n; ++i) {
    Index feature = 0;
    for (Index c = 0; c < width; ++c) {
      const double value = detail::parse_cell(rows[static_cast<std::size_t>(i)]
                                                  [static_cast<std::size_t>(c)],
                                              file_rows[static_cast<std::size_t>(i)], c);
      if (c == label_col) {
        const double rounded = std::nearbyint(value);
        if (value != rounded || rounded < 1)
          throw CsvError("label at row " + std::to_string(file_rows[static_cast<std::size_t>(i)]) +
                         " must be a positive integer, got '" +
                         rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] + "'");
        (*table.labels)[i] = static_cast<int>(rounded);
      } else {
        table.features(feature++, i) = value;
      }
    }
  }
  return table;
}

namespace detail {

inline std::string format_full(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace detail

// One sample per row, features first, label last; full-precision values so a
// save/load round trip is exact.
inline void save_csv(const std::string& path, const Dataset& data, bool header = true) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  if (header) {
    for (Index g = 0; g < data.p(); ++g) out << 'f' << (g + 1) << ',';
    out << "label\n";
  }
  for (Index i = 0; i < data.n(); ++i) {
    for (Index g = 0; g < data.p(); ++g) out << detail::format_full(data.features(g, i)) << ',';
    out << data.labels[i] << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline void save_mask_csv(const std::string& path, const Matrix& mask) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (Index i = 0; i < mask.rows(); ++i) {
    for (Index j = 0; j < mask.cols(); ++j)
      out << (mask(i, j) != 0.0 ? 1 : 0) << (j + 1 < mask.cols() ? "," : "");
    out << '\n';
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

// Model file: "p J" on the first line, then p rows of J weights, then one row
// of J intercepts; full precision, whitespace separated.
inline void save_model(const std::string& path, const Classifier& clf) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << clf.p() << ' ' << clf.num_classes() << '\n';
  for (Index i = 0; i < clf.p(); ++i) {
    for (Index j = 0; j < clf.num_classes(); ++j)
      out << detail::format_full(clf.W(i, j)) << (j + 1 < clf.num_classes() ? " " : "");
    out << '\n';
  }
  for (Index j = 0; j < clf.num_classes(); ++j)
    out << detail::format_full(clf.b[j]) << (j + 1 < clf.num_classes() ? " " : "");
  out << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline Classifier load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  Index p = 0;
  int num_classes = 0;
  if (!(in >> p >> num_classes) || p < 1 || num_classes < 2)
    throw IoError("'" + path + "' does not start with valid dimensions \"p J\"");
  Classifier clf;
  clf.W.resize(p, num_classes);
  clf.b.resize(num_classes);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < num_classes; ++j)
      if (!(in >> clf.W(i, j)))
        throw IoError("'" + path + "': truncated weight matrix at row " + std::to_string(i + 1));
  for (Index j = 0; j < num_classes; ++j)
    if (!(in >> clf.b[j])) throw IoError("'" + path + "': truncated intercept row");
  if (!clf.W.allFinite() || !clf.b.allFinite())
    throw IoError("'" + path + "' contains non-finite values");
  return clf;
}

}  // namespace msvm
