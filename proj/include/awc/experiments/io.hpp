#pragma once

// CSV persistence of datasets, weights, diagnostics and metrics.
//
//   dataset      headerless, one point per row, optional trailing integer label
//   weights      header "i,j", one undirected edge per row, 0-based, i < j
//   diagnostics  header "step,i,j,dist,N,theta_hat,q,T,accepted"
//
// Floating-point fields carry 17 significant digits so they parse back exactly.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "awc/core.hpp"
#include "awc/dataset.hpp"
#include "awc/experiments/text.hpp"
#include "awc/weights.hpp"

namespace awc::experiments {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CsvRow = std::vector<std::string>;

/// Rows of comma-separated fields; blank lines are skipped.
inline std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  for (auto line : split(text, '\n')) {
    if (line.empty()) continue;
    CsvRow row;
    for (auto field : split(line, ',')) row.emplace_back(field);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return text;
}

inline void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

// ---------------------------------------------------------------------------
// Datasets

inline std::string dataset_csv(const Dataset& data, bool labeled) {
  if (labeled && !data.has_labels()) throw std::invalid_argument("dataset_csv: dataset has no labels");
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data.point(i);
    for (std::size_t k = 0; k < p.size(); ++k) out += (k ? "," : "") + format_double(p[k]);
    if (labeled) out += "," + std::to_string(data.labels[i]);
    out += '\n';
  }
  return out;
}

/// Parses a headerless dataset; with `labeled` the last column holds labels.
inline Dataset parse_dataset(std::string_view text, bool labeled) {
  Dataset data;
  std::size_t line = 0;
  for (const auto& row : parse_csv(text)) {
    ++line;
    const std::size_t dim = row.size() - (labeled ? 1 : 0);
    if (dim < 1) throw IoError("dataset row " + std::to_string(line) + ": no coordinates");
    if (data.dim == 0) data.dim = dim;
    if (dim != data.dim) throw IoError("dataset row " + std::to_string(line) + ": expected " +
                                       std::to_string(data.dim) + " coordinates");
    for (std::size_t k = 0; k < dim; ++k) {
      const auto v = parse_double(row[k]);
      if (!v || !std::isfinite(*v))
        throw IoError("dataset row " + std::to_string(line) + ": bad coordinate '" + row[k] + "'");
      data.coords.push_back(*v);
    }
    if (labeled) {
      const auto label = parse_integer<int>(row.back());
      if (!label) throw IoError("dataset row " + std::to_string(line) + ": bad label '" + row.back() + "'");
      data.labels.push_back(*label);
    }
  }
  return data;
}

// ---------------------------------------------------------------------------
// Weights and diagnostics

inline std::string edges_csv(const WeightMatrix& w) {
  std::string out = "i,j\n";
  for (const auto& [i, j] : w.edges()) out += std::to_string(i) + "," + std::to_string(j) + "\n";
  return out;
}

/// Rebuilds an n x n matrix from an edge list.
inline WeightMatrix parse_edges(std::string_view text, std::size_t n) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front() != CsvRow{"i", "j"}) throw IoError("edge list: missing header 'i,j'");
  std::vector<std::vector<Index>> lists(n);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto i = row.size() == 2 ? parse_integer<Index>(row[0]) : std::nullopt;
    const auto j = row.size() == 2 ? parse_integer<Index>(row[1]) : std::nullopt;
    if (!i || !j || *i >= *j || *j >= n) throw IoError("edge list row " + std::to_string(r) + ": bad edge");
    lists[*i].push_back(*j);
    lists[*j].push_back(*i);
  }
  for (auto& l : lists) std::sort(l.begin(), l.end());
  try {
    return WeightMatrix::from_neighbors(lists);
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("edge list: ") + e.what());
  }
}

inline constexpr std::string_view kDiagnosticsHeader = "step,i,j,dist,N,theta_hat,q,T,accepted";

inline std::string diagnostics_csv(const std::vector<StepDiagnostics>& steps) {
  std::string out(kDiagnosticsHeader);
  out += '\n';
  for (const auto& s : steps)
    for (const auto& p : s.pairs) {
      out += std::to_string(s.step) + "," + std::to_string(p.i) + "," + std::to_string(p.j) + "," +
             format_double(p.dist) + "," + std::to_string(p.N) + "," + format_double(p.theta_hat) + "," +
             format_double(p.q) + "," + format_double(p.T) + "," + (p.accepted ? "1" : "0") + "\n";
    }
  return out;
}

/// Header row plus one row per record, all fields preformatted.
inline std::string table_csv(const std::vector<std::string>& header, const std::vector<CsvRow>& rows) {
  std::string out;
  for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + row[k];
    out += '\n';
  }
  return out;
}

}  // namespace awc::experiments
