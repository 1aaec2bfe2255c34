#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace awc {

using Index = std::uint32_t;

/// Symmetric binary adjacency with an implicit unit diagonal. Off-diagonal
/// ones are kept as sorted neighbor lists in compressed-row form.
class WeightMatrix {
 public:
  WeightMatrix() : offsets_(1, 0) {}
  explicit WeightMatrix(std::size_t n) : offsets_(n + 1, 0) {}

  /// Checked construction from per-point lists: each must be strictly
  /// increasing, free of the diagonal, and the lists must be symmetric.
  static WeightMatrix from_neighbors(const std::vector<std::vector<Index>>& rows) {
    const WeightMatrix w = adopt(rows);
    const std::size_t n = w.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = w.neighbors(i);
      for (std::size_t k = 0; k < r.size(); ++k) {
        if (r[k] == i || r[k] >= n) throw std::invalid_argument("WeightMatrix: bad neighbor index");
        if (k > 0 && r[k - 1] >= r[k])
          throw std::invalid_argument("WeightMatrix: neighbor list not strictly increasing");
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (Index j : w.neighbors(i))
        if (!w.connected(j, i)) throw std::invalid_argument("WeightMatrix: asymmetric neighbor lists");
    return w;
  }

  /// Unchecked flattening, for lists that are consistent by construction.
  static WeightMatrix adopt(const std::vector<std::vector<Index>>& rows) {
    WeightMatrix w(rows.size());
    std::size_t total = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      total += rows[i].size();
      w.offsets_[i + 1] = total;
    }
    w.cols_.reserve(total);
    for (const auto& r : rows) w.cols_.insert(w.cols_.end(), r.begin(), r.end());
    return w;
  }

  /// Unchecked adoption of compressed rows (offsets has n + 1 entries).
  static WeightMatrix adopt_csr(std::vector<std::size_t> offsets, std::vector<Index> cols) {
    WeightMatrix w;
    w.offsets_ = std::move(offsets);
    w.cols_ = std::move(cols);
    return w;
  }

  std::size_t size() const { return offsets_.size() - 1; }

  std::span<const Index> neighbors(std::size_t i) const {
    return {cols_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  bool connected(std::size_t i, std::size_t j) const {
    if (i == j) return true;
    const auto r = neighbors(i);
    return std::binary_search(r.begin(), r.end(), static_cast<Index>(j));
  }

  /// Undirected edge count, diagonal excluded.
  std::size_t edge_count() const { return cols_.size() / 2; }

  /// Edges (i, j) with i < j in lexicographic order.
  std::vector<std::pair<Index, Index>> edges() const {
    std::vector<std::pair<Index, Index>> out;
    out.reserve(edge_count());
    for (std::size_t i = 0; i < size(); ++i)
      for (Index j : neighbors(i))
        if (j > i) out.emplace_back(static_cast<Index>(i), j);
    return out;
  }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Index> cols_;
};

}  // namespace awc
