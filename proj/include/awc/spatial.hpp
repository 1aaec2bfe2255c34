#pragma once

// Exact fixed-radius neighbor search on a uniform hash grid.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "awc/dataset.hpp"
#include "awc/weights.hpp"

namespace awc {

namespace detail {

// The grid only hashes the leading coordinates; distances in that projection
// never exceed the full distance, so candidate sets stay complete.
inline constexpr std::size_t kGridDims = 3;

using CellKey = std::array<std::int64_t, kGridDims>;

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto v : k) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

inline std::int64_t cell_coord(double x, double h) {
  const double c = std::floor(x / h);
  constexpr double lim = 4.0e18;
  return static_cast<std::int64_t>(std::clamp(c, -lim, lim));
}

}  // namespace detail

/// For every point, the sorted indices j != i with ||X_i - X_j|| <= h.
inline std::vector<std::vector<Index>> neighbors_within(const Dataset& data, double h) {
  if (!(h > 0.0)) throw std::domain_error("neighbors_within: radius must be positive");
  const std::size_t n = data.size();
  const std::size_t m = std::min(data.dim, detail::kGridDims);
  // Slightly oversized cells absorb rounding in x / h at cell borders.
  const double cell = h * (1.0 + 1e-9);

  std::unordered_map<detail::CellKey, std::vector<Index>, detail::CellKeyHash> grid;
  grid.reserve(n);
  std::vector<detail::CellKey> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    detail::CellKey key{};
    const auto p = data.point(i);
    for (std::size_t k = 0; k < m; ++k) key[k] = detail::cell_coord(p[k], cell);
    keys[i] = key;
    grid[key].push_back(static_cast<Index>(i));
  }

  std::vector<std::vector<Index>> out(n);
  std::size_t stencil = 1;
  for (std::size_t k = 0; k < m; ++k) stencil *= 3;

  for (std::size_t i = 0; i < n; ++i) {
    auto& row = out[i];
    for (std::size_t code = 0; code < stencil; ++code) {
      detail::CellKey key = keys[i];
      std::size_t c = code;
      for (std::size_t k = 0; k < m; ++k) {
        key[k] += static_cast<std::int64_t>(c % 3) - 1;
        c /= 3;
      }
      const auto it = grid.find(key);
      if (it == grid.end()) continue;
      for (Index j : it->second)
        if (j != i && distance(data, i, j) <= h) row.push_back(j);
    }
    std::sort(row.begin(), row.end());
  }
  return out;
}

}  // namespace awc
