#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace awc {

/// Label given to points that belong to no cluster (the gap region).
inline constexpr int kGapLabel = 0;

/// n points in R^D stored row-major, with optional ground-truth labels.
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> coords;
  std::vector<int> labels;  // empty when unlabeled

  Dataset() = default;
  Dataset(std::size_t dim, std::vector<double> coords, std::vector<int> labels = {})
      : dim(dim), coords(std::move(coords)), labels(std::move(labels)) {}

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  bool has_labels() const { return !labels.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }
  std::span<double> point(std::size_t i) { return {coords.data() + i * dim, dim}; }

  void validate() const {
    if (dim < 1) throw std::invalid_argument("Dataset: dimension must be >= 1");
    if (coords.size() % dim != 0) throw std::invalid_argument("Dataset: ragged coordinate array");
    if (size() < 2) throw std::invalid_argument("Dataset: need at least 2 points");
    for (double c : coords)
      if (!std::isfinite(c)) throw std::invalid_argument("Dataset: non-finite coordinate");
    if (has_labels() && labels.size() != size())
      throw std::invalid_argument("Dataset: label count does not match point count");
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Euclidean distance, summed in coordinate order so every caller agrees bit for bit.
inline double distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

inline double distance(const Dataset& data, std::size_t i, std::size_t j) {
  return distance(data.point(i), data.point(j));
}

}  // namespace awc
