#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proofminer/term_tree.hpp"

namespace proofminer {

// (term value, type value, parent level index). Absent nodes are (0, 0, 0).
struct Cell {
  double term = 0;
  double type = 0;
  double parent = 0;

  bool absent() const { return term == 0 && type == 0 && parent == 0; }
  bool operator==(const Cell&) const = default;
};

class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t depth, std::size_t width)
      : depth_(depth), width_(width), cells_(depth * width) {}

  std::size_t depth() const { return depth_; }
  std::size_t width() const { return width_; }
  const Cell& at(std::size_t i, std::size_t j) const { return cells_[i * width_ + j]; }
  Cell& at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }
  const std::vector<Cell>& cells() const { return cells_; }

  std::size_t nonzero_cells() const;

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::size_t depth_ = 0;
  std::size_t width_ = 0;
  std::vector<Cell> cells_;
};

using FeatureVector = std::vector<double>;

// Values for the term and type components of term:type nodes. Both must be
// positive; returning nullopt means "no value for this term".
struct Valuation {
  std::function<std::optional<double>(const Term&)> term_fn;
  std::function<std::optional<double>(const Term&)> type_fn;
};

// Fixed negative values; binder-like tokens sit next to each other.
double gallina_value(GallinaToken tok);

// Throws ValuationMiss when the valuation has no value for a node label.
FeatureMatrix build_feature_matrix(const TermTree& tree, const Valuation& val);

// Pads with absent cells, or truncates, to the requested dimensions.
FeatureMatrix fit(const FeatureMatrix& m, std::size_t depth, std::size_t width);

// Row-major, components in (term, type, parent) order.
FeatureVector flatten(const FeatureMatrix& m);
FeatureMatrix unflatten(std::span<const double> v, std::size_t depth, std::size_t width);

// Pads every matrix to the largest depth and width among them, then
// flattens. All returned vectors have length max_depth * 3 * max_width.
std::vector<FeatureVector> pad_and_flatten(std::span<const FeatureMatrix> matrices);

TreeDims max_dims(std::span<const FeatureMatrix> matrices);

// Fraction of cells (triples) that are not (0, 0, 0), averaged over the
// matrices after padding to their common dimensions.
double density(std::span<const FeatureMatrix> matrices);

// Per-dimension z-scores. Constant dimensions map to 0. Off by default in
// the pipeline.
std::vector<FeatureVector> standardize(std::span<const FeatureVector> vectors);

// "d0_j0_term", "d0_j0_type", "d0_j0_parent", ...
std::vector<std::string> column_labels(std::size_t depth, std::size_t width);

}  // namespace proofminer
