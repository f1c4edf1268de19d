#include "proofminer/features.hpp"

#include <algorithm>
#include <cmath>

#include "proofminer/error.hpp"

namespace proofminer {

std::size_t FeatureMatrix::nonzero_cells() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) { return !c.absent(); }));
}

double gallina_value(GallinaToken tok) {
  switch (tok) {
    case GallinaToken::kForall: return -1;
    case GallinaToken::kFun: return -2;
    case GallinaToken::kArrow: return -3;
    case GallinaToken::kLet: return -4;
    case GallinaToken::kFix: return -5;
    case GallinaToken::kMatch: return -6;
    case GallinaToken::kAt: return -7;
  }
  return 0;
}

namespace {

double component(const std::function<std::optional<double>(const Term&)>& fn, const TermPtr& t,
                 const char* which, const TreeNode& node) {
  if (!t) throw ValuationMiss(std::string("node '") + node.label_string() + "' has no " + which);
  auto v = fn ? fn(*t) : std::nullopt;
  if (!v) throw ValuationMiss(std::string("no ") + which + " value for '" + to_string(t) + "'");
  if (!(*v > 0))
    throw ValuationMiss(std::string(which) + " value for '" + to_string(t) + "' is not positive");
  return *v;
}

}  // namespace

FeatureMatrix build_feature_matrix(const TermTree& tree, const Valuation& val) {
  FeatureMatrix m(tree.depth(), tree.width());
  for (const auto& n : tree.nodes()) {
    Cell& c = m.at(n.depth, n.level_index);
    c.parent = tree.parent_level_index(n);
    if (const auto* tok = std::get_if<GallinaToken>(&n.label)) {
      c.term = gallina_value(*tok);
      c.type = -1;
    } else {
      const auto& tt = std::get<TermTypeLabel>(n.label);
      c.term = component(val.term_fn, tt.term, "term", n);
      c.type = component(val.type_fn, tt.type, "type", n);
    }
  }
  return m;
}

FeatureMatrix fit(const FeatureMatrix& m, std::size_t depth, std::size_t width) {
  FeatureMatrix out(depth, width);
  for (std::size_t i = 0; i < std::min(depth, m.depth()); ++i)
    for (std::size_t j = 0; j < std::min(width, m.width()); ++j) out.at(i, j) = m.at(i, j);
  return out;
}

FeatureVector flatten(const FeatureMatrix& m) {
  FeatureVector v;
  v.reserve(m.cells().size() * 3);
  for (const auto& c : m.cells()) {
    v.push_back(c.term);
    v.push_back(c.type);
    v.push_back(c.parent);
  }
  return v;
}

FeatureMatrix unflatten(std::span<const double> v, std::size_t depth, std::size_t width) {
  if (v.size() != depth * width * 3)
    throw DimensionMismatch("vector of length " + std::to_string(v.size()) + " does not fit " +
                            std::to_string(depth) + "x" + std::to_string(width) + " triples");
  FeatureMatrix m(depth, width);
  for (std::size_t i = 0; i < depth; ++i)
    for (std::size_t j = 0; j < width; ++j) {
      const std::size_t k = (i * width + j) * 3;
      m.at(i, j) = {v[k], v[k + 1], v[k + 2]};
    }
  return m;
}

TreeDims max_dims(std::span<const FeatureMatrix> matrices) {
  TreeDims d{0, 0};
  for (const auto& m : matrices) {
    d.depth = std::max(d.depth, m.depth());
    d.width = std::max(d.width, m.width());
  }
  return d;
}

std::vector<FeatureVector> pad_and_flatten(std::span<const FeatureMatrix> matrices) {
  const TreeDims d = max_dims(matrices);
  std::vector<FeatureVector> out;
  out.reserve(matrices.size());
  for (const auto& m : matrices) out.push_back(flatten(fit(m, d.depth, d.width)));
  return out;
}

double density(std::span<const FeatureMatrix> matrices) {
  const TreeDims d = max_dims(matrices);
  const std::size_t cells = d.depth * d.width;
  if (matrices.empty() || cells == 0) return 0;
  double sum = 0;
  for (const auto& m : matrices) sum += static_cast<double>(m.nonzero_cells()) / static_cast<double>(cells);
  return sum / static_cast<double>(matrices.size());
}

std::vector<FeatureVector> standardize(std::span<const FeatureVector> vectors) {
  std::vector<FeatureVector> out(vectors.begin(), vectors.end());
  if (vectors.empty()) return out;
  const std::size_t dims = vectors.front().size();
  const double n = static_cast<double>(vectors.size());
  for (std::size_t d = 0; d < dims; ++d) {
    double mean = 0;
    for (const auto& v : vectors) mean += v[d];
    mean /= n;
    double var = 0;
    for (const auto& v : vectors) var += (v[d] - mean) * (v[d] - mean);
    const double sd = std::sqrt(var / n);
    for (auto& v : out) v[d] = sd > 0 ? (v[d] - mean) / sd : 0;
  }
  return out;
}

std::vector<std::string> column_labels(std::size_t depth, std::size_t width) {
  std::vector<std::string> out;
  out.reserve(depth * width * 3);
  for (std::size_t i = 0; i < depth; ++i)
    for (std::size_t j = 0; j < width; ++j)
      for (const char* c : {"term", "type", "parent"})
        out.push_back("d" + std::to_string(i) + "_j" + std::to_string(j) + "_" + c);
  return out;
}

}  // namespace proofminer
