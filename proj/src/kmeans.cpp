#include "proofminer/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "proofminer/error.hpp"

namespace proofminer {

std::vector<std::size_t> ClusterModel::members(std::size_t cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i] == cluster) out.push_back(i);
  return out;
}

std::size_t choose_k(std::size_t n_objects, int granularity) {
  if (granularity < 1 || granularity > 5)
    throw GranularityRange("granularity must be in 1..5, got " + std::to_string(granularity));
  if (n_objects == 0) return 0;
  const std::size_t k = n_objects / static_cast<std::size_t>(10 - granularity);
  return std::clamp<std::size_t>(k, 1, n_objects);
}

namespace {

double squared(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Squared distance, abandoned once it exceeds `bound`. The partial sums
// accumulate in the same order as squared(), so a completed result is
// bit-identical to it.
double squared_bounded(std::span<const double> a, std::span<const double> b, double bound) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
    if (s > bound) return s;
  }
  return s;
}

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

class Lloyd {
 public:
  Lloyd(std::vector<FeatureVector> points, std::size_t k)
      : points_(std::move(points)), k_(k), assignment_(points_.size(), 0) {}

  void seed(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = points_.size();
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    auto choose = [&](std::size_t i) {
      chosen[i] = true;
      centroids_.push_back(points_[i]);
      for (std::size_t p = 0; p < n; ++p) d2[p] = std::min(d2[p], squared_bounded(points_[p], points_[i], d2[p]));
    };

    choose(std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n))));
    while (centroids_.size() < k_) {
      const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
      const double r = uniform01(rng) * total;
      std::size_t pick = n;
      if (total > 0) {
        double cum = 0;
        for (std::size_t p = 0; p < n; ++p) {
          if (d2[p] <= 0) continue;
          cum += d2[p];
          pick = p;
          if (cum > r) break;
        }
      }
      if (pick == n)  // every point coincides with a centre
        pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
      choose(pick);
    }
  }

  void run(ClusterModel& model) {
    assign();
    model.objective_trace.push_back(objective());
    for (std::size_t it = 1; it <= kMaxLloydIterations; ++it) {
      update();
      const bool changed = assign();
      model.objective_trace.push_back(objective());
      model.iterations = it;
      if (!changed) break;
    }
    repair_empty();
  }

  double objective() const {
    double s = 0;
    for (std::size_t p = 0; p < points_.size(); ++p) s += squared(points_[p], centroids_[assignment_[p]]);
    return s;
  }

  const std::vector<FeatureVector>& points() const { return points_; }
  std::vector<FeatureVector>& centroids() { return centroids_; }
  std::vector<std::size_t>& assignment() { return assignment_; }

 private:
  // Nearest centroid, lowest id on ties. Starting from the current
  // assignment only tightens the pruning bound; the result is the same.
  std::size_t nearest(std::span<const double> v, std::size_t start) const {
    std::size_t best = start;
    double best_d = squared(v, centroids_[start]);
    for (std::size_t c = 0; c < centroids_.size(); ++c) {
      if (c == start) continue;
      const double d = squared_bounded(v, centroids_[c], best_d);
      if (d < best_d || (d == best_d && c < best)) {
        best = c;
        best_d = d;
      }
    }
    return best;
  }

  bool assign() {
    bool changed = false;
    for (std::size_t p = 0; p < points_.size(); ++p) {
      const std::size_t c = nearest(points_[p], assignment_[p]);
      if (c != assignment_[p]) {
        assignment_[p] = c;
        changed = true;
      }
    }
    return changed;
  }

  void recompute(std::size_t c) {
    FeatureVector mean(points_.front().size(), 0.0);
    std::size_t count = 0;
    for (std::size_t p = 0; p < points_.size(); ++p) {
      if (assignment_[p] != c) continue;
      for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += points_[p][d];
      ++count;
    }
    if (count == 0) return;
    for (auto& x : mean) x /= static_cast<double>(count);
    centroids_[c] = std::move(mean);
  }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s(k_, 0);
    for (auto a : assignment_) ++s[a];
    return s;
  }

  // An empty cluster takes the point farthest from its own centroid, among
  // points whose cluster would stay non-empty.
  void repair_empty() {
    for (;;) {
      auto s = sizes();
      auto empty = std::find(s.begin(), s.end(), 0u);
      if (empty == s.end()) return;
      const std::size_t e = static_cast<std::size_t>(empty - s.begin());
      std::size_t far = points_.size();
      double far_d = -1;
      for (std::size_t p = 0; p < points_.size(); ++p) {
        if (s[assignment_[p]] < 2) continue;
        const double d = squared(points_[p], centroids_[assignment_[p]]);
        if (d > far_d) {
          far = p;
          far_d = d;
        }
      }
      if (far == points_.size()) return;
      const std::size_t donor = assignment_[far];
      assignment_[far] = e;
      centroids_[e] = points_[far];
      recompute(donor);
    }
  }

  // All means in one pass. Each cluster still sums its members in point
  // order, so this matches recompute() exactly.
  void update() {
    const std::size_t dims = points_.front().size();
    std::vector<FeatureVector> sums(k_, FeatureVector(dims, 0.0));
    std::vector<std::size_t> counts(k_, 0);
    for (std::size_t p = 0; p < points_.size(); ++p) {
      auto& sum = sums[assignment_[p]];
      for (std::size_t d = 0; d < dims; ++d) sum[d] += points_[p][d];
      ++counts[assignment_[p]];
    }
    for (std::size_t c = 0; c < k_; ++c) {
      if (counts[c] == 0) continue;
      for (auto& x : sums[c]) x /= static_cast<double>(counts[c]);
      centroids_[c] = std::move(sums[c]);
    }
    repair_empty();
  }

  std::vector<FeatureVector> points_;
  std::size_t k_;
  std::vector<FeatureVector> centroids_;
  std::vector<std::size_t> assignment_;
};

}  // namespace

double euclidean(std::span<const double> a, std::span<const double> b) { return std::sqrt(squared(a, b)); }

ClusterModel kmeans(std::span<const FeatureVector> vectors, std::size_t k, std::uint64_t seed,
                    std::size_t restarts) {
  const std::size_t n = vectors.size();
  if (k > n)
    throw KTooLarge("k = " + std::to_string(k) + " exceeds the " + std::to_string(n) + " vectors");
  ClusterModel model;
  if (n == 0) return model;
  if (k == 0) throw KTooLarge("k must be at least 1 for a non-empty input");
  const std::size_t dims = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != dims)
      throw DimensionMismatch("vectors of length " + std::to_string(dims) + " and " +
                              std::to_string(v.size()));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return vectors[a] < vectors[b]; });
  std::vector<FeatureVector> sorted;
  sorted.reserve(n);
  for (auto i : order) sorted.push_back(vectors[i]);

  if (restarts == 0) restarts = 1;
  std::optional<Lloyd> best;
  double best_objective = 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    ClusterModel trial;
    Lloyd lloyd(sorted, k);
    lloyd.seed(seed + r * 0x9E3779B97F4A7C15ull);
    lloyd.run(trial);
    const double obj = lloyd.objective();
    if (!best || obj < best_objective) {
      best = std::move(lloyd);
      best_objective = obj;
      model.objective_trace = std::move(trial.objective_trace);
      model.iterations = trial.iterations;
    }
  }
  Lloyd& lloyd = *best;

  // Number clusters by their first member in content order.
  std::vector<std::size_t> relabel(k, k);
  std::size_t next = 0;
  for (auto a : lloyd.assignment())
    if (relabel[a] == k) relabel[a] = next++;
  for (auto& r : relabel)
    if (r == k) r = next++;

  model.k = k;
  model.dims = dims;
  model.centroids.resize(k);
  for (std::size_t c = 0; c < k; ++c) model.centroids[relabel[c]] = lloyd.centroids()[c];
  model.assignment.assign(n, 0);
  for (std::size_t s = 0; s < n; ++s) model.assignment[order[s]] = relabel[lloyd.assignment()[s]];

  model.radii.assign(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = model.assignment[i];
    model.radii[c] = std::max(model.radii[c], euclidean(vectors[i], model.centroids[c]));
  }
  model.proximities.resize(n);
  for (std::size_t i = 0; i < n; ++i) model.proximities[i] = proximity(vectors[i], model, model.assignment[i]);
  return model;
}

double proximity(std::span<const double> v, const ClusterModel& model, std::size_t cluster) {
  if (cluster >= model.k) throw Error("cluster id " + std::to_string(cluster) + " out of range");
  if (v.size() != model.dims)
    throw DimensionMismatch("vector of length " + std::to_string(v.size()) + " for a model of " +
                            std::to_string(model.dims) + " dimensions");
  const double d = euclidean(v, model.centroids[cluster]);
  return std::clamp(1.0 - d / (1.0 + model.radii[cluster]), 0.0, 1.0);
}

std::size_t nearest_centroid(std::span<const double> v, const ClusterModel& model) {
  if (model.empty()) throw EmptyModel("no clusters to classify against");
  if (v.size() != model.dims)
    throw DimensionMismatch("vector of length " + std::to_string(v.size()) + " for a model of " +
                            std::to_string(model.dims) + " dimensions");
  std::size_t best = 0;
  double best_d = squared(v, model.centroids[0]);
  for (std::size_t c = 1; c < model.k; ++c) {
    const double d = squared(v, model.centroids[c]);
    if (d < best_d) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

}  // namespace proofminer
