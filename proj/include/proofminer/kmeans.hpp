#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "proofminer/features.hpp"

namespace proofminer {

struct ClusterModel {
  std::size_t k = 0;
  std::size_t dims = 0;
  std::vector<FeatureVector> centroids;
  std::vector<std::size_t> assignment;  // per input vector, 0-based cluster id
  std::vector<double> proximities;      // per input vector, in [0, 1]
  std::vector<double> radii;            // per cluster: max member distance to centroid
  std::vector<double> objective_trace;  // within-cluster sum of squares per Lloyd step
  std::size_t iterations = 0;

  bool empty() const { return k == 0; }
  std::vector<std::size_t> members(std::size_t cluster) const;
};

inline constexpr std::size_t kMaxLloydIterations = 300;
inline constexpr std::size_t kDefaultRestarts = 5;

// max(1, floor(n / (10 - g))), and never more than n. Throws
// GranularityRange unless 1 <= g <= 5.
std::size_t choose_k(std::size_t n_objects, int granularity);

double euclidean(std::span<const double> a, std::span<const double> b);

// Lloyd's algorithm with k-means++ seeding. The vectors are processed in
// lexicographic content order, so the result does not depend on input order
// (beyond the obvious permutation of `assignment`). Cluster ids are numbered
// by their smallest member in that order.
//
// Runs `restarts` independently seeded passes and keeps the one with the
// lowest final objective (the earliest on ties); objective_trace and
// iterations describe that pass.
ClusterModel kmeans(std::span<const FeatureVector> vectors, std::size_t k, std::uint64_t seed,
                    std::size_t restarts = kDefaultRestarts);

// 1 - d(v, c) / (1 + radius), clamped to [0, 1].
double proximity(std::span<const double> v, const ClusterModel& model, std::size_t cluster);

// Nearest centroid; ties go to the lower id.
std::size_t nearest_centroid(std::span<const double> v, const ClusterModel& model);

}  // namespace proofminer
