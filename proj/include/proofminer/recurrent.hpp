#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "proofminer/features.hpp"
#include "proofminer/kmeans.hpp"
#include "proofminer/library.hpp"

namespace proofminer {

// Value bands. Variables take 1..kMaxVariableIndex, sorts lie in
// (100, 100.2], recursive references are kRecursiveCallValue, and library
// objects lie in [200 + 2j, 200 + 2j + 1] for cluster j.
inline constexpr double kRecursiveCallValue = 150;
inline constexpr std::size_t kMaxVariableIndex = 90;

// 100 + sum_{j=1..i} 1 / (10 * 2^(j-1)), for the 1-based sort ordinal i.
double sort_value(int ordinal);

// 200 + 2j + p. Throws ProximityRange unless 0 <= p <= 1.
double object_value(std::size_t cluster_id, double proximity);

struct ClusterAssignment {
  std::size_t cluster;
  double proximity;
};

// Nearest centroid and the proximity to it.
ClusterAssignment classify_vector(std::span<const double> v, const ClusterModel& model);

// The clustering of the objects preceding the one being valued. Vector i of
// the model is library object i; the vectors were padded to `dims`.
struct PriorModel {
  ClusterModel model;
  TreeDims dims{0, 0};
};

// Feature values for the term and type components of one library object's
// nodes, given the clustering of every earlier object.
class ValuationContext {
 public:
  ValuationContext(const TypedLibrary& lib, std::size_t object_index, const PriorModel* prior);

  std::size_t object_index() const { return index_; }
  const std::map<std::string, std::size_t>& variable_indices() const { return frames_.front(); }
  const PriorModel* prior() const { return prior_; }

  // Dispatch over sorts, variables, recursive references, earlier objects and
  // compound fragments. Throws UnknownComponent if none applies.
  double value_component(const Term& c);

  // Classifies a compound fragment against the prior model. Throws
  // EmptyModel when there is no prior model.
  ClusterAssignment classify_local(const Term& fragment);

  Valuation valuation();

  TermTree object_tree() const;
  FeatureMatrix object_matrix();

 private:
  double variable_value(const std::string& id);
  double compound_value(const Term& t);
  double head_value(const Term& t);
  FeatureMatrix fragment_matrix(const Term& fragment);

  const TypedLibrary& lib_;
  std::size_t index_;
  const PriorModel* prior_;
  std::vector<std::map<std::string, std::size_t>> frames_;
  std::map<std::string, double> memo_;
  std::set<std::string> in_progress_;
};

// A cluster model keyed by object names, as dumped to and read from JSON.
struct NamedClustering {
  std::vector<std::string> names;
  ClusterModel model;
  TreeDims dims{0, 0};
  int granularity = 3;
  std::uint64_t seed = 0;

  std::optional<std::size_t> index_of(const std::string& name) const;
  // Members of a cluster, by descending proximity then name.
  std::vector<std::string> cluster_members(std::size_t cluster) const;
};

nlohmann::json clustering_to_json(const NamedClustering& c);
NamedClustering clustering_from_json(const nlohmann::json& j);

struct RecurrentResult {
  std::vector<std::string> names;
  std::vector<FeatureMatrix> matrices;  // per object, unpadded
  TreeDims dims{0, 0};
  std::vector<FeatureVector> vectors;   // padded to dims
  ClusterModel model;
  int granularity = 3;
  std::uint64_t seed = 0;

  NamedClustering clustering() const;
};

// Values object n using kmeans over objects 0..n-1 (k = choose_k(n, g)),
// for n = 0..N-1, then clusters all N objects.
RecurrentResult recurrent_cluster(const TypedLibrary& lib, int granularity, std::uint64_t seed);

}  // namespace proofminer
