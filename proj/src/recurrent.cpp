#include "proofminer/recurrent.hpp"

#include <algorithm>

#include "proofminer/error.hpp"
#include "proofminer/log.hpp"

namespace proofminer {

double sort_value(int ordinal) {
  if (ordinal < 1) throw Error("sort ordinal must be >= 1, got " + std::to_string(ordinal));
  double sum = 0;
  double term = 0.1;
  for (int j = 1; j <= ordinal; ++j, term /= 2) sum += term;
  return 100 + sum;
}

double object_value(std::size_t cluster_id, double proximity) {
  if (!(proximity >= 0 && proximity <= 1))
    throw ProximityRange("proximity " + std::to_string(proximity) + " is outside [0, 1]");
  return 200 + 2 * static_cast<double>(cluster_id) + proximity;
}

ClusterAssignment classify_vector(std::span<const double> v, const ClusterModel& model) {
  const std::size_t c = nearest_centroid(v, model);
  return {c, proximity(v, model, c)};
}

namespace {

// Variables of a tree in level order: term component first, then the free
// variables of the type component.
void number_variables(const TermTree& tree, std::map<std::string, std::size_t>& frame) {
  auto add = [&](const std::string& id) { frame.emplace(id, frame.size() + 1); };
  for (const auto& n : tree.nodes()) {
    const auto* tt = std::get_if<TermTypeLabel>(&n.label);
    if (!tt) continue;
    if (const auto* v = tt->term->as<Var>()) add(v->id);
    if (tt->type)
      for (const auto& id : free_vars(*tt->type)) add(id);
  }
}

}  // namespace

ValuationContext::ValuationContext(const TypedLibrary& lib, std::size_t object_index, const PriorModel* prior)
    : lib_(lib), index_(object_index), prior_(prior) {
  if (object_index >= lib.size()) throw Error("object index out of range");
  frames_.emplace_back();
  number_variables(object_tree(), frames_.front());
}

TermTree ValuationContext::object_tree() const { return build_term_tree(*lib_[index_].mined_term()); }

double ValuationContext::variable_value(const std::string& id) {
  auto& frame = frames_.back();
  auto it = frame.find(id);
  if (it == frame.end()) it = frame.emplace(id, frame.size() + 1).first;
  if (it->second > kMaxVariableIndex) {
    log::warn("object '" + lib_[index_].name + "': variable '" + id + "' has index " +
              std::to_string(it->second) + ", capped at " + std::to_string(kMaxVariableIndex));
    return static_cast<double>(kMaxVariableIndex);
  }
  return static_cast<double>(it->second);
}

double ValuationContext::value_component(const Term& c) {
  if (const auto* s = c.as<Sort>()) return sort_value(s->ordinal);
  if (const auto* v = c.as<Var>()) return variable_value(v->id);
  if (const auto* n = c.as<Name>()) {
    if (n->recursive || n->id == lib_[index_].name) return kRecursiveCallValue;
    auto m = lib_.index_of(n->id);
    if (!m) throw UnknownComponent("'" + n->id + "' is not a library object");
    if (!prior_ || *m >= prior_->model.assignment.size())
      throw UnknownComponent("'" + n->id + "' is not clustered before object '" + lib_[index_].name + "'");
    return object_value(prior_->model.assignment[*m], prior_->model.proximities[*m]);
  }
  return compound_value(c);
}

double ValuationContext::head_value(const Term& t) {
  if (t.atomic()) return value_component(t);
  if (const auto* a = t.as<App>()) return head_value(*a->head);
  if (const auto* a = t.as<Arrow>()) return head_value(*a->to);
  if (const auto* f = t.as<Forall>()) return head_value(*f->body);
  if (const auto* f = t.as<Fun>()) return head_value(*f->body);
  if (const auto* l = t.as<Let>()) return head_value(*l->body);
  if (const auto* f = t.as<Fix>()) return head_value(*f->body);
  const auto& m = *t.as<Match>();
  return head_value(m.branches.empty() ? *m.scrutinees.front() : *m.branches.front().rhs);
}

double ValuationContext::compound_value(const Term& t) {
  if (!prior_ || prior_->model.empty()) return head_value(t);

  std::string key = annotated_key(t);
  for (const auto& id : free_vars(t)) {
    auto it = frames_.back().find(id);
    key += " #" + id + "=" + (it == frames_.back().end() ? std::string("?") : std::to_string(it->second));
  }
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  // A statement that mentions its own object can lead back here.
  if (in_progress_.contains(key)) return head_value(t);

  in_progress_.insert(key);
  ClusterAssignment a;
  try {
    a = classify_local(t);
  } catch (...) {
    in_progress_.erase(key);
    throw;
  }
  in_progress_.erase(key);
  const double v = object_value(a.cluster, a.proximity);
  memo_.emplace(std::move(key), v);
  return v;
}

FeatureMatrix ValuationContext::fragment_matrix(const Term& fragment) {
  const TermTree tree = build_term_tree(fragment);
  std::map<std::string, std::size_t> frame;
  if (!free_vars(fragment).empty()) frame = frames_.back();
  number_variables(tree, frame);

  struct FramePop {
    std::vector<std::map<std::string, std::size_t>>& frames;
    ~FramePop() { frames.pop_back(); }
  };
  frames_.push_back(std::move(frame));
  FramePop pop{frames_};
  return build_feature_matrix(tree, valuation());
}

ClusterAssignment ValuationContext::classify_local(const Term& fragment) {
  if (!prior_ || prior_->model.empty()) throw EmptyModel("no earlier objects to classify against");
  const FeatureMatrix m = fragment_matrix(fragment);
  const FeatureVector v = flatten(fit(m, prior_->dims.depth, prior_->dims.width));
  return classify_vector(v, prior_->model);
}

Valuation ValuationContext::valuation() {
  auto fn = [this](const Term& t) -> std::optional<double> { return value_component(t); };
  return {fn, fn};
}

FeatureMatrix ValuationContext::object_matrix() {
  return build_feature_matrix(object_tree(), valuation());
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> NamedClustering::index_of(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names.begin());
}

std::vector<std::string> NamedClustering::cluster_members(std::size_t cluster) const {
  std::vector<std::size_t> idx = model.members(cluster);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (model.proximities[a] != model.proximities[b]) return model.proximities[a] > model.proximities[b];
    return names[a] < names[b];
  });
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(names[i]);
  return out;
}

nlohmann::json clustering_to_json(const NamedClustering& c) {
  using nlohmann::json;
  json objects = json::array();
  for (std::size_t i = 0; i < c.names.size(); ++i)
    objects.push_back({{"name", c.names[i]},
                       {"cluster", c.model.assignment[i]},
                       {"proximity", c.model.proximities[i]}});
  json clusters = json::array();
  for (std::size_t j = 0; j < c.model.k; ++j) {
    json members = json::array();
    for (const auto& name : c.cluster_members(j))
      members.push_back({{"name", name}, {"proximity", c.model.proximities[*c.index_of(name)]}});
    clusters.push_back({{"id", j},
                        {"members", members},
                        {"radius", c.model.radii[j]},
                        {"centroid", c.model.centroids[j]}});
  }
  return {{"granularity", c.granularity},
          {"seed", c.seed},
          {"k", c.model.k},
          {"depth", c.dims.depth},
          {"width", c.dims.width},
          {"dims", c.model.dims},
          {"objects", objects},
          {"clusters", clusters}};
}

NamedClustering clustering_from_json(const nlohmann::json& j) {
  NamedClustering c;
  try {
    c.granularity = j.at("granularity").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.dims = {j.at("depth").get<std::size_t>(), j.at("width").get<std::size_t>()};
    c.model.k = j.at("k").get<std::size_t>();
    c.model.dims = j.at("dims").get<std::size_t>();
    for (const auto& o : j.at("objects")) {
      c.names.push_back(o.at("name").get<std::string>());
      c.model.assignment.push_back(o.at("cluster").get<std::size_t>());
      c.model.proximities.push_back(o.at("proximity").get<double>());
    }
    c.model.centroids.resize(c.model.k);
    c.model.radii.resize(c.model.k);
    for (const auto& cl : j.at("clusters")) {
      const auto id = cl.at("id").get<std::size_t>();
      if (id >= c.model.k) throw ParseError("cluster id " + std::to_string(id) + " out of range");
      c.model.centroids[id] = cl.at("centroid").get<FeatureVector>();
      c.model.radii[id] = cl.at("radius").get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed cluster model: ") + e.what());
  }
  for (auto a : c.model.assignment)
    if (a >= c.model.k) throw ParseError("object assigned to cluster " + std::to_string(a) + " of " +
                                         std::to_string(c.model.k));
  return c;
}

NamedClustering RecurrentResult::clustering() const { return {names, model, dims, granularity, seed}; }

RecurrentResult recurrent_cluster(const TypedLibrary& lib, int granularity, std::uint64_t seed) {
  choose_k(0, granularity);  // validates g

  RecurrentResult out;
  out.granularity = granularity;
  out.seed = seed;
  for (const auto& o : lib.objects()) out.names.push_back(o.name);

  for (std::size_t n = 0; n < lib.size(); ++n) {
    PriorModel prior;
    if (n > 0) {
      std::span<const FeatureMatrix> earlier(out.matrices.data(), n);
      prior.dims = max_dims(earlier);
      const auto vectors = pad_and_flatten(earlier);
      prior.model = kmeans(vectors, choose_k(n, granularity), seed);
    }
    ValuationContext ctx(lib, n, n > 0 ? &prior : nullptr);
    out.matrices.push_back(ctx.object_matrix());
    log::debug("valued object " + std::to_string(n + 1) + "/" + std::to_string(lib.size()) + " '" +
               lib[n].name + "'");
  }

  out.dims = max_dims(out.matrices);
  out.vectors = pad_and_flatten(out.matrices);
  out.model = kmeans(out.vectors, choose_k(lib.size(), granularity), seed);
  return out;
}

}  // namespace proofminer
