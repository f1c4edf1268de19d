#include "doctest.h"
#include "support.hpp"

#include <cmath>

#include "proofminer/error.hpp"
#include "proofminer/recurrent.hpp"

using namespace proofminer;
using nlohmann::json;

namespace {

// Independent of sort_value: the sum written out term by term.
double sort_sum(int i) {
  double s = 100;
  for (int j = 1; j <= i; ++j) s += 1.0 / (10.0 * std::pow(2.0, j - 1));
  return s;
}

TypedLibrary prefix(const TypedLibrary& lib, std::size_t n) {
  std::vector<LibraryObject> objects(lib.source().objects().begin(),
                                     lib.source().objects().begin() + static_cast<std::ptrdiff_t>(n));
  return resolve_types(Library(std::move(objects)));
}

// `k` is the size of the prior model the value was drawn from.
bool in_band(double v, std::size_t k) {
  const bool variable = v >= 1 && v <= static_cast<double>(kMaxVariableIndex) && v == std::floor(v);
  const bool sort = v > 100 && v <= 100.2;
  const bool recursive = v == kRecursiveCallValue;
  const bool object = k > 0 && v >= 200 && v <= 200 + 2 * static_cast<double>(k - 1) + 1;
  return (variable + sort + recursive + object) == 1;
}

}  // namespace

TEST_SUITE("recurrent") {

TEST_CASE("sort values") {
  CHECK(std::abs(sort_value(1) - 100.1) < 1e-9);
  CHECK(std::abs(sort_value(2) - 100.15) < 1e-9);
  CHECK(std::abs(sort_value(3) - 100.175) < 1e-9);
  for (int i = 1; i <= 60; ++i) {
    CAPTURE(i);
    CHECK(std::abs(sort_value(i) - sort_sum(i)) < 1e-9);
    CHECK(sort_value(i) > 100);
    CHECK(sort_value(i) <= 100.2);  // the series reaches 100.2 in doubles
    if (i > 1) CHECK(sort_value(i) >= sort_value(i - 1));
  }
  // Strict while the increments are representable near 100.
  for (int i = 2; i <= 40; ++i) CHECK(sort_value(i) > sort_value(i - 1));
  CHECK_THROWS_AS(sort_value(0), Error);
}

TEST_CASE("object values") {
  CHECK(object_value(1, 0.5) == 202.5);
  CHECK(object_value(2, 0.7) == 204.7);
  CHECK(object_value(0, 0) == 200);
  CHECK(object_value(4, 0.9) == doctest::Approx(208.9));
  CHECK(object_value(3, 1) == 207);
  CHECK_THROWS_AS(object_value(0, -0.01), ProximityRange);
  CHECK_THROWS_AS(object_value(0, 1.01), ProximityRange);
  CHECK_THROWS_AS(object_value(0, std::nan("")), ProximityRange);
}

TEST_CASE("value_component dispatch") {
  const auto lib = testing::load_fixture("running_example.json");

  SUBCASE("variables count from 1 in order of appearance") {
    const auto r = recurrent_cluster(lib, 3, 0);
    PriorModel prior;
    std::vector<FeatureMatrix> earlier(r.matrices.begin(), r.matrices.begin() + 5);
    prior.dims = max_dims(earlier);
    prior.model = kmeans(pad_and_flatten(earlier), choose_k(5, 3), 0);
    ValuationContext ctx(lib, 5, &prior);
    CHECK(ctx.variable_indices().at("n") == 1);
    CHECK(ctx.variable_indices().at("H") == 2);
    CHECK(ctx.value_component(*make_var("n")) == 1);
    CHECK(ctx.value_component(*make_var("H")) == 2);
    CHECK(ctx.value_component(*make_sort(Sort::kProp)) == sort_value(2));
  }

  SUBCASE("earlier objects take their cluster band") {
    PriorModel prior;
    prior.model.k = 5;
    prior.model.dims = 3;
    prior.model.assignment = {4};
    prior.model.proximities = {0.9};
    prior.model.centroids.assign(5, FeatureVector(3, 0));
    prior.model.radii.assign(5, 0);
    prior.dims = {1, 1};
    ValuationContext ctx(lib, 1, &prior);
    CHECK(ctx.value_component(*make_name("nat")) == doctest::Approx(208.9));
    // Not clustered yet.
    CHECK_THROWS_AS(ctx.value_component(*make_name("even")), UnknownComponent);
  }

  SUBCASE("no prior model: only base cases") {
    ValuationContext ctx(lib, 0, nullptr);
    CHECK(ctx.value_component(*make_sort(Sort::kSet)) == sort_value(1));
    CHECK_THROWS_AS(ctx.value_component(*make_name("even")), UnknownComponent);
    CHECK_THROWS_AS(ctx.classify_local(*make_sort(Sort::kSet)), EmptyModel);
  }
}

TEST_CASE("recursive occurrences take the constant") {
  const auto lib = testing::load_fixture("clusters.json");
  const auto r = recurrent_cluster(lib, 5, 0);
  const auto i = *lib.index_of("eqn");
  const auto tree = build_term_tree(*lib[i].mined_term());
  const auto& m = r.matrices[i];
  int hits = 0;
  for (const auto& n : tree.nodes()) {
    const auto* tt = std::get_if<TermTypeLabel>(&n.label);
    if (!tt) continue;
    const auto* name = tt->term->as<Name>();
    if (name && name->id == "eqn") {
      CHECK(m.at(n.depth, n.level_index).term == kRecursiveCallValue);
      ++hits;
    }
  }
  CHECK(hits >= 2);  // the fix name and the recursive call
}

TEST_CASE("classify_local against the final model") {
  const auto lib = testing::load_fixture("clusters.json");
  const auto r = recurrent_cluster(lib, 5, 0);
  PriorModel prior{r.model, r.dims};
  ValuationContext ctx(lib, lib.size() - 1, &prior);

  // nat's statement is the bare sort Set; a Set fragment has the same vector.
  const auto nat = *lib.index_of("nat");
  const auto a = ctx.classify_local(*make_sort(Sort::kSet));
  CHECK(a.cluster == r.model.assignment[nat]);
  CHECK(a.proximity == r.model.proximities[nat]);

  // Brute force over centroids.
  const auto v = r.vectors[nat];
  std::size_t best = 0;
  for (std::size_t c = 1; c < r.model.k; ++c)
    if (euclidean(v, r.model.centroids[c]) < euclidean(v, r.model.centroids[best])) best = c;
  CHECK(a.cluster == best);

  PriorModel single{kmeans(r.vectors, 1, 0), r.dims};
  ValuationContext one(lib, lib.size() - 1, &single);
  CHECK(one.classify_local(*make_sort(Sort::kProp)).cluster == 0);
  CHECK(one.classify_local(*lib[*lib.index_of("sumn")].mined_term()).cluster == 0);
}

TEST_CASE("values stay in disjoint bands") {
  for (const char* f : testing::kAllFixtures) {
    for (int g : {1, 3, 5}) {
      CAPTURE(f);
      CAPTURE(g);
      const auto lib = testing::load_fixture(f);
      const auto r = recurrent_cluster(lib, g, 0);
      for (std::size_t n = 0; n < lib.size(); ++n) {
        const std::size_t k = choose_k(n, g);
        const auto tree = build_term_tree(*lib[n].mined_term());
        for (const auto& node : tree.nodes()) {
          const Cell& c = r.matrices[n].at(node.depth, node.level_index);
          if (node.gallina()) {
            CHECK(c.term <= -1);
            CHECK(c.term >= -7);
            CHECK(c.type == -1);
            continue;
          }
          CHECK(in_band(c.term, k));
          CHECK(in_band(c.type, k));
        }
      }
    }
  }
}

TEST_CASE("variable indices are capped") {
  json binders = json::array();
  json args = json::array();
  for (int i = 0; i < 95; ++i) {
    const std::string v = "x" + std::to_string(i);
    binders.push_back({{"name", v}, {"type", json{{"tag", "name"}, {"name", "nat"}}}});
    args.push_back({{"tag", "var"}, {"name", v}});
  }
  const json nat = {{"tag", "name"}, {"name", "nat"}};
  const json body = {{"tag", "app"}, {"head", {{"tag", "name"}, {"name", "P"}}}, {"args", json::array({args[94]})}};
  json objects = json::array();
  objects.push_back({{"name", "nat"}, {"kind", "definition"}, {"statement", {{"tag", "sort"}, {"sort", "Set"}}}});
  objects.push_back({{"name", "P"},
                     {"kind", "definition"},
                     {"statement", {{"tag", "arrow"}, {"from", nat}, {"to", {{"tag", "sort"}, {"sort", "Prop"}}}}}});
  objects.push_back({{"name", "wide"},
                     {"kind", "lemma"},
                     {"statement", {{"tag", "forall"}, {"binders", binders}, {"body", body}}}});
  const json lib_json = {{"objects", objects}};
  const auto lib = resolve_types(parse_library(lib_json.dump()));
  const auto r = recurrent_cluster(lib, 3, 0);
  const auto& m = r.matrices[2];
  double top = 0;
  for (const auto& c : m.cells())
    if (c.term > 0 && c.term < 100) top = std::max(top, c.term);
  CHECK(top == static_cast<double>(kMaxVariableIndex));
}

TEST_CASE("cluster values: close within, apart across") {
  for (const char* f : testing::kAllFixtures) {
    CAPTURE(f);
    const auto lib = testing::load_fixture(f);
    const auto r = recurrent_cluster(lib, 5, 0);
    const auto& m = r.model;
    for (std::size_t a = 0; a < lib.size(); ++a)
      for (std::size_t b = 0; b < lib.size(); ++b) {
        const double va = object_value(m.assignment[a], m.proximities[a]);
        const double vb = object_value(m.assignment[b], m.proximities[b]);
        if (m.assignment[a] == m.assignment[b])
          CHECK(std::abs(va - vb) <= 1);
        else
          CHECK(std::abs(va - vb) >= 1);
      }
  }
}

TEST_CASE("appending objects never changes earlier matrices") {
  for (const char* f : {"running_example.json", "assoc.json", "clusters.json"}) {
    CAPTURE(f);
    const auto lib = testing::load_fixture(f);
    const auto full = recurrent_cluster(lib, 3, 0);
    for (std::size_t n = 1; n <= lib.size(); ++n) {
      const auto part = recurrent_cluster(prefix(lib, n), 3, 0);
      for (std::size_t i = 0; i < n; ++i) {
        CAPTURE(i);
        CHECK(part.matrices[i] == full.matrices[i]);
        CHECK(flatten(fit(part.matrices[i], full.dims.depth, full.dims.width)) == full.vectors[i]);
      }
    }
  }
}

TEST_CASE("deterministic for fixed inputs") {
  const auto lib = testing::load_fixture("premiss.json");
  const auto a = recurrent_cluster(lib, 5, 3);
  const auto b = recurrent_cluster(lib, 5, 3);
  CHECK(a.vectors == b.vectors);
  CHECK(a.model.assignment == b.model.assignment);
  CHECK(a.model.proximities == b.model.proximities);
  CHECK(clustering_to_json(a.clustering()).dump() == clustering_to_json(b.clustering()).dump());
}

TEST_CASE("one object, one cluster") {
  const auto lib = resolve_types(parse_library(
      R"({"objects": [{"name": "nat", "kind": "definition", "statement": {"tag": "sort", "sort": "Set"}}]})"));
  const auto r = recurrent_cluster(lib, 3, 0);
  CHECK(r.model.k == 1);
  CHECK(r.model.assignment == std::vector<std::size_t>{0});
  CHECK(r.model.proximities == std::vector<double>{1.0});
}

TEST_CASE("empty library") {
  const auto r = recurrent_cluster(TypedLibrary{}, 3, 0);
  CHECK(r.names.empty());
  CHECK(r.model.empty());
  CHECK_THROWS_AS(recurrent_cluster(TypedLibrary{}, 7, 0), GranularityRange);
}

TEST_CASE("model JSON round trip") {
  const auto lib = testing::load_fixture("assoc.json");
  const auto c = recurrent_cluster(lib, 3, 0).clustering();
  const auto back = clustering_from_json(json::parse(clustering_to_json(c).dump()));
  CHECK(back.names == c.names);
  CHECK(back.model.assignment == c.model.assignment);
  CHECK(back.model.proximities == c.model.proximities);
  CHECK(back.model.centroids == c.model.centroids);
  CHECK(back.model.radii == c.model.radii);
  CHECK(back.dims == c.dims);
  CHECK(back.granularity == 3);
  CHECK(clustering_to_json(back) == clustering_to_json(c));

  auto broken = clustering_to_json(c);
  broken["objects"][0]["cluster"] = 99;
  CHECK_THROWS_AS(clustering_from_json(broken), ParseError);
  CHECK_THROWS_AS(clustering_from_json(json::object()), ParseError);
}

TEST_CASE("cluster members by proximity") {
  const auto lib = testing::load_fixture("premiss.json");
  const auto c = recurrent_cluster(lib, 5, 0).clustering();
  for (std::size_t j = 0; j < c.model.k; ++j) {
    const auto members = c.cluster_members(j);
    CHECK(members.size() == c.model.members(j).size());
    for (std::size_t i = 1; i < members.size(); ++i)
      CHECK(c.model.proximities[*c.index_of(members[i - 1])] >= c.model.proximities[*c.index_of(members[i])]);
  }
}

}  // TEST_SUITE
