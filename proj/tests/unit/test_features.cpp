#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <random>
#include <set>

#include "proofminer/error.hpp"
#include "proofminer/features.hpp"
#include "proofminer/recurrent.hpp"

using namespace proofminer;

namespace {

// Positive values for every label; distinct enough to tell cells apart.
Valuation counting_valuation() {
  auto fn = [](const Term& t) -> std::optional<double> {
    if (const auto* s = t.as<Sort>()) return sort_value(s->ordinal);
    return 1.0 + static_cast<double>(to_string(t).size());
  };
  return {fn, fn};
}

FeatureMatrix running_matrix() {
  const auto lib = testing::load_fixture("running_example.json");
  return recurrent_cluster(lib, 3, 0).matrices[5];
}

using Mask = std::vector<std::pair<std::size_t, std::size_t>>;

Mask nonzero_mask(const FeatureMatrix& m) {
  Mask out;
  for (std::size_t i = 0; i < m.depth(); ++i)
    for (std::size_t j = 0; j < m.width(); ++j)
      if (!m.at(i, j).absent()) out.emplace_back(i, j);
  return out;
}

}  // namespace

TEST_SUITE("features") {

TEST_CASE("gallina values") {
  CHECK(gallina_value(GallinaToken::kForall) == -1);
  CHECK(gallina_value(GallinaToken::kFun) == -2);
  CHECK(gallina_value(GallinaToken::kArrow) == -3);
  CHECK(gallina_value(GallinaToken::kLet) == -4);
  CHECK(gallina_value(GallinaToken::kFix) == -5);
  CHECK(gallina_value(GallinaToken::kMatch) == -6);
  CHECK(gallina_value(GallinaToken::kAt) == -7);
  std::set<double> seen;
  for (auto tok : kAllGallinaTokens) {
    CHECK(gallina_value(tok) < 0);
    seen.insert(gallina_value(tok));
  }
  CHECK(seen.size() == std::size(kAllGallinaTokens));
}

TEST_CASE("matrix skeleton of the running lemma") {
  const auto tree = build_term_tree(*testing::running_lemma());
  const auto m = build_feature_matrix(tree, counting_valuation());
  REQUIRE(m.depth() == 4);
  REQUIRE(m.width() == 3);
  CHECK(nonzero_mask(m) == Mask{{0, 0}, {1, 0}, {1, 1}, {1, 2}, {2, 0}, {3, 0}, {3, 1}});
  CHECK(m.nonzero_cells() == 7);

  CHECK(m.at(0, 0) == Cell{-1, -1, -1});
  for (std::size_t j = 0; j < 3; ++j) CHECK(m.at(1, j).parent == 0);
  CHECK(m.at(2, 0).parent == 2);
  CHECK(m.at(3, 0).parent == 0);
  CHECK(m.at(3, 1).parent == 0);

  // The two occurrences of n share both components.
  CHECK(m.at(1, 0).term == m.at(3, 0).term);
  CHECK(m.at(1, 0).type == m.at(3, 0).type);
}

TEST_CASE("matrix skeleton under the recurrent valuation") {
  const auto m = running_matrix();
  CHECK(nonzero_mask(m) == Mask{{0, 0}, {1, 0}, {1, 1}, {1, 2}, {2, 0}, {3, 0}, {3, 1}});
  CHECK(m.at(0, 0) == Cell{-1, -1, -1});
  CHECK(m.at(2, 0).parent == 2);
  // n is the first variable, H the second.
  CHECK(m.at(1, 0).term == 1);
  CHECK(m.at(1, 1).term == 2);
  CHECK(m.at(3, 0).term == 1);
}

TEST_CASE("single sort node") {
  const auto tree = build_term_tree(*make_sort(Sort::kProp));
  const auto m = build_feature_matrix(tree, counting_valuation());
  REQUIRE(m.depth() == 1);
  REQUIRE(m.width() == 1);
  CHECK(m.at(0, 0).term == doctest::Approx(100.15).epsilon(1e-12));
  CHECK(m.at(0, 0).type == doctest::Approx(100.175).epsilon(1e-12));
  CHECK(m.at(0, 0).parent == -1);
}

TEST_CASE("plus_assoc and app_assoc share a mask") {
  const auto lib = testing::load_fixture("assoc.json");
  const auto result = recurrent_cluster(lib, 3, 0);
  const auto& a = result.matrices[*lib.index_of("plus_assoc")];
  const auto& b = result.matrices[*lib.index_of("app_assoc")];
  CHECK(a.depth() == b.depth());
  CHECK(a.width() == b.width());
  CHECK(nonzero_mask(a) == nonzero_mask(b));
  // Parent columns agree too: the trees have the same shape.
  for (std::size_t i = 0; i < a.cells().size(); ++i) CHECK(a.cells()[i].parent == b.cells()[i].parent);
}

TEST_CASE("missing values raise ValuationMiss") {
  const auto tree = build_term_tree(*testing::running_lemma());
  Valuation none{[](const Term&) { return std::optional<double>{}; },
                 [](const Term&) { return std::optional<double>{}; }};
  CHECK_THROWS_AS(build_feature_matrix(tree, none), ValuationMiss);
  Valuation negative{[](const Term&) { return std::optional<double>{-3.0}; },
                     [](const Term&) { return std::optional<double>{1.0}; }};
  CHECK_THROWS_AS(build_feature_matrix(tree, negative), ValuationMiss);
}

TEST_CASE("pad and flatten lengths") {
  FeatureMatrix big(4, 3), small(2, 2);
  big.at(0, 0) = {-1, -1, -1};
  small.at(1, 1) = {5, 6, 0};
  const std::vector<FeatureMatrix> both{big, small};
  const auto v = pad_and_flatten(both);
  REQUIRE(v.size() == 2);
  CHECK(v[0].size() == 36);
  CHECK(v[1].size() == 36);
  // small(1,1) lands in row 1, column 1 of the 4x3 grid.
  CHECK(v[1][(1 * 3 + 1) * 3 + 0] == 5);
  CHECK(v[1][(1 * 3 + 1) * 3 + 1] == 6);
  CHECK(max_dims(both) == TreeDims{4, 3});

  const std::vector<FeatureMatrix> one{FeatureMatrix(1, 1)};
  CHECK(pad_and_flatten(one).front().size() == 3);

  const std::vector<FeatureMatrix> running{running_matrix()};
  CHECK(pad_and_flatten(running).front().size() == 36);
  CHECK(column_labels(4, 3).size() == 36);
  CHECK(column_labels(4, 3).front() == "d0_j0_term");
  CHECK(column_labels(4, 3)[5] == "d0_j1_parent");
}

TEST_CASE("flatten and unflatten round trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng() % 5, w = 1 + rng() % 5;
    FeatureMatrix m(d, w);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < w; ++j)
        if (rng() % 2) m.at(i, j) = {u(rng), u(rng), u(rng)};
    CHECK(unflatten(flatten(m), d, w) == m);
    const auto padded = fit(m, d + 2, w + 1);
    CHECK(unflatten(flatten(padded), d + 2, w + 1) == padded);
    CHECK(fit(padded, d, w) == m);
  }
  CHECK_THROWS_AS(unflatten(std::vector<double>(5), 1, 1), DimensionMismatch);
}

TEST_CASE("node-kind separability and mask stability on every fixture") {
  for (const char* f : testing::kAllFixtures) {
    CAPTURE(f);
    const auto lib = testing::load_fixture(f);
    const auto result = recurrent_cluster(lib, 3, 0);
    for (std::size_t o = 0; o < lib.size(); ++o) {
      const auto tree = build_term_tree(*lib[o].mined_term());
      const auto m = fit(result.matrices[o], result.dims.depth, result.dims.width);
      for (std::size_t i = 0; i < m.depth(); ++i) {
        for (std::size_t j = 0; j < m.width(); ++j) {
          const Cell& c = m.at(i, j);
          const TreeNode* n = tree.node_at(i, j);
          CHECK(c.absent() == (n == nullptr));
          const bool gallina = n && n->gallina();
          CHECK((c.term < 0) == gallina);
          CHECK((c.type < 0) == gallina);
          if (n && !gallina) {
            CHECK(c.term > 0);
            CHECK(c.type > 0);
          }
          if (n) CHECK(c.parent == tree.parent_level_index(*n));
        }
      }
    }
  }
}

TEST_CASE("density") {
  const std::vector<FeatureMatrix> one{running_matrix()};
  CHECK(density(one) == doctest::Approx(7.0 / 12.0));
  const auto lib = testing::load_fixture("running_example.json");
  const auto r = recurrent_cluster(lib, 3, 0);
  // Six statements padded to 4x3: nat and 1 are single nodes, the arrows
  // of + (5), even (3) and odd (3), then the lemma (7): 20 of 72 cells.
  CHECK(density(r.matrices) == doctest::Approx(20.0 / 72.0));
  CHECK(density(std::vector<FeatureMatrix>{}) == 0);
}

TEST_CASE("standardize") {
  const std::vector<FeatureVector> v{{1, 5, 2}, {3, 5, 4}, {5, 5, 9}};
  const auto z = standardize(v);
  REQUIRE(z.size() == 3);
  for (std::size_t d = 0; d < 3; ++d) {
    double mean = 0;
    for (const auto& row : z) mean += row[d];
    CHECK(mean / 3 == doctest::Approx(0).epsilon(1e-12));
  }
  for (const auto& row : z) CHECK(row[1] == 0);
  CHECK(z[0][0] < z[1][0]);
  CHECK(z[1][0] < z[2][0]);
}

}  // TEST_SUITE
