#include <doctest.h>

#include "ogl/model.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace ogl;

namespace {

std::vector<std::vector<int>> index_lists(const GroupSet& set) {
  std::vector<std::vector<int>> out;
  for (const Group& g : set.groups()) out.push_back(g.indices);
  return out;
}

}  // namespace

TEST_CASE("design matrix validates input and caches column norms") {
  Matrix id = Matrix::Identity(2, 2);
  DesignMatrix x(id);
  CHECK(x.n_samples() == 2);
  CHECK(x.col_norm(0) == doctest::Approx(1.0));
  CHECK(x.col_norm(1) == doctest::Approx(1.0));

  Matrix bad = id;
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(DesignMatrix{bad}, InputError);
  CHECK_THROWS_AS(DesignMatrix{Matrix(0, 2)}, InputError);
}

TEST_CASE("make_group sorts, validates, and weights by size") {
  CHECK_THROWS_AS(make_group({1, 0, 0}), InputError);
  CHECK_THROWS_AS(make_group({}), InputError);
  CHECK_THROWS_AS(make_group({-1, 2}), InputError);

  Group g = make_group({4, 1, 2});
  CHECK(g.indices == std::vector<int>{1, 2, 4});
  CHECK(g.weight == doctest::Approx(std::sqrt(3.0)));
  CHECK(g.min_index() == 1);
}

TEST_CASE("group set canonical order: min index, then larger size, then lex") {
  std::vector<Group> gs = {make_group({3, 4}), make_group({1, 2, 3}),
                           make_group({2, 3}), make_group({0, 1, 2}),
                           make_group({0, 2}), make_group({0, 1}),
                           make_group({2, 3})};
  GroupSet set = GroupSet::build(gs);
  CHECK(index_lists(set) == std::vector<std::vector<int>>{{0, 1, 2},
                                                          {0, 1},
                                                          {0, 2},
                                                          {1, 2, 3},
                                                          {2, 3},
                                                          {3, 4}});
}

TEST_CASE("build_problem binds norms and rejects bad groups") {
  Matrix id = Matrix::Identity(2, 2);
  Vector y(2);
  y << 3, 4;
  Problem p = build_problem(DesignMatrix(id), y, {{0}, {1}});
  CHECK(p.x.col_norms().isApprox(Vector::Ones(2)));
  CHECK(p.groups[0].frob_norm == doctest::Approx(1.0));
  CHECK(p.groups[1].frob_norm == doctest::Approx(1.0));

  Matrix x3 = Matrix::Identity(3, 3);
  Vector y3 = Vector::Ones(3);
  Problem p3 = build_problem(DesignMatrix(x3), y3, {{0, 1}, {1, 2}});
  CHECK(index_lists(p3.groups) ==
        std::vector<std::vector<int>>{{0, 1}, {1, 2}});
  CHECK(p3.groups[0].weight == doctest::Approx(std::sqrt(2.0)));
  CHECK(p3.groups[1].weight == doctest::Approx(std::sqrt(2.0)));

  CHECK_THROWS_AS(build_problem(DesignMatrix(x3), y3, {{1, 0, 0}}),
                  InputError);
  // feature 2 uncovered
  CHECK_THROWS_AS(build_problem(DesignMatrix(x3), y3, {{0, 1}}), InputError);
  CHECK_THROWS_AS(build_problem(DesignMatrix(x3), y3, {{0, 1, 2, 3}}),
                  InputError);
  CHECK_THROWS_AS(build_problem(DesignMatrix(x3), Vector::Ones(2), {{0, 1, 2}}),
                  InputError);
}

TEST_CASE("sparse_augment adds singletons with the l1 weight") {
  GroupSet base = GroupSet::build({make_group({0, 1})});
  GroupSet aug = sparse_augment(base, 3, 0.5);
  CHECK(index_lists(aug) ==
        std::vector<std::vector<int>>{{0, 1}, {0}, {1}, {2}});
  for (const Group& g : aug.groups()) {
    if (g.size() == 1) CHECK(g.weight == doctest::Approx(0.5));
  }

  // existing singleton is kept once and reweighted
  GroupSet single = GroupSet::build({make_group({0})});
  GroupSet aug1 = sparse_augment(single, 1, 0.7);
  CHECK(aug1.count() == 1);
  CHECK(aug1[0].weight == doctest::Approx(0.7));

  // no groups at all degenerates to the plain lasso
  GroupSet none = GroupSet::build({});
  CHECK(index_lists(sparse_augment(none, 2, 1.0)) ==
        std::vector<std::vector<int>>{{0}, {1}});

  SUBCASE("idempotent") {
    GroupSet twice = sparse_augment(aug, 3, 0.5);
    CHECK(index_lists(twice) == index_lists(aug));
    for (int m = 0; m < twice.count(); ++m) {
      CHECK(twice[m].weight == doctest::Approx(aug[m].weight));
    }
  }
}

TEST_CASE("inclusive_groups finds windowed subsets") {
  GroupSet set = GroupSet::build({make_group({0, 1, 2}), make_group({1, 2, 3}),
                                  make_group({2, 3}), make_group({3, 4})});
  // canonical positions: 0:{0,1,2} 1:{1,2,3} 2:{2,3} 3:{3,4}
  CHECK(inclusive_groups(1, set, kDefaultWindow) == std::vector<int>{2});
  CHECK(inclusive_groups(3, set, kDefaultWindow).empty());
  CHECK(inclusive_groups(1, set, 0).empty());
}

TEST_CASE("inclusive_groups equals brute force at full window") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<int> jdist(8, 20);
    int n_features = jdist(rng);
    auto raw = ogl::testing::random_covering_groups(rng, n_features);
    std::vector<Group> gs;
    for (auto& r : raw) gs.push_back(make_group(r));
    GroupSet set = GroupSet::build(gs);
    for (int m = 0; m < set.count(); ++m) {
      auto full = inclusive_groups(m, set, set.count());
      CHECK(full == ogl::testing::subsets_bruteforce(m, set));
      auto windowed = inclusive_groups(m, set, 2);
      CHECK(std::includes(full.begin(), full.end(), windowed.begin(),
                          windowed.end()));
    }
  }
}

TEST_CASE("objective values") {
  SUBCASE("zero beta leaves only the loss") {
    Matrix x = Matrix::Identity(3, 3);
    Vector y(3);
    y << 1, -2, 2;
    Problem p = build_problem(DesignMatrix(x), y, {{0, 1, 2}});
    CHECK(objective(p, Vector::Zero(3), 0.3) ==
          doctest::Approx(0.5 * y.squaredNorm()));
  }
  SUBCASE("one sample, one feature") {
    Matrix x(1, 1);
    x << 1;
    Vector y(1), beta(1);
    y << 1;
    beta << 1;
    Problem p = build_problem(DesignMatrix(x), y, {{0}});
    CHECK(objective(p, beta, 1.0) == doctest::Approx(1.0));
  }
  SUBCASE("overlapping penalty sums weighted group norms") {
    Vector y(1);
    y << 0;
    Problem p =
        build_problem(DesignMatrix(Matrix::Zero(1, 2)), y, {{0, 1}, {1}});
    Vector beta(2);
    beta << 3, 4;
    CHECK(objective(p, beta, 1.0) ==
          doctest::Approx(std::sqrt(2.0) * 5.0 + 4.0));
  }
}

TEST_CASE("objective is invariant to raw group order") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix x(5, 6);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 6; ++j) x(i, j) = gauss(rng);
  Vector y(5), beta(6);
  for (int i = 0; i < 5; ++i) y[i] = gauss(rng);
  for (int j = 0; j < 6; ++j) beta[j] = gauss(rng);

  std::vector<std::vector<int>> raw = {{0, 1, 2}, {2, 3}, {3, 4, 5}, {1, 2}};
  Problem a = build_problem(DesignMatrix(x), y, raw);
  std::reverse(raw.begin(), raw.end());
  Problem b = build_problem(DesignMatrix(x), y, raw);
  CHECK(objective(a, beta, 0.7) == doctest::Approx(objective(b, beta, 0.7)));
}
