#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "arbiterlab/percolation.hpp"

using namespace arbiterlab;
using namespace arbiterlab::percolation;

TEST_CASE("a single forced center spans the whole square") {
  auto dec = decomposition_from_centers(2, {{{0.3, -0.1, 0.0}}});
  for (int axis = 0; axis < 2; ++axis)
    for (int side : {-1, +1}) CHECK(dec.touches(0, axis, side));
  Coloring col{1, {1}};
  CHECK(crosses(dec, col, 1, 0));
  CHECK(crosses(dec, col, 1, 1));
}

TEST_CASE("poisson cell counts match the intensity") {
  const int samples = 400;
  double sum = 0;
  for (int i = 0; i < samples; ++i) {
    auto dec = sample_decomposition(2, 200, rng::derive(101, static_cast<std::uint64_t>(i), 0));
    sum += static_cast<double>(dec.cells());
    for (auto [a, b] : dec.adjacency) {
      REQUIRE(a < b);
      REQUIRE(b < dec.cells());
    }
  }
  double mean = sum / samples;
  double sigma = std::sqrt(200.0 / samples);
  CHECK(std::abs(mean - 200.0) < 3 * sigma);
}

TEST_CASE("uniform coloring statistics and determinism") {
  auto dec = sample_decomposition(2, 400, rng::derive(103, 0, 0));
  auto all_one = color_uniform(dec, 1, 5);
  for (int c : all_one.color) CHECK(c == 1);

  auto col = color_uniform(dec, 2, 5);
  auto again = color_uniform(dec, 2, 5);
  CHECK(col.color == again.color);
  double ones = static_cast<double>(std::count(col.color.begin(), col.color.end(), 1));
  double n = static_cast<double>(col.color.size());
  CHECK(std::abs(ones / n - 0.5) < 3 * std::sqrt(0.25 / n));

  Coloring empty{2, std::vector<int>(dec.cells(), 2)};
  CHECK_FALSE(crosses(dec, empty, 1, 0));
}

TEST_CASE("crossing agrees with the relative-homology oracle") {
  int checks = 0;
  for (int i = 0; i < 100; ++i) {
    auto dec = sample_decomposition(2, 60, rng::derive(107, static_cast<std::uint64_t>(i), 0));
    auto col = color_uniform(dec, 2, rng::derive(109, static_cast<std::uint64_t>(i), 0));
    auto cx = complex_from_voronoi2d(dec);
    if (i < 10) {
      REQUIRE((cx.boundary_matrix(1) * cx.boundary_matrix(2)).is_zero());
      REQUIRE(complexes::homology(cx, 0).dimension == 1);
      REQUIRE(complexes::homology(cx, 1).dimension == 0);
      REQUIRE(cx.euler_characteristic() == 1);
    }
    for (int a = 1; a <= 2; ++a)
      for (int axis = 0; axis < 2; ++axis) {
        CHECK(crosses(dec, col, a, axis) == crosses_homologically(dec, col, a, axis, cx));
        ++checks;
      }
  }
  CHECK(checks == 400);
}

TEST_CASE("planar two-coloring crosses exactly once") {
  for (int i = 0; i < 200; ++i) {
    auto dec = sample_decomposition(2, 80, rng::derive(113, static_cast<std::uint64_t>(i), 0));
    auto col = color_uniform(dec, 2, rng::derive(127, static_cast<std::uint64_t>(i), 0));
    bool c1 = crosses(dec, col, 1, 0);
    bool c2 = crosses(dec, col, 2, 1);
    CHECK(c1 != c2);
  }
}

TEST_CASE("enlarging a color class preserves crossing") {
  rng::Rng rng(rng::derive(131, 0, 0));
  for (int i = 0; i < 60; ++i) {
    auto dec = sample_decomposition(2, 80, rng::derive(137, static_cast<std::uint64_t>(i), 0));
    auto col = color_uniform(dec, 2, rng::derive(139, static_cast<std::uint64_t>(i), 0));
    for (int a = 1; a <= 2; ++a) {
      int axis = a - 1;
      if (!crosses(dec, col, a, axis)) continue;
      Coloring grown = col;
      for (int swaps = 0; swaps < 5; ++swaps)
        grown.color[rng.next_below(grown.color.size())] = a;
      CHECK(crosses(dec, grown, a, axis));
    }
  }
}

TEST_CASE("crossing indicators are equivariant under color relabeling") {
  for (int i = 0; i < 40; ++i) {
    auto dec = sample_decomposition(2, 60, rng::derive(149, static_cast<std::uint64_t>(i), 0));
    auto col = color_uniform(dec, 3, rng::derive(151, static_cast<std::uint64_t>(i), 0));
    int perm[4] = {0, 3, 1, 2};  // 1->3, 2->1, 3->2
    Coloring relabeled = col;
    for (auto& c : relabeled.color) c = perm[c];
    for (int a = 1; a <= 3; ++a)
      for (int axis = 0; axis < 2; ++axis)
        CHECK(crosses(dec, col, a, axis) == crosses(dec, relabeled, perm[a], axis));
  }
}

TEST_CASE("three-dimensional decompositions behave sanely") {
  auto dec = sample_decomposition(3, 120, rng::derive(157, 0, 0));
  CHECK(dec.cells() > 60);
  CHECK(dec.pitch > 0);
  CHECK(dec.ambiguous_fraction >= 0);
  for (auto [a, b] : dec.adjacency) {
    REQUIRE(a < b);
    REQUIRE(b < dec.cells());
  }
  for (int axis = 0; axis < 3; ++axis)
    for (int side : {-1, +1}) {
      bool touched = false;
      for (std::size_t i = 0; i < dec.cells() && !touched; ++i)
        if (dec.touches(i, axis, side)) touched = true;
      CHECK(touched);
    }
  // one cell spanning everything
  auto one = decomposition_from_centers(3, {{{0.0, 0.0, 0.0}}});
  Coloring col{1, {1}};
  for (int axis = 0; axis < 3; ++axis) CHECK(crosses(one, col, 1, axis));
}

TEST_CASE("experiment reports are byte-identical across thread counts") {
  ExperimentOptions a;
  a.d = 2;
  a.intensity = 60;
  a.samples = 80;
  a.seed = 99;
  a.threads = 1;
  ExperimentOptions b = a;
  b.threads = 7;
  auto ra = crossing_bound_experiment(a);
  auto rb = crossing_bound_experiment(b);
  CHECK(ra.to_json().dump(2) == rb.to_json().dump(2));
  CHECK(ra.to_csv() == rb.to_csv());
  CHECK(ra.rows.size() == 80);
  // csv shape: header plus one row per sample
  auto csv = ra.to_csv();
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 81);
  CHECK(csv.rfind("sample,cells,cross1,cross2", 0) == 0);
}

TEST_CASE("small planar experiment hits the bound") {
  ExperimentOptions o;
  o.d = 2;
  o.intensity = 100;
  o.samples = 300;
  o.seed = 7;
  o.threads = 4;
  auto rep = crossing_bound_experiment(o);
  CHECK(rep.dichotomy_violations == 0);
  CHECK(rep.bound_pass);
  CHECK(rep.frequency >= rep.wilson_low);
  CHECK(rep.frequency <= rep.wilson_high);
}

TEST_CASE("option validation") {
  CHECK_THROWS_AS(sample_decomposition(4, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_decomposition(2, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(decomposition_from_centers(2, {}), std::invalid_argument);
  ExperimentOptions o;
  o.samples = 0;
  CHECK_THROWS_AS(crossing_bound_experiment(o), std::invalid_argument);
}
