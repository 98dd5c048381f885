#include <catch2/catch_amalgamated.hpp>

#include "arbiterlab/arbiters.hpp"
#include "arbiterlab/rng.hpp"

using namespace arbiterlab;
using complexes::Subcomplex;

TEST_CASE("homological arbiter on the projective plane") {
  auto rp2 = complexes::build_rp2();
  CHECK(arbiters::arbiter_h_rp2(rp2, Subcomplex::full(rp2)).bit == 1);
  auto tri = complexes::closure(rp2, {0});
  CHECK(arbiters::arbiter_h_rp2(rp2, tri).bit == 0);
  CHECK(arbiters::arbiter_h_rp2(rp2, complexes::complement_closure(rp2, tri)).bit == 1);
  auto lower = complexes::closure_of(rp2, {{1, 0}});
  CHECK_THROWS_AS(arbiters::arbiter_h_rp2(rp2, lower), std::invalid_argument);
}

TEST_CASE("duality and monotonicity over all manifold pieces of the projective plane") {
  auto rp2 = complexes::build_rp2();
  auto family = arbiters::manifold_piece_masks(rp2);
  std::map<std::uint64_t, int> value;
  for (auto mask : family) {
    std::vector<std::size_t> tops;
    for (unsigned t = 0; t < 10; ++t)
      if ((mask >> t) & 1) tops.push_back(t);
    value[mask] = arbiters::arbiter_h_rp2(rp2, complexes::closure(rp2, tops)).bit;
  }
  const std::uint64_t full = (1u << 10) - 1;
  int pairs = 0;
  for (auto mask : family) {
    auto comp = value.find(full ^ mask);
    if (comp == value.end()) continue;
    CHECK(value[mask] + comp->second == 1);
    ++pairs;
  }
  CHECK(pairs == 202);
  for (auto a : family)
    for (auto b : family)
      if ((a & b) == a) CHECK(value[a] <= value[b]);
}

TEST_CASE("cube arbiter slab examples") {
  arbiters::CubeArbiter arb(2, 4);
  const int n = 4;
  // color 1 fills the row y = 1, a full slab across axis 0; color 2 the rest
  std::vector<int> color(16, 2);
  for (int x = 0; x < n; ++x) color[generic_cells::detail::site_id(2, n, {x, 1})] = 1;
  auto dec = arb.decomposition(color, 2);
  CHECK(arb.value(dec, {1}).bit == 1);
  CHECK(arb.value(dec, {2}).bit == 0);
  CHECK(arb.chain_crossing(dec, 1, 0));
  CHECK_FALSE(arb.chain_crossing(dec, 2, 1));

  // color 1 strictly inside: touches neither face of its own pair
  std::vector<int> inner(16, 2);
  inner[generic_cells::detail::site_id(2, n, {1, 1})] = 1;
  inner[generic_cells::detail::site_id(2, n, {2, 1})] = 1;
  auto dec2 = arb.decomposition(inner, 2);
  CHECK(arb.value(dec2, {1}).bit == 0);
  CHECK(arb.value(dec2, {2}).bit == 1);

  CHECK_THROWS_AS(arb.value(dec, {}), std::invalid_argument);
  CHECK_THROWS_AS(arb.value(dec, {1, 2}), std::invalid_argument);
}

TEST_CASE("homological value equals chain crossing for singletons") {
  for (auto [d, n, samples] : {std::tuple{2, 5, 60}, std::tuple{3, 3, 15}}) {
    arbiters::CubeArbiter arb(d, n);
    rng::Rng rng(rng::derive(41, static_cast<std::uint64_t>(d)));
    for (int s = 0; s < samples; ++s) {
      std::vector<int> color(arb.dual().sites());
      for (auto& c : color) c = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d)));
      auto dec = arb.decomposition(color, d);
      for (int a = 1; a <= d; ++a)
        CHECK(arb.value(dec, {a}).bit == (arb.chain_crossing(dec, a, a - 1) ? 1 : 0));
    }
  }
}

TEST_CASE("power axioms hold on random colorings") {
  arbiters::PowerAxiomOptions opt;
  opt.samples = 120;
  opt.seed = 2026;
  opt.threads = 4;
  opt.symmetry_samples = 10;
  for (auto& rep : arbiters::check_power_axioms(2, 6, 2, opt)) {
    INFO(rep.axiom);
    CHECK(rep.pass());
  }
  opt.samples = 25;
  opt.symmetry_samples = 4;
  for (auto& rep : arbiters::check_power_axioms(3, 4, 3, opt)) {
    INFO(rep.axiom);
    CHECK(rep.pass());
  }
  CHECK_THROWS_AS(arbiters::check_power_axioms(3, 4, 2, opt), std::invalid_argument);
}

TEST_CASE("some singleton always crosses") {
  for (auto [d, n, samples] : {std::tuple{2, 6, 80}, std::tuple{3, 4, 20}}) {
    arbiters::CubeArbiter arb(d, n);
    rng::Rng rng(rng::derive(43, static_cast<std::uint64_t>(d)));
    for (int s = 0; s < samples; ++s) {
      std::vector<int> color(arb.dual().sites());
      for (auto& c : color) c = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(d)));
      auto dec = arb.decomposition(color, d);
      bool any = false;
      for (int a = 1; a <= d && !any; ++a) any = arb.value(dec, {a}).bit != 0;
      CHECK(any);
    }
  }
}

TEST_CASE("poincare multiarbiter on projective spaces") {
  auto rp2 = complexes::build_rp2();
  CHECK(arbiters::poincare_multiarbiter_rpd(rp2, Subcomplex::full(rp2)).level == 1);
  CHECK(arbiters::poincare_multiarbiter_rpd(rp2, complexes::closure(rp2, {2})).level == 0);
  CHECK_THROWS_AS(arbiters::poincare_multiarbiter_rpd(rp2, Subcomplex::empty(rp2)),
                  std::invalid_argument);

  auto rp3 = complexes::build_rp3();
  CHECK(arbiters::poincare_multiarbiter_rpd(rp3, Subcomplex::full(rp3)).level == 2);
  CHECK(arbiters::poincare_multiarbiter_rpd(rp3, complexes::closure(rp3, {0})).level == 0);
}

TEST_CASE("poincare multiarbiter duality is exhaustive on the quotient RP3") {
  auto rp3 = complexes::build_rp3();
  int pairs = 0;
  for (unsigned m = 1; m + 1 < 256; ++m) {
    std::vector<std::size_t> ta, tb;
    for (unsigned t = 0; t < 8; ++t) ((m >> t) & 1 ? ta : tb).push_back(t);
    if (!complexes::is_manifold_piece(rp3, ta) || !complexes::is_manifold_piece(rp3, tb)) continue;
    int fa = arbiters::poincare_multiarbiter_rpd(rp3, complexes::closure(rp3, ta)).level;
    int fb = arbiters::poincare_multiarbiter_rpd(rp3, complexes::closure(rp3, tb)).level;
    CHECK(fa + fb == 2);
    ++pairs;
  }
  CHECK(pairs == 40);
}

TEST_CASE("poincare multiarbiter intersection bound on sampled RP3 pairs") {
  auto rp3 = complexes::build_rp3();
  auto family = arbiters::manifold_piece_masks(rp3, 1u << 8);
  REQUIRE(family.size() > 10);
  rng::Rng rng(rng::derive(47, 0));
  int checked = 0, skipped = 0;
  for (int trial = 0; trial < 400; ++trial) {
    unsigned m1 = static_cast<unsigned>(family[rng.next_below(family.size())]);
    unsigned m2 = static_cast<unsigned>(family[rng.next_below(family.size())]);
    std::vector<std::size_t> t1, t2;
    for (unsigned t = 0; t < 8; ++t) {
      if ((m1 >> t) & 1) t1.push_back(t);
      if ((m2 >> t) & 1) t2.push_back(t);
    }
    auto a = complexes::closure(rp3, t1), b = complexes::closure(rp3, t2);
    auto inter = set_intersection(a, b);
    if (inter.is_empty() || !(complexes::closure(rp3, inter.top_cells()) == inter)) {
      ++skipped;  // pairs outside the axiom's shape precondition
      continue;
    }
    int fa = arbiters::poincare_multiarbiter_rpd(rp3, a).level;
    int fb = arbiters::poincare_multiarbiter_rpd(rp3, b).level;
    int fi = arbiters::poincare_multiarbiter_rpd(rp3, inter).level;
    CHECK(fi >= fa + fb - 3);
    ++checked;
  }
  CHECK(checked > 20);
  CHECK(skipped > 0);
}

TEST_CASE("axiom-consistent assignments: unique on RP2, none on the sphere") {
  auto rp2 = complexes::build_rp2();
  auto sols = arbiters::enumerate_consistent_arbiters(rp2, complexes::automorphisms(rp2));
  REQUIRE(sols.size() == 1);
  for (std::size_t i = 0; i < sols[0].family.size(); ++i) {
    std::vector<std::size_t> tops;
    for (unsigned t = 0; t < 10; ++t)
      if ((sols[0].family[i] >> t) & 1) tops.push_back(t);
    CHECK(sols[0].value[i] ==
          arbiters::arbiter_h_rp2(rp2, complexes::closure(rp2, tops)).bit);
  }

  auto s2 = complexes::build_s2();
  CHECK(arbiters::enumerate_consistent_arbiters(s2, complexes::automorphisms(s2)).empty());

  CHECK_THROWS_AS(arbiters::enumerate_consistent_arbiters(rp2, {}, 128), std::invalid_argument);
}

TEST_CASE("axiom reports serialize with the shared schema") {
  arbiters::AxiomReport rep;
  rep.axiom = "B1.1";
  rep.domain = "cube d=2 n=6 k=2";
  rep.instances = 12;
  rep.violations.push_back({{"decomposition_hash", "00ff"}, {"subset", "{1}"}, {"lhs", 1}, {"rhs", 1}});
  auto j = rep.to_json();
  CHECK(j["axiom"] == "B1.1");
  CHECK(j["instances"] == 12);
  CHECK(j["violations"].size() == 1);
  CHECK_FALSE(rep.pass());
}
