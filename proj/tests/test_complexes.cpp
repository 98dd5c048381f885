#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "arbiterlab/complexes.hpp"
#include "arbiterlab/rng.hpp"

using namespace arbiterlab;
using complexes::CellComplex;
using complexes::Subcomplex;

namespace {

std::size_t naive_rank(std::vector<std::vector<int>> m) {
  if (m.empty() || m[0].empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size(), rank = 0;
  for (std::size_t c = 0; c < cols; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t i = 0; i < rows; ++i)
      if (i != rank && m[i][c])
        for (std::size_t j = 0; j < cols; ++j) m[i][j] ^= m[rank][j];
    ++rank;
  }
  return rank;
}

void check_boundary_squares_to_zero(const CellComplex& x) {
  for (int d = 2; d <= x.dim(); ++d) {
    auto prod = x.boundary_matrix(d - 1) * x.boundary_matrix(d);
    REQUIRE(prod.is_zero());
  }
}

}  // namespace

TEST_CASE("cube grid counts and Euler characteristic") {
  auto g1 = complexes::build_cube_grid(1, 1);
  CHECK(g1.complex.count(1) == 1);
  CHECK(g1.complex.count(0) == 2);
  CHECK(g1.complex.euler_characteristic() == 1);

  auto g2 = complexes::build_cube_grid(2, 2);
  CHECK(g2.complex.count(2) == 4);
  CHECK(g2.complex.count(1) == 12);
  CHECK(g2.complex.count(0) == 9);
  CHECK(g2.complex.euler_characteristic() == 1);

  CHECK_THROWS_AS(complexes::build_cube_grid(2, 100, 1000), std::invalid_argument);
  CHECK_THROWS_AS(complexes::build_cube_grid(5, 1), std::invalid_argument);
}

TEST_CASE("boundary composite vanishes on every built complex") {
  check_boundary_squares_to_zero(complexes::build_cube_grid(3, 3).complex);
  check_boundary_squares_to_zero(complexes::build_cube_grid(4, 1).complex);
  check_boundary_squares_to_zero(complexes::build_torus_grid(3).complex);
  check_boundary_squares_to_zero(complexes::build_rp2());
  check_boundary_squares_to_zero(complexes::build_s2());
  check_boundary_squares_to_zero(complexes::build_rp3());
}

TEST_CASE("projective plane homology") {
  auto rp2 = complexes::build_rp2();
  CHECK(rp2.count(0) == 6);
  CHECK(rp2.count(1) == 15);
  CHECK(rp2.count(2) == 10);
  CHECK(rp2.euler_characteristic() == 1);
  CHECK(complexes::homology(rp2, 0).dimension == 1);
  CHECK(complexes::homology(rp2, 1).dimension == 1);
  CHECK(complexes::homology(rp2, 2).dimension == 1);
  // closed surface: every edge borders exactly two triangles
  std::vector<int> incident(rp2.count(1), 0);
  for (std::size_t t = 0; t < rp2.count(2); ++t)
    for (auto e : rp2.faces(2, t)) ++incident[e];
  for (auto c : incident) CHECK(c == 2);
}

TEST_CASE("octahedral sphere homology and symmetry") {
  auto s2 = complexes::build_s2();
  CHECK(complexes::homology(s2, 0).dimension == 1);
  CHECK(complexes::homology(s2, 1).dimension == 0);
  CHECK(complexes::homology(s2, 2).dimension == 1);
  auto sym = complexes::automorphisms(s2);
  CHECK(sym.size() == 48);
  std::set<std::uint32_t> orbit;
  for (const auto& g : sym) orbit.insert(g.top(2)[0]);
  CHECK(orbit.size() == 8);  // transitive on faces
}

TEST_CASE("projective 3-space quotient complex") {
  auto rp3 = complexes::build_rp3();
  CHECK(rp3.count(0) == 4);
  CHECK(rp3.count(1) == 12);
  CHECK(rp3.count(2) == 16);
  CHECK(rp3.count(3) == 8);
  CHECK(rp3.euler_characteristic() == 0);
  for (int d = 0; d <= 3; ++d) CHECK(complexes::homology(rp3, d).dimension == 1);
  // closed 3-manifold: every triangle borders exactly two tetrahedra
  std::vector<int> incident(rp3.count(2), 0);
  for (std::size_t t = 0; t < rp3.count(3); ++t)
    for (auto f : rp3.faces(3, t)) ++incident[f];
  for (auto c : incident) CHECK(c == 2);
}

TEST_CASE("closure basics") {
  auto grid = complexes::build_cube_grid(2, 2);
  CHECK(complexes::closure(grid.complex, {}).is_empty());

  std::vector<std::size_t> all(grid.complex.count(2));
  std::iota(all.begin(), all.end(), 0);
  CHECK(complexes::closure(grid.complex, all) == Subcomplex::full(grid.complex));

  auto one = complexes::closure(grid.complex, {0});
  CHECK(one.count(2) == 1);
  CHECK(one.count(1) == 4);
  CHECK(one.count(0) == 4);
  CHECK(one.face_closed());

  CHECK_THROWS_AS(complexes::closure(grid.complex, {99}), std::invalid_argument);
}

TEST_CASE("complement closure") {
  auto rp2 = complexes::build_rp2();
  CHECK(complexes::complement_closure(rp2, Subcomplex::empty(rp2)) == Subcomplex::full(rp2));
  CHECK(complexes::complement_closure(rp2, Subcomplex::full(rp2)).is_empty());

  auto tri = complexes::closure(rp2, {0});
  auto rest = complexes::complement_closure(rp2, tri);
  CHECK(rest.count(2) == 9);
  CHECK(set_union(tri, rest) == Subcomplex::full(rp2));
  // the complement of a 2-cell still carries the essential 1-cycle
  CHECK(complexes::induced_map_is_onto(rp2, rest, Subcomplex::empty(rp2), 1));
  CHECK_FALSE(complexes::induced_map_is_onto(rp2, tri, Subcomplex::empty(rp2), 1));

  // not generated by top cells -> error
  auto lower = complexes::closure_of(rp2, {{1, 0}});
  CHECK_THROWS_AS(complexes::complement_closure(rp2, lower), std::invalid_argument);
}

TEST_CASE("subcomplex union and intersection stay face-closed") {
  auto rp2 = complexes::build_rp2();
  rng::Rng r(rng::derive(11, 0));
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::size_t> sa, sb;
    for (std::size_t t = 0; t < rp2.count(2); ++t) {
      if (r.next_bool()) sa.push_back(t);
      if (r.next_bool()) sb.push_back(t);
    }
    auto a = complexes::closure(rp2, sa), b = complexes::closure(rp2, sb);
    CHECK(set_union(a, b).face_closed());
    CHECK(set_intersection(a, b).face_closed());
  }
}

TEST_CASE("contractible grids have vanishing reduced homology") {
  for (int d = 1; d <= 3; ++d) {
    auto grid = complexes::build_cube_grid(d, d == 3 ? 2 : 3);
    CHECK(complexes::homology(grid.complex, 0).dimension == 1);
    for (int deg = 1; deg <= d; ++deg)
      CHECK(complexes::homology(grid.complex, deg).dimension == 0);
  }
}

TEST_CASE("torus homology matches an independent boundary-matrix computation") {
  const int n = 3;
  auto torus = complexes::build_torus_grid(n);
  auto h1 = complexes::homology(torus.complex, 1);
  CHECK(h1.dimension == 2);

  // Independent bookkeeping: vertices v(i,j), horizontal/vertical edges,
  // squares; all indices mod n.
  auto vid = [&](int i, int j) { return (i % n) * n + (j % n); };
  const int V = n * n, E = 2 * n * n;
  auto hid = [&](int i, int j) { return (i % n) * n + (j % n); };            // along axis 0
  auto wid = [&](int i, int j) { return n * n + (i % n) * n + (j % n); };    // along axis 1
  std::vector<std::vector<int>> d1(V, std::vector<int>(E, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      d1[vid(i, j)][hid(i, j)] ^= 1;
      d1[vid(i + 1, j)][hid(i, j)] ^= 1;
      d1[vid(i, j)][wid(i, j)] ^= 1;
      d1[vid(i, j + 1)][wid(i, j)] ^= 1;
    }
  std::vector<std::vector<int>> d2(E, std::vector<int>(n * n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int s = i * n + j;
      d2[hid(i, j)][s] ^= 1;
      d2[hid(i, j + 1)][s] ^= 1;
      d2[wid(i, j)][s] ^= 1;
      d2[wid(i + 1, j)][s] ^= 1;
    }
  std::size_t betti1 = (static_cast<std::size_t>(E) - naive_rank(d1)) - naive_rank(d2);
  CHECK(h1.dimension == betti1);
}

TEST_CASE("relative homology basics") {
  auto grid = complexes::build_cube_grid(2, 1);
  auto& x = grid.complex;
  auto sides = complexes::cube_boundary_pieces(grid, {0});
  auto rel = complexes::relative_homology(x, sides, 1);
  CHECK(rel.dimension == 1);

  // brute force on the 1x1 grid: quotient cells are 1 square + 2 edges
  {
    std::vector<std::size_t> edges, squares;
    for (std::size_t e = 0; e < x.count(1); ++e)
      if (!sides.contains(1, e)) edges.push_back(e);
    REQUIRE(edges.size() == 2);
    // every vertex lies on the killed sides, so both edges are relative
    // cycles; boundaries come from the single square.
    std::set<std::vector<int>> boundaries;
    for (int use = 0; use < 2; ++use) {
      std::vector<int> chain(edges.size(), 0);
      if (use)
        for (auto f : x.faces(2, 0)) {
          for (std::size_t k = 0; k < edges.size(); ++k)
            if (edges[k] == f) chain[k] ^= 1;
        }
      boundaries.insert(chain);
    }
    std::set<std::vector<int>> classes;
    for (int c0 = 0; c0 < 2; ++c0)
      for (int c1 = 0; c1 < 2; ++c1) {
        std::vector<int> chain = {c0, c1};
        std::vector<int> best = chain;
        for (const auto& b : boundaries) {
          std::vector<int> alt = {chain[0] ^ b[0], chain[1] ^ b[1]};
          best = std::min(best, alt);
        }
        classes.insert(best);
      }
    CHECK(classes.size() == 2);  // dimension 1 over GF(2)
  }

  CHECK(complexes::relative_homology(x, Subcomplex::empty(x), 1).dimension ==
        complexes::homology(x, 1).dimension);
  for (int deg = 0; deg <= 2; ++deg)
    CHECK(complexes::relative_homology(x, Subcomplex::full(x), deg).dimension == 0);

  auto rp2 = complexes::build_rp2();
  auto wrong_parent = Subcomplex::empty(rp2);
  CHECK_THROWS_AS(complexes::relative_homology(x, wrong_parent, 1), std::invalid_argument);
}

TEST_CASE("induced map surjectivity") {
  auto rp2 = complexes::build_rp2();
  auto none = Subcomplex::empty(rp2);
  CHECK(complexes::induced_map_is_onto(rp2, Subcomplex::full(rp2), none, 1));
  CHECK_FALSE(complexes::induced_map_is_onto(rp2, complexes::closure(rp2, {3}), none, 1));

  // vertical slab across a 4x4 grid: crossing relative cycle exists
  auto grid = complexes::build_cube_grid(2, 4);
  auto& x = grid.complex;
  std::vector<std::size_t> slab;
  for (std::size_t i = 0; i < x.count(2); ++i) {
    const auto& cell = grid.geom[2][i];
    if (cell.coord[0] == 1) slab.push_back(i);
  }
  REQUIRE(slab.size() == 4);
  auto s = complexes::closure(x, slab);
  auto bdry = complexes::cube_boundary_pieces(grid, {1});
  CHECK(complexes::induced_map_is_onto(x, s, bdry, 1));

  // oracle: the explicit vertical edge path at x=1 is a relative cycle whose
  // class is not a relative boundary
  {
    auto whole = Subcomplex::full(x);
    auto cells1 = complexes::detail::pair_cells(whole, bdry, 1);
    auto cells0 = complexes::detail::pair_cells(whole, bdry, 0);
    auto cells2 = complexes::detail::pair_cells(whole, bdry, 2);
    auto b1 = complexes::detail::pair_boundary(whole, bdry, 1, cells1, cells0);
    auto b2 = complexes::detail::pair_boundary(whole, bdry, 2, cells2, cells1);
    gf2::BitVector path(cells1.size());
    for (std::size_t k = 0; k < cells1.size(); ++k) {
      const auto& cell = grid.geom[1][cells1[k]];
      if (cell.extent_mask == 2 && cell.coord[0] == 1) path.set(k, true);
    }
    REQUIRE(path.popcount() == 4);
    CHECK_FALSE(b1.mul(path).any());  // relative cycle
    gf2::Span boundaries(cells1.size());
    for (std::size_t c = 0; c < cells2.size(); ++c) boundaries.add(b2.col(c));
    CHECK_FALSE(boundaries.contains(path));  // nonzero class
  }

  // a slab that avoids its own boundary pair gives no crossing
  std::vector<std::size_t> inner;
  for (std::size_t i = 0; i < x.count(2); ++i) {
    const auto& cell = grid.geom[2][i];
    if (cell.coord[1] == 1 || cell.coord[1] == 2) inner.push_back(i);
  }
  auto hslab = complexes::closure(x, inner);
  CHECK_FALSE(complexes::induced_map_is_onto(x, hslab, bdry, 1));
}

TEST_CASE("H0 dimension equals connected component count") {
  auto rp2 = complexes::build_rp2();
  rng::Rng r(rng::derive(12, 0));
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::size_t> tops;
    for (std::size_t t = 0; t < rp2.count(2); ++t)
      if (r.next_bool()) tops.push_back(t);
    auto s = complexes::closure(rp2, tops);
    if (s.is_empty()) continue;
    CHECK(complexes::pair_homology(s, Subcomplex::empty(rp2), 0).dimension ==
          complexes::connected_components(s));
  }
}

TEST_CASE("excision sanity: refinement preserves relative homology of slabs") {
  for (int n : {2, 3}) {
    auto coarse = complexes::build_cube_grid(2, n);
    auto fine = complexes::build_cube_grid(2, 2 * n);
    auto rel_c = complexes::relative_homology(
        coarse.complex, complexes::cube_boundary_pieces(coarse, {0}), 1);
    auto rel_f = complexes::relative_homology(
        fine.complex, complexes::cube_boundary_pieces(fine, {0}), 1);
    CHECK(rel_c.dimension == rel_f.dimension);
    CHECK(rel_c.dimension == 1);

    // a full-height slab keeps its crossing class at both resolutions
    auto pick_slab = [](const complexes::CubeGrid& g, int col_lo, int col_hi) {
      std::vector<std::size_t> cells;
      for (std::size_t i = 0; i < g.complex.count(2); ++i) {
        int c = g.geom[2][i].coord[0];
        if (c >= col_lo && c <= col_hi) cells.push_back(i);
      }
      return complexes::closure(g.complex, cells);
    };
    auto bc = complexes::cube_boundary_pieces(coarse, {1});
    auto bf = complexes::cube_boundary_pieces(fine, {1});
    CHECK(complexes::induced_map_is_onto(coarse.complex, pick_slab(coarse, 0, 0), bc, 1));
    CHECK(complexes::induced_map_is_onto(fine.complex, pick_slab(fine, 0, 1), bf, 1));
  }
}

TEST_CASE("complementary manifold pieces on the projective plane split the 1-cycle") {
  // The dichotomy is a statement about codimension-zero submanifolds; pinched
  // unions of triangles can put the essential cycle on the shared frontier of
  // both sides, so the sweep filters to manifold pieces on both sides.
  auto rp2 = complexes::build_rp2();
  auto none = Subcomplex::empty(rp2);
  int pairs = 0, ones = 0;
  for (unsigned s = 1; s + 1 < (1u << 10); ++s) {
    std::vector<std::size_t> ta, tb;
    for (unsigned t = 0; t < 10; ++t) ((s >> t) & 1 ? ta : tb).push_back(t);
    if (!complexes::is_manifold_piece(rp2, ta) || !complexes::is_manifold_piece(rp2, tb)) continue;
    auto a = complexes::closure(rp2, ta);
    auto b = complexes::closure(rp2, tb);
    bool fa = complexes::induced_map_is_onto(rp2, a, none, 1);
    bool fb = complexes::induced_map_is_onto(rp2, b, none, 1);
    CHECK(fa != fb);
    ++pairs;
    if (fa) ++ones;
  }
  CHECK(pairs == 202);
  CHECK(ones * 2 == pairs);
}

TEST_CASE("pinched complements defeat the dichotomy, manifold filter rejects them") {
  auto rp2 = complexes::build_rp2();
  auto none = Subcomplex::empty(rp2);
  // t123, t134, t145, t235: chain-connected but pinched at a vertex; the
  // essential cycle runs along frontier edges shared with the complement.
  std::vector<std::size_t> ta = {0, 1, 2, 5};
  REQUIRE(complexes::chain_connected(rp2, ta));
  CHECK_FALSE(complexes::links_connected(rp2, ta));
  auto a = complexes::closure(rp2, ta);
  auto b = complexes::complement_closure(rp2, a);
  CHECK(complexes::induced_map_is_onto(rp2, a, none, 1));
  CHECK(complexes::induced_map_is_onto(rp2, b, none, 1));
}

TEST_CASE("grid symmetries form the hyperoctahedral group and preserve structure") {
  auto grid = complexes::build_cube_grid(2, 3);
  auto sym = complexes::grid_symmetries(grid);
  CHECK(sym.size() == 8);
  auto grid3 = complexes::build_cube_grid(3, 2);
  CHECK(complexes::grid_symmetries(grid3).size() == 48);
  // each symmetry maps faces to faces
  for (const auto& g : sym)
    for (std::size_t i = 0; i < grid.complex.count(2); ++i) {
      auto image = g.map.perm[2][i];
      std::set<std::uint32_t> expect;
      for (auto f : grid.complex.faces(2, i)) expect.insert(g.map.perm[1][f]);
      std::set<std::uint32_t> got(grid.complex.faces(2, image).begin(),
                                  grid.complex.faces(2, image).end());
      CHECK(expect == got);
    }
}

TEST_CASE("json round trip") {
  auto rp2 = complexes::build_rp2();
  auto j = complexes::to_json(rp2);
  auto back = complexes::complex_from_json(j);
  REQUIRE(back.dim() == rp2.dim());
  for (int d = 0; d <= rp2.dim(); ++d) {
    REQUIRE(back.count(d) == rp2.count(d));
    for (std::size_t i = 0; i < rp2.count(d); ++i) {
      CHECK(back.faces(d, i) == rp2.faces(d, i));
      CHECK(back.label(d, i) == rp2.label(d, i));
    }
  }
  CHECK(complexes::homology(back, 1).dimension == 1);

  auto grid = complexes::build_cube_grid(2, 2);
  auto back2 = complexes::complex_from_json(complexes::to_json(grid.complex));
  for (std::size_t i = 0; i < grid.complex.count(1); ++i) {
    REQUIRE(back2.tags(1, i).size() == grid.complex.tags(1, i).size());
  }
}
