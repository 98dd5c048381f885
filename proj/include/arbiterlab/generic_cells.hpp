#pragma once

// Generic cell decompositions of the d-cube with one cell per grid site,
// realized combinatorially as the dual block complex of a Kuhn triangulation
// whose vertices are the cell centers. In the dual complex at most three
// cells meet along a codimension-2 face and at most d+1 at a point, so
// unions of cells never pinch the way closures of cubical cells do (four
// squares of a grid can share a vertex, which breaks the duality axioms;
// see the k-arbiter tests).

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbiterlab/complexes.hpp"

namespace arbiterlab::generic_cells {

/// Hyperoctahedral symmetry of the site lattice [0,n)^d.
struct HyperMap {
  int d = 2;
  int n = 1;
  std::array<int, 4> axis_perm{0, 1, 2, 3};
  std::array<bool, 4> flip{};

  std::array<int, 4> apply(const std::array<int, 4>& c) const {
    std::array<int, 4> out{};
    for (int a = 0; a < d; ++a) {
      int v = flip[static_cast<std::size_t>(a)] ? n - 1 - c[static_cast<std::size_t>(a)]
                                                : c[static_cast<std::size_t>(a)];
      out[static_cast<std::size_t>(axis_perm[static_cast<std::size_t>(a)])] = v;
    }
    return out;
  }

  std::array<int, 4> apply_inverse(const std::array<int, 4>& c) const {
    std::array<int, 4> out{};
    for (int a = 0; a < d; ++a) {
      int v = c[static_cast<std::size_t>(axis_perm[static_cast<std::size_t>(a)])];
      out[static_cast<std::size_t>(a)] = flip[static_cast<std::size_t>(a)] ? n - 1 - v : v;
    }
    return out;
  }

  /// Image of an original-coordinates face under the map.
  std::pair<int, int> apply_face(int axis, int side) const {
    int ia = axis_perm[static_cast<std::size_t>(axis)];
    int is = flip[static_cast<std::size_t>(axis)] ? -side : side;
    return {ia, is};
  }

  HyperMap inverse() const {
    HyperMap inv;
    inv.d = d;
    inv.n = n;
    for (int a = 0; a < d; ++a) {
      inv.axis_perm[static_cast<std::size_t>(axis_perm[static_cast<std::size_t>(a)])] = a;
      inv.flip[static_cast<std::size_t>(axis_perm[static_cast<std::size_t>(a)])] =
          flip[static_cast<std::size_t>(a)];
    }
    return inv;
  }

  static HyperMap identity(int d, int n) { return HyperMap{d, n, {0, 1, 2, 3}, {}}; }
};

struct DualGrid {
  int d = 0;
  int n = 0;
  complexes::CellComplex dual;
  std::vector<std::uint32_t> top_of_site;                       // site id (lex) -> top cell of dual
  std::vector<std::pair<std::uint32_t, std::uint32_t>> site_adjacency;  // dual cells sharing a facet
  std::vector<std::uint8_t> site_face_mask;    // bit 2a: x_a == 0, bit 2a+1: x_a == n-1

  struct BoundaryBlock {
    int ddim = 0;                 // dimension of the dual cell
    std::uint32_t cell = 0;       // index within that dimension
    std::uint8_t face_mask = 0;   // cube faces containing the underlying simplex
  };
  std::vector<BoundaryBlock> boundary_blocks;

  std::size_t sites() const { return top_of_site.size(); }

  bool site_on_face(std::size_t site, int axis, int side) const {
    return (site_face_mask.at(site) >> (2 * axis + (side > 0 ? 1 : 0))) & 1;
  }

  /// Boundary realization of a set of axes: the union of the closed faces
  /// along those axes, shrunk along seams with the other faces. A boundary
  /// dual block enters iff every cube face containing its simplex has an
  /// axis in the set, which makes the subcomplex face-closed and gives the
  /// ideal touching relation: a cell meets the piece iff its site lies on
  /// one of the named faces.
  complexes::Subcomplex boundary_piece(const std::vector<int>& axes) const {
    std::uint8_t allowed = 0;
    for (int a : axes) {
      if (a < 0 || a >= d) throw std::invalid_argument("boundary_piece: bad axis");
      allowed = static_cast<std::uint8_t>(allowed | (3u << (2 * a)));
    }
    complexes::Subcomplex out = complexes::Subcomplex::empty(dual);
    for (const auto& b : boundary_blocks)
      if ((b.face_mask & ~allowed) == 0) out.insert(b.ddim, b.cell);
    return out;
  }
};

namespace detail {

inline std::size_t site_id(int d, int n, const std::array<int, 4>& c) {
  std::size_t id = 0;
  for (int a = 0; a < d; ++a) id = id * static_cast<std::size_t>(n) + static_cast<std::size_t>(c[static_cast<std::size_t>(a)]);
  return id;
}

}  // namespace detail

/// Builds the dual grid; `g` rebuilds the whole construction in transformed
/// coordinates (the triangulation's diagonals and the seam assignments move
/// with it), exposing sites and faces in original coordinates.
inline DualGrid build_dual_grid(int d, int n, const HyperMap& gmap) {
  if (d < 1 || d > 3) throw std::invalid_argument("dual grid supports d in 1..3");
  if (n < 2) throw std::invalid_argument("dual grid needs n >= 2");

  // --- Kuhn triangulation on the transformed lattice ---------------------
  // T-cells per dimension as sorted vertex-id lists (vertices sorted by
  // coordinate sum along the chain).
  const std::size_t nsites = [&] {
    std::size_t t = 1;
    for (int a = 0; a < d; ++a) t *= static_cast<std::size_t>(n);
    return t;
  }();

  std::vector<std::array<int, 4>> coord_of(nsites);
  {
    std::array<int, 4> c{};
    for (std::size_t id = 0; id < nsites; ++id) {
      coord_of[id] = c;
      for (int a = d - 1; a >= 0; --a) {
        if (++c[static_cast<std::size_t>(a)] < n) break;
        c[static_cast<std::size_t>(a)] = 0;
      }
    }
  }

  // vertices of the triangulation live in "working" coordinates; the working
  // lattice is the g-image of the site lattice
  std::vector<std::vector<std::vector<std::uint32_t>>> tcells(static_cast<std::size_t>(d) + 1);
  std::vector<std::map<std::vector<std::uint32_t>, std::uint32_t>> tindex(static_cast<std::size_t>(d) + 1);

  auto add_tcell = [&](int k, std::vector<std::uint32_t> verts) {
    auto& idx = tindex[static_cast<std::size_t>(k)];
    auto it = idx.find(verts);
    if (it != idx.end()) return it->second;
    auto id = static_cast<std::uint32_t>(tcells[static_cast<std::size_t>(k)].size());
    tcells[static_cast<std::size_t>(k)].push_back(verts);
    idx.emplace(std::move(verts), id);
    return id;
  };

  auto wid = [&](const std::array<int, 4>& w) {
    return static_cast<std::uint32_t>(detail::site_id(d, n, w));
  };

  for (std::size_t s = 0; s < nsites; ++s) add_tcell(0, {static_cast<std::uint32_t>(s)});

  // ascending chains in working coordinates: base w, disjoint nonempty
  // increment supports, all staying within [0, n)
  std::vector<std::vector<int>> supports;  // nonempty subsets of axes
  for (int m = 1; m < (1 << d); ++m) {
    std::vector<int> sup;
    for (int a = 0; a < d; ++a)
      if ((m >> a) & 1) sup.push_back(a);
    supports.push_back(sup);
  }

  struct ChainState {
    std::vector<std::uint32_t> verts;
    int used_mask = 0;
    std::array<int, 4> at{};
  };
  for (std::size_t s = 0; s < nsites; ++s) {
    std::vector<ChainState> stack;
    ChainState init;
    init.verts = {static_cast<std::uint32_t>(s)};
    init.at = coord_of[s];
    stack.push_back(init);
    while (!stack.empty()) {
      ChainState cur = stack.back();
      stack.pop_back();
      if (cur.verts.size() >= 2) add_tcell(static_cast<int>(cur.verts.size()) - 1, cur.verts);
      if (static_cast<int>(cur.verts.size()) == d + 1) continue;
      for (int m = 1; m < (1 << d); ++m) {
        if (m & cur.used_mask) continue;
        std::array<int, 4> next = cur.at;
        bool ok = true;
        for (int a = 0; a < d; ++a)
          if ((m >> a) & 1) {
            if (++next[static_cast<std::size_t>(a)] >= n) ok = false;
          }
        if (!ok) continue;
        ChainState ns = cur;
        ns.used_mask |= m;
        ns.at = next;
        ns.verts.push_back(wid(next));
        stack.push_back(std::move(ns));
      }
    }
  }

  // face and coface lists of T (faces drop one vertex)
  std::vector<std::vector<std::vector<std::uint32_t>>> tfaces(static_cast<std::size_t>(d) + 1);
  std::vector<std::vector<std::vector<std::uint32_t>>> tcofaces(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    tfaces[static_cast<std::size_t>(k)].resize(tcells[static_cast<std::size_t>(k)].size());
    tcofaces[static_cast<std::size_t>(k)].resize(tcells[static_cast<std::size_t>(k)].size());
  }
  for (int k = 1; k <= d; ++k)
    for (std::uint32_t i = 0; i < tcells[static_cast<std::size_t>(k)].size(); ++i) {
      const auto& verts = tcells[static_cast<std::size_t>(k)][i];
      for (std::size_t drop = 0; drop < verts.size(); ++drop) {
        std::vector<std::uint32_t> sub;
        for (std::size_t j = 0; j < verts.size(); ++j)
          if (j != drop) sub.push_back(verts[j]);
        auto f = tindex[static_cast<std::size_t>(k) - 1].at(sub);
        tfaces[static_cast<std::size_t>(k)][i].push_back(f);
        tcofaces[static_cast<std::size_t>(k) - 1][f].push_back(i);
      }
    }

  // boundary flags in working coordinates: simplex lies in working face
  // (axis, side) iff every vertex is extreme there
  auto working_faces_of = [&](const std::vector<std::uint32_t>& verts) {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < d; ++a)
      for (int side : {-1, +1}) {
        bool all = true;
        for (auto v : verts) {
          int c = coord_of[v][static_cast<std::size_t>(a)];
          if (side < 0 ? (c != 0) : (c != n - 1)) all = false;
        }
        if (all) out.push_back({a, side});
      }
    return out;
  };
  std::vector<std::vector<char>> on_boundary(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    on_boundary[static_cast<std::size_t>(k)].resize(tcells[static_cast<std::size_t>(k)].size(), 0);
    for (std::uint32_t i = 0; i < tcells[static_cast<std::size_t>(k)].size(); ++i)
      on_boundary[static_cast<std::size_t>(k)][i] =
          !working_faces_of(tcells[static_cast<std::size_t>(k)][i]).empty();
  }

  // --- dual block complex -------------------------------------------------
  // D-dim of (sigma, full) is d - dim(sigma); of (sigma, bd) is d-1-dim(sigma).
  complexes::CellComplex::Builder builder(d);
  std::vector<std::vector<std::uint32_t>> full_id(static_cast<std::size_t>(d) + 1);
  std::vector<std::vector<std::uint32_t>> bd_id(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    full_id[static_cast<std::size_t>(k)].resize(tcells[static_cast<std::size_t>(k)].size(), 0);
    bd_id[static_cast<std::size_t>(k)].resize(tcells[static_cast<std::size_t>(k)].size(), 0);
  }
  auto tlabel = [&](int k, std::uint32_t i) {
    std::string out;
    for (auto v : tcells[static_cast<std::size_t>(k)][i]) {
      if (!out.empty()) out += '.';
      out += std::to_string(v);
    }
    return out;
  };

  for (int dd = 0; dd <= d; ++dd) {
    int s_full = d - dd;      // T-dim of full duals at this D-dim
    int s_bd = d - 1 - dd;    // T-dim of boundary duals at this D-dim
    if (s_full >= 0)
      for (std::uint32_t i = 0; i < tcells[static_cast<std::size_t>(s_full)].size(); ++i) {
        std::vector<std::uint32_t> faces;
        if (dd > 0) {
          for (auto tau : tcofaces[static_cast<std::size_t>(s_full)][i])
            faces.push_back(full_id[static_cast<std::size_t>(s_full) + 1][tau]);
          if (on_boundary[static_cast<std::size_t>(s_full)][i])
            faces.push_back(bd_id[static_cast<std::size_t>(s_full)][i]);
        }
        full_id[static_cast<std::size_t>(s_full)][i] =
            builder.add_cell(dd, std::move(faces), "f" + std::to_string(s_full) + ":" + tlabel(s_full, i));
      }
    if (s_bd >= 0)
      for (std::uint32_t i = 0; i < tcells[static_cast<std::size_t>(s_bd)].size(); ++i) {
        if (!on_boundary[static_cast<std::size_t>(s_bd)][i]) continue;
        std::vector<std::uint32_t> faces;
        if (dd > 0)
          for (auto tau : tcofaces[static_cast<std::size_t>(s_bd)][i])
            if (on_boundary[static_cast<std::size_t>(s_bd) + 1][tau])
              faces.push_back(bd_id[static_cast<std::size_t>(s_bd) + 1][tau]);
        bd_id[static_cast<std::size_t>(s_bd)][i] =
            builder.add_cell(dd, std::move(faces), "b" + std::to_string(s_bd) + ":" + tlabel(s_bd, i));
      }
  }

  DualGrid grid;
  grid.d = d;
  grid.n = n;
  grid.dual = builder.finish();

  // sites in original coordinates; working vertex of original site x is g(x)
  grid.top_of_site.resize(nsites);
  for (std::size_t x = 0; x < nsites; ++x) {
    auto w = gmap.apply(coord_of[x]);
    grid.top_of_site[x] = full_id[0][static_cast<std::uint32_t>(detail::site_id(d, n, w))];
  }

  // neighbouring cells = T-edges
  for (std::uint32_t e = 0; e < tcells[1].size(); ++e) {
    auto a = tcells[1][e][0], b = tcells[1][e][1];
    auto xa = detail::site_id(d, n, gmap.apply_inverse(coord_of[a]));
    auto xb = detail::site_id(d, n, gmap.apply_inverse(coord_of[b]));
    grid.site_adjacency.push_back({static_cast<std::uint32_t>(std::min(xa, xb)),
                                   static_cast<std::uint32_t>(std::max(xa, xb))});
  }
  std::sort(grid.site_adjacency.begin(), grid.site_adjacency.end());

  // face membership in original coordinates
  grid.site_face_mask.assign(nsites, 0);
  auto original_mask = [&](std::size_t x) {
    std::uint8_t mask = 0;
    for (int a = 0; a < d; ++a) {
      if (coord_of[x][static_cast<std::size_t>(a)] == 0)
        mask = static_cast<std::uint8_t>(mask | (1u << (2 * a)));
      if (coord_of[x][static_cast<std::size_t>(a)] == n - 1)
        mask = static_cast<std::uint8_t>(mask | (1u << (2 * a + 1)));
    }
    return mask;
  };
  for (std::size_t x = 0; x < nsites; ++x) grid.site_face_mask[x] = original_mask(x);

  // boundary dual blocks with the original-coordinate face sets of their
  // simplices (intersection over vertices)
  for (int k = 0; k <= d - 1; ++k)
    for (std::uint32_t i = 0; i < tcells[static_cast<std::size_t>(k)].size(); ++i) {
      if (!on_boundary[static_cast<std::size_t>(k)][i]) continue;
      std::uint8_t mask = 0xff;
      for (auto v : tcells[static_cast<std::size_t>(k)][i]) {
        auto x = detail::site_id(d, n, gmap.apply_inverse(coord_of[v]));
        mask = static_cast<std::uint8_t>(mask & grid.site_face_mask[x]);
      }
      grid.boundary_blocks.push_back({d - 1 - k, bd_id[static_cast<std::size_t>(k)][i], mask});
    }
  return grid;
}

inline DualGrid build_dual_grid(int d, int n) {
  return build_dual_grid(d, n, HyperMap::identity(d, n));
}

/// Union of the closed generic cells of the sites in S.
inline complexes::Subcomplex piece_of_sites(const DualGrid& grid, const std::vector<char>& in_s) {
  if (in_s.size() != grid.sites()) throw std::invalid_argument("piece_of_sites: size mismatch");
  std::vector<std::size_t> tops;
  for (std::size_t x = 0; x < in_s.size(); ++x)
    if (in_s[x]) tops.push_back(grid.top_of_site[x]);
  return complexes::closure(grid.dual, tops);
}

}  // namespace arbiterlab::generic_cells
