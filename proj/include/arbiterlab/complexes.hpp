#pragma once

// Finite regular CW complexes with Z/2 incidence, face-closed subcomplexes,
// and absolute/relative homology over GF(2). Boundary lists may repeat a
// face; repeats cancel mod 2 in the boundary matrix but still count for the
// face-closure relation (needed by identified complexes such as tori).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "arbiterlab/gf2.hpp"

namespace arbiterlab::complexes {

struct FaceTag {
  int axis = 0;
  int side = 0;  // -1 or +1
  friend bool operator==(const FaceTag&, const FaceTag&) = default;
};

class CellComplex {
public:
  class Builder;

  int dim() const { return static_cast<int>(faces_.size()) - 1; }

  std::size_t count(int d) const {
    return (d < 0 || d > dim()) ? 0 : faces_[static_cast<std::size_t>(d)].size();
  }

  std::size_t total_cells() const {
    std::size_t t = 0;
    for (int d = 0; d <= dim(); ++d) t += count(d);
    return t;
  }

  const std::vector<std::uint32_t>& faces(int d, std::size_t i) const {
    return faces_.at(static_cast<std::size_t>(d)).at(i);
  }

  const std::string& label(int d, std::size_t i) const {
    return labels_.at(static_cast<std::size_t>(d)).at(i);
  }

  const std::vector<FaceTag>& tags(int d, std::size_t i) const {
    return tags_.at(static_cast<std::size_t>(d)).at(i);
  }

  /// Boundary operator C_d -> C_{d-1} over GF(2); repeated faces cancel.
  gf2::BitMatrix boundary_matrix(int d) const {
    if (d <= 0 || d > dim()) return gf2::BitMatrix(d == 0 ? 0 : count(d - 1), count(d));
    gf2::BitMatrix b(count(d - 1), count(d));
    for (std::size_t i = 0; i < count(d); ++i)
      for (auto f : faces(d, i)) b.flip(f, i);
    return b;
  }

  long long euler_characteristic() const {
    long long chi = 0;
    for (int d = 0; d <= dim(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(count(d));
    return chi;
  }

private:
  std::vector<std::vector<std::vector<std::uint32_t>>> faces_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<std::vector<FaceTag>>> tags_;
  friend class Builder;

public:
  class Builder {
  public:
    explicit Builder(int dim)
        : faces_(static_cast<std::size_t>(dim) + 1),
          labels_(static_cast<std::size_t>(dim) + 1),
          tags_(static_cast<std::size_t>(dim) + 1) {
      if (dim < 0) throw std::invalid_argument("complex dimension must be >= 0");
    }

    std::uint32_t add_cell(int d, std::vector<std::uint32_t> cell_faces, std::string label,
                           std::vector<FaceTag> cell_tags = {}) {
      auto dd = static_cast<std::size_t>(d);
      if (d < 0 || dd >= faces_.size()) throw std::invalid_argument("cell dimension out of range");
      if (d == 0 && !cell_faces.empty()) throw std::invalid_argument("vertices have no faces");
      if (d > 0)
        for (auto f : cell_faces)
          if (f >= faces_[dd - 1].size())
            throw std::invalid_argument("cell '" + label + "' references unknown face");
      faces_[dd].push_back(std::move(cell_faces));
      labels_[dd].push_back(std::move(label));
      tags_[dd].push_back(std::move(cell_tags));
      return static_cast<std::uint32_t>(faces_[dd].size() - 1);
    }

    CellComplex finish() {
      CellComplex c;
      c.faces_ = std::move(faces_);
      c.labels_ = std::move(labels_);
      c.tags_ = std::move(tags_);
      return c;
    }

  private:
    std::vector<std::vector<std::vector<std::uint32_t>>> faces_;
    std::vector<std::vector<std::string>> labels_;
    std::vector<std::vector<std::vector<FaceTag>>> tags_;
  };
};

class Subcomplex {
public:
  Subcomplex() = default;

  static Subcomplex empty(const CellComplex& parent) {
    Subcomplex s;
    s.parent_ = &parent;
    s.in_.resize(static_cast<std::size_t>(parent.dim()) + 1);
    for (int d = 0; d <= parent.dim(); ++d)
      s.in_[static_cast<std::size_t>(d)].assign(parent.count(d), 0);
    return s;
  }

  static Subcomplex full(const CellComplex& parent) {
    Subcomplex s = empty(parent);
    for (auto& layer : s.in_) std::fill(layer.begin(), layer.end(), 1);
    return s;
  }

  const CellComplex& parent() const {
    if (!parent_) throw std::logic_error("uninitialized subcomplex");
    return *parent_;
  }

  bool contains(int d, std::size_t i) const {
    if (d < 0 || d > parent().dim()) return false;
    return in_[static_cast<std::size_t>(d)][i] != 0;
  }

  void insert(int d, std::size_t i) { in_.at(static_cast<std::size_t>(d)).at(i) = 1; }

  std::size_t count(int d) const {
    const auto& layer = in_.at(static_cast<std::size_t>(d));
    return static_cast<std::size_t>(std::count(layer.begin(), layer.end(), char{1}));
  }

  std::size_t total_cells() const {
    std::size_t t = 0;
    for (int d = 0; d <= parent().dim(); ++d) t += count(d);
    return t;
  }

  bool is_empty() const { return total_cells() == 0; }

  std::vector<std::size_t> cells(int d) const {
    std::vector<std::size_t> out;
    const auto& layer = in_.at(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < layer.size(); ++i)
      if (layer[i]) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> top_cells() const { return cells(parent().dim()); }

  bool face_closed() const {
    for (int d = 1; d <= parent().dim(); ++d)
      for (auto i : cells(d))
        for (auto f : parent().faces(d, i))
          if (!contains(d - 1, f)) return false;
    return true;
  }

  friend Subcomplex set_union(const Subcomplex& a, const Subcomplex& b) {
    a.require_same_parent(b);
    Subcomplex out = a;
    for (std::size_t d = 0; d < out.in_.size(); ++d)
      for (std::size_t i = 0; i < out.in_[d].size(); ++i)
        out.in_[d][i] = out.in_[d][i] || b.in_[d][i];
    return out;
  }

  friend Subcomplex set_intersection(const Subcomplex& a, const Subcomplex& b) {
    a.require_same_parent(b);
    Subcomplex out = a;
    for (std::size_t d = 0; d < out.in_.size(); ++d)
      for (std::size_t i = 0; i < out.in_[d].size(); ++i)
        out.in_[d][i] = out.in_[d][i] && b.in_[d][i];
    return out;
  }

  friend bool operator==(const Subcomplex& a, const Subcomplex& b) {
    return a.parent_ == b.parent_ && a.in_ == b.in_;
  }

  void require_same_parent(const Subcomplex& other) const {
    if (parent_ != other.parent_) throw std::invalid_argument("subcomplexes of different parents");
  }

private:
  const CellComplex* parent_ = nullptr;
  std::vector<std::vector<char>> in_;
};

/// Smallest face-closed set containing the given top-dimensional cells.
inline Subcomplex closure(const CellComplex& parent, const std::vector<std::size_t>& top_cells) {
  Subcomplex s = Subcomplex::empty(parent);
  const int top = parent.dim();
  for (auto i : top_cells) {
    if (i >= parent.count(top))
      throw std::invalid_argument("closure: unknown top cell identifier " + std::to_string(i));
    s.insert(top, i);
  }
  for (int d = top; d >= 1; --d)
    for (auto i : s.cells(d))
      for (auto f : parent.faces(d, i)) s.insert(d - 1, f);
  return s;
}

/// Closure of arbitrary seed cells (one list per dimension).
inline Subcomplex closure_of(const CellComplex& parent,
                             const std::vector<std::pair<int, std::size_t>>& seeds) {
  Subcomplex s = Subcomplex::empty(parent);
  for (auto [d, i] : seeds) {
    if (d < 0 || d > parent.dim() || i >= parent.count(d))
      throw std::invalid_argument("closure_of: unknown cell");
    s.insert(d, i);
  }
  for (int d = parent.dim(); d >= 1; --d)
    for (auto i : s.cells(d))
      for (auto f : parent.faces(d, i)) s.insert(d - 1, f);
  return s;
}

/// Closure of the complementary set of top cells; requires s to be generated
/// by its own top cells.
inline Subcomplex complement_closure(const CellComplex& parent, const Subcomplex& s) {
  if (&s.parent() != &parent) throw std::invalid_argument("complement_closure: parent mismatch");
  if (!(closure(parent, s.top_cells()) == s))
    throw std::invalid_argument("complement_closure: subcomplex is not generated by top cells");
  std::vector<std::size_t> rest;
  const int top = parent.dim();
  for (std::size_t i = 0; i < parent.count(top); ++i)
    if (!s.contains(top, i)) rest.push_back(i);
  return closure(parent, rest);
}

struct HomologyResult {
  int degree = 0;
  std::size_t dimension = 0;
  std::vector<gf2::BitVector> cycle_reps;            // coordinates over `chain_cells`
  std::vector<std::size_t> chain_cells;              // parent cell indices in `degree`
};

namespace detail {

// Chain complex of the pair (dom, rel): cells of dom not in rel.
inline std::vector<std::size_t> pair_cells(const Subcomplex& dom, const Subcomplex& rel, int d) {
  std::vector<std::size_t> out;
  if (d < 0 || d > dom.parent().dim()) return out;
  for (auto i : dom.cells(d))
    if (!rel.contains(d, i)) out.push_back(i);
  return out;
}

inline gf2::BitMatrix pair_boundary(const Subcomplex& dom, const Subcomplex& rel, int d,
                                    const std::vector<std::size_t>& cells_d,
                                    const std::vector<std::size_t>& cells_dm1) {
  std::map<std::size_t, std::size_t> row_of;
  for (std::size_t r = 0; r < cells_dm1.size(); ++r) row_of[cells_dm1[r]] = r;
  gf2::BitMatrix b(cells_dm1.size(), cells_d.size());
  if (d <= 0) return b;
  const CellComplex& parent = dom.parent();
  for (std::size_t c = 0; c < cells_d.size(); ++c)
    for (auto f : parent.faces(d, cells_d[c])) {
      if (rel.contains(d - 1, f)) continue;  // quotient kills rel cells
      b.flip(row_of.at(f), c);
    }
  return b;
}

}  // namespace detail

/// Homology of the quotient chain complex C(dom)/C(dom `cap` rel) in one degree.
inline HomologyResult pair_homology(const Subcomplex& dom, const Subcomplex& rel, int degree) {
  dom.require_same_parent(rel);
  if (degree < 0 || degree > dom.parent().dim())
    throw std::invalid_argument("pair_homology: degree out of range");
  auto cells_d = detail::pair_cells(dom, rel, degree);
  auto cells_dm1 = detail::pair_cells(dom, rel, degree - 1);
  auto cells_dp1 = detail::pair_cells(dom, rel, degree + 1);
  auto b_d = detail::pair_boundary(dom, rel, degree, cells_d, cells_dm1);
  auto b_dp1 = detail::pair_boundary(dom, rel, degree + 1, cells_dp1, cells_d);

  auto kernel = gf2::kernel_basis(b_d);
  gf2::Span boundaries(cells_d.size());
  for (std::size_t c = 0; c < cells_dp1.size(); ++c) boundaries.add(b_dp1.col(c));

  HomologyResult res;
  res.degree = degree;
  res.chain_cells = cells_d;
  for (auto& v : kernel)
    if (boundaries.add(v)) res.cycle_reps.push_back(v);
  res.dimension = res.cycle_reps.size();
  return res;
}

inline HomologyResult homology(const Subcomplex& s, int degree) {
  return pair_homology(s, Subcomplex::empty(s.parent()), degree);
}

inline HomologyResult homology(const CellComplex& x, int degree) {
  return homology(Subcomplex::full(x), degree);
}

inline HomologyResult relative_homology(const CellComplex& x, const Subcomplex& a, int degree) {
  if (&a.parent() != &x) throw std::invalid_argument("relative_homology: pair parent mismatch");
  return pair_homology(Subcomplex::full(x), a, degree);
}

/// Is H_degree(s, s cap bdry) -> H_degree(x, bdry) onto? Decided by spanning:
/// the map is onto iff mapped source cycles together with target boundaries
/// span the full target cycle space.
inline bool induced_map_is_onto(const CellComplex& x, const Subcomplex& s, const Subcomplex& bdry,
                                int degree) {
  if (&s.parent() != &x || &bdry.parent() != &x)
    throw std::invalid_argument("induced_map_is_onto: parent mismatch");
  const Subcomplex whole = Subcomplex::full(x);
  auto target_d = detail::pair_cells(whole, bdry, degree);
  auto target_dm1 = detail::pair_cells(whole, bdry, degree - 1);
  auto target_dp1 = detail::pair_cells(whole, bdry, degree + 1);
  auto bt_d = detail::pair_boundary(whole, bdry, degree, target_d, target_dm1);
  auto bt_dp1 = detail::pair_boundary(whole, bdry, degree + 1, target_dp1, target_d);

  const std::size_t target_cycles = target_d.size() - gf2::rank(bt_d);

  gf2::Span span(target_d.size());
  for (std::size_t c = 0; c < target_dp1.size(); ++c) span.add(bt_dp1.col(c));

  std::map<std::size_t, std::size_t> target_pos;
  for (std::size_t i = 0; i < target_d.size(); ++i) target_pos[target_d[i]] = i;

  auto source_d = detail::pair_cells(s, bdry, degree);
  auto source_dm1 = detail::pair_cells(s, bdry, degree - 1);
  auto bs_d = detail::pair_boundary(s, bdry, degree, source_d, source_dm1);
  for (const auto& v : gf2::kernel_basis(bs_d)) {
    gf2::BitVector mapped(target_d.size());
    for (std::size_t c = 0; c < source_d.size(); ++c)
      if (v.get(c)) mapped.set(target_pos.at(source_d[c]), true);
    span.add(mapped);
  }
  return span.rank() == target_cycles;
}

/// Connected components of the closure, via union-find over all member cells.
inline std::size_t connected_components(const Subcomplex& s) {
  const CellComplex& parent = s.parent();
  std::vector<std::size_t> offset(static_cast<std::size_t>(parent.dim()) + 2, 0);
  for (int d = 0; d <= parent.dim(); ++d)
    offset[static_cast<std::size_t>(d) + 1] = offset[static_cast<std::size_t>(d)] + parent.count(d);
  std::vector<std::size_t> up(offset.back());
  std::iota(up.begin(), up.end(), 0);
  auto find = [&](std::size_t a) {
    while (up[a] != a) a = up[a] = up[up[a]];
    return a;
  };
  for (int d = 1; d <= parent.dim(); ++d)
    for (auto i : s.cells(d)) {
      std::size_t me = offset[static_cast<std::size_t>(d)] + i;
      for (auto f : parent.faces(d, i)) {
        std::size_t fe = offset[static_cast<std::size_t>(d) - 1] + f;
        up[find(me)] = find(fe);
      }
    }
  std::size_t components = 0;
  for (int d = 0; d <= parent.dim(); ++d)
    for (auto i : s.cells(d))
      if (find(offset[static_cast<std::size_t>(d)] + i) == offset[static_cast<std::size_t>(d)] + i)
        ++components;
  return components;
}

inline bool connected(const Subcomplex& s) { return connected_components(s) == 1; }

namespace detail {

struct UnionFind {
  std::vector<std::size_t> up;
  explicit UnionFind(std::size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  std::size_t find(std::size_t a) {
    while (up[a] != a) a = up[a] = up[up[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { up[find(a)] = find(b); }
  std::size_t roots(std::size_t n) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (find(i) == i) ++r;
    return r;
  }
};

}  // namespace detail

/// Top cells chained through shared codimension-1 faces form one component.
inline bool chain_connected(const CellComplex& x, const std::vector<std::size_t>& tops) {
  if (tops.empty()) return false;
  detail::UnionFind uf(tops.size());
  std::map<std::uint32_t, std::vector<std::size_t>> by_face;
  for (std::size_t i = 0; i < tops.size(); ++i)
    for (auto f : x.faces(x.dim(), tops[i])) by_face[f].push_back(i);
  for (const auto& [f, incident] : by_face)
    for (std::size_t k = 1; k < incident.size(); ++k) uf.unite(incident[0], incident[k]);
  return uf.roots(tops.size()) == 1;
}

/// Link condition: around every cell of codimension >= 2 in the closure, the
/// member top cells form a single fan chained through codimension-1 faces
/// containing that cell. Together with chain connectivity this makes the
/// union of closed top cells a manifold piece rather than a pinched complex.
inline bool links_connected(const CellComplex& x, const std::vector<std::size_t>& tops) {
  const int d = x.dim();
  if (d < 2) return true;
  std::vector<Subcomplex> member;
  member.reserve(tops.size());
  for (auto t : tops) member.push_back(closure(x, {t}));
  std::map<std::uint32_t, Subcomplex> face_closure;
  for (auto t : tops)
    for (auto f : x.faces(d, t))
      if (!face_closure.count(f)) face_closure.emplace(f, closure_of(x, {{d - 1, f}}));
  for (int q = 0; q <= d - 2; ++q) {
    for (std::size_t sigma = 0; sigma < x.count(q); ++sigma) {
      std::vector<std::size_t> star;
      for (std::size_t i = 0; i < tops.size(); ++i)
        if (member[i].contains(q, sigma)) star.push_back(i);
      if (star.size() <= 1) continue;
      detail::UnionFind uf(star.size());
      std::map<std::uint32_t, std::vector<std::size_t>> by_face;
      for (std::size_t k = 0; k < star.size(); ++k)
        for (auto f : x.faces(d, tops[star[k]]))
          if (face_closure.at(f).contains(q, sigma)) by_face[f].push_back(k);
      for (const auto& [f, incident] : by_face)
        for (std::size_t k = 1; k < incident.size(); ++k) uf.unite(incident[0], incident[k]);
      if (uf.roots(star.size()) != 1) return false;
    }
  }
  return true;
}

/// A nonempty union of closed top cells realizable as a connected
/// codimension-zero submanifold.
inline bool is_manifold_piece(const CellComplex& x, const std::vector<std::size_t>& tops) {
  return !tops.empty() && chain_connected(x, tops) && links_connected(x, tops);
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

struct GridCell {
  std::uint32_t extent_mask = 0;          // bit a set: unit extent along axis a
  std::array<std::int8_t, 4> coord{};     // lower corner
  friend auto operator<=>(const GridCell&, const GridCell&) = default;
};

struct CubeGrid {
  CellComplex complex;
  int d = 0;
  int n = 0;
  bool torus = false;
  std::vector<std::vector<GridCell>> geom;  // per dim, aligned with cell indices

  std::uint32_t index_of(int dim, const GridCell& g) const {
    const auto& layer = geom.at(static_cast<std::size_t>(dim));
    auto it = std::lower_bound(layer.begin(), layer.end(), g);
    if (it == layer.end() || !(*it == g)) throw std::logic_error("grid cell lookup failed");
    return static_cast<std::uint32_t>(it - layer.begin());
  }
};

namespace detail {

inline CubeGrid build_grid(int d, int n, bool torus, std::size_t cell_cap) {
  if (d < 1 || d > 4) throw std::invalid_argument("grid dimension must be in 1..4");
  if (n < 1) throw std::invalid_argument("grid subdivision must be >= 1");
  {
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) {
      total *= static_cast<std::size_t>(torus ? 2 * n : 2 * n + 1);
      if (total > cell_cap)
        throw std::invalid_argument("grid exceeds cell count cap of " + std::to_string(cell_cap));
    }
  }
  CubeGrid grid;
  grid.d = d;
  grid.n = n;
  grid.torus = torus;
  grid.geom.resize(static_cast<std::size_t>(d) + 1);

  // Enumerate cells of each dimension in sorted GridCell order.
  for (int k = 0; k <= d; ++k) {
    auto& layer = grid.geom[static_cast<std::size_t>(k)];
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      if (std::popcount(mask) != k) continue;
      std::array<std::int8_t, 4> coord{};
      // odometer over per-axis ranges
      auto limit = [&](int a) {
        bool extent = (mask >> a) & 1;
        return torus ? n : (extent ? n : n + 1);
      };
      for (;;) {
        layer.push_back(GridCell{mask, coord});
        int a = d - 1;
        while (a >= 0) {
          if (++coord[static_cast<std::size_t>(a)] < limit(a)) break;
          coord[static_cast<std::size_t>(a)] = 0;
          --a;
        }
        if (a < 0) break;
      }
    }
    std::sort(layer.begin(), layer.end());
  }

  CellComplex::Builder builder(d);
  for (int k = 0; k <= d; ++k) {
    for (const auto& cell : grid.geom[static_cast<std::size_t>(k)]) {
      std::vector<std::uint32_t> faces;
      for (int a = 0; a < d && k > 0; ++a) {
        if (!((cell.extent_mask >> a) & 1)) continue;
        for (int end = 0; end < 2; ++end) {
          GridCell f = cell;
          f.extent_mask &= ~(1u << a);
          f.coord[static_cast<std::size_t>(a)] =
              static_cast<std::int8_t>(cell.coord[static_cast<std::size_t>(a)] + end);
          if (torus && f.coord[static_cast<std::size_t>(a)] == n) f.coord[static_cast<std::size_t>(a)] = 0;
          faces.push_back(grid.index_of(k - 1, f));
        }
      }
      std::string label = torus ? "t(" : "(";
      for (int a = 0; a < d; ++a) {
        if (a) label += ',';
        int c = cell.coord[static_cast<std::size_t>(a)];
        if ((cell.extent_mask >> a) & 1)
          label += std::to_string(c) + "-" + std::to_string(c + 1);
        else
          label += std::to_string(c);
      }
      label += ')';
      std::vector<FaceTag> tags;
      if (!torus)
        for (int a = 0; a < d; ++a) {
          if ((cell.extent_mask >> a) & 1) continue;
          if (cell.coord[static_cast<std::size_t>(a)] == 0) tags.push_back({a, -1});
          if (cell.coord[static_cast<std::size_t>(a)] == n) tags.push_back({a, +1});
        }
      builder.add_cell(k, std::move(faces), std::move(label), std::move(tags));
    }
  }
  grid.complex = builder.finish();
  return grid;
}

}  // namespace detail

/// n-subdivided d-cube with outer faces tagged by (axis, side).
inline CubeGrid build_cube_grid(int d, int n, std::size_t cell_cap = 500000) {
  return detail::build_grid(d, n, false, cell_cap);
}

/// 2-torus as an n x n grid with identified opposite sides.
inline CubeGrid build_torus_grid(int n, std::size_t cell_cap = 500000) {
  if (n < 3) throw std::invalid_argument("torus grid needs n >= 3 to be a regular complex");
  return detail::build_grid(2, n, true, cell_cap);
}

/// All cells of the grid lying in the outer face (axis, side).
inline Subcomplex cube_face(const CubeGrid& grid, int axis, int side) {
  if (grid.torus) throw std::invalid_argument("torus has no outer faces");
  if (axis < 0 || axis >= grid.d || (side != -1 && side != 1))
    throw std::invalid_argument("cube_face: bad axis/side");
  Subcomplex s = Subcomplex::empty(grid.complex);
  for (int k = 0; k <= grid.d; ++k)
    for (std::size_t i = 0; i < grid.complex.count(k); ++i)
      for (const auto& tag : grid.complex.tags(k, i))
        if (tag.axis == axis && tag.side == side) s.insert(k, i);
  return s;
}

/// Union of the two opposite outer faces for every axis in `axes`.
inline Subcomplex cube_boundary_pieces(const CubeGrid& grid, const std::vector<int>& axes) {
  Subcomplex s = Subcomplex::empty(grid.complex);
  for (int a : axes) {
    s = set_union(s, cube_face(grid, a, -1));
    s = set_union(s, cube_face(grid, a, +1));
  }
  return s;
}

/// Minimal 6-vertex triangulation of the projective plane.
inline CellComplex build_rp2() {
  CellComplex::Builder b(2);
  for (int v = 1; v <= 6; ++v) b.add_cell(0, {}, "v" + std::to_string(v));
  std::map<std::pair<int, int>, std::uint32_t> edge;
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j)
      edge[{i, j}] = b.add_cell(1, {static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1)},
                                "e" + std::to_string(i) + std::to_string(j));
  const int tri[10][3] = {{1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 2, 6},
                          {2, 3, 5}, {3, 4, 6}, {2, 4, 5}, {3, 5, 6}, {2, 4, 6}};
  for (const auto& t : tri) {
    int v0 = t[0], v1 = t[1], v2 = t[2];
    auto e01 = edge.at({std::min(v0, v1), std::max(v0, v1)});
    auto e02 = edge.at({std::min(v0, v2), std::max(v0, v2)});
    auto e12 = edge.at({std::min(v1, v2), std::max(v1, v2)});
    b.add_cell(2, {e01, e02, e12},
               "t" + std::to_string(v0) + std::to_string(v1) + std::to_string(v2));
  }
  return b.finish();
}

/// Octahedral 2-sphere: vertices are +-e1, +-e2, +-e3.
inline CellComplex build_s2() {
  CellComplex::Builder b(2);
  // vertex index: axis*2 + (sign<0), labels like "+1", "-3"
  auto vname = [](int axis, int sign) {
    return std::string(sign > 0 ? "+" : "-") + std::to_string(axis + 1);
  };
  for (int axis = 0; axis < 3; ++axis)
    for (int s = 0; s < 2; ++s) b.add_cell(0, {}, vname(axis, s == 0 ? +1 : -1));
  auto vid = [](int axis, int sign) {
    return static_cast<std::uint32_t>(axis * 2 + (sign < 0 ? 1 : 0));
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> edge;
  for (int a = 0; a < 3; ++a)
    for (int sa = +1; sa >= -1; sa -= 2)
      for (int c = a + 1; c < 3; ++c)
        for (int sc = +1; sc >= -1; sc -= 2) {
          auto u = vid(a, sa), v = vid(c, sc);
          edge[{u, v}] = b.add_cell(1, {u, v}, vname(a, sa) + vname(c, sc));
        }
  for (int s1 = +1; s1 >= -1; s1 -= 2)
    for (int s2 = +1; s2 >= -1; s2 -= 2)
      for (int s3 = +1; s3 >= -1; s3 -= 2) {
        auto u = vid(0, s1), v = vid(1, s2), w = vid(2, s3);
        b.add_cell(2, {edge.at({u, v}), edge.at({u, w}), edge.at({v, w})},
                   vname(0, s1) + vname(1, s2) + vname(2, s3));
      }
  return b.finish();
}

namespace detail {

// Cell of the antipodal quotient of the 16-cell boundary: support set plus
// signs, canonicalized so the lowest supported axis carries '+'.
struct QuotCell {
  std::uint8_t support = 0;  // subset of {0,1,2,3}
  std::uint8_t signs = 0;    // bit a set: axis a negative (only where supported)
  friend auto operator<=>(const QuotCell&, const QuotCell&) = default;
};

inline QuotCell canonical(QuotCell c) {
  int low = std::countr_zero(static_cast<unsigned>(c.support));
  if ((c.signs >> low) & 1) c.signs = static_cast<std::uint8_t>((~c.signs) & c.support);
  return c;
}

}  // namespace detail

/// RP^3 as the antipodal quotient of the boundary of the 4-dimensional
/// cross-polytope: a regular CW complex with 4/12/16/8 cells. Small enough
/// that complementary-pair sweeps over top cells are exhaustive.
inline CellComplex build_rp3() {
  using detail::QuotCell;
  std::array<std::vector<QuotCell>, 4> layers;
  for (unsigned support = 1; support < 16; ++support) {
    int k = std::popcount(support) - 1;
    for (unsigned signs = 0; signs < 16; ++signs) {
      if (signs & ~support) continue;
      QuotCell c{static_cast<std::uint8_t>(support), static_cast<std::uint8_t>(signs)};
      if (!(detail::canonical(c) == c)) continue;
      layers[static_cast<std::size_t>(k)].push_back(c);
    }
  }
  for (auto& layer : layers) std::sort(layer.begin(), layer.end());

  auto index_of = [&](int k, QuotCell c) {
    const auto& layer = layers[static_cast<std::size_t>(k)];
    auto it = std::lower_bound(layer.begin(), layer.end(), c);
    if (it == layer.end() || !(*it == c)) throw std::logic_error("rp3 cell lookup failed");
    return static_cast<std::uint32_t>(it - layer.begin());
  };
  auto name = [](QuotCell c) {
    std::string s = "[";
    for (int a = 0; a < 4; ++a)
      if ((c.support >> a) & 1) s += std::string((c.signs >> a) & 1 ? "-" : "+") + std::to_string(a);
    return s + "]";
  };

  CellComplex::Builder b(3);
  for (int k = 0; k <= 3; ++k)
    for (const auto& cell : layers[static_cast<std::size_t>(k)]) {
      std::vector<std::uint32_t> faces;
      if (k > 0)
        for (int a = 0; a < 4; ++a) {
          if (!((cell.support >> a) & 1)) continue;
          QuotCell f = cell;
          f.support = static_cast<std::uint8_t>(f.support & ~(1u << a));
          f.signs = static_cast<std::uint8_t>(f.signs & f.support);
          faces.push_back(index_of(k - 1, detail::canonical(f)));
        }
      b.add_cell(k, std::move(faces), name(cell));
    }
  return b.finish();
}

// ---------------------------------------------------------------------------
// Symmetries
// ---------------------------------------------------------------------------

/// A cell-wise isomorphism of a complex to itself: perm[d][i] is the image.
struct CellMap {
  std::vector<std::vector<std::uint32_t>> perm;
  const std::vector<std::uint32_t>& top(int dim) const { return perm.at(static_cast<std::size_t>(dim)); }
};

/// Automorphisms found by brute force over vertex permutations. Requires
/// every cell to be determined by its vertex set (true for the simplicial
/// complexes here).
inline std::vector<CellMap> automorphisms(const CellComplex& x) {
  const int dim = x.dim();
  const std::size_t nv = x.count(0);
  // vertex set of each cell
  std::vector<std::vector<std::vector<std::uint32_t>>> verts(static_cast<std::size_t>(dim) + 1);
  std::map<std::pair<int, std::vector<std::uint32_t>>, std::uint32_t> cell_of;
  for (int d = 0; d <= dim; ++d) {
    verts[static_cast<std::size_t>(d)].resize(x.count(d));
    for (std::size_t i = 0; i < x.count(d); ++i) {
      std::vector<std::uint32_t> vs;
      if (d == 0)
        vs = {static_cast<std::uint32_t>(i)};
      else {
        for (auto f : x.faces(d, i))
          for (auto v : verts[static_cast<std::size_t>(d) - 1][f]) vs.push_back(v);
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      }
      verts[static_cast<std::size_t>(d)][i] = vs;
      auto key = std::make_pair(d, vs);
      if (cell_of.count(key))
        throw std::invalid_argument("automorphisms: cells are not determined by vertex sets");
      cell_of[key] = static_cast<std::uint32_t>(i);
    }
  }
  std::vector<std::uint32_t> p(nv);
  std::iota(p.begin(), p.end(), 0);
  std::vector<CellMap> out;
  do {
    CellMap m;
    m.perm.resize(static_cast<std::size_t>(dim) + 1);
    bool ok = true;
    for (int d = 0; d <= dim && ok; ++d) {
      m.perm[static_cast<std::size_t>(d)].resize(x.count(d));
      for (std::size_t i = 0; i < x.count(d) && ok; ++i) {
        std::vector<std::uint32_t> image;
        for (auto v : verts[static_cast<std::size_t>(d)][i]) image.push_back(p[v]);
        std::sort(image.begin(), image.end());
        auto it = cell_of.find(std::make_pair(d, image));
        if (it == cell_of.end())
          ok = false;
        else
          m.perm[static_cast<std::size_t>(d)][i] = it->second;
      }
    }
    if (ok) out.push_back(std::move(m));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// One hyperoctahedral symmetry of a cubical grid.
struct GridSymmetry {
  CellMap map;
  std::array<int, 4> axis_perm{};   // image axis of each axis
  std::array<bool, 4> flip{};
};

inline std::vector<GridSymmetry> grid_symmetries(const CubeGrid& grid) {
  const int d = grid.d, n = grid.n;
  std::vector<int> axes(static_cast<std::size_t>(d));
  std::iota(axes.begin(), axes.end(), 0);
  std::vector<GridSymmetry> out;
  std::vector<int> perm = axes;
  do {
    for (std::uint32_t flips = 0; flips < (1u << d); ++flips) {
      GridSymmetry sym;
      for (int a = 0; a < d; ++a) {
        sym.axis_perm[static_cast<std::size_t>(a)] = perm[static_cast<std::size_t>(a)];
        sym.flip[static_cast<std::size_t>(a)] = (flips >> a) & 1;
      }
      sym.map.perm.resize(static_cast<std::size_t>(d) + 1);
      for (int k = 0; k <= d; ++k) {
        const auto& layer = grid.geom[static_cast<std::size_t>(k)];
        sym.map.perm[static_cast<std::size_t>(k)].resize(layer.size());
        for (std::size_t i = 0; i < layer.size(); ++i) {
          const GridCell& cell = layer[i];
          GridCell image;
          for (int a = 0; a < d; ++a) {
            int ia = perm[static_cast<std::size_t>(a)];
            bool extent = (cell.extent_mask >> a) & 1;
            if (extent) image.extent_mask |= 1u << ia;
            int c = cell.coord[static_cast<std::size_t>(a)];
            int mapped = ((flips >> a) & 1) ? (extent ? n - 1 - c : n - c) : c;
            image.coord[static_cast<std::size_t>(ia)] = static_cast<std::int8_t>(mapped);
          }
          sym.map.perm[static_cast<std::size_t>(k)][i] = grid.index_of(k, image);
        }
      }
      out.push_back(std::move(sym));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const CellComplex& x) {
  nlohmann::json j;
  j["schema"] = 1;
  j["dim"] = x.dim();
  nlohmann::json cells = nlohmann::json::array();
  nlohmann::json faces = nlohmann::json::array();
  nlohmann::json labels = nlohmann::json::array();
  nlohmann::json tags = nlohmann::json::array();
  for (int d = 0; d <= x.dim(); ++d) {
    cells.push_back(x.count(d));
    nlohmann::json fd = nlohmann::json::array(), ld = nlohmann::json::array(),
                   td = nlohmann::json::array();
    for (std::size_t i = 0; i < x.count(d); ++i) {
      fd.push_back(x.faces(d, i));
      ld.push_back(x.label(d, i));
      nlohmann::json ct = nlohmann::json::array();
      for (const auto& t : x.tags(d, i)) ct.push_back({t.axis, t.side});
      td.push_back(ct);
    }
    faces.push_back(fd);
    labels.push_back(ld);
    tags.push_back(td);
  }
  j["cells"] = cells;
  j["boundary"] = faces;
  j["labels"] = labels;
  j["face_tags"] = tags;
  return j;
}

inline CellComplex complex_from_json(const nlohmann::json& j) {
  int dim = j.at("dim").get<int>();
  CellComplex::Builder b(dim);
  for (int d = 0; d <= dim; ++d) {
    const auto& fd = j.at("boundary").at(static_cast<std::size_t>(d));
    const auto& ld = j.at("labels").at(static_cast<std::size_t>(d));
    const auto& td = j.at("face_tags").at(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < fd.size(); ++i) {
      std::vector<FaceTag> tags;
      for (const auto& t : td.at(i)) tags.push_back({t.at(0).get<int>(), t.at(1).get<int>()});
      b.add_cell(d, fd.at(i).get<std::vector<std::uint32_t>>(), ld.at(i).get<std::string>(),
                 std::move(tags));
    }
  }
  return b.finish();
}

}  // namespace arbiterlab::complexes
