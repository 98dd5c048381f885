#pragma once

// Arbiter and multiarbiter value functions on finite complexes, exhaustive
// axiom checks over random decompositions, and the search for all
// axiom-consistent assignments on a complex.

#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "arbiterlab/complexes.hpp"
#include "arbiterlab/generic_cells.hpp"
#include "arbiterlab/parallel.hpp"
#include "arbiterlab/rng.hpp"

namespace arbiterlab::arbiters {

struct ArbiterValue {
  std::uint8_t bit = 0;
  friend bool operator==(const ArbiterValue&, const ArbiterValue&) = default;
};

struct MultiArbiterValue {
  int level = 0;
  friend bool operator==(const MultiArbiterValue&, const MultiArbiterValue&) = default;
};

struct AxiomReport {
  std::string axiom;
  std::string domain;
  std::size_t instances = 0;
  std::vector<nlohmann::json> violations;

  bool pass() const { return violations.empty(); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["axiom"] = axiom;
    j["domain"] = domain;
    j["instances"] = instances;
    j["violations"] = violations;
    return j;
  }
};

inline std::string fnv_hash_hex(const std::vector<int>& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (int v : data) {
    h ^= static_cast<std::uint64_t>(v) + 0x100u;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Value 1 iff the piece carries the essential 1-cycle of the projective
/// plane.
inline ArbiterValue arbiter_h_rp2(const complexes::CellComplex& rp2, const complexes::Subcomplex& m) {
  if (&m.parent() != &rp2) throw std::invalid_argument("arbiter_h_rp2: subcomplex of another complex");
  if (!(complexes::closure(rp2, m.top_cells()) == m))
    throw std::invalid_argument("arbiter_h_rp2: subcomplex must be generated by top cells");
  bool onto = complexes::induced_map_is_onto(rp2, m, complexes::Subcomplex::empty(rp2), 1);
  return ArbiterValue{static_cast<std::uint8_t>(onto ? 1 : 0)};
}

/// Assignment of colors 1..k to the top cells of a cubical grid.
struct KDecomposition {
  const complexes::CellComplex* parent = nullptr;
  std::vector<int> color;
  int k = 0;

  void validate() const {
    if (!parent) throw std::invalid_argument("decomposition without parent");
    if (color.size() != parent->count(parent->dim()))
      throw std::invalid_argument("decomposition color count mismatch");
    for (int c : color)
      if (c < 1 || c > k) throw std::invalid_argument("color out of range");
  }
};

/// Evaluates the homological k-arbiter of the d-cube. Colorings live on the
/// cubical grid; homology is computed on the generic-cell realization (dual
/// blocks of a triangulation of the cell centers), because closures of the
/// cubical cells themselves pinch at diagonals and fail the duality axiom.
class CubeArbiter {
public:
  CubeArbiter(int d, int n)
      : grid_(complexes::build_cube_grid(d, n)),
        dual_(generic_cells::build_dual_grid(d, n)) {
    // grid top cells and dual sites are both in lexicographic coordinate order
    const auto& tops = grid_.geom[static_cast<std::size_t>(d)];
    for (std::size_t i = 0; i < tops.size(); ++i) {
      std::array<int, 4> c{};
      for (int a = 0; a < d; ++a) c[static_cast<std::size_t>(a)] = tops[i].coord[static_cast<std::size_t>(a)];
      if (generic_cells::detail::site_id(d, n, c) != i)
        throw std::logic_error("grid cell order does not match site order");
    }
  }

  int d() const { return grid_.d; }
  int n() const { return grid_.n; }
  const complexes::CubeGrid& grid() const { return grid_; }
  const generic_cells::DualGrid& dual() const { return dual_; }

  KDecomposition decomposition(std::vector<int> color, int k) const {
    KDecomposition dec{&grid_.complex, std::move(color), k};
    dec.validate();
    return dec;
  }

  /// f(|S|) of the power-set multiarbiter; S is a set of colors, the i-th
  /// boundary piece is the pair of opposite faces along coordinate i-1.
  ArbiterValue value(const KDecomposition& dec, const std::vector<int>& S,
                     const generic_cells::DualGrid* realization = nullptr,
                     const std::vector<int>* color_override = nullptr) const {
    dec.validate();
    if (dec.parent != &grid_.complex) throw std::invalid_argument("decomposition of another grid");
    if (S.empty() || S.size() >= static_cast<std::size_t>(dec.k))
      throw std::invalid_argument("subset must be proper and nonempty");
    std::set<int> subset(S.begin(), S.end());
    for (int c : subset)
      if (c < 1 || c > dec.k) throw std::invalid_argument("subset color out of range");

    const generic_cells::DualGrid& dual = realization ? *realization : dual_;
    const std::vector<int>& color = color_override ? *color_override : dec.color;
    std::vector<char> in_s(dual.sites(), 0);
    for (std::size_t x = 0; x < dual.sites(); ++x)
      if (subset.count(color[x])) in_s[x] = 1;
    auto piece = generic_cells::piece_of_sites(dual, in_s);
    std::vector<int> axes;
    for (int c : subset) axes.push_back(c - 1);
    auto bdry = dual.boundary_piece(axes);
    bool onto = complexes::induced_map_is_onto(dual.dual, piece, bdry,
                                               static_cast<int>(subset.size()));
    return ArbiterValue{static_cast<std::uint8_t>(onto ? 1 : 0)};
  }

  /// Independent route for singletons: a chain of facet-adjacent cells of
  /// the color joining the two opposite faces of its axis.
  bool chain_crossing(const KDecomposition& dec, int color, int axis) const {
    complexes::detail::UnionFind uf(dual_.sites());
    for (auto [i, j] : dual_.site_adjacency)
      if (dec.color[i] == color && dec.color[j] == color) uf.unite(i, j);
    std::map<std::size_t, std::array<bool, 2>> roots;
    for (std::size_t x = 0; x < dual_.sites(); ++x) {
      if (dec.color[x] != color) continue;
      auto r = uf.find(x);
      if (dual_.site_on_face(x, axis, -1)) roots[r][0] = true;
      if (dual_.site_on_face(x, axis, +1)) roots[r][1] = true;
    }
    for (const auto& [r, touched] : roots)
      if (touched[0] && touched[1]) return true;
    return false;
  }

private:
  complexes::CubeGrid grid_;
  generic_cells::DualGrid dual_;
};

namespace detail {

inline std::vector<std::vector<int>> proper_subsets(int k) {
  std::vector<std::vector<int>> out;
  for (int m = 1; m + 1 < (1 << k); ++m) {
    std::vector<int> s;
    for (int i = 0; i < k; ++i)
      if ((m >> i) & 1) s.push_back(i + 1);
    out.push_back(std::move(s));
  }
  return out;
}

inline int subset_mask(const std::vector<int>& s) {
  int m = 0;
  for (int c : s) m |= 1 << (c - 1);
  return m;
}

inline std::string subset_str(int mask, int k) {
  std::string out = "{";
  for (int i = 0; i < k; ++i)
    if ((mask >> i) & 1) {
      if (out.size() > 1) out += ',';
      out += std::to_string(i + 1);
    }
  return out + "}";
}

}  // namespace detail

struct PowerAxiomOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t symmetry_samples = 20;  // colorings swept against the full group
};

/// Verifies the power-set multiarbiter axioms on random colorings of the
/// n^d grid with k = d colors. Axiom 5 is checked as equivariance: the value
/// on the transformed decomposition, evaluated in the correspondingly
/// transformed generic realization, matches the original.
inline std::vector<AxiomReport> check_power_axioms(int d, int n, int k, const PowerAxiomOptions& opt) {
  if (k != d) throw std::invalid_argument("the cube multiarbiter needs k = d");
  if (opt.samples < 1) throw std::invalid_argument("need at least one sample");
  CubeArbiter arb(d, n);
  const auto subsets = detail::proper_subsets(k);
  const int full = (1 << k) - 1;
  const std::string domain =
      "cube d=" + std::to_string(d) + " n=" + std::to_string(n) + " k=" + std::to_string(k);

  // transformed generic realizations for the symmetry sweep
  std::vector<generic_cells::HyperMap> group;
  {
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (std::uint32_t flips = 0; flips < (1u << d); ++flips) {
        generic_cells::HyperMap g;
        g.d = d;
        g.n = n;
        for (int a = 0; a < d; ++a) {
          g.axis_perm[static_cast<std::size_t>(a)] = perm[static_cast<std::size_t>(a)];
          g.flip[static_cast<std::size_t>(a)] = (flips >> a) & 1;
        }
        group.push_back(g);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  // Realization transported along g: pulling the evaluation back through
  // g cancels exactly when the microstructure was built with g^{-1}.
  std::vector<generic_cells::DualGrid> realizations;
  if (opt.symmetry_samples > 0) {
    realizations.reserve(group.size());
    for (const auto& g : group)
      realizations.push_back(generic_cells::build_dual_grid(d, n, g.inverse()));
  }

  struct SampleResult {
    std::array<std::size_t, 6> instances{};
    std::vector<nlohmann::json> violations[6];
  };
  std::vector<SampleResult> results(opt.samples);

  parallel::parallel_for(opt.samples, opt.threads, [&](std::size_t idx) {
    rng::Rng rng(rng::derive(opt.seed, idx, 0xa7));
    std::vector<int> color(arb.dual().sites());
    for (auto& c : color) c = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
    auto dec = arb.decomposition(color, k);
    const std::string hash = fnv_hash_hex(color);
    SampleResult& res = results[idx];

    std::map<int, bool> f;
    for (const auto& s : subsets) f[detail::subset_mask(s)] = arb.value(dec, s).bit != 0;

    auto violation = [&](int axiom, nlohmann::json extra) {
      extra["decomposition_hash"] = hash;
      res.violations[axiom].push_back(std::move(extra));
    };

    // (1) f(|S|) + f(|. S|) = 1
    for (const auto& [m, v] : f) {
      ++res.instances[1];
      if (v == f.at(full ^ m))
        violation(1, {{"subset", detail::subset_str(m, k)},
                      {"lhs", static_cast<int>(v)},
                      {"rhs", static_cast<int>(f.at(full ^ m))}});
    }
    // (2) f(|S1|) = f(|S2|) = 1 implies f(|S1 cap S2|) = 1
    for (const auto& [m1, v1] : f)
      for (const auto& [m2, v2] : f) {
        int mi = m1 & m2;
        if (mi == 0 || mi == full || !v1 || !v2) continue;
        ++res.instances[2];
        if (!f.at(mi))
          violation(2, {{"subset", detail::subset_str(m1, k) + " & " + detail::subset_str(m2, k)},
                        {"lhs", 1},
                        {"rhs", 0}});
      }
    // (3) S subset of T with f(|T|) = 1 implies f(|S|) + f(|T - S|) >= 1
    for (const auto& [mt, vt] : f) {
      if (!vt) continue;
      for (int ms = (mt - 1) & mt; ms > 0; ms = (ms - 1) & mt) {
        int mr = mt & ~ms;
        if (mr == 0) continue;
        ++res.instances[3];
        if (!f.at(ms) && !f.at(mr))
          violation(3, {{"subset", detail::subset_str(ms, k) + " in " + detail::subset_str(mt, k)},
                        {"lhs", 0},
                        {"rhs", 0}});
      }
    }
    // (4) enlarging the classes of S preserves f = 1
    {
      const auto& s = subsets[rng.next_below(subsets.size())];
      int ms = detail::subset_mask(s);
      std::vector<int> grown = color;
      std::size_t swaps = 1 + rng.next_below(std::max<std::size_t>(1, color.size() / 8));
      for (std::size_t w = 0; w < swaps; ++w) {
        std::size_t cell = rng.next_below(grown.size());
        if ((ms >> (grown[cell] - 1)) & 1) continue;  // already in |S|
        grown[cell] = s[rng.next_below(s.size())];
      }
      auto dec2 = arb.decomposition(grown, k);
      ++res.instances[4];
      if (f.at(ms) && arb.value(dec2, s).bit == 0)
        violation(4, {{"subset", detail::subset_str(ms, k)},
                      {"lhs", 1},
                      {"rhs", 0},
                      {"grown_hash", fnv_hash_hex(grown)}});
    }
    // (5) equivariance under the hyperoctahedral group, with the generic
    // realization transported along the symmetry
    if (idx < opt.symmetry_samples) {
      for (std::size_t gi = 0; gi < group.size(); ++gi) {
        const auto& g = group[gi];
        // transformed coloring: cell g(x) gets the color of x, colors renamed
        // by the axis permutation
        std::vector<int> tcolor(color.size());
        for (std::size_t x = 0; x < color.size(); ++x) {
          std::array<int, 4> c{};
          std::size_t rest = x;
          for (int a = d - 1; a >= 0; --a) {
            c[static_cast<std::size_t>(a)] = static_cast<int>(rest % static_cast<std::size_t>(n));
            rest /= static_cast<std::size_t>(n);
          }
          auto image = g.apply(c);
          tcolor[generic_cells::detail::site_id(d, n, image)] =
              g.axis_perm[static_cast<std::size_t>(color[x] - 1)] + 1;
        }
        for (const auto& s : subsets) {
          std::vector<int> ts;
          for (int c : s) ts.push_back(g.axis_perm[static_cast<std::size_t>(c - 1)] + 1);
          std::sort(ts.begin(), ts.end());
          ++res.instances[5];
          bool direct = f.at(detail::subset_mask(s));
          auto tdec = arb.decomposition(tcolor, k);
          bool transported = arb.value(tdec, ts, &realizations[gi], &tcolor).bit != 0;
          if (direct != transported)
            violation(5, {{"subset", detail::subset_str(detail::subset_mask(s), k)},
                          {"lhs", static_cast<int>(direct)},
                          {"rhs", static_cast<int>(transported)},
                          {"group_element", gi}});
        }
      }
    }
  });

  std::vector<AxiomReport> reports;
  for (int axiom = 1; axiom <= 5; ++axiom) {
    AxiomReport rep;
    rep.axiom = "B1." + std::to_string(axiom);
    rep.domain = domain;
    for (const auto& r : results) {
      rep.instances += r.instances[axiom];
      for (const auto& v : r.violations[axiom]) rep.violations.push_back(v);
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

/// Poincare multiarbiter on RP^d: the largest degree (capped at d-1) whose
/// homology still maps onto that of the ambient space.
inline MultiArbiterValue poincare_multiarbiter_rpd(const complexes::CellComplex& rpd,
                                                   const complexes::Subcomplex& m) {
  if (&m.parent() != &rpd) throw std::invalid_argument("poincare_multiarbiter: parent mismatch");
  if (m.is_empty()) throw std::invalid_argument("poincare_multiarbiter: empty piece");
  const int d = rpd.dim();
  auto none = complexes::Subcomplex::empty(rpd);
  for (int k = d - 1; k >= 1; --k)
    if (complexes::induced_map_is_onto(rpd, m, none, k)) return MultiArbiterValue{k};
  return MultiArbiterValue{0};
}

/// All {0,1} assignments on the connected manifold pieces of x satisfying
/// symmetry invariance, monotonicity and complementary duality.
struct ArbiterAssignment {
  std::vector<std::uint64_t> family;  // top-cell masks, ascending
  std::vector<std::uint8_t> value;
};

inline std::vector<std::uint64_t> manifold_piece_masks(const complexes::CellComplex& x,
                                                       std::size_t raw_cap = 1u << 20) {
  const std::size_t t = x.count(x.dim());
  if (t > 63) throw std::invalid_argument("too many top cells for mask enumeration");
  if ((std::uint64_t{1} << t) > raw_cap)
    throw std::invalid_argument("family-size cap exceeded: 2^" + std::to_string(t) + " raw subsets");
  std::vector<std::uint64_t> family;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << t); ++mask) {
    std::vector<std::size_t> tops;
    for (std::size_t i = 0; i < t; ++i)
      if ((mask >> i) & 1) tops.push_back(i);
    if (complexes::is_manifold_piece(x, tops)) family.push_back(mask);
  }
  return family;
}

inline std::vector<ArbiterAssignment> enumerate_consistent_arbiters(
    const complexes::CellComplex& x, const std::vector<complexes::CellMap>& sym,
    std::size_t raw_cap = 1u << 20) {
  const std::size_t t = x.count(x.dim());
  auto family = manifold_piece_masks(x, raw_cap);
  std::map<std::uint64_t, std::size_t> family_index;
  for (std::size_t i = 0; i < family.size(); ++i) family_index[family[i]] = i;

  // orbit of each family member under the symmetry group
  auto apply = [&](const complexes::CellMap& g, std::uint64_t mask) {
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < t; ++i)
      if ((mask >> i) & 1) out |= std::uint64_t{1} << g.top(x.dim())[i];
    return out;
  };
  std::vector<std::size_t> orbit_of(family.size());
  std::map<std::uint64_t, std::size_t> orbit_id;
  for (std::size_t i = 0; i < family.size(); ++i) {
    std::uint64_t canon = family[i];
    for (const auto& g : sym) canon = std::min(canon, apply(g, family[i]));
    auto it = orbit_id.find(canon);
    if (it == orbit_id.end()) it = orbit_id.emplace(canon, orbit_id.size()).first;
    orbit_of[i] = it->second;
  }

  // On surfaces, isotopy invariance identifies more than the combinatorial
  // symmetries do: any two embedded closed disks are ambient isotopic, so
  // every piece with Euler characteristic 1 shares one class. (This is the
  // same disk isotopy that collapses the two hemispheres of a sphere.)
  if (x.dim() == 2) {
    complexes::detail::UnionFind uf(orbit_id.size());
    std::size_t disk_rep = orbit_id.size();
    for (std::size_t i = 0; i < family.size(); ++i) {
      std::vector<std::size_t> tops;
      for (std::size_t b = 0; b < t; ++b)
        if ((family[i] >> b) & 1) tops.push_back(b);
      if (tops.size() == t) continue;  // the closed surface itself is no disk
      auto m = complexes::closure(x, tops);
      long long chi = 0;
      for (int dd = 0; dd <= 2; ++dd)
        chi += (dd % 2 == 0 ? 1 : -1) * static_cast<long long>(m.count(dd));
      if (chi != 1) continue;
      if (disk_rep == orbit_id.size())
        disk_rep = orbit_of[i];
      else
        uf.unite(orbit_of[i], disk_rep);
    }
    std::map<std::size_t, std::size_t> compact;
    for (std::size_t i = 0; i < family.size(); ++i) {
      std::size_t root = uf.find(orbit_of[i]);
      auto it = compact.find(root);
      if (it == compact.end()) it = compact.emplace(root, compact.size()).first;
      orbit_of[i] = it->second;
    }
  }
  std::size_t orbits = 0;
  for (auto o : orbit_of) orbits = std::max(orbits, o + 1);

  // constraints between orbits
  std::set<std::pair<std::size_t, std::size_t>> implies;  // u=1 -> v=1
  std::set<std::pair<std::size_t, std::size_t>> differs;
  bool contradiction = false;
  const std::uint64_t full = t == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << t) - 1;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < family.size(); ++j)
      if (i != j && (family[i] & family[j]) == family[i])
        implies.insert({orbit_of[i], orbit_of[j]});
    auto comp = family_index.find(full ^ family[i]);
    if (comp != family_index.end()) {
      std::size_t a = orbit_of[i], b = orbit_of[comp->second];
      if (a == b) contradiction = true;
      differs.insert({std::min(a, b), std::max(a, b)});
    }
  }
  if (contradiction) return {};

  // depth-first over orbit values with unit propagation
  std::vector<ArbiterAssignment> solutions;
  std::vector<int> value(orbits, -1);
  auto propagate = [&](auto&& self, std::size_t orbit, int v) -> bool {
    if (value[orbit] == v) return true;
    if (value[orbit] == 1 - v) return false;
    value[orbit] = v;
    for (const auto& [a, b] : implies) {
      if (a == orbit && v == 1 && !self(self, b, 1)) return false;
      if (b == orbit && v == 0 && !self(self, a, 0)) return false;
    }
    for (const auto& [a, b] : differs) {
      if (a == orbit && !self(self, b, 1 - v)) return false;
      if (b == orbit && !self(self, a, 1 - v)) return false;
    }
    return true;
  };
  auto search = [&](auto&& self) -> void {
    std::size_t pick = orbits;
    for (std::size_t o = 0; o < orbits; ++o)
      if (value[o] == -1) {
        pick = o;
        break;
      }
    if (pick == orbits) {
      ArbiterAssignment sol;
      sol.family = family;
      for (std::size_t i = 0; i < family.size(); ++i)
        sol.value.push_back(static_cast<std::uint8_t>(value[orbit_of[i]]));
      solutions.push_back(std::move(sol));
      return;
    }
    for (int v : {0, 1}) {
      std::vector<int> saved = value;
      if (propagate(propagate, pick, v)) self(self);
      value = saved;
    }
  };
  search(search);
  return solutions;
}

}  // namespace arbiterlab::arbiters
