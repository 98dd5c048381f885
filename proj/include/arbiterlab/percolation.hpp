#pragma once

// Poisson-Voronoi decompositions of the cube, uniform colorings, crossing
// detection, and the Monte Carlo crossing-bound experiment. Planar samples
// get exact cell polygons by halfplane clipping; d=3 adjacency comes from a
// rasterization whose pitch is audited against near-ties.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "arbiterlab/complexes.hpp"
#include "arbiterlab/parallel.hpp"
#include "arbiterlab/rng.hpp"

namespace arbiterlab::percolation {

struct SampleOptions {
  double pitch_factor = 1.0;     // scales the d=3 raster pitch cap
  double max_ambiguous = 1.0;    // refine when the audit exceeds this (1 = report only)
  int max_refinements = 2;
  std::size_t max_resamples = 32;
};

struct VoronoiDecomposition {
  int d = 2;
  std::vector<std::array<double, 3>> centers;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> adjacency;  // i < j, sorted
  std::vector<std::array<bool, 6>> face_touch;                     // [cell][2*axis + (side>0)]

  std::size_t resamples = 0;
  double pitch = 0.0;                // d=3 only
  double ambiguous_fraction = 0.0;   // d=3 audit result
  int refinements = 0;

  // exact cell polygons, d=2 only; labels: >=0 neighbour index,
  // -(1 + 2*axis + side_bit) for a cube side
  struct Polygon {
    std::vector<std::array<double, 2>> pts;
    std::vector<long> labels;
  };
  std::vector<Polygon> polygons;

  std::size_t cells() const { return centers.size(); }

  bool touches(std::size_t cell, int axis, int side) const {
    return face_touch.at(cell)[static_cast<std::size_t>(2 * axis + (side > 0 ? 1 : 0))];
  }
};

namespace detail {

inline long side_label(int axis, int side) { return -(1 + 2 * axis + (side > 0 ? 1 : 0)); }

inline void clip_halfplane(VoronoiDecomposition::Polygon& poly, double nx, double ny, double c,
                           long label) {
  // keep n . x <= c
  const std::size_t m = poly.pts.size();
  if (m == 0) return;
  VoronoiDecomposition::Polygon out;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = poly.pts[i];
    const auto& b = poly.pts[(i + 1) % m];
    double sa = nx * a[0] + ny * a[1] - c;
    double sb = nx * b[0] + ny * b[1] - c;
    bool ina = sa <= 0, inb = sb <= 0;
    if (ina) {
      out.pts.push_back(a);
      out.labels.push_back(poly.labels[i]);
    }
    if (ina != inb) {
      double t = sa / (sa - sb);
      std::array<double, 2> x{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
      out.pts.push_back(x);
      out.labels.push_back(ina ? label : poly.labels[i]);
    }
  }
  // drop degenerate slivers
  VoronoiDecomposition::Polygon clean;
  const double eps2 = 1e-26;
  for (std::size_t i = 0; i < out.pts.size(); ++i) {
    const auto& a = out.pts[i];
    const auto& b = out.pts[(i + 1) % out.pts.size()];
    double dx = b[0] - a[0], dy = b[1] - a[1];
    if (dx * dx + dy * dy > eps2) {
      clean.pts.push_back(a);
      clean.labels.push_back(out.labels[i]);
    }
  }
  poly = std::move(clean);
}

inline double edge_length(const VoronoiDecomposition::Polygon& poly, std::size_t i) {
  const auto& a = poly.pts[i];
  const auto& b = poly.pts[(i + 1) % poly.pts.size()];
  return std::hypot(b[0] - a[0], b[1] - a[1]);
}

inline void build_planar_cells(VoronoiDecomposition& dec) {
  const std::size_t n = dec.centers.size();
  dec.polygons.assign(n, {});
  dec.face_touch.assign(n, {});
  std::set<std::pair<std::uint32_t, std::uint32_t>> directed;
  for (std::size_t i = 0; i < n; ++i) {
    VoronoiDecomposition::Polygon poly;
    poly.pts = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    poly.labels = {side_label(1, -1), side_label(0, +1), side_label(1, +1), side_label(0, -1)};
    std::vector<std::pair<double, std::uint32_t>> order;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double dx = dec.centers[j][0] - dec.centers[i][0];
      double dy = dec.centers[j][1] - dec.centers[i][1];
      order.push_back({dx * dx + dy * dy, static_cast<std::uint32_t>(j)});
    }
    std::sort(order.begin(), order.end());
    for (const auto& [d2, j] : order) {
      double radius2 = 0;
      for (const auto& v : poly.pts) {
        double dx = v[0] - dec.centers[i][0], dy = v[1] - dec.centers[i][1];
        radius2 = std::max(radius2, dx * dx + dy * dy);
      }
      if (d2 >= 4 * radius2) break;  // bisector cannot reach the cell
      double nx = dec.centers[j][0] - dec.centers[i][0];
      double ny = dec.centers[j][1] - dec.centers[i][1];
      double c = (nx * (dec.centers[j][0] + dec.centers[i][0]) +
                  ny * (dec.centers[j][1] + dec.centers[i][1])) /
                 2.0;
      clip_halfplane(poly, nx, ny, c, static_cast<long>(j));
    }
    const double eps = 1e-12;
    for (std::size_t e = 0; e < poly.pts.size(); ++e) {
      if (edge_length(poly, e) <= eps) continue;
      long label = poly.labels[e];
      if (label >= 0)
        directed.insert({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(label)});
      else {
        int code = static_cast<int>(-label - 1);
        dec.face_touch[i][static_cast<std::size_t>(code)] = true;
      }
    }
    dec.polygons[i] = std::move(poly);
  }
  dec.adjacency.clear();
  for (const auto& [i, j] : directed)
    if (i < j && directed.count({j, i})) dec.adjacency.push_back({i, j});
}

struct Raster {
  int m = 0;
  double pitch = 0;
  std::vector<std::uint32_t> owner;
  std::size_t idx(int x, int y, int z) const {
    return (static_cast<std::size_t>(x) * static_cast<std::size_t>(m) +
            static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(m) +
           static_cast<std::size_t>(z);
  }
};

class BucketIndex {
public:
  BucketIndex(const std::vector<std::array<double, 3>>& pts, int buckets)
      : pts_(pts), b_(std::max(1, buckets)), cell_(static_cast<std::size_t>(b_) * b_ * b_) {
    for (std::size_t i = 0; i < pts.size(); ++i) cell_[bucket_of(pts[i])].push_back(i);
  }

  /// Indices of the k nearest centers to x (exact, expanding ring search).
  std::vector<std::pair<double, std::size_t>> nearest(const std::array<double, 3>& x,
                                                      std::size_t k) const {
    std::vector<std::pair<double, std::size_t>> best;
    int bx = coord(x[0]), by = coord(x[1]), bz = coord(x[2]);
    double width = 2.0 / b_;
    for (int ring = 0; ring < 2 * b_; ++ring) {
      double ring_min = (ring - 1) * width;  // lower bound on distance to ring cells
      if (best.size() >= k && ring_min > 0 && ring_min * ring_min > best[k - 1].first) break;
      for (int dx = -ring; dx <= ring; ++dx)
        for (int dy = -ring; dy <= ring; ++dy)
          for (int dz = -ring; dz <= ring; ++dz) {
            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
            int cx = bx + dx, cy = by + dy, cz = bz + dz;
            if (cx < 0 || cy < 0 || cz < 0 || cx >= b_ || cy >= b_ || cz >= b_) continue;
            for (auto i : cell_[(static_cast<std::size_t>(cx) * b_ + cy) * b_ + cz]) {
              double d2 = dist2(pts_[i], x);
              best.push_back({d2, i});
            }
          }
      std::sort(best.begin(), best.end());
      if (best.size() > 3 * k) best.resize(3 * k);
    }
    if (best.size() > k) best.resize(k);
    return best;
  }

private:
  static double dist2(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double s = 0;
    for (int t = 0; t < 3; ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
    return s;
  }
  int coord(double v) const {
    int c = static_cast<int>((v + 1.0) / 2.0 * b_);
    return std::min(std::max(c, 0), b_ - 1);
  }
  std::size_t bucket_of(const std::array<double, 3>& p) const {
    return (static_cast<std::size_t>(coord(p[0])) * b_ + coord(p[1])) * b_ + coord(p[2]);
  }

  const std::vector<std::array<double, 3>>& pts_;
  int b_;
  std::vector<std::vector<std::size_t>> cell_;
};

inline void build_raster_cells(VoronoiDecomposition& dec, const SampleOptions& opt) {
  const std::size_t n = dec.centers.size();
  const double rho = static_cast<double>(n) / 8.0;
  double pitch = opt.pitch_factor * 0.5 * 0.5540 * std::pow(std::max(rho, 1e-9), -1.0 / 3.0);
  pitch = std::min(pitch, 0.5);

  for (int refinement = 0;; ++refinement) {
    int m = std::min(static_cast<int>(std::ceil(2.0 / pitch)), 160);
    Raster raster;
    raster.m = m;
    raster.pitch = 2.0 / m;
    raster.owner.assign(static_cast<std::size_t>(m) * m * m, 0);
    BucketIndex index(dec.centers, static_cast<int>(std::cbrt(static_cast<double>(n))) + 1);
    auto center_of = [&](int x, int y, int z) {
      return std::array<double, 3>{-1.0 + (x + 0.5) * raster.pitch, -1.0 + (y + 0.5) * raster.pitch,
                                   -1.0 + (z + 0.5) * raster.pitch};
    };
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        for (int z = 0; z < m; ++z)
          raster.owner[raster.idx(x, y, z)] =
              static_cast<std::uint32_t>(index.nearest(center_of(x, y, z), 1)[0].second);

    // adjacency support and near-tie audit per detected pair
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<std::size_t, std::size_t>>
        support;  // pair -> (faces, ambiguous faces)
    auto visit_face = [&](std::uint32_t a, std::uint32_t b, const std::array<double, 3>& mid) {
      if (a == b) return;
      auto key = std::make_pair(std::min(a, b), std::max(a, b));
      auto& slot = support[key];
      ++slot.first;
      auto near3 = index.nearest(mid, 3);
      double third = near3.size() >= 3 ? std::sqrt(near3[2].first)
                                       : std::numeric_limits<double>::infinity();
      double da = 0, db = 0;
      for (int t = 0; t < 3; ++t) {
        da += (dec.centers[a][t] - mid[t]) * (dec.centers[a][t] - mid[t]);
        db += (dec.centers[b][t] - mid[t]) * (dec.centers[b][t] - mid[t]);
      }
      if (third - std::sqrt(std::max(da, db)) < raster.pitch) ++slot.second;
    };
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        for (int z = 0; z < m; ++z) {
          auto here = raster.owner[raster.idx(x, y, z)];
          auto base = center_of(x, y, z);
          if (x + 1 < m) {
            auto mid = base;
            mid[0] += raster.pitch / 2;
            visit_face(here, raster.owner[raster.idx(x + 1, y, z)], mid);
          }
          if (y + 1 < m) {
            auto mid = base;
            mid[1] += raster.pitch / 2;
            visit_face(here, raster.owner[raster.idx(x, y + 1, z)], mid);
          }
          if (z + 1 < m) {
            auto mid = base;
            mid[2] += raster.pitch / 2;
            visit_face(here, raster.owner[raster.idx(x, y, z + 1)], mid);
          }
        }
    std::size_t ambiguous_pairs = 0;
    for (const auto& [pair, counts] : support)
      if (counts.second == counts.first) ++ambiguous_pairs;
    double fraction = support.empty() ? 0.0 : static_cast<double>(ambiguous_pairs) /
                                                  static_cast<double>(support.size());

    if (fraction > opt.max_ambiguous && refinement < opt.max_refinements && m < 160) {
      pitch *= 2.0 / 3.0;
      continue;
    }

    dec.pitch = raster.pitch;
    dec.ambiguous_fraction = fraction;
    dec.refinements = refinement;
    dec.adjacency.clear();
    for (const auto& [pair, counts] : support) dec.adjacency.push_back(pair);
    dec.face_touch.assign(n, {});
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        for (int z = 0; z < m; ++z) {
          auto owner = raster.owner[raster.idx(x, y, z)];
          if (x == 0) dec.face_touch[owner][0] = true;
          if (x == m - 1) dec.face_touch[owner][1] = true;
          if (y == 0) dec.face_touch[owner][2] = true;
          if (y == m - 1) dec.face_touch[owner][3] = true;
          if (z == 0) dec.face_touch[owner][4] = true;
          if (z == m - 1) dec.face_touch[owner][5] = true;
        }
    return;
  }
}

}  // namespace detail

/// Deterministic decomposition of prescribed centers (no resampling path).
inline VoronoiDecomposition decomposition_from_centers(
    int d, std::vector<std::array<double, 3>> centers, const SampleOptions& opt = {}) {
  if (d != 2 && d != 3) throw std::invalid_argument("voronoi decompositions support d=2,3");
  if (centers.empty()) throw std::invalid_argument("need at least one center");
  VoronoiDecomposition dec;
  dec.d = d;
  dec.centers = std::move(centers);
  if (d == 2)
    detail::build_planar_cells(dec);
  else
    detail::build_raster_cells(dec, opt);
  return dec;
}

/// Poisson sample of centers in [-1,1]^d; degenerate samples (no points, or
/// an untouched cube face) are rejected and resampled with the next stream.
inline VoronoiDecomposition sample_decomposition(int d, double intensity, std::uint64_t seed,
                                                 const SampleOptions& opt = {}) {
  if (d != 2 && d != 3) throw std::invalid_argument("voronoi decompositions support d=2,3");
  if (intensity < 2 * d) throw std::invalid_argument("intensity below 2d");
  for (std::size_t attempt = 0;; ++attempt) {
    if (attempt >= opt.max_resamples)
      throw std::runtime_error("degenerate Voronoi samples exhausted the resample budget");
    rng::Rng rng(rng::derive(seed, 0x9e11, attempt));
    std::size_t n = rng.next_poisson(intensity);
    if (n == 0) continue;
    std::vector<std::array<double, 3>> centers(n);
    for (auto& c : centers) {
      for (int a = 0; a < d; ++a) c[static_cast<std::size_t>(a)] = 2.0 * rng.next_unit() - 1.0;
      for (int a = d; a < 3; ++a) c[static_cast<std::size_t>(a)] = 0.0;
    }
    auto dec = decomposition_from_centers(d, std::move(centers), opt);
    bool covered = true;
    for (int a = 0; a < d && covered; ++a)
      for (int side : {-1, +1}) {
        bool touched = false;
        for (std::size_t i = 0; i < dec.cells() && !touched; ++i)
          if (dec.touches(i, a, side)) touched = true;
        if (!touched) covered = false;
      }
    if (!covered) continue;
    dec.resamples = attempt;
    return dec;
  }
}

struct Coloring {
  int k = 1;
  std::vector<int> color;  // 1..k per cell
};

inline Coloring color_uniform(const VoronoiDecomposition& dec, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("need at least one color");
  Coloring col;
  col.k = k;
  col.color.resize(dec.cells());
  rng::Rng rng(rng::derive(seed, 0xc0102u, 0));
  for (auto& c : col.color) c = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(k)));
  return col;
}

/// Chain of same-colored, facet-adjacent cells joining the two opposite
/// faces of the axis.
inline bool crosses(const VoronoiDecomposition& dec, const Coloring& col, int color, int axis) {
  if (axis < 0 || axis >= dec.d) throw std::invalid_argument("crosses: axis out of range");
  complexes::detail::UnionFind uf(dec.cells());
  for (auto [i, j] : dec.adjacency)
    if (col.color[i] == color && col.color[j] == color) uf.unite(i, j);
  std::map<std::size_t, std::array<bool, 2>> roots;
  for (std::size_t i = 0; i < dec.cells(); ++i) {
    if (col.color[i] != color) continue;
    auto r = uf.find(i);
    if (dec.touches(i, axis, -1)) roots[r][0] = true;
    if (dec.touches(i, axis, +1)) roots[r][1] = true;
  }
  for (const auto& [r, t] : roots)
    if (t[0] && t[1]) return true;
  return false;
}

// ---------------------------------------------------------------------------
// the experiment
// ---------------------------------------------------------------------------

struct ExperimentOptions {
  int d = 2;
  double intensity = 200;
  std::size_t samples = 1000;
  int k = 0;  // defaults to d
  std::uint64_t seed = 0;
  bool own_axis = true;  // color a tested along axis a-1; else any axis
  unsigned threads = 1;
  SampleOptions sample;
};

struct CrossingReport {
  ExperimentOptions opts;
  struct Row {
    std::uint32_t cells = 0;
    std::uint8_t crossed = 0;  // bit a-1: color a crossed
    std::uint8_t resamples = 0;
    float ambiguous = 0;
  };
  std::vector<Row> rows;
  std::size_t black_crossings = 0;
  std::vector<std::size_t> per_color;
  std::size_t dichotomy_violations = 0;
  double frequency = 0, wilson_low = 0, wilson_high = 0;
  double bound_threshold = 0;
  bool bound_pass = false;
  double mean_cells = 0;
  double max_ambiguous_fraction = 0;
  std::size_t resamples_total = 0;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["schema"] = 1;
    j["d"] = opts.d;
    j["intensity"] = opts.intensity;
    j["samples"] = opts.samples;
    j["k"] = opts.k;
    j["seed"] = opts.seed;
    j["axis_mode"] = opts.own_axis ? "own" : "any";
    j["mean_cells"] = mean_cells;
    j["black_crossings"] = black_crossings;
    j["frequency"] = frequency;
    j["wilson_low"] = wilson_low;
    j["wilson_high"] = wilson_high;
    j["per_color_crossings"] = per_color;
    j["dichotomy_violations"] = dichotomy_violations;
    j["bound_threshold"] = bound_threshold;
    j["bound_pass"] = bound_pass;
    j["resamples_total"] = resamples_total;
    j["max_ambiguous_fraction"] = max_ambiguous_fraction;
    return j;
  }

  std::string to_csv() const {
    std::string out = "sample,cells";
    for (int a = 1; a <= opts.k; ++a) out += ",cross" + std::to_string(a);
    out += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out += std::to_string(i) + "," + std::to_string(rows[i].cells);
      for (int a = 1; a <= opts.k; ++a)
        out += std::string(",") + ((rows[i].crossed >> (a - 1)) & 1 ? "1" : "0");
      out += "\n";
    }
    return out;
  }
};

inline CrossingReport crossing_bound_experiment(ExperimentOptions opts) {
  if (opts.k == 0) opts.k = opts.d;
  if (opts.samples < 1) throw std::invalid_argument("need at least one sample");
  if (opts.k > 8) throw std::invalid_argument("at most 8 colors");
  CrossingReport rep;
  rep.opts = opts;
  rep.rows.resize(opts.samples);
  parallel::parallel_for(opts.samples, opts.threads, [&](std::size_t i) {
    auto dec = sample_decomposition(opts.d, opts.intensity,
                                    rng::derive(opts.seed, i, 0xdecu), opts.sample);
    auto col = color_uniform(dec, opts.k, rng::derive(opts.seed, i, 0xc01u));
    CrossingReport::Row row;
    row.cells = static_cast<std::uint32_t>(dec.cells());
    row.resamples = static_cast<std::uint8_t>(std::min<std::size_t>(dec.resamples, 255));
    row.ambiguous = static_cast<float>(dec.ambiguous_fraction);
    for (int a = 1; a <= opts.k; ++a) {
      bool hit = false;
      if (opts.own_axis) {
        int axis = (a - 1) % opts.d;
        hit = crosses(dec, col, a, axis);
      } else {
        for (int axis = 0; axis < opts.d && !hit; ++axis) hit = crosses(dec, col, a, axis);
      }
      if (hit) row.crossed = static_cast<std::uint8_t>(row.crossed | (1u << (a - 1)));
    }
    rep.rows[i] = row;
  });

  rep.per_color.assign(static_cast<std::size_t>(opts.k), 0);
  double cells_sum = 0;
  for (const auto& row : rep.rows) {
    cells_sum += row.cells;
    rep.resamples_total += row.resamples;
    rep.max_ambiguous_fraction = std::max(rep.max_ambiguous_fraction,
                                          static_cast<double>(row.ambiguous));
    bool any_own = false;
    for (int a = 1; a <= opts.k; ++a)
      if ((row.crossed >> (a - 1)) & 1) {
        ++rep.per_color[static_cast<std::size_t>(a) - 1];
        any_own = true;
      }
    if (!any_own) ++rep.dichotomy_violations;
  }
  rep.black_crossings = rep.per_color[0];
  rep.mean_cells = cells_sum / static_cast<double>(opts.samples);
  const double nn = static_cast<double>(opts.samples);
  const double p_hat = static_cast<double>(rep.black_crossings) / nn;
  rep.frequency = p_hat;
  const double z = 1.959963984540054;
  double denom = 1 + z * z / nn;
  double center = (p_hat + z * z / (2 * nn)) / denom;
  double half = z * std::sqrt(p_hat * (1 - p_hat) / nn + z * z / (4 * nn * nn)) / denom;
  rep.wilson_low = center - half;
  rep.wilson_high = center + half;
  const double p0 = 1.0 / opts.d;
  rep.bound_threshold = p0 - 3.0 * std::sqrt(p0 * (1 - p0) / nn);
  rep.bound_pass = p_hat >= rep.bound_threshold;
  return rep;
}

// ---------------------------------------------------------------------------
// planar decompositions as cell complexes (oracle route for crossing)
// ---------------------------------------------------------------------------

/// Builds the regular CW complex of a planar decomposition: polygons, their
/// shared Voronoi edges, side edges, and snapped vertices, with cube-face
/// tags on the boundary cells.
inline complexes::CellComplex complex_from_voronoi2d(const VoronoiDecomposition& dec) {
  if (dec.d != 2 || dec.polygons.empty())
    throw std::invalid_argument("complex_from_voronoi2d needs a planar decomposition");
  auto snap = [](const std::array<double, 2>& p) {
    return std::make_pair(static_cast<long long>(std::llround(p[0] * 1e9)),
                          static_cast<long long>(std::llround(p[1] * 1e9)));
  };
  complexes::CellComplex::Builder builder(2);
  std::map<std::pair<long long, long long>, std::uint32_t> vertex_of;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> interior_edge;
  std::map<std::pair<std::uint32_t, long>, std::uint32_t> side_edge;  // (cell, side label)

  auto vertex = [&](const std::array<double, 2>& p, const std::vector<complexes::FaceTag>& tags) {
    auto key = snap(p);
    auto it = vertex_of.find(key);
    if (it != vertex_of.end()) return it->second;
    auto id = builder.add_cell(0, {},
                               "v(" + std::to_string(key.first) + "," + std::to_string(key.second) + ")",
                               tags);
    vertex_of.emplace(key, id);
    return id;
  };
  auto vertex_tags = [&](const std::array<double, 2>& p) {
    std::vector<complexes::FaceTag> tags;
    const double eps = 1e-9;
    for (int axis = 0; axis < 2; ++axis)
      for (int side : {-1, +1})
        if (std::abs(p[static_cast<std::size_t>(axis)] - side) < eps) tags.push_back({axis, side});
    return tags;
  };

  const double eps = 1e-12;
  // pass 1: edges
  for (std::uint32_t i = 0; i < dec.cells(); ++i) {
    const auto& poly = dec.polygons[i];
    for (std::size_t e = 0; e < poly.pts.size(); ++e) {
      if (detail::edge_length(poly, e) <= eps) continue;
      const auto& a = poly.pts[e];
      const auto& b = poly.pts[(e + 1) % poly.pts.size()];
      long label = poly.labels[e];
      auto va = vertex(a, vertex_tags(a));
      auto vb = vertex(b, vertex_tags(b));
      if (label >= 0) {
        auto key = std::make_pair(std::min(i, static_cast<std::uint32_t>(label)),
                                  std::max(i, static_cast<std::uint32_t>(label)));
        if (!interior_edge.count(key))
          interior_edge[key] = builder.add_cell(
              1, {va, vb}, "e" + std::to_string(key.first) + "-" + std::to_string(key.second));
      } else {
        int code = static_cast<int>(-label - 1);
        complexes::FaceTag tag{code / 2, code % 2 == 0 ? -1 : +1};
        side_edge[{i, label}] = builder.add_cell(
            1, {va, vb}, "s" + std::to_string(i) + "@" + std::to_string(label), {tag});
      }
    }
  }
  // pass 2: polygons
  for (std::uint32_t i = 0; i < dec.cells(); ++i) {
    const auto& poly = dec.polygons[i];
    std::vector<std::uint32_t> faces;
    for (std::size_t e = 0; e < poly.pts.size(); ++e) {
      if (detail::edge_length(poly, e) <= eps) continue;
      long label = poly.labels[e];
      if (label >= 0) {
        auto key = std::make_pair(std::min(i, static_cast<std::uint32_t>(label)),
                                  std::max(i, static_cast<std::uint32_t>(label)));
        faces.push_back(interior_edge.at(key));
      } else {
        faces.push_back(side_edge.at({i, label}));
      }
    }
    builder.add_cell(2, std::move(faces), "cell" + std::to_string(i));
  }
  return builder.finish();
}

/// Relative-homology route for planar crossing, used as the oracle against
/// the union-find chain criterion.
inline bool crosses_homologically(const VoronoiDecomposition& dec, const Coloring& col, int color,
                                  int axis, const complexes::CellComplex& complex) {
  std::vector<std::size_t> tops;
  for (std::size_t i = 0; i < dec.cells(); ++i)
    if (col.color[i] == color) tops.push_back(i);
  auto piece = complexes::closure(complex, tops);
  complexes::Subcomplex bdry = complexes::Subcomplex::empty(complex);
  for (int d = 0; d <= 1; ++d)
    for (std::size_t c = 0; c < complex.count(d); ++c)
      for (const auto& tag : complex.tags(d, c))
        if (tag.axis == axis) bdry.insert(d, c);
  return complexes::induced_map_is_onto(complex, piece, bdry, 1);
}

}  // namespace arbiterlab::percolation
