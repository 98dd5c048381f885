// arbiterlab: one entry point for every experiment, with deterministic
// seeds, JSON/CSV reports, and an exit-code contract suitable for CI
// (0 = all checks clean, 1 = violations or inconsistency, 2 = usage).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "arbiterlab/arbiters.hpp"
#include "arbiterlab/complexes.hpp"
#include "arbiterlab/dyadic.hpp"
#include "arbiterlab/generic_cells.hpp"
#include "arbiterlab/magnus.hpp"
#include "arbiterlab/parallel.hpp"
#include "arbiterlab/percolation.hpp"
#include "arbiterlab/testing/naive_gf2.hpp"

using nlohmann::json;
using namespace arbiterlab;

namespace {

struct Outcome {
  json report;
  std::string csv;  // used instead of the json body when emit=csv
  bool pass = true;
};

struct GlobalOptions {
  std::string out;
  std::string emit = "json";
  unsigned threads = 0;
  bool dry_run = false;
};

json envelope(const std::string& subcommand, json config, json results, bool pass) {
  json j;
  j["schema"] = 1;
  j["subcommand"] = subcommand;
  j["config"] = std::move(config);
  j["results"] = std::move(results);
  j["pass"] = pass;
  return j;
}

void write_text(const GlobalOptions& g, const std::string& text) {
  std::string payload = text;
  if (payload.empty() || payload.back() != '\n') payload += '\n';
  if (g.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + g.out);
  file << payload;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      out.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::stoi(cur));
  return out;
}

json axiom_reports_json(const std::vector<arbiters::AxiomReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  return arr;
}

bool all_pass(const std::vector<arbiters::AxiomReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

Outcome run_gf2_selftest(std::size_t trials, std::size_t max_dim, std::uint64_t seed) {
  auto res = testing::gf2_selftest(trials, max_dim, seed);
  json results;
  results["trials"] = res.trials;
  results["max_dim"] = max_dim;
  results["rank_mismatches"] = res.rank_mismatches;
  results["membership_mismatches"] = res.membership_mismatches;
  results["kernel_failures"] = res.kernel_failures;
  return {envelope("gf2 selftest",
                   {{"trials", trials}, {"max_dim", max_dim}, {"seed", seed}}, results,
                   res.pass()),
          "", res.pass()};
}

struct NamedComplex {
  complexes::CellComplex complex;
  std::string name;
};

NamedComplex make_complex(const std::string& kind, int d, int n) {
  if (kind == "cube") return {complexes::build_cube_grid(d, n).complex, "cube"};
  if (kind == "torus") return {complexes::build_torus_grid(n).complex, "torus"};
  if (kind == "rp2") return {complexes::build_rp2(), "rp2"};
  if (kind == "s2") return {complexes::build_s2(), "s2"};
  if (kind == "rp3") return {complexes::build_rp3(), "rp3"};
  throw CLI::ValidationError("--kind", "unknown complex kind " + kind);
}

Outcome run_complexes_build(const std::string& kind, int d, int n) {
  auto nc = make_complex(kind, d, n);
  bool dd_zero = true;
  for (int k = 2; k <= nc.complex.dim(); ++k)
    if (!(nc.complex.boundary_matrix(k - 1) * nc.complex.boundary_matrix(k)).is_zero())
      dd_zero = false;
  json results;
  results["complex"] = complexes::to_json(nc.complex);
  results["euler_characteristic"] = nc.complex.euler_characteristic();
  results["boundary_squares_to_zero"] = dd_zero;
  return {envelope("complexes build", {{"kind", kind}, {"d", d}, {"n", n}}, results, dd_zero), "",
          dd_zero};
}

Outcome run_complexes_homology(const std::string& kind, int d, int n, int degree) {
  auto nc = make_complex(kind, d, n);
  json dims = json::object();
  if (degree >= 0) {
    dims[std::to_string(degree)] = complexes::homology(nc.complex, degree).dimension;
  } else {
    for (int k = 0; k <= nc.complex.dim(); ++k)
      dims[std::to_string(k)] = complexes::homology(nc.complex, k).dimension;
  }
  json results;
  results["homology_dimensions"] = dims;
  return {envelope("complexes homology", {{"kind", kind}, {"d", d}, {"n", n}, {"degree", degree}},
                   results, true),
          "", true};
}

Outcome run_arbiters_rp2(bool enumerate) {
  auto rp2 = complexes::build_rp2();
  json results;
  bool pass = true;
  if (enumerate) {
    auto sols = arbiters::enumerate_consistent_arbiters(rp2, complexes::automorphisms(rp2));
    results["assignments"] = sols.size();
    bool homological = false;
    json tables = json::array();
    for (const auto& sol : sols) {
      json table = json::object();
      bool equal = true;
      for (std::size_t i = 0; i < sol.family.size(); ++i) {
        std::vector<std::size_t> tops;
        for (unsigned t = 0; t < 10; ++t)
          if ((sol.family[i] >> t) & 1) tops.push_back(t);
        char mask[8];
        std::snprintf(mask, sizeof mask, "%04llx", static_cast<unsigned long long>(sol.family[i]));
        table[mask] = sol.value[i];
        if (arbiters::arbiter_h_rp2(rp2, complexes::closure(rp2, tops)).bit != sol.value[i])
          equal = false;
      }
      tables.push_back(std::move(table));
      homological = homological || equal;
    }
    results["tables"] = std::move(tables);
    results["contains_homological"] = homological;
    results["expected_assignments"] = 1;
    pass = sols.size() == 1 && homological;
  } else {
    auto family = arbiters::manifold_piece_masks(rp2);
    std::map<std::uint64_t, int> value;
    for (auto m : family) {
      std::vector<std::size_t> tops;
      for (unsigned t = 0; t < 10; ++t)
        if ((m >> t) & 1) tops.push_back(t);
      value[m] = arbiters::arbiter_h_rp2(rp2, complexes::closure(rp2, tops)).bit;
    }
    const std::uint64_t full = (1u << 10) - 1;
    std::size_t pairs = 0, violations = 0;
    for (auto m : family) {
      auto comp = value.find(full ^ m);
      if (comp == value.end()) continue;
      ++pairs;
      if (value[m] + comp->second != 1) ++violations;
    }
    results["family_size"] = family.size();
    results["complementary_pairs"] = pairs;
    results["duality_violations"] = violations;
    pass = violations == 0;
  }
  return {envelope("arbiters rp2", {{"enumerate", enumerate}}, results, pass), "", pass};
}

Outcome run_arbiters_enumerate(const std::string& on) {
  complexes::CellComplex x = on == "rp2" ? complexes::build_rp2() : complexes::build_s2();
  if (on != "rp2" && on != "s2") throw CLI::ValidationError("--on", "expected rp2 or s2");
  auto sols = arbiters::enumerate_consistent_arbiters(x, complexes::automorphisms(x));
  std::size_t expected = on == "rp2" ? 1 : 0;
  json results;
  results["assignments"] = sols.size();
  results["expected_assignments"] = expected;
  bool pass = sols.size() == expected;
  if (on == "rp2" && pass) {
    bool equal = true;
    for (std::size_t i = 0; i < sols[0].family.size(); ++i) {
      std::vector<std::size_t> tops;
      for (unsigned t = 0; t < 10; ++t)
        if ((sols[0].family[i] >> t) & 1) tops.push_back(t);
      if (arbiters::arbiter_h_rp2(x, complexes::closure(x, tops)).bit != sols[0].value[i])
        equal = false;
    }
    results["contains_homological"] = equal;
    pass = equal;
  }
  return {envelope("arbiters enumerate", {{"on", on}}, results, pass), "", pass};
}

Outcome run_arbiters_cube(int d, int n, std::size_t samples, std::size_t symmetry_samples,
                          std::uint64_t seed, unsigned threads) {
  arbiters::PowerAxiomOptions opt;
  opt.samples = samples;
  opt.symmetry_samples = symmetry_samples;
  opt.seed = seed;
  opt.threads = parallel::resolve_threads(threads);
  auto reports = arbiters::check_power_axioms(d, n, d, opt);
  json results;
  results["axioms"] = axiom_reports_json(reports);
  bool pass = all_pass(reports);
  return {envelope("arbiters cube",
                   {{"d", d}, {"n", n}, {"samples", samples},
                    {"symmetry_samples", symmetry_samples}, {"seed", seed}},
                   results, pass),
          "", pass};
}

Outcome run_arbiters_rp3(std::size_t samples, std::uint64_t seed) {
  auto rp3 = complexes::build_rp3();
  auto family = arbiters::manifold_piece_masks(rp3, 1u << 8);
  std::map<std::uint64_t, int> value;
  for (auto m : family) {
    std::vector<std::size_t> tops;
    for (unsigned t = 0; t < 8; ++t)
      if ((m >> t) & 1) tops.push_back(t);
    value[m] = arbiters::poincare_multiarbiter_rpd(rp3, complexes::closure(rp3, tops)).level;
  }
  std::size_t pairs = 0, duality_violations = 0;
  for (auto m : family) {
    auto comp = value.find(0xffu ^ m);
    if (comp == value.end()) continue;
    ++pairs;
    if (value[m] + comp->second != 2) ++duality_violations;
  }
  // sampled intersection bound f(A cap B) >= f(A) + f(B) - d
  rng::Rng rng(rng::derive(seed, 0x49));
  std::size_t checked = 0, skipped = 0, bound_violations = 0;
  for (std::size_t t = 0; t < samples; ++t) {
    auto m1 = family[rng.next_below(family.size())];
    auto m2 = family[rng.next_below(family.size())];
    std::vector<std::size_t> t1, t2;
    for (unsigned b = 0; b < 8; ++b) {
      if ((m1 >> b) & 1) t1.push_back(b);
      if ((m2 >> b) & 1) t2.push_back(b);
    }
    auto a = complexes::closure(rp3, t1), bsc = complexes::closure(rp3, t2);
    auto inter = set_intersection(a, bsc);
    if (inter.is_empty() || !(complexes::closure(rp3, inter.top_cells()) == inter)) {
      ++skipped;
      continue;
    }
    ++checked;
    int fa = arbiters::poincare_multiarbiter_rpd(rp3, a).level;
    int fb = arbiters::poincare_multiarbiter_rpd(rp3, bsc).level;
    int fi = arbiters::poincare_multiarbiter_rpd(rp3, inter).level;
    if (fi < fa + fb - 3) ++bound_violations;
  }
  json results;
  results["family_size"] = family.size();
  results["complementary_pairs"] = pairs;
  results["duality_violations"] = duality_violations;
  results["intersection_checked"] = checked;
  results["intersection_skipped"] = skipped;
  results["intersection_violations"] = bound_violations;
  bool pass = duality_violations == 0 && bound_violations == 0;
  return {envelope("arbiters rp3", {{"samples", samples}, {"seed", seed}}, results, pass), "",
          pass};
}

Outcome run_dyadic_compare(const std::string& i, const std::string& j, const std::string& ray) {
  dyadic::Multiindex a{dyadic::parse_word(i)};
  json results;
  if (!ray.empty()) {
    auto r = dyadic::Ray::parse(ray);
    auto ord = dyadic::lex_compare_ray(a, r);
    results["order"] = ord == dyadic::Order::less ? "less" : "greater";
    results["partial_arbiter_A"] = dyadic::partial_arbiter(r, {dyadic::Side::A, a}).bit;
    results["partial_arbiter_B"] = dyadic::partial_arbiter(r, {dyadic::Side::B, a}).bit;
  } else {
    dyadic::Multiindex b{dyadic::parse_word(j)};
    auto ord = dyadic::lex_compare(a, b);
    results["order"] = ord == dyadic::Order::less      ? "less"
                       : ord == dyadic::Order::greater ? "greater"
                                                       : "equal";
  }
  return {envelope("dyadic compare", {{"i", i}, {"j", j}, {"ray", ray}}, results, true), "", true};
}

Outcome run_dyadic_consistency(const std::string& ray, std::size_t random_rays, int depth,
                               std::uint64_t seed, unsigned threads) {
  std::vector<dyadic::Ray> rays;
  if (!ray.empty()) rays.push_back(dyadic::Ray::parse(ray));
  if (random_rays > 0) {
    auto pool = dyadic::canonical_rays_up_to(6);
    rng::Rng rng(rng::derive(seed, 0xd7ad));
    for (std::size_t k = 0; k < random_rays; ++k)
      rays.push_back(pool[rng.next_below(pool.size())]);
  }
  if (rays.empty()) throw CLI::ValidationError("dyadic consistency", "need --ray or --random-rays");
  std::vector<json> all(rays.size());
  std::vector<char> ok(rays.size(), 1);
  parallel::parallel_for(rays.size(), parallel::resolve_threads(threads), [&](std::size_t k) {
    auto greedy = dyadic::check_greedy_consistency(rays[k], depth);
    auto duality = dyadic::check_partial_duality(rays[k], depth);
    all[k] = json::array({greedy.to_json(), duality.to_json()});
    ok[k] = greedy.pass() && duality.pass();
  });
  json results;
  results["rays"] = rays.size();
  json reports = json::array();
  for (auto& a : all)
    for (auto& r : a) reports.push_back(std::move(r));
  results["reports"] = std::move(reports);
  bool pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  return {envelope("dyadic consistency",
                   {{"ray", ray}, {"random_rays", random_rays}, {"depth", depth}, {"seed", seed}},
                   results, pass),
          "", pass};
}

Outcome run_dyadic_distinguish(const std::string& r1, const std::string& r2) {
  auto a = dyadic::Ray::parse(r1);
  auto b = dyadic::Ray::parse(r2);
  auto w = dyadic::distinguish_rays(a, b);
  const auto& lo = dyadic::ray_less(a, b) ? a : b;
  const auto& hi = dyadic::ray_less(a, b) ? b : a;
  json results;
  results["witness"] = w.str();
  results["lower_ray"] = lo.str();
  results["upper_ray"] = hi.str();
  results["value_on_lower"] = dyadic::partial_arbiter(lo, {dyadic::Side::A, w}).bit;
  results["value_on_upper"] = dyadic::partial_arbiter(hi, {dyadic::Side::A, w}).bit;
  return {envelope("dyadic distinguish", {{"r1", r1}, {"r2", r2}}, results, true), "", true};
}

magnus::LinkPresentation load_link(const std::string& link_file, const std::string& pattern) {
  if (!pattern.empty()) return magnus::link_from_pattern(pattern);
  if (link_file.empty())
    throw CLI::ValidationError("milnor", "need --pattern or --link FILE");
  std::ifstream in(link_file);
  if (!in) throw CLI::ValidationError("--link", "cannot read " + link_file);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return magnus::parse_link(text);
}

Outcome run_milnor_expand(const std::string& word, int q, int gens) {
  auto w = magnus::parse_group_word(word);
  if (gens == 0) gens = std::max(1, w.max_generator());
  auto series = magnus::magnus_expand(w, q, gens);
  json terms = json::object();
  for (const auto& [m, c] : series.terms()) {
    std::string key;
    for (auto g : m) key += (key.empty() ? "" : ".") + std::to_string(static_cast<int>(g));
    terms[key.empty() ? "1" : key] = c.str();
  }
  return {envelope("milnor expand", {{"word", word}, {"q", q}, {"gens", gens}},
                   {{"terms", terms}}, true),
          "", true};
}

Outcome run_milnor_mu(const std::string& link_file, const std::string& pattern,
                      const std::string& seq, int q) {
  auto link = load_link(link_file, pattern);
  auto indices = parse_int_list(seq);
  auto value = magnus::mu_bar(link, indices, q);
  json results;
  results["sequence"] = indices;
  results["value"] = value.str();
  results["q"] = q;
  return {envelope("milnor mu", {{"link", link_file}, {"pattern", pattern}, {"seq", seq}, {"q", q}},
                   results, true),
          "", true};
}

Outcome run_milnor_double(const std::string& link_file, const std::string& pattern, int comp) {
  auto link = load_link(link_file, pattern);
  auto doubled = magnus::bing_double(link, comp);
  json results;
  results["components"] = doubled.size();
  results["link"] = magnus::format_link(doubled);
  return {envelope("milnor double", {{"link", link_file}, {"pattern", pattern}, {"comp", comp}},
                   results, true),
          "", true};
}

Outcome run_milnor_certify(const std::string& pattern, int q) {
  auto link = magnus::link_from_pattern(pattern);
  auto cert = magnus::essentiality_certificate(link, q);
  json results;
  results["components"] = link.size();
  results["found"] = cert.found;
  results["q"] = cert.q;
  if (cert.found) {
    results["sequence"] = cert.seq;
    results["value"] = cert.value.str();
  }
  return {envelope("milnor certify", {{"pattern", pattern}, {"q", q}}, results, cert.found), "",
          cert.found};
}

Outcome run_milnor_quotient(bool forbidden_commute, int q, const std::string& expect) {
  auto rel = magnus::bing_cell_system(forbidden_commute);
  auto res = magnus::quotient_nonvanishing(rel, magnus::bing_cell_target(), q);
  json results;
  results["nonzero"] = res.nonzero;
  if (res.nonzero) {
    std::string w;
    for (auto g : res.witness) w += (w.empty() ? "" : ".") + std::to_string(static_cast<int>(g));
    results["witness"] = w;
  }
  results["q"] = q;
  bool pass = expect == "none" || (expect == "nonzero" && res.nonzero) ||
              (expect == "zero" && !res.nonzero);
  return {envelope("milnor quotient",
                   {{"forbidden_commute", forbidden_commute}, {"q", q}, {"expect", expect}},
                   results, pass),
          "", pass};
}

Outcome run_percolate(const percolation::ExperimentOptions& opts, const std::string& emit) {
  auto rep = percolation::crossing_bound_experiment(opts);
  bool pass = rep.dichotomy_violations == 0 && rep.bound_pass;
  Outcome out;
  out.pass = pass;
  if (emit == "csv")
    out.csv = rep.to_csv();
  else
    out.report = envelope("percolate",
                          {{"d", opts.d},
                           {"intensity", opts.intensity},
                           {"samples", opts.samples},
                           {"k", opts.k},
                           {"seed", opts.seed},
                           {"axis_mode", opts.own_axis ? "own" : "any"}},
                          rep.to_json(), pass);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arbiterlab: homological arbiters, dyadic partial arbiters, Milnor/Magnus "
               "certificates, and Voronoi percolation experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value config file mirroring the flags");
  app.allow_config_extras(false);

  GlobalOptions global;
  app.add_option("--out", global.out, "write the report to this file instead of stdout");
  app.add_option("--emit", global.emit, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--threads", global.threads, "worker pool size (0 = hardware)")
      ->envname("ARBITERLAB_THREADS");
  app.add_flag("--dry-run", global.dry_run, "validate the configuration without computing");

  std::function<Outcome()> action;

  // gf2
  auto* gf2_cmd = app.add_subcommand("gf2", "exact GF(2) linear algebra");
  {
    auto* self = gf2_cmd->add_subcommand("selftest", "compare against the naive oracle");
    auto trials = std::make_shared<std::size_t>(1000);
    auto maxdim = std::make_shared<std::size_t>(64);
    auto seed = std::make_shared<std::uint64_t>(0);
    self->add_option("--trials", *trials, "random matrices to test")->capture_default_str();
    self->add_option("--max-dim", *maxdim, "maximum rows/cols")->capture_default_str();
    self->add_option("--seed", *seed, "rng seed")->required();
    self->callback([&action, trials, maxdim, seed] {
      action = [=] { return run_gf2_selftest(*trials, *maxdim, *seed); };
    });
  }

  // complexes
  auto* cx_cmd = app.add_subcommand("complexes", "finite cell complexes and homology");
  {
    auto kind = std::make_shared<std::string>("rp2");
    auto d = std::make_shared<int>(2);
    auto n = std::make_shared<int>(2);
    auto* build = cx_cmd->add_subcommand("build", "construct a complex and emit it as JSON");
    build->add_option("--kind", *kind, "cube|torus|rp2|s2|rp3")->capture_default_str();
    build->add_option("--d", *d, "grid dimension")->capture_default_str();
    build->add_option("--n", *n, "grid subdivisions")->capture_default_str();
    build->callback([&action, kind, d, n] {
      action = [=] { return run_complexes_build(*kind, *d, *n); };
    });
    auto degree = std::make_shared<int>(-1);
    auto* hom = cx_cmd->add_subcommand("homology", "Z/2 homology dimensions");
    hom->add_option("--kind", *kind, "cube|torus|rp2|s2|rp3")->capture_default_str();
    hom->add_option("--d", *d, "grid dimension")->capture_default_str();
    hom->add_option("--n", *n, "grid subdivisions")->capture_default_str();
    hom->add_option("--degree", *degree, "single degree (default: all)")->capture_default_str();
    hom->callback([&action, kind, d, n, degree] {
      action = [=] { return run_complexes_homology(*kind, *d, *n, *degree); };
    });
  }

  // arbiters
  auto* arb_cmd = app.add_subcommand("arbiters", "arbiter evaluation and axiom checks");
  {
    auto enumerate = std::make_shared<bool>(false);
    auto* rp2 = arb_cmd->add_subcommand("rp2", "duality sweep or assignment enumeration");
    rp2->add_flag("--enumerate", *enumerate, "search for all axiom-consistent assignments");
    rp2->callback([&action, enumerate] {
      action = [=] { return run_arbiters_rp2(*enumerate); };
    });

    auto d = std::make_shared<int>(2);
    auto n = std::make_shared<int>(6);
    auto samples = std::make_shared<std::size_t>(1000);
    auto sym = std::make_shared<std::size_t>(20);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto* cube = arb_cmd->add_subcommand("cube", "power-set multiarbiter axioms");
    cube->add_option("--d", *d)->capture_default_str();
    cube->add_option("--n", *n)->capture_default_str();
    cube->add_option("--samples", *samples)->capture_default_str();
    cube->add_option("--symmetry-samples", *sym)->capture_default_str();
    cube->add_option("--seed", *seed)->required();
    cube->callback([&action, d, n, samples, sym, seed, &global] {
      action = [=, &global] {
        return run_arbiters_cube(*d, *n, *samples, *sym, *seed, global.threads);
      };
    });

    auto rsamples = std::make_shared<std::size_t>(400);
    auto rseed = std::make_shared<std::uint64_t>(0);
    auto* rp3 = arb_cmd->add_subcommand("rp3", "Poincare multiarbiter checks");
    rp3->add_option("--samples", *rsamples)->capture_default_str();
    rp3->add_option("--seed", *rseed)->capture_default_str();
    rp3->callback([&action, rsamples, rseed] {
      action = [=] { return run_arbiters_rp3(*rsamples, *rseed); };
    });

    auto on = std::make_shared<std::string>("rp2");
    auto* en = arb_cmd->add_subcommand("enumerate", "axiom-consistent assignment search");
    en->add_option("--on", *on, "rp2|s2")->capture_default_str();
    en->callback([&action, on] {
      action = [=] { return run_arbiters_enumerate(*on); };
    });
  }

  // dyadic
  auto* dy_cmd = app.add_subcommand("dyadic", "multiindices, rays, partial arbiters");
  {
    auto i = std::make_shared<std::string>();
    auto j = std::make_shared<std::string>();
    auto ray = std::make_shared<std::string>();
    auto* cmp = dy_cmd->add_subcommand("compare", "lexicographic comparisons");
    cmp->add_option("--i", *i, "first word")->required();
    cmp->add_option("--j", *j, "second word");
    cmp->add_option("--ray", *ray, "ray as stem:period");
    cmp->callback([&action, i, j, ray] {
      action = [=] { return run_dyadic_compare(*i, *j, *ray); };
    });

    auto cray = std::make_shared<std::string>();
    auto random = std::make_shared<std::size_t>(0);
    auto depth = std::make_shared<int>(8);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto* cons = dy_cmd->add_subcommand("consistency", "greedy and duality scans");
    cons->add_option("--ray", *cray, "ray as stem:period");
    cons->add_option("--random-rays", *random, "number of sampled canonical rays");
    cons->add_option("--depth", *depth)->capture_default_str();
    cons->add_option("--seed", *seed, "rng seed (required with --random-rays)");
    cons->callback([&action, cray, random, depth, seed, &global] {
      action = [=, &global] {
        return run_dyadic_consistency(*cray, *random, *depth, *seed, global.threads);
      };
    });

    auto r1 = std::make_shared<std::string>();
    auto r2 = std::make_shared<std::string>();
    auto* dist = dy_cmd->add_subcommand("distinguish", "separating multiindex of two rays");
    dist->add_option("--r1", *r1)->required();
    dist->add_option("--r2", *r2)->required();
    dist->callback([&action, r1, r2] {
      action = [=] { return run_dyadic_distinguish(*r1, *r2); };
    });
  }

  // milnor
  auto* mil_cmd = app.add_subcommand("milnor", "Magnus expansion and link invariants");
  {
    auto word = std::make_shared<std::string>();
    auto q = std::make_shared<int>(4);
    auto gens = std::make_shared<int>(0);
    auto* expand = mil_cmd->add_subcommand("expand", "truncated Magnus expansion of a word");
    expand->add_option("--word", *word, "word like 'm1 M2'")->required();
    expand->add_option("--q", *q)->capture_default_str();
    expand->add_option("--gens", *gens, "alphabet size (default: largest used)");
    expand->callback([&action, word, q, gens] {
      action = [=] { return run_milnor_expand(*word, *q, *gens); };
    });

    auto link = std::make_shared<std::string>();
    auto pattern = std::make_shared<std::string>();
    auto seq = std::make_shared<std::string>();
    auto muq = std::make_shared<int>(8);
    auto* mu = mil_cmd->add_subcommand("mu", "mu-bar coefficient of a link");
    mu->add_option("--link", *link, "link presentation file");
    mu->add_option("--pattern", *pattern, "doubling pattern like '(H (d 1))'");
    mu->add_option("--seq", *seq, "comma-separated indices")->required();
    mu->add_option("--q", *muq)->capture_default_str();
    mu->callback([&action, link, pattern, seq, muq] {
      action = [=] { return run_milnor_mu(*link, *pattern, *seq, *muq); };
    });

    auto comp = std::make_shared<int>(1);
    auto* dbl = mil_cmd->add_subcommand("double", "Bing double a component");
    dbl->add_option("--link", *link, "link presentation file");
    dbl->add_option("--pattern", *pattern, "doubling pattern");
    dbl->add_option("--comp", *comp, "component to double")->capture_default_str();
    dbl->callback([&action, link, pattern, comp] {
      action = [=] { return run_milnor_double(*link, *pattern, *comp); };
    });

    auto cpattern = std::make_shared<std::string>();
    auto cq = std::make_shared<int>(8);
    auto* cert = mil_cmd->add_subcommand("certify", "essentiality certificate for a pattern");
    cert->add_option("--pattern", *cpattern)->required();
    cert->add_option("--q", *cq)->capture_default_str();
    cert->callback([&action, cpattern, cq] {
      action = [=] { return run_milnor_certify(*cpattern, *cq); };
    });

    auto forbidden = std::make_shared<bool>(false);
    auto qq = std::make_shared<int>(4);
    auto expect = std::make_shared<std::string>("none");
    auto* quot = mil_cmd->add_subcommand("quotient", "Bing-cell obstruction certificate");
    quot->add_flag("--forbidden-commute", *forbidden,
                   "also let the handle pairs {1,2}, {3,4} commute (sanity inversion)");
    quot->add_option("--q", *qq)->capture_default_str();
    quot->add_option("--expect", *expect, "none|nonzero|zero")
        ->check(CLI::IsMember({"none", "nonzero", "zero"}))
        ->capture_default_str();
    quot->callback([&action, forbidden, qq, expect] {
      action = [=] { return run_milnor_quotient(*forbidden, *qq, *expect); };
    });
  }

  // percolate
  {
    auto* perc = app.add_subcommand("percolate", "Voronoi crossing experiment");
    auto opts = std::make_shared<percolation::ExperimentOptions>();
    auto axis_mode = std::make_shared<std::string>("own");
    perc->add_option("--d", opts->d, "dimension (2 or 3)")->capture_default_str();
    perc->add_option("--intensity", opts->intensity, "expected Poisson point count")
        ->capture_default_str();
    perc->add_option("--samples", opts->samples)->capture_default_str();
    perc->add_option("--k", opts->k, "colors (default: d)");
    perc->add_option("--seed", opts->seed)->required();
    perc->add_option("--axis-mode", *axis_mode, "own|any")
        ->check(CLI::IsMember({"own", "any"}))
        ->capture_default_str();
    perc->add_option("--pitch-factor", opts->sample.pitch_factor, "d=3 raster pitch scale")
        ->capture_default_str();
    perc->add_option("--max-ambiguous", opts->sample.max_ambiguous,
                     "refine the raster when the audit exceeds this fraction")
        ->capture_default_str();
    perc->callback([&action, opts, axis_mode, &global] {
      action = [=, &global] {
        auto o = *opts;
        o.own_axis = *axis_mode == "own";
        o.threads = parallel::resolve_threads(global.threads);
        return run_percolate(o, global.emit);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (global.dry_run) {
      json j;
      j["schema"] = 1;
      j["dry_run"] = true;
      j["config_ok"] = true;
      write_text(global, j.dump(2));
      return 0;
    }
    Outcome outcome = action();
    if (!outcome.csv.empty())
      write_text(global, outcome.csv);
    else
      write_text(global, outcome.report.dump(2));
    return outcome.pass ? 0 : 1;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
