#pragma once

// Truncated Magnus expansion, mu-bar invariants of links given by longitude
// words, Bing doubling at the presentation level, and the generalized-Milnor
// quotient certificate for the Bing-cell obstruction. Coefficients are exact
// integers; the ideal-membership elimination runs over exact rationals.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace arbiterlab::magnus {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// free group words
// ---------------------------------------------------------------------------

struct GroupWord {
  std::vector<std::pair<int, int>> letters;  // (generator >= 1, exponent +-1)

  static GroupWord gen(int g) {
    if (g < 1) throw std::invalid_argument("generator indices start at 1");
    return GroupWord{{{g, +1}}};
  }

  GroupWord inverse() const {
    GroupWord out;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      out.letters.push_back({it->first, -it->second});
    return out;
  }

  GroupWord operator*(const GroupWord& other) const {
    GroupWord out = *this;
    out.letters.insert(out.letters.end(), other.letters.begin(), other.letters.end());
    return out;
  }

  GroupWord free_reduce() const {
    GroupWord out;
    for (const auto& l : letters) {
      if (!out.letters.empty() && out.letters.back().first == l.first &&
          out.letters.back().second == -l.second)
        out.letters.pop_back();
      else
        out.letters.push_back(l);
    }
    return out;
  }

  bool uses(int g) const {
    for (const auto& l : letters)
      if (l.first == g) return true;
    return false;
  }

  int max_generator() const {
    int m = 0;
    for (const auto& l : letters) m = std::max(m, l.first);
    return m;
  }

  friend bool operator==(const GroupWord&, const GroupWord&) = default;
};

inline GroupWord commutator(const GroupWord& u, const GroupWord& v) {
  return u * v * u.inverse() * v.inverse();
}

/// Word format: space-separated letters, "m3" for the generator, "M3" for
/// its inverse; the empty string is the identity.
inline GroupWord parse_group_word(const std::string& text) {
  GroupWord w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2 || (tok[0] != 'm' && tok[0] != 'M'))
      throw std::invalid_argument("bad word letter '" + tok + "'");
    int g = std::stoi(tok.substr(1));
    if (g < 1) throw std::invalid_argument("bad generator in '" + tok + "'");
    w.letters.push_back({g, tok[0] == 'm' ? +1 : -1});
  }
  return w;
}

inline std::string format_group_word(const GroupWord& w) {
  std::string out;
  for (const auto& l : w.letters) {
    if (!out.empty()) out += ' ';
    out += (l.second > 0 ? 'm' : 'M');
    out += std::to_string(l.first);
  }
  return out;
}

// ---------------------------------------------------------------------------
// truncated noncommutative series
// ---------------------------------------------------------------------------

using Monomial = std::vector<std::uint8_t>;  // generator indices, length = degree

class MagnusSeries {
public:
  MagnusSeries(int truncation, int gens) : q_(truncation), gens_(gens) {
    if (truncation < 1) throw std::invalid_argument("truncation degree must be >= 1");
    if (gens < 1 || gens > 255) throw std::invalid_argument("generator count out of range");
  }

  static MagnusSeries one(int q, int gens) {
    MagnusSeries s(q, gens);
    s.coef_[{}] = 1;
    return s;
  }

  static MagnusSeries generator(int g, int q, int gens) {
    MagnusSeries s = one(q, gens);
    s.coef_[{static_cast<std::uint8_t>(g)}] = 1;
    return s;
  }

  /// The bare monomial with coefficient one.
  static MagnusSeries monomial(const Monomial& m, int q, int gens) {
    MagnusSeries s(q, gens);
    if (m.size() <= static_cast<std::size_t>(q)) s.coef_[m] = 1;
    return s;
  }

  /// 1 - X + X^2 - ... (the expansion of an inverse generator).
  static MagnusSeries generator_inverse(int g, int q, int gens) {
    MagnusSeries s(q, gens);
    Monomial m;
    for (int k = 0; k <= q; ++k) {
      s.coef_[m] = (k % 2 == 0) ? 1 : -1;
      m.push_back(static_cast<std::uint8_t>(g));
    }
    return s;
  }

  int truncation() const { return q_; }
  int gens() const { return gens_; }
  const std::map<Monomial, Int>& terms() const { return coef_; }

  Int coeff(const Monomial& m) const {
    auto it = coef_.find(m);
    return it == coef_.end() ? Int(0) : it->second;
  }

  bool is_zero() const { return coef_.empty(); }

  int min_degree() const {
    int best = q_ + 1;
    for (const auto& [m, c] : coef_) best = std::min(best, static_cast<int>(m.size()));
    return best;
  }

  MagnusSeries operator*(const MagnusSeries& other) const {
    check_compatible(other);
    MagnusSeries out(q_, gens_);
    for (const auto& [ma, ca] : coef_)
      for (const auto& [mb, cb] : other.coef_) {
        if (ma.size() + mb.size() > static_cast<std::size_t>(q_)) continue;
        Monomial m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        Int& slot = out.coef_[m];
        slot += ca * cb;
        if (slot == 0) out.coef_.erase(m);
      }
    return out;
  }

  MagnusSeries operator+(const MagnusSeries& other) const { return combined(other, +1); }
  MagnusSeries operator-(const MagnusSeries& other) const { return combined(other, -1); }

  friend bool operator==(const MagnusSeries& a, const MagnusSeries& b) {
    return a.q_ == b.q_ && a.gens_ == b.gens_ && a.coef_ == b.coef_;
  }

private:
  void check_compatible(const MagnusSeries& other) const {
    if (other.q_ != q_ || other.gens_ != gens_)
      throw std::invalid_argument("series with different truncation or alphabet");
  }

  MagnusSeries combined(const MagnusSeries& other, int sign) const {
    check_compatible(other);
    MagnusSeries out = *this;
    for (const auto& [m, c] : other.coef_) {
      Int& slot = out.coef_[m];
      slot += sign * c;
      if (slot == 0) out.coef_.erase(m);
    }
    return out;
  }

  int q_;
  int gens_;
  std::map<Monomial, Int> coef_;
};

/// Magnus embedding x -> 1 + X, truncated at degree q; multiplicative on
/// concatenation and invariant under free reduction.
inline MagnusSeries magnus_expand(const GroupWord& w, int q, int gens) {
  MagnusSeries out = MagnusSeries::one(q, gens);
  for (const auto& [g, e] : w.letters) {
    if (g > gens) throw std::invalid_argument("word uses generator beyond the alphabet");
    out = out * (e > 0 ? MagnusSeries::generator(g, q, gens)
                       : MagnusSeries::generator_inverse(g, q, gens));
  }
  return out;
}

// ---------------------------------------------------------------------------
// link presentations
// ---------------------------------------------------------------------------

struct LinkComponent {
  int meridian = 0;     // equals its 1-based position
  GroupWord longitude;  // over the other components' meridians
};

struct LinkPresentation {
  std::vector<LinkComponent> components;

  std::size_t size() const { return components.size(); }

  void validate() const {
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (components[i].meridian != static_cast<int>(i) + 1)
        throw std::invalid_argument("meridian indices must be 1..n in order");
      if (components[i].longitude.uses(static_cast<int>(i) + 1))
        throw std::invalid_argument("longitude of component " + std::to_string(i + 1) +
                                    " uses its own meridian");
      if (components[i].longitude.max_generator() > static_cast<int>(components.size()))
        throw std::invalid_argument("longitude uses an unknown meridian");
    }
  }
};

inline LinkPresentation hopf_link() {
  LinkPresentation l;
  l.components.push_back({1, GroupWord::gen(2)});
  l.components.push_back({2, GroupWord::gen(1)});
  return l;
}

/// Text format: one "i: word" line per component.
inline LinkPresentation parse_link(const std::string& text) {
  LinkPresentation l;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("link line needs 'i: word'");
    int meridian = std::stoi(line.substr(0, colon));
    l.components.push_back({meridian, parse_group_word(line.substr(colon + 1))});
  }
  l.validate();
  return l;
}

inline std::string format_link(const LinkPresentation& l) {
  std::string out;
  for (const auto& c : l.components)
    out += std::to_string(c.meridian) + ": " + format_group_word(c.longitude) + "\n";
  return out;
}

/// Single Magnus coefficient of a word, by dynamic programming over the
/// letters: each letter either contributes its constant term or consumes a
/// run of matching monomial positions (with alternating signs for inverse
/// letters). Exact, and far cheaper than a full expansion.
inline Int word_coefficient(const GroupWord& w, const Monomial& m) {
  std::vector<Int> dp(m.size() + 1, 0);
  dp[0] = 1;
  for (const auto& [g, e] : w.letters) {
    std::vector<Int> next = dp;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (dp[j] == 0) continue;
      if (e > 0) {
        if (m[j] == g) next[j + 1] += dp[j];
      } else {
        Int sign = 1;
        for (std::size_t t = 1; j + t <= m.size() && m[j + t - 1] == g; ++t) {
          sign = -sign;
          next[j + t] += sign * dp[j];
        }
      }
    }
    dp = std::move(next);
  }
  return dp[m.size()];
}

/// Coefficient of X_{seq[0]} ... X_{seq[k-2]} in the expansion of the
/// longitude of component seq[k-1]. Non-repeating sequences only.
inline Int mu_bar(const LinkPresentation& l, const std::vector<int>& seq, int q) {
  l.validate();
  if (seq.size() < 2) throw std::invalid_argument("mu-bar needs at least two indices");
  if (seq.size() > static_cast<std::size_t>(q) + 1)
    throw std::invalid_argument("sequence longer than truncation allows");
  std::set<int> seen;
  for (int i : seq) {
    if (i < 1 || i > static_cast<int>(l.size()))
      throw std::invalid_argument("sequence names a missing component");
    if (!seen.insert(i).second)
      throw std::invalid_argument("repeating-index invariants are out of scope");
  }
  Monomial m;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) m.push_back(static_cast<std::uint8_t>(seq[k]));
  return word_coefficient(l.components[static_cast<std::size_t>(seq.back()) - 1].longitude, m);
}

/// Replaces component `comp` (meridian m) by two components a, b occupying
/// positions comp and comp+1: occurrences of m elsewhere become [m_a, m_b],
/// and the new longitudes are l_a = [m_b^-1, w], l_b = [w, m_a^-1] for w the
/// old longitude. The sign conventions are pinned by the Borromean test:
/// doubling one Hopf component yields mu-bar(1,2,3) = +1.
inline LinkPresentation bing_double(const LinkPresentation& l, int comp) {
  l.validate();
  if (comp < 1 || comp > static_cast<int>(l.size()))
    throw std::invalid_argument("bing_double: no such component");
  const int a = comp, b = comp + 1;
  auto shift = [&](const GroupWord& w, bool substitute) {
    GroupWord out;
    for (const auto& [g, e] : w.letters) {
      if (g == comp && substitute) {
        GroupWord c = commutator(GroupWord::gen(a), GroupWord::gen(b));
        if (e < 0) c = c.inverse();
        out = out * c;
      } else {
        out.letters.push_back({g > comp ? g + 1 : g, e});
      }
    }
    return out;
  };
  GroupWord w = shift(l.components[static_cast<std::size_t>(comp) - 1].longitude, false);
  LinkPresentation out;
  for (int i = 1; i <= static_cast<int>(l.size()) + 1; ++i) {
    if (i == a) {
      out.components.push_back({a, commutator(GroupWord::gen(b).inverse(), w)});
    } else if (i == b) {
      out.components.push_back({b, commutator(w, GroupWord::gen(a).inverse())});
    } else {
      int old = i < a ? i : i - 1;
      out.components.push_back(
          {i, shift(l.components[static_cast<std::size_t>(old) - 1].longitude, true)});
    }
  }
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// doubling patterns
// ---------------------------------------------------------------------------

/// Bracketed pattern syntax: "(H (d NAME) ...)". The Hopf components are
/// named "1" and "2"; doubling NAME produces NAMEa and NAMEb. Component
/// indices are the positions of the leaf names at the end.
inline LinkPresentation link_from_pattern(const std::string& pattern,
                                          std::vector<std::string>* names_out = nullptr) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : pattern) {
    if (c == '(' || c == ')') {
      if (!cur.empty()) tokens.push_back(cur), cur.clear();
      tokens.push_back(std::string(1, c));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) tokens.push_back(cur), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  if (tokens.size() < 3 || tokens.front() != "(" || tokens[1] != "H" || tokens.back() != ")")
    throw std::invalid_argument("pattern must look like '(H (d 1) ...)'");

  LinkPresentation link = hopf_link();
  std::vector<std::string> names = {"1", "2"};
  std::size_t i = 2;
  while (i + 1 < tokens.size()) {
    if (tokens[i] != "(" || i + 3 >= tokens.size() || tokens[i + 1] != "d" || tokens[i + 3] != ")")
      throw std::invalid_argument("bad doubling op near '" + tokens[i] + "'");
    const std::string& name = tokens[i + 2];
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::invalid_argument("pattern doubles unknown component '" + name + "'");
    int comp = static_cast<int>(it - names.begin()) + 1;
    link = bing_double(link, comp);
    *it += 'a';
    names.insert(it + 1, name + "b");
    i += 4;
  }
  if (names_out) *names_out = names;
  return link;
}

struct Certificate {
  bool found = false;
  std::vector<int> seq;
  Int value = 0;
  int q = 0;
};

/// A non-repeating sequence with nonzero mu-bar, swept in lexicographic
/// order per length. Iterated Bing doubles of the Hopf link have their first
/// non-vanishing invariant at length = component count, so that length is
/// searched first; the remaining lengths are swept only when it is empty.
inline Certificate essentiality_certificate(const LinkPresentation& l, int q) {
  l.validate();
  const int n = static_cast<int>(l.size());
  if (n > 8) throw std::invalid_argument("certificate sweep capped at 8 components");
  if (q < n) throw std::invalid_argument("need q >= component count");
  Certificate best;
  best.q = q;
  auto sweep_length = [&](int len) -> bool {
    std::vector<int> seq(static_cast<std::size_t>(len), 0);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    auto rec = [&](auto&& self, int pos) -> bool {
      if (pos == len) {
        Monomial m;
        for (int k = 0; k + 1 < len; ++k)
          m.push_back(static_cast<std::uint8_t>(seq[static_cast<std::size_t>(k)]));
        Int value = word_coefficient(
            l.components[static_cast<std::size_t>(seq[static_cast<std::size_t>(len) - 1]) - 1]
                .longitude,
            m);
        if (value != 0) {
          best.found = true;
          best.seq = seq;
          best.value = value;
          return true;
        }
        return false;
      }
      for (int c = 1; c <= n; ++c) {
        if (used[static_cast<std::size_t>(c)]) continue;
        used[static_cast<std::size_t>(c)] = true;
        seq[static_cast<std::size_t>(pos)] = c;
        if (self(self, pos + 1)) return true;
        used[static_cast<std::size_t>(c)] = false;
      }
      return false;
    };
    return rec(rec, 0);
  };
  const int max_len = std::min(q + 1, n);
  if (max_len >= 2 && sweep_length(max_len)) return best;
  for (int len = 2; len < max_len; ++len)
    if (sweep_length(len)) return best;
  return best;
}

inline Certificate essentiality_certificate(const std::string& pattern, int q) {
  return essentiality_certificate(link_from_pattern(pattern), q);
}

// ---------------------------------------------------------------------------
// generalized Milnor quotient certificate
// ---------------------------------------------------------------------------

struct RelationSystem {
  int gens = 0;
  std::set<std::pair<int, int>> commuting;                      // normalized i <= j
  std::vector<std::pair<GroupWord, GroupWord>> identifications;  // lhs = rhs

  void add_commuting(int i, int j) {
    commuting.insert({std::min(i, j), std::max(i, j)});
  }
};

/// The relation system behind the height-1 Bing-cell obstruction: meridians
/// 1..4 of one copy, 5..8 of the other; every intra-copy pair commutes
/// except the handle pairs {1,2}, {3,4} of each copy; the pair-of-pants
/// relations identify [m1,m2] = [m3,m4] and [m5,m6] = [m7,m8].
inline RelationSystem bing_cell_system(bool commute_forbidden_pairs = false) {
  RelationSystem rel;
  rel.gens = 8;
  for (int base : {0, 4})
    for (int i = 1; i <= 4; ++i)
      for (int j = i + 1; j <= 4; ++j) {
        bool forbidden = (i == 1 && j == 2) || (i == 3 && j == 4);
        if (!forbidden || commute_forbidden_pairs) rel.add_commuting(base + i, base + j);
      }
  rel.identifications.push_back({commutator(GroupWord::gen(1), GroupWord::gen(2)),
                                 commutator(GroupWord::gen(3), GroupWord::gen(4))});
  rel.identifications.push_back({commutator(GroupWord::gen(5), GroupWord::gen(6)),
                                 commutator(GroupWord::gen(7), GroupWord::gen(8))});
  return rel;
}

inline GroupWord bing_cell_target() {
  return commutator(commutator(GroupWord::gen(1), GroupWord::gen(2)),
                    commutator(GroupWord::gen(5), GroupWord::gen(6)));
}

struct QuotientResult {
  bool nonzero = false;
  Monomial witness;
};

namespace detail {

inline bool monomial_killed(const Monomial& m, const RelationSystem& rel) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (m[i] == m[j]) return true;  // classical Milnor: repeated index
      int a = std::min(m[i], m[j]), b = std::max(m[i], m[j]);
      if (rel.commuting.count({a, b})) return true;
    }
  return false;
}

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;  // sorted by column

inline SparseRow project(const MagnusSeries& s, const std::map<Monomial, std::size_t>& columns) {
  SparseRow row;
  for (const auto& [m, c] : s.terms()) {
    auto it = columns.find(m);
    if (it != columns.end()) row.push_back({it->second, Rational(c)});
  }
  std::sort(row.begin(), row.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return row;
}

inline void axpy(SparseRow& r, const Rational& factor, const SparseRow& other) {
  SparseRow out;
  out.reserve(r.size() + other.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < other.size()) {
    if (j == other.size() || (i < r.size() && r[i].first < other[j].first)) {
      out.push_back(r[i++]);
    } else if (i == r.size() || other[j].first < r[i].first) {
      out.push_back({other[j].first, factor * other[j].second});
      ++j;
    } else {
      Rational c = r[i].second + factor * other[j].second;
      if (c != 0) out.push_back({r[i].first, c});
      ++i;
      ++j;
    }
  }
  r = std::move(out);
}

class SparseEliminator {
public:
  /// Reduces the row against the basis; a nonzero remainder is inserted.
  /// Returns true if the row was absorbed (reduced to zero).
  bool add(SparseRow row) {
    reduce(row);
    if (row.empty()) return true;
    Rational lead = row.front().second;
    for (auto& [c, v] : row) v /= lead;
    basis_.emplace(row.front().first, std::move(row));
    return false;
  }

  void reduce(SparseRow& row) const {
    while (!row.empty()) {
      auto it = basis_.find(row.front().first);
      if (it == basis_.end()) return;
      axpy(row, -row.front().second, it->second);
    }
  }

  std::size_t rank() const { return basis_.size(); }

private:
  std::map<std::size_t, SparseRow> basis_;
};

}  // namespace detail

/// Decides whether expansion(target) - 1 stays outside the relation
/// subspace: the span of all monomials with a repeated index, all monomials
/// mixing a commuting pair, and the two-sided truncated ideal generated by
/// the identification differences. A nonzero verdict certifies that the
/// target is nontrivial in the quotient group.
inline QuotientResult quotient_nonvanishing(const RelationSystem& rel, const GroupWord& target,
                                            int q) {
  if (rel.gens < 1 || rel.gens > 8) throw std::invalid_argument("generator count must be 1..8");
  if (q < 4)
    throw std::invalid_argument("truncation too small to see the degree-4 leading term");

  auto target_series = magnus_expand(target, q, rel.gens) - MagnusSeries::one(q, rel.gens);
  if (target_series.is_zero())
    throw std::invalid_argument("truncation too small: expansion(target) - 1 vanishes below q");

  // surviving monomials, graded-lexicographic columns
  std::map<Monomial, std::size_t> columns;
  std::vector<Monomial> column_monomials;
  {
    std::vector<Monomial> frontier = {{}};
    for (int deg = 1; deg <= q; ++deg) {
      std::vector<Monomial> next;
      for (const auto& m : frontier)
        for (int g = 1; g <= rel.gens; ++g) {
          Monomial mm = m;
          mm.push_back(static_cast<std::uint8_t>(g));
          next.push_back(std::move(mm));
        }
      for (auto& m : next)
        if (!detail::monomial_killed(m, rel)) {
          columns.emplace(m, column_monomials.size());
          column_monomials.push_back(m);
        }
      frontier = std::move(next);
    }
  }

  detail::SparseEliminator elim;
  for (const auto& [lhs, rhs] : rel.identifications) {
    auto diff = magnus_expand(lhs, q, rel.gens) - magnus_expand(rhs, q, rel.gens);
    if (diff.is_zero()) continue;
    int mindeg = diff.min_degree();
    // all u * diff * v with |u| + |v| <= q - mindeg: saturation makes the
    // projected span a two-sided truncated ideal
    std::vector<Monomial> words = {{}};
    {
      std::vector<Monomial> layer = {{}};
      for (int len = 1; len <= q - mindeg; ++len) {
        std::vector<Monomial> next;
        for (const auto& m : layer)
          for (int g = 1; g <= rel.gens; ++g) {
            Monomial mm = m;
            mm.push_back(static_cast<std::uint8_t>(g));
            next.push_back(std::move(mm));
          }
        words.insert(words.end(), next.begin(), next.end());
        layer = std::move(next);
      }
    }
    for (const auto& u : words)
      for (const auto& v : words) {
        if (u.size() + v.size() + static_cast<std::size_t>(mindeg) > static_cast<std::size_t>(q))
          continue;
        auto row = detail::project(MagnusSeries::monomial(u, q, rel.gens) * diff *
                                       MagnusSeries::monomial(v, q, rel.gens),
                                   columns);
        if (!row.empty()) elim.add(std::move(row));
      }
  }

  auto trow = detail::project(target_series, columns);
  elim.reduce(trow);
  QuotientResult result;
  result.nonzero = !trow.empty();
  if (result.nonzero) result.witness = column_monomials[trow.front().first];
  return result;
}

}  // namespace arbiterlab::magnus
