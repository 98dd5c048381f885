#pragma once

// Dyadic multiindices and rays, the lexicographic order with the
// initial-segment rule, partial arbiters, the inclusion/non-embedding
// oracle, greedy-consistency scans, cone extensions, and ray separation.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbiterlab/arbiters.hpp"

namespace arbiterlab::dyadic {

using Word = std::vector<std::uint8_t>;

inline std::string word_str(const Word& w) {
  std::string out;
  for (auto b : w) out += static_cast<char>('0' + b);
  return out;
}

inline Word parse_word(const std::string& s) {
  Word w;
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("dyadic word must be over {0,1}: " + s);
    w.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

struct Multiindex {
  Word word;
  std::string str() const { return word.empty() ? "()" : word_str(word); }
  friend bool operator==(const Multiindex&, const Multiindex&) = default;
};

enum class Order { less, equal, greater };

/// Lexicographic order with the initial-segment rule: a proper prefix
/// precedes its extensions.
inline Order lex_compare(const Multiindex& i, const Multiindex& j) {
  const Word &a = i.word, &b = j.word;
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
    if (a[k] != b[k]) return a[k] < b[k] ? Order::less : Order::greater;
  }
  if (a.size() == b.size()) return Order::equal;
  return a.size() < b.size() ? Order::less : Order::greater;
}

/// Eventually periodic infinite word, canonical form: primitive period,
/// stem maximally absorbed into the periodic tail. Rays index partial
/// arbiters and must pass through the side of the first doubling (first
/// letter 1).
struct Ray {
  Word stem;
  Word period;

  Ray(Word stem_in, Word period_in) : stem(std::move(stem_in)), period(std::move(period_in)) {
    if (period.empty()) throw std::invalid_argument("ray needs a nonempty period");
    canonicalize();
    if (at(0) != 1) throw std::invalid_argument("ray must have first letter 1");
  }

  static Ray parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("ray format is 'stem:period', got '" + text + "'");
    return Ray(parse_word(text.substr(0, colon)), parse_word(text.substr(colon + 1)));
  }

  std::uint8_t at(std::size_t i) const {
    if (i < stem.size()) return stem[i];
    return period[(i - stem.size()) % period.size()];
  }

  std::string str() const { return word_str(stem) + ":" + word_str(period); }

  friend bool operator==(const Ray& a, const Ray& b) {
    return a.stem == b.stem && a.period == b.period;
  }

private:
  void canonicalize() {
    // primitive period
    for (std::size_t len = 1; len < period.size(); ++len) {
      if (period.size() % len != 0) continue;
      bool repeats = true;
      for (std::size_t k = len; k < period.size() && repeats; ++k)
        if (period[k] != period[k % len]) repeats = false;
      if (repeats) {
        period.resize(len);
        break;
      }
    }
    // absorb stem letters that already match the tail
    while (!stem.empty() && stem.back() == period.back()) {
      stem.pop_back();
      std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
    }
  }
};

/// A finite word never equals an infinite one, so the comparison is total
/// on {less, greater}; it resolves within len(i)+1 letters.
inline Order lex_compare_ray(const Multiindex& i, const Ray& r) {
  for (std::size_t k = 0; k < i.word.size(); ++k) {
    if (i.word[k] != r.at(k)) return i.word[k] < r.at(k) ? Order::less : Order::greater;
  }
  return Order::less;  // initial segment of the ray
}

/// First position where two rays disagree, or nullopt when equal. Two
/// eventually periodic words agreeing through both stems plus the period
/// lcm-window are equal, so the scan is finite.
inline std::optional<std::size_t> first_disagreement(const Ray& a, const Ray& b) {
  if (a == b) return std::nullopt;
  std::size_t window = std::max(a.stem.size(), b.stem.size()) +
                       a.period.size() * b.period.size() + 2;
  for (std::size_t k = 0; k < window; ++k)
    if (a.at(k) != b.at(k)) return k;
  throw std::logic_error("distinct canonical rays must disagree within the window");
}

inline bool ray_less(const Ray& a, const Ray& b) {
  auto k = first_disagreement(a, b);
  return k && a.at(*k) < b.at(*k);
}

enum class Side { A, B };

struct ModelPiece {
  Side side = Side::A;
  Multiindex index;
  std::string str() const { return (side == Side::A ? "A_" : "B_") + index.str(); }
  friend bool operator==(const ModelPiece&, const ModelPiece&) = default;
};

/// The partial arbiter of a ray on the model pieces: A-pieces below the ray
/// get 1, B-pieces above it get 1; duality pairs the two rules.
inline arbiters::ArbiterValue partial_arbiter(const Ray& r, const ModelPiece& p) {
  if (p.index.word.empty())
    throw std::invalid_argument("partial arbiter is defined on pieces with nonempty index");
  Order cmp = lex_compare_ray(p.index, r);
  bool one = (p.side == Side::A) ? (cmp == Order::less) : (cmp == Order::greater);
  return arbiters::ArbiterValue{static_cast<std::uint8_t>(one ? 1 : 0)};
}

enum class Inclusion { included, excluded, unknown };

struct InclusionVerdict {
  Inclusion value = Inclusion::unknown;
  std::string reason;
};

namespace detail {

inline bool is_prefix(const Word& p, const Word& w) {
  if (p.size() > w.size()) return false;
  for (std::size_t k = 0; k < p.size(); ++k)
    if (p[k] != w[k]) return false;
  return true;
}

inline bool first_is_one(const Word& w) { return !w.empty() && w[0] == 1; }

}  // namespace detail

/// Does p embed in q? "included" comes from the tree structure (deeper
/// A-pieces sit inside shallower ones, B-pieces the other way around);
/// "excluded" from the non-embedding results; everything else is unknown.
inline InclusionVerdict includes(const ModelPiece& p, const ModelPiece& q) {
  const Word &wp = p.index.word, &wq = q.index.word;
  if (p.side == Side::A && q.side == Side::A) {
    if (detail::is_prefix(wq, wp)) return {Inclusion::included, "tree: A-prefix"};
    if (lex_compare(p.index, q.index) == Order::less)
      return {Inclusion::excluded, "clause (1): I<J forbids A_I in A_J"};
    return {Inclusion::unknown, "no rule"};
  }
  if (p.side == Side::A && q.side == Side::B)
    return {Inclusion::excluded, "clause (2): no A_I in B_J"};
  if (p.side == Side::B && q.side == Side::B) {
    if (detail::is_prefix(wp, wq)) return {Inclusion::included, "tree: B-prefix"};
    if (lex_compare(q.index, p.index) == Order::less)
      return {Inclusion::excluded, "case (d): complements reduce to clause (1)"};
    return {Inclusion::unknown, "no rule"};
  }
  // B-piece into A-piece
  if (detail::first_is_one(wp) && detail::first_is_one(wq))
    return {Inclusion::excluded, "clause (3): first entries 1"};
  return {Inclusion::unknown, "clause (3) hypothesis not met"};
}

inline std::vector<Word> words_up_to(int depth, int min_len = 1) {
  std::vector<Word> out;
  for (int len = min_len; len <= depth; ++len)
    for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
      Word w(static_cast<std::size_t>(len));
      for (int k = 0; k < len; ++k) w[static_cast<std::size_t>(k)] = (bits >> k) & 1;
      out.push_back(std::move(w));
    }
  return out;
}

/// Scans every ordered pair of model pieces with arbiter values (1, 0) up
/// to the given index depth: none may be included, and each must fall to
/// one of the four exclusion cases (a)-(d).
inline arbiters::AxiomReport check_greedy_consistency(const Ray& r, int depth) {
  if (depth < 1 || depth > 16) throw std::invalid_argument("greedy scan depth must be in 1..16");
  arbiters::AxiomReport rep;
  rep.axiom = "greedy";
  rep.domain = "ray " + r.str() + " depth " + std::to_string(depth);

  std::vector<ModelPiece> ones, zeros;
  for (const auto& w : words_up_to(depth))
    for (Side side : {Side::A, Side::B}) {
      ModelPiece piece{side, Multiindex{w}};
      (partial_arbiter(r, piece).bit ? ones : zeros).push_back(piece);
    }

  for (const auto& p : ones)
    for (const auto& q : zeros) {
      ++rep.instances;
      auto verdict = includes(p, q);
      if (verdict.value == Inclusion::included) {
        rep.violations.push_back({{"decomposition_hash", r.str()},
                                  {"subset", p.str() + " in " + q.str()},
                                  {"lhs", "included"},
                                  {"rhs", verdict.reason}});
        continue;
      }
      // Lemma 2.4's case analysis says each such pair is positively excluded.
      const char* expected =
          (p.side == Side::A && q.side == Side::A)   ? "(a)"
          : (p.side == Side::A && q.side == Side::B) ? "(b)"
          : (p.side == Side::B && q.side == Side::A) ? "(c)"
                                                     : "(d)";
      if (verdict.value != Inclusion::excluded)
        rep.violations.push_back({{"decomposition_hash", r.str()},
                                  {"subset", p.str() + " vs " + q.str()},
                                  {"lhs", std::string("case ") + expected + " not excluded"},
                                  {"rhs", verdict.reason}});
    }
  return rep;
}

/// Exhaustive duality of the partial arbiter to a given depth.
inline arbiters::AxiomReport check_partial_duality(const Ray& r, int depth) {
  arbiters::AxiomReport rep;
  rep.axiom = "duality";
  rep.domain = "ray " + r.str() + " depth " + std::to_string(depth);
  for (const auto& w : words_up_to(depth)) {
    ++rep.instances;
    int a = partial_arbiter(r, ModelPiece{Side::A, Multiindex{w}}).bit;
    int b = partial_arbiter(r, ModelPiece{Side::B, Multiindex{w}}).bit;
    if (a + b != 1)
      rep.violations.push_back({{"decomposition_hash", r.str()},
                                {"subset", word_str(w)},
                                {"lhs", a},
                                {"rhs", b}});
  }
  return rep;
}

/// Membership relations a queried region declares against model pieces.
struct ConeQuery {
  std::vector<ModelPiece> contains;   // region lies above these pieces
  std::vector<ModelPiece> inside;     // region lies below these pieces
};

/// Extends the partial arbiter through the greedy cones: containing a
/// 1-piece forces 1, sitting inside a 0-piece forces 0, and the two can
/// never both fire on a consistent query.
inline arbiters::ArbiterValue cone_extension(const Ray& r, const ConeQuery& query,
                                             const std::function<arbiters::ArbiterValue()>& fallback) {
  const ModelPiece* force_one = nullptr;
  const ModelPiece* force_zero = nullptr;
  for (const auto& p : query.contains)
    if (partial_arbiter(r, p).bit == 1) force_one = &p;
  for (const auto& p : query.inside)
    if (partial_arbiter(r, p).bit == 0) force_zero = &p;
  if (force_one && force_zero)
    throw std::runtime_error("cone conflict: region contains " + force_one->str() +
                             " (value 1) and lies inside " + force_zero->str() +
                             " (value 0); the cones of " + r.str() + " are disjoint");
  if (force_one) return arbiters::ArbiterValue{1};
  if (force_zero) return arbiters::ArbiterValue{0};
  return fallback();
}

/// A multiindex strictly between two distinct rays in the lexicographic
/// order; the partial arbiters differ on the corresponding A-piece.
inline Multiindex distinguish_rays(const Ray& r_in, const Ray& r2_in) {
  if (r_in == r2_in) throw std::invalid_argument("distinguish_rays: rays are equal");
  const Ray& lo = ray_less(r_in, r2_in) ? r_in : r2_in;
  const Ray& hi = ray_less(r_in, r2_in) ? r2_in : r_in;
  std::size_t k = *first_disagreement(lo, hi);
  Word w;
  for (std::size_t j = 0; j <= k; ++j) w.push_back(hi.at(j));
  Multiindex result{w};
  // by construction lo < result (0 vs 1 at position k) and result < hi
  // (initial segment)
  if (lex_compare_ray(result, lo) != Order::greater || lex_compare_ray(result, hi) != Order::less)
    throw std::logic_error("distinguish_rays postcondition failed");
  return result;
}

/// All canonical rays with |stem| + |period| <= total, first letter 1.
inline std::vector<Ray> canonical_rays_up_to(int total) {
  std::vector<Ray> rays;
  for (int slen = 0; slen < total; ++slen)
    for (int plen = 1; slen + plen <= total; ++plen)
      for (std::uint32_t sb = 0; sb < (1u << slen); ++sb)
        for (std::uint32_t pb = 0; pb < (1u << plen); ++pb) {
          Word stem(static_cast<std::size_t>(slen)), period(static_cast<std::size_t>(plen));
          for (int k = 0; k < slen; ++k) stem[static_cast<std::size_t>(k)] = (sb >> k) & 1;
          for (int k = 0; k < plen; ++k) period[static_cast<std::size_t>(k)] = (pb >> k) & 1;
          try {
            Ray r(stem, period);
            if (static_cast<int>(r.stem.size() + r.period.size()) == slen + plen &&
                r.stem == stem && r.period == period)
              rays.push_back(std::move(r));
          } catch (const std::invalid_argument&) {
            // first letter 0: not a ray through A_1
          }
        }
  return rays;
}

}  // namespace arbiterlab::dyadic
