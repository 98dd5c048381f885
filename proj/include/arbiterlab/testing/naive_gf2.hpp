#pragma once

// Deliberately naive GF(2) linear algebra used as an independent oracle by
// the self-tests. Unpacked int matrices, textbook elimination; shares no
// code with the word-packed implementation it cross-checks.

#include <cstddef>
#include <utility>
#include <vector>

#include "arbiterlab/gf2.hpp"
#include "arbiterlab/rng.hpp"

namespace arbiterlab::testing {

using NaiveMatrix = std::vector<std::vector<int>>;

inline std::size_t naive_rank(NaiveMatrix m) {
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

inline NaiveMatrix random_naive(rng::Rng& rng, std::size_t rows, std::size_t cols) {
  NaiveMatrix m(rows, std::vector<int>(cols, 0));
  for (auto& row : m)
    for (auto& x : row) x = static_cast<int>(rng.next_u64() & 1);
  return m;
}

inline gf2::BitMatrix pack(const NaiveMatrix& m) {
  gf2::BitMatrix out(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m[r].size(); ++c)
      if (m[r][c]) out.set(r, c, true);
  return out;
}

struct SelftestResult {
  std::size_t trials = 0;
  std::size_t rank_mismatches = 0;
  std::size_t membership_mismatches = 0;
  std::size_t kernel_failures = 0;
  bool pass() const {
    return rank_mismatches == 0 && membership_mismatches == 0 && kernel_failures == 0;
  }
};

/// Random-matrix equivalence sweep: packed rank vs naive elimination,
/// column-space membership vs the augmented-rank oracle, and kernel bases
/// against rank-nullity with an exact m v = 0 recheck.
inline SelftestResult gf2_selftest(std::size_t trials, std::size_t max_dim, std::uint64_t seed) {
  SelftestResult res;
  res.trials = trials;
  rng::Rng rng(rng::derive(seed, 0x6f2));
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t rows = 1 + rng.next_below(max_dim);
    std::size_t cols = 1 + rng.next_below(max_dim);
    auto naive = random_naive(rng, rows, cols);
    auto packed = pack(naive);
    if (gf2::rank(packed) != naive_rank(naive)) ++res.rank_mismatches;

    gf2::BitVector v(rows);
    if (t % 2 == 0) {
      for (std::size_t r = 0; r < rows; ++r) v.set(r, rng.next_bool());
    } else {
      for (std::size_t c = 0; c < cols; ++c)
        if (rng.next_bool()) v ^= packed.col(c);
    }
    bool oracle = gf2::rank(packed.augment(v)) == gf2::rank(packed);
    if (gf2::in_column_space(packed, v) != oracle) ++res.membership_mismatches;

    auto basis = gf2::kernel_basis(packed);
    if (basis.size() != cols - gf2::rank(packed)) ++res.kernel_failures;
    for (const auto& k : basis)
      if (packed.mul(k).any()) ++res.kernel_failures;
  }
  return res;
}

}  // namespace arbiterlab::testing
