#pragma once

// Dense exact linear algebra over GF(2). Rows are packed into 64-bit words;
// elimination works word-at-a-time. Everything is immutable after
// construction and safe for concurrent reads.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace arbiterlab::gf2 {

class BitVector {
public:
  BitVector() = default;
  explicit BitVector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

  std::size_t size() const { return len_; }

  bool get(std::size_t i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(std::size_t i, bool value) {
    check_index(i);
    std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(std::size_t i) {
    check_index(i);
    words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
  }

  /// In-place GF(2) addition (XOR); requires equal lengths.
  BitVector& operator^=(const BitVector& other) {
    if (other.len_ != len_) throw std::invalid_argument("BitVector size mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }

  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  /// Index of the lowest set bit, or size() if zero.
  std::size_t lowest_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return (w << 6) + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return len_;
  }

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.len_ == b.len_ && a.words_ == b.words_;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

private:
  void check_index(std::size_t i) const {
    if (i >= len_) throw std::out_of_range("BitVector index " + std::to_string(i));
  }

  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), w_(rows * wpr_, 0) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    check(r, c);
    return (w_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1u;
  }

  void set(std::size_t r, std::size_t c, bool value) {
    check(r, c);
    std::uint64_t mask = std::uint64_t{1} << (c & 63);
    if (value)
      w_[r * wpr_ + (c >> 6)] |= mask;
    else
      w_[r * wpr_ + (c >> 6)] &= ~mask;
  }

  void flip(std::size_t r, std::size_t c) {
    check(r, c);
    w_[r * wpr_ + (c >> 6)] ^= std::uint64_t{1} << (c & 63);
  }

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t w = 0; w < wpr_; ++w) {
        std::uint64_t bits = w_[r * wpr_ + w];
        while (bits) {
          std::size_t c = (w << 6) + static_cast<std::size_t>(std::countr_zero(bits));
          t.set(c, r, true);
          bits &= bits - 1;
        }
      }
    return t;
  }

  BitVector row(std::size_t r) const {
    if (r >= rows_) throw std::out_of_range("row index");
    BitVector v(cols_);
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) v.set(c, true);
    return v;
  }

  BitVector col(std::size_t c) const {
    if (c >= cols_) throw std::out_of_range("col index");
    BitVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      if (get(r, c)) v.set(r, true);
    return v;
  }

  /// Matrix-vector product over GF(2); v indexed by columns.
  BitVector mul(const BitVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("mul: dimension mismatch");
    BitVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t acc = 0;
      for (std::size_t w = 0; w < wpr_; ++w) acc ^= w_[r * wpr_ + w] & v.words()[w];
      if (std::popcount(acc) & 1) out.set(r, true);
    }
    return out;
  }

  BitMatrix operator*(const BitMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
    BitMatrix out(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = 0; k < cols_; ++k)
        if (get(r, k))
          for (std::size_t w = 0; w < other.wpr_; ++w)
            out.w_[r * out.wpr_ + w] ^= other.w_[k * other.wpr_ + w];
    return out;
  }

  bool is_zero() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  BitMatrix augment(const BitVector& v) const {
    if (v.size() != rows_) throw std::invalid_argument("augment: dimension mismatch");
    BitMatrix out(rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t w = 0; w < wpr_; ++w) out.w_[r * out.wpr_ + w] = w_[r * wpr_ + w];
      if (v.get(r)) out.set(r, cols_, true);
    }
    return out;
  }

  void xor_row_into(std::size_t src, std::size_t dst) {
    for (std::size_t w = 0; w < wpr_; ++w) w_[dst * wpr_ + w] ^= w_[src * wpr_ + w];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t w = 0; w < wpr_; ++w) std::swap(w_[a * wpr_ + w], w_[b * wpr_ + w]);
  }

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.w_ == b.w_;
  }

private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("BitMatrix index");
  }

  std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
  std::vector<std::uint64_t> w_;
};

/// GF(2) row rank by forward elimination on a working copy.
inline std::size_t rank(BitMatrix m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t pivot = r;
    while (pivot < m.rows() && !m.get(pivot, c)) ++pivot;
    if (pivot == m.rows()) continue;
    m.swap_rows(pivot, r);
    for (std::size_t i = r + 1; i < m.rows(); ++i)
      if (m.get(i, c)) m.xor_row_into(r, i);
    ++r;
  }
  return r;
}

/// Incrementally maintained echelon basis of a subspace of GF(2)^len.
class Span {
public:
  explicit Span(std::size_t len) : len_(len) {}

  /// Adds v to the span; returns true iff the rank grew.
  bool add(BitVector v) {
    if (v.size() != len_) throw std::invalid_argument("Span::add: length mismatch");
    reduce(v);
    if (!v.any()) return false;
    std::size_t lead = v.lowest_set();
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < lead) ++pos;
    basis_.insert(basis_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), lead);
    return true;
  }

  bool contains(BitVector v) const {
    if (v.size() != len_) throw std::invalid_argument("Span::contains: length mismatch");
    reduce(v);
    return !v.any();
  }

  std::size_t rank() const { return basis_.size(); }
  std::size_t length() const { return len_; }
  const std::vector<BitVector>& basis() const { return basis_; }

private:
  void reduce(BitVector& v) const {
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      std::size_t p = pivots_[k];
      if (p >= v.size()) break;
      if (v.get(p)) v ^= basis_[k];
    }
  }

  std::size_t len_;
  std::vector<BitVector> basis_;   // sorted by pivot
  std::vector<std::size_t> pivots_;
};

/// True iff v lies in the column space of m. Decided by building an echelon
/// span of the columns, independent of the augmented-rank route used as the
/// test oracle.
inline bool in_column_space(const BitMatrix& m, const BitVector& v) {
  if (v.size() != m.rows())
    throw std::invalid_argument("in_column_space: vector length " + std::to_string(v.size()) +
                                " does not match row count " + std::to_string(m.rows()));
  Span span(m.rows());
  for (std::size_t c = 0; c < m.cols(); ++c) span.add(m.col(c));
  return span.contains(v);
}

/// Basis of { v : m v = 0 }. Count always equals cols - rank.
inline std::vector<BitVector> kernel_basis(const BitMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  BitMatrix a = m;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && !a.get(pivot, c)) ++pivot;
    if (pivot == rows) continue;
    a.swap_rows(pivot, r);
    for (std::size_t i = 0; i < rows; ++i)
      if (i != r && a.get(i, c)) a.xor_row_into(r, i);
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::vector<BitVector> basis;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    BitVector v(cols);
    v.set(c, true);
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
      if (a.get(k, c)) v.set(pivot_col[k], true);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace arbiterlab::gf2
