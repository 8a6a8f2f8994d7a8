#pragma once

// Dense matrices over F_2 with word-packed rows.

#include <bit>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnselmer/error.hpp"

namespace cnselmer {

class BitMatrix {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitMatrix() = default;

  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_((cols + kWordBits - 1) / kWordBits),
        data_(rows * words_, 0) {}

  static BitMatrix zero(std::size_t rows, std::size_t cols) { return BitMatrix(rows, cols); }

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  // Any nonzero entry counts as 1.
  static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    BitMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw UsageError("BitMatrix::from_rows: ragged rows");
      std::size_t j = 0;
      for (int v : row) m.set(i, j++, v != 0);
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t i, std::size_t j) const {
    return (data_[i * words_ + j / kWordBits] >> (j % kWordBits)) & 1U;
  }

  void set(std::size_t i, std::size_t j, bool v) {
    Word& w = data_[i * words_ + j / kWordBits];
    const Word bit = Word{1} << (j % kWordBits);
    w = v ? (w | bit) : (w & ~bit);
  }

  void flip(std::size_t i, std::size_t j) {
    data_[i * words_ + j / kWordBits] ^= Word{1} << (j % kWordBits);
  }

  std::span<const Word> row_words(std::size_t i) const {
    return std::span<const Word>(data_).subspan(i * words_, words_);
  }

  // Parity of row i.
  bool row_parity(std::size_t i) const {
    int pop = 0;
    for (Word w : row_words(i)) pop += std::popcount(w);
    return pop & 1;
  }

  BitMatrix transposed() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (get(i, j)) t.set(j, i, true);
    return t;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (get(i, j) != get(j, i)) return false;
    return true;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) s += get(i, j) ? '1' : '0';
      s += '\n';
    }
    return s;
  }

  bool operator==(const BitMatrix&) const = default;

 private:
  friend std::size_t rank(const BitMatrix& m);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_ = 0;
  // Bits at column >= cols_ in the last word of each row stay zero.
  std::vector<Word> data_;
};

// Gaussian elimination on a private copy.
inline std::size_t rank(const BitMatrix& m) {
  const std::size_t words = m.words_;
  if (m.rows_ == 0 || m.cols_ == 0) return 0;
  std::vector<BitMatrix::Word> a = m.data_;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols_ && r < m.rows_; ++c) {
    const std::size_t wi = c / BitMatrix::kWordBits;
    const BitMatrix::Word bit = BitMatrix::Word{1} << (c % BitMatrix::kWordBits);
    std::size_t pivot = r;
    while (pivot < m.rows_ && !(a[pivot * words + wi] & bit)) ++pivot;
    if (pivot == m.rows_) continue;
    if (pivot != r) {
      for (std::size_t w = 0; w < words; ++w) std::swap(a[pivot * words + w], a[r * words + w]);
    }
    for (std::size_t i = r + 1; i < m.rows_; ++i) {
      if (a[i * words + wi] & bit) {
        for (std::size_t w = wi; w < words; ++w) a[i * words + w] ^= a[r * words + w];
      }
    }
    ++r;
  }
  return r;
}

inline std::size_t kernel_dimension(const BitMatrix& m) { return m.cols() - rank(m); }

template <class G>
concept FullWordGenerator = std::uniform_random_bit_generator<G> &&
    G::min() == 0 && G::max() == std::numeric_limits<std::uint64_t>::max();

namespace detail {

// Hands out bits LSB-first from successive 64-bit draws.
template <FullWordGenerator G>
class BitStream {
 public:
  explicit BitStream(G& rng) : rng_(rng) {}
  bool next() {
    if (left_ == 0) {
      word_ = rng_();
      left_ = 64;
    }
    const bool b = word_ & 1U;
    word_ >>= 1;
    --left_;
    return b;
  }

 private:
  G& rng_;
  std::uint64_t word_ = 0;
  int left_ = 0;
};

}  // namespace detail

inline std::size_t upper_entry_count(std::size_t k) { return k * (k - 1) / 2; }

// Symmetric k x k matrix whose strictly-upper entries come from next_bit() in
// row-major order (0,1), (0,2), ..., (0,k-1), (1,2), ... and whose diagonal is
// chosen so that row i sums to rowsum(i) mod 2. This is the single
// construction behind both the random and the exhaustive experiments.
template <class BitSource, class RowSum>
BitMatrix symmetric_from_upper_bits(std::size_t k, BitSource&& next_bit, RowSum&& rowsum) {
  BitMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (next_bit()) {
        m.set(i, j, true);
        m.set(j, i, true);
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (m.row_parity(i) != static_cast<bool>(rowsum(i))) m.set(i, i, true);
  }
  return m;
}

// Bit b of mask feeds upper entry b.
inline BitMatrix symmetric_from_mask(std::size_t k, std::uint64_t mask, std::size_t ones_in_rowsum = 0) {
  std::size_t idx = 0;
  return symmetric_from_upper_bits(
      k, [&] { return static_cast<bool>((mask >> idx++) & 1U); },
      [&](std::size_t i) { return i + ones_in_rowsum >= k; });
}

// Uniform symmetric matrix with every row summing to 0: the F_2 Laplace matrix
// of a uniform random undirected graph on k labeled vertices. Consumes
// ceil(C(k,2)/64) draws from rng.
template <FullWordGenerator G>
BitMatrix random_symmetric(std::size_t k, G& rng) {
  if (k < 1) throw UsageError("random_symmetric: k must be at least 1");
  detail::BitStream<G> bits(rng);
  return symmetric_from_upper_bits(k, [&] { return bits.next(); }, [](std::size_t) { return false; });
}

// Uniform symmetric matrix whose row-sum vector is (0,...,0,1,...,1) with j
// trailing ones. Same draw order as random_symmetric.
template <FullWordGenerator G>
BitMatrix random_symmetric_with_rowsum(std::size_t k, std::size_t j, G& rng) {
  if (j < 1 || j > k) {
    throw UsageError("random_symmetric_with_rowsum: need 1 <= j <= k, got j = " + std::to_string(j) +
                     ", k = " + std::to_string(k));
  }
  detail::BitStream<G> bits(rng);
  return symmetric_from_upper_bits(k, [&] { return bits.next(); },
                                   [&](std::size_t i) { return i + j >= k; });
}

}  // namespace cnselmer
