#pragma once

// Dense linear algebra over GF(2).
//
// Bit i of a vector is stored in word i/64 at position i%64. String
// renderings put index 0 leftmost, and that is also the most significant
// position for ordering: "011" < "100".

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace linenc {

class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;
  explicit BitVector(std::size_t length);

  /// Parses a string of '0'/'1' characters, index 0 first.
  static BitVector from_string(std::string_view bits);
  static BitVector unit(std::size_t length, std::size_t index);
  /// Vector with ones at the given positions.
  static BitVector from_indices(std::size_t length, std::span<const std::size_t> indices);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }

  [[nodiscard]] bool test(std::size_t i) const;
  [[nodiscard]] bool operator[](std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i);
  void clear() noexcept;

  [[nodiscard]] std::size_t weight() const noexcept;
  [[nodiscard]] bool any() const noexcept;
  [[nodiscard]] bool none() const noexcept { return !any(); }
  [[nodiscard]] std::optional<std::size_t> lowest_set() const noexcept;
  [[nodiscard]] std::vector<std::size_t> support() const;

  /// Parity of the bitwise AND.
  [[nodiscard]] bool dot(const BitVector& other) const;
  /// Hamming weight of (*this XOR other) without materializing it.
  [[nodiscard]] std::size_t xor_weight(const BitVector& other) const;

  BitVector& operator^=(const BitVector& other);
  BitVector& operator&=(const BitVector& other);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }
  friend BitVector operator&(BitVector lhs, const BitVector& rhs) { return lhs &= rhs; }

  [[nodiscard]] std::string to_string() const;

  [[nodiscard]] std::span<const Word> words() const noexcept { return {words_.data(), words_.size()}; }
  [[nodiscard]] std::span<Word> words() noexcept { return {words_.data(), words_.size()}; }

  friend bool operator==(const BitVector& a, const BitVector& b) noexcept {
    return a.size_ == b.size_ && std::equal(a.words_.begin(), a.words_.end(), b.words_.begin());
  }
  friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) noexcept;

  [[nodiscard]] std::size_t hash() const noexcept;

 private:
  void check_same_size(const BitVector& other) const;

  std::size_t size_ = 0;
  boost::container::small_vector<Word, 2> words_;
};

class BitMatrix {
 public:
  using Word = BitVector::Word;

  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);
  static BitMatrix from_rows(std::span<const BitVector> rows);
  /// Rows given as '0'/'1' strings, all of equal length.
  static BitMatrix from_strings(std::span<const std::string> rows);
  /// Matrix whose columns are the given vectors.
  static BitMatrix from_columns(std::span<const BitVector> columns, std::size_t rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  [[nodiscard]] bool test(std::size_t r, std::size_t c) const;
  [[nodiscard]] bool operator()(std::size_t r, std::size_t c) const noexcept {
    return (data_[r * stride_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value = true);

  [[nodiscard]] BitVector row(std::size_t r) const;
  [[nodiscard]] BitVector column(std::size_t c) const;
  [[nodiscard]] std::vector<std::string> to_strings() const;

  void xor_row_into(std::size_t dst, std::size_t src);
  void swap_rows(std::size_t a, std::size_t b);

  [[nodiscard]] BitMatrix transpose() const;
  [[nodiscard]] BitMatrix operator*(const BitMatrix& rhs) const;
  /// [this | rhs]
  [[nodiscard]] BitMatrix hstack(const BitMatrix& rhs) const;
  [[nodiscard]] bool is_zero() const noexcept;

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;

 private:
  std::span<const Word> row_words(std::size_t r) const { return {data_.data() + r * stride_, stride_}; }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;

  friend BitVector matvec(const BitMatrix& m, const BitVector& v);
};

/// result[i] = parity(row_i AND v). Throws std::invalid_argument on size mismatch.
BitVector matvec(const BitMatrix& m, const BitVector& v);

std::size_t rank(const BitMatrix& m);

/// Basis of {v : m v = 0}; one vector per free column of the reduced echelon form.
std::vector<BitVector> kernel_basis(const BitMatrix& m);

/// Some x with m x = target, with every free variable set to 0; nullopt if inconsistent.
std::optional<BitVector> solve_affine(const BitMatrix& m, const BitVector& target);

/// Throws std::invalid_argument for non-square or singular input.
BitMatrix invert(const BitMatrix& m);

/// Reduced row echelon form with its pivot columns (in increasing order).
struct EchelonForm {
  BitMatrix reduced;
  std::vector<std::size_t> pivots;
};
EchelonForm row_reduce(BitMatrix m);

/// Binomial coefficient; throws std::overflow_error past 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Calls f(indices) for every increasing k-subset of {0..n-1}, in lexicographic order.
template <class F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(std::as_const(idx));
    if (k == 0) return;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// All length-n vectors of weight k, ordered by their index sets.
std::vector<BitVector> weight_vectors(std::size_t n, std::size_t k);

}  // namespace linenc

template <>
struct std::hash<linenc::BitVector> {
  std::size_t operator()(const linenc::BitVector& v) const noexcept { return v.hash(); }
};
