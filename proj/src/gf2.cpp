#include "linenc/gf2.hpp"

#include <limits>
#include <stdexcept>

namespace linenc {

namespace {

constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

BitVector::BitVector(std::size_t length) : size_(length), words_(words_for(length), 0) {}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1': " + std::string(bits));
    }
  }
  return v;
}

BitVector BitVector::unit(std::size_t length, std::size_t index) {
  BitVector v(length);
  v.set(index);
  return v;
}

BitVector BitVector::from_indices(std::size_t length, std::span<const std::size_t> indices) {
  BitVector v(length);
  for (auto i : indices) v.set(i);
  return v;
}

bool BitVector::test(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("bit index out of range");
  return (*this)[i];
}

void BitVector::set(std::size_t i, bool value) {
  if (i >= size_) throw std::out_of_range("bit index out of range");
  const Word mask = Word{1} << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= mask;
  } else {
    words_[i / kWordBits] &= ~mask;
  }
}

void BitVector::flip(std::size_t i) {
  if (i >= size_) throw std::out_of_range("bit index out of range");
  words_[i / kWordBits] ^= Word{1} << (i % kWordBits);
}

void BitVector::clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BitVector::weight() const noexcept {
  std::size_t w = 0;
  for (auto word : words_) w += static_cast<std::size_t>(std::popcount(word));
  return w;
}

bool BitVector::any() const noexcept {
  return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
}

std::optional<std::size_t> BitVector::lowest_set() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return std::nullopt;
}

std::vector<std::size_t> BitVector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    Word word = words_[w];
    while (word != 0) {
      out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

void BitVector::check_same_size(const BitVector& other) const {
  if (size_ != other.size_) {
    throw std::invalid_argument("bit vector length mismatch: " + std::to_string(size_) + " vs " +
                                std::to_string(other.size_));
  }
}

bool BitVector::dot(const BitVector& other) const {
  check_same_size(other);
  Word acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
  return (std::popcount(acc) & 1) != 0;
}

std::size_t BitVector::xor_weight(const BitVector& other) const {
  check_same_size(other);
  std::size_t total = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(words_[w] ^ other.words_[w]));
  }
  return total;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  check_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& other) {
  check_same_size(other);
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) noexcept {
  if (a.size_ != b.size_) return a.size_ <=> b.size_;
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    const auto diff = a.words_[w] ^ b.words_[w];
    if (diff != 0) {
      const auto bit = BitVector::Word{1} << std::countr_zero(diff);
      return (a.words_[w] & bit) != 0 ? std::strong_ordering::greater : std::strong_ordering::less;
    }
  }
  return std::strong_ordering::equal;
}

std::size_t BitVector::hash() const noexcept {
  std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ size_;
  for (auto w : words_) {
    h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 31;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), data_(rows * words_for(cols), 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::from_rows(std::span<const BitVector> rows) {
  if (rows.empty()) return {};
  BitMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw std::invalid_argument("rows must have equal length");
    std::copy(rows[r].words().begin(), rows[r].words().end(), m.data_.begin() + static_cast<std::ptrdiff_t>(r * m.stride_));
  }
  return m;
}

BitMatrix BitMatrix::from_strings(std::span<const std::string> rows) {
  std::vector<BitVector> parsed;
  parsed.reserve(rows.size());
  for (const auto& r : rows) parsed.push_back(BitVector::from_string(r));
  return from_rows(parsed);
}

BitMatrix BitMatrix::from_columns(std::span<const BitVector> columns, std::size_t rows) {
  BitMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw std::invalid_argument("column length mismatch");
    for (auto r : columns[c].support()) m.set(r, c);
  }
  return m;
}

bool BitMatrix::test(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
  return (*this)(r, c);
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
  const Word mask = Word{1} << (c % 64);
  auto& word = data_[r * stride_ + c / 64];
  word = value ? (word | mask) : (word & ~mask);
}

BitVector BitMatrix::row(std::size_t r) const {
  if (r >= rows_) throw std::out_of_range("row index out of range");
  BitVector v(cols_);
  auto src = row_words(r);
  std::copy(src.begin(), src.end(), v.words().begin());
  return v;
}

BitVector BitMatrix::column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("column index out of range");
  BitVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    if ((*this)(r, c)) v.set(r);
  }
  return v;
}

std::vector<std::string> BitMatrix::to_strings() const {
  std::vector<std::string> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r).to_string());
  return out;
}

void BitMatrix::xor_row_into(std::size_t dst, std::size_t src) {
  for (std::size_t w = 0; w < stride_; ++w) data_[dst * stride_ + w] ^= data_[src * stride_ + w];
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t w = 0; w < stride_; ++w) std::swap(data_[a * stride_ + w], data_[b * stride_ + w]);
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if ((*this)(r, c)) t.set(c, r);
    }
  }
  return t;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  BitMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!(*this)(r, k)) continue;
      for (std::size_t w = 0; w < out.stride_; ++w) out.data_[r * out.stride_ + w] ^= rhs.data_[k * rhs.stride_ + w];
    }
  }
  return out;
}

BitMatrix BitMatrix::hstack(const BitMatrix& rhs) const {
  if (rows_ != rhs.rows_) throw std::invalid_argument("hstack row count mismatch");
  BitMatrix out(rows_, cols_ + rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if ((*this)(r, c)) out.set(r, c);
    }
    for (std::size_t c = 0; c < rhs.cols_; ++c) {
      if (rhs(r, c)) out.set(r, cols_ + c);
    }
  }
  return out;
}

bool BitMatrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](Word w) { return w == 0; });
}

// ---------------------------------------------------------------------------

BitVector matvec(const BitMatrix& m, const BitVector& v) {
  if (v.size() != m.cols()) {
    throw std::invalid_argument("matvec: vector length " + std::to_string(v.size()) + " != matrix columns " +
                                std::to_string(m.cols()));
  }
  BitVector out(m.rows());
  auto vw = v.words();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto rw = m.row_words(r);
    BitMatrix::Word acc = 0;
    for (std::size_t w = 0; w < rw.size(); ++w) acc ^= rw[w] & vw[w];
    if (std::popcount(acc) & 1) out.set(r);
  }
  return out;
}

EchelonForm row_reduce(BitMatrix m) {
  EchelonForm ef;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < m.cols() && pivot_row < m.rows(); ++c) {
    std::size_t r = pivot_row;
    while (r < m.rows() && !m(r, c)) ++r;
    if (r == m.rows()) continue;
    m.swap_rows(r, pivot_row);
    for (std::size_t other = 0; other < m.rows(); ++other) {
      if (other != pivot_row && m(other, c)) m.xor_row_into(other, pivot_row);
    }
    ef.pivots.push_back(c);
    ++pivot_row;
  }
  ef.reduced = std::move(m);
  return ef;
}

std::size_t rank(const BitMatrix& m) { return row_reduce(m).pivots.size(); }

std::vector<BitVector> kernel_basis(const BitMatrix& m) {
  const auto ef = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : ef.pivots) is_pivot[p] = true;

  std::vector<BitVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVector v(m.cols());
    v.set(f);
    for (std::size_t i = 0; i < ef.pivots.size(); ++i) {
      if (ef.reduced(i, f)) v.set(ef.pivots[i]);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<BitVector> solve_affine(const BitMatrix& m, const BitVector& target) {
  if (target.size() != m.rows()) throw std::invalid_argument("solve_affine: target length mismatch");
  BitMatrix augmented(m.rows(), 1);
  for (auto r : target.support()) augmented.set(r, 0);
  const auto ef = row_reduce(m.hstack(augmented));

  BitVector x(m.cols());
  for (std::size_t i = 0; i < ef.pivots.size(); ++i) {
    if (ef.pivots[i] == m.cols()) return std::nullopt;  // 0 = 1
    if (ef.reduced(i, m.cols())) x.set(ef.pivots[i]);
  }
  return x;
}

BitMatrix invert(const BitMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("invert: matrix is not square");
  const std::size_t n = m.rows();
  const auto ef = row_reduce(m.hstack(BitMatrix::identity(n)));
  if (ef.pivots.size() < n || ef.pivots[n - 1] != n - 1) throw std::invalid_argument("invert: matrix is singular");
  BitMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (ef.reduced(r, n + c)) inv.set(r, c);
    }
  }
  return inv;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("binomial overflows 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<BitVector> weight_vectors(std::size_t n, std::size_t k) {
  std::vector<BitVector> out;
  out.reserve(static_cast<std::size_t>(binomial(n, k)));
  for_each_combination(n, k, [&](const std::vector<std::size_t>& idx) { out.push_back(BitVector::from_indices(n, idx)); });
  return out;
}

}  // namespace linenc
