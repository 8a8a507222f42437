#include <gtest/gtest.h>

#include "linenc/gf2.hpp"
#include "oracles.hpp"

using linenc::BitMatrix;
using linenc::BitVector;
using linenc::SplitMix64;

namespace {

BitVector bv(const char* s) { return BitVector::from_string(s); }

BitMatrix mat(std::initializer_list<std::string> rows) {
  std::vector<std::string> r(rows);
  return BitMatrix::from_strings(r);
}

}  // namespace

TEST(BitVector, StringRoundTripAndIndexing) {
  auto v = bv("0110");
  EXPECT_EQ(v.size(), 4u);
  EXPECT_FALSE(v.test(0));
  EXPECT_TRUE(v.test(1));
  EXPECT_EQ(v.to_string(), "0110");
  EXPECT_EQ(v.weight(), 2u);
  EXPECT_EQ(v.lowest_set(), 1u);
  EXPECT_THROW(BitVector::from_string("01x"), std::invalid_argument);
  EXPECT_THROW((void)v.test(4), std::out_of_range);
}

TEST(BitVector, OrderingIsLexicographicLeftFirst) {
  EXPECT_LT(bv("011"), bv("100"));
  EXPECT_LT(bv("000"), bv("001"));
  EXPECT_LT(bv("0111"), bv("1000"));
  EXPECT_EQ(bv("101") <=> bv("101"), std::strong_ordering::equal);
}

TEST(BitVector, ParityAndXorAcrossWords) {
  BitVector a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(64);
  b.set(100);
  EXPECT_TRUE(a.dot(b));
  EXPECT_EQ((a ^ b).weight(), 3u);
  EXPECT_EQ(a.xor_weight(b), 3u);
  EXPECT_EQ((a ^ b).support(), (std::vector<std::size_t>{0, 100, 129}));
  EXPECT_THROW(a ^= BitVector(5), std::invalid_argument);
}

TEST(Matvec, Examples) {
  EXPECT_EQ(matvec(BitMatrix::identity(3), bv("101")), bv("101"));
  EXPECT_EQ(matvec(mat({"11", "01"}), bv("11")), bv("01"));
  EXPECT_THROW(matvec(BitMatrix::identity(3), bv("10")), std::invalid_argument);
}

TEST(Matvec, MatchesEntryParityOracle) {
  SplitMix64 rng(7);
  for (int t = 0; t < 50; ++t) {
    auto m = oracle::random_matrix(10, 20, rng);
    auto v = oracle::random_vector(20, rng);
    EXPECT_EQ(matvec(m, v), oracle::naive_matvec(m, v));
  }
  auto wide = oracle::random_matrix(5, 150, rng);
  auto v = oracle::random_vector(150, rng);
  EXPECT_EQ(matvec(wide, v), oracle::naive_matvec(wide, v));
}

TEST(Matvec, IsLinear) {
  SplitMix64 rng(8);
  for (int t = 0; t < 100; ++t) {
    auto m = oracle::random_matrix(7, 13, rng);
    auto u = oracle::random_vector(13, rng);
    auto v = oracle::random_vector(13, rng);
    EXPECT_EQ(matvec(m, u ^ v), matvec(m, u) ^ matvec(m, v));
  }
}

TEST(Rank, Examples) {
  EXPECT_EQ(rank(BitMatrix::identity(4)), 4u);
  EXPECT_EQ(rank(BitMatrix(3, 5)), 0u);
  EXPECT_EQ(rank(mat({"110", "011", "101"})), 2u);
}

TEST(KernelBasis, Examples) {
  auto k = kernel_basis(mat({"11"}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], bv("11"));
  EXPECT_TRUE(kernel_basis(BitMatrix::identity(3)).empty());

  const auto g = mat({"1001", "0101", "0011"});
  k = kernel_basis(g);
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], bv("1111"));
  // The only nonzero vector of length 4 annihilated by g, by enumeration.
  auto sols = oracle::all_solutions(g, BitVector(3));
  ASSERT_EQ(sols.size(), 2u);
  EXPECT_EQ(sols[1], bv("1111"));
}

TEST(KernelBasis, IndependentAnnihilatedAndComplete) {
  SplitMix64 rng(9);
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 1 + rng.below(8), c = 1 + rng.below(11);
    auto m = oracle::random_matrix(r, c, rng);
    auto k = kernel_basis(m);
    EXPECT_EQ(k.size(), c - rank(m));
    for (const auto& v : k) EXPECT_TRUE(matvec(m, v).none());
    if (!k.empty()) {
      EXPECT_EQ(rank(BitMatrix::from_rows(k)), k.size());
    }
    // The span has exactly as many elements as the true kernel.
    EXPECT_EQ(oracle::all_solutions(m, BitVector(r)).size(), std::size_t{1} << k.size());
  }
}

TEST(SolveAffine, Examples) {
  EXPECT_EQ(solve_affine(BitMatrix::identity(2), bv("10")), bv("10"));
  EXPECT_EQ(solve_affine(mat({"11"}), bv("1")), bv("10"));
  EXPECT_EQ(solve_affine(BitMatrix(2, 2), bv("10")), std::nullopt);
}

TEST(SolveAffine, AgreesWithExhaustiveSearch) {
  SplitMix64 rng(10);
  for (int t = 0; t < 200; ++t) {
    const std::size_t r = 1 + rng.below(7), c = 1 + rng.below(12);
    auto m = oracle::random_matrix(r, c, rng);
    auto target = oracle::random_vector(r, rng);
    auto x = solve_affine(m, target);
    auto all = oracle::all_solutions(m, target);
    if (x) {
      EXPECT_EQ(matvec(m, *x), target);
      EXPECT_FALSE(all.empty());
    } else {
      EXPECT_TRUE(all.empty());
    }
  }
}

TEST(SolveAffine, FreeVariablesAreZero) {
  // x0 + x1 + x2 = 1 and x2 = 1 leave x1 free; pivot elimination returns 001.
  auto x = solve_affine(mat({"111", "001"}), bv("11"));
  ASSERT_TRUE(x);
  EXPECT_EQ(*x, bv("001"));
}

TEST(Invert, Examples) {
  EXPECT_EQ(invert(BitMatrix::identity(5)), BitMatrix::identity(5));
  const auto cnot = mat({"10", "11"});
  EXPECT_EQ(invert(cnot), cnot);
  EXPECT_THROW(invert(mat({"11", "11"})), std::invalid_argument);
  EXPECT_THROW(invert(BitMatrix(2, 3)), std::invalid_argument);
}

TEST(Invert, RandomInvertibleProductIsIdentity) {
  SplitMix64 rng(11);
  int found = 0;
  while (found < 20) {
    auto m = oracle::random_matrix(8, 8, rng);
    if (rank(m) != 8) continue;
    ++found;
    EXPECT_EQ(m * invert(m), BitMatrix::identity(8));
    EXPECT_EQ(invert(m) * m, BitMatrix::identity(8));
  }
}

TEST(Invert, ExhaustiveOnAllVectors) {
  SplitMix64 rng(12);
  for (std::size_t n : {3u, 7u, 12u}) {
    BitMatrix m;
    do {
      m = oracle::random_matrix(n, n, rng);
    } while (rank(m) != n);
    const auto inv = invert(m);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      auto v = oracle::from_mask(x, n);
      ASSERT_EQ(matvec(inv, matvec(m, v)), v);
    }
  }
}

TEST(Combinatorics, BinomialAndWeightVectors) {
  EXPECT_EQ(linenc::binomial(22, 2), 231u);
  EXPECT_EQ(linenc::binomial(16, 4), 1820u);
  EXPECT_EQ(linenc::binomial(5, 7), 0u);
  EXPECT_THROW(linenc::binomial(200, 100), std::overflow_error);
  auto w = linenc::weight_vectors(4, 2);
  ASSERT_EQ(w.size(), 6u);
  EXPECT_EQ(w.front(), bv("1100"));
  EXPECT_EQ(w.back(), bv("0011"));
  for (const auto& v : w) EXPECT_EQ(v.weight(), 2u);
}

TEST(BitMatrix, TransposeProductHstack) {
  SplitMix64 rng(13);
  auto a = oracle::random_matrix(4, 6, rng);
  auto b = oracle::random_matrix(6, 3, rng);
  EXPECT_EQ(a.transpose().transpose(), a);
  EXPECT_EQ((a * b).transpose(), b.transpose() * a.transpose());
  auto v = oracle::random_vector(3, rng);
  EXPECT_EQ(matvec(a * b, v), matvec(a, matvec(b, v)));
  auto h = a.hstack(BitMatrix::identity(4));
  EXPECT_EQ(h.cols(), 10u);
  EXPECT_EQ(h.column(6), BitVector::unit(4, 0));
}
