#include <gtest/gtest.h>

#include <set>

#include "linenc/encoding.hpp"
#include "oracles.hpp"

using namespace linenc;

namespace {

BitVector bv(const char* s) { return BitVector::from_string(s); }

SubspaceCode four_mode_code() {
  std::vector<std::string> rows{"1001", "0101", "0011"};
  return SubspaceCode(BitMatrix::from_strings(rows), 1);
}

std::size_t c(std::size_t n, std::size_t k) { return binomial(n, k); }

EncodedXPTerm manual_term(const char* x, std::vector<std::pair<const char*, int>> labels, Part part = Part::re,
                          double coefficient = 1.0) {
  EncodedXPTerm t;
  t.coefficient = coefficient;
  t.x = bv(x);
  t.part = part;
  for (const auto& [l, s] : labels) t.pairs.push_back({bv(l), bv(l) ^ t.x, s});
  return t;
}

oracle::CMat pauli_sum(const std::vector<std::pair<PauliString, double>>& terms, std::size_t q) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << q);
  oracle::CMat m = oracle::CMat::Zero(dim, dim);
  for (const auto& [p, v] : terms) m += v * oracle::pauli_matrix(p);
  return m;
}

// Random term on q qubits: a nonzero x and distinct labels with distinct conjugates.
EncodedXPTerm random_term(std::size_t q, SplitMix64& rng, Part part) {
  EncodedXPTerm t;
  t.part = part;
  t.coefficient = rng.uniform(-2, 2);
  do {
    t.x = oracle::random_vector(q, rng);
  } while (t.x.none() && rng.below(4) != 0);
  std::set<BitVector> used;
  const std::size_t count = 1 + rng.below(3);
  for (std::size_t i = 0; i < count; ++i) {
    auto l = oracle::random_vector(q, rng);
    if (used.count(l) || used.count(l ^ t.x)) continue;
    used.insert(l);
    used.insert(l ^ t.x);
    t.pairs.push_back({l, l ^ t.x, rng.below(2) ? 1 : -1});
  }
  return t;
}

SubspaceCode code_for(std::size_t m, std::size_t n, std::uint64_t seed) { return find_minimal_code(m, n, seed).code; }

}  // namespace

TEST(EncodeTerm, IdentityCodeKeepsLabels) {
  auto code = SubspaceCode::identity(4, 2);
  const LadderOp ops[] = {cre(0), cre(1), ann(2), ann(3)};
  auto t = decompose_term(ops, 4, 2, 0.5);
  auto e = encode_term(t, code);
  EXPECT_EQ(e.x, t.x);
  ASSERT_EQ(e.pairs.size(), 1u);
  EXPECT_EQ(e.pairs[0].label, bv("0011"));
  EXPECT_EQ(e.pairs[0].conjugate, bv("1100"));
  EXPECT_EQ(e.pairs[0].sign, t.sign(bv("0011")));
  EXPECT_DOUBLE_EQ(e.coefficient, 0.5);
}

TEST(EncodeTerm, FourModeCodeHopping) {
  auto code = four_mode_code();
  const LadderOp ops[] = {cre(0), ann(1)};
  auto e = encode_term(decompose_term(ops, 4, 1), code);
  EXPECT_EQ(e.x, bv("110"));
  ASSERT_EQ(e.pairs.size(), 1u);
  EXPECT_EQ(e.pairs[0].label, bv("010"));
  EXPECT_EQ(e.pairs[0].conjugate, bv("100"));
}

TEST(EncodeTerm, ModeMismatchThrows) {
  const LadderOp ops[] = {cre(0), ann(1)};
  auto t = decompose_term(ops, 5, 1);
  EXPECT_THROW(encode_term(t, four_mode_code()), std::invalid_argument);
}

TEST(EncodeTerm, LabelsDistinctOnFullTermSet) {
  SplitMix64 rng(1);
  auto code = code_for(6, 2, 3);
  ASSERT_LT(code.qubits(), 6u);
  auto h = oracle::full_hamiltonian(6, 2, rng);
  for (const auto& t : hamiltonian_terms(h, 2)) {
    auto e = encode_term(t, code);
    std::set<BitVector> labels;
    for (const auto& p : e.pairs) {
      EXPECT_EQ(p.label.size(), code.qubits());
      EXPECT_TRUE(labels.insert(p.label).second);
      if (t.x.any()) {
        EXPECT_NE(p.label, p.conjugate);
      }
    }
    EXPECT_EQ(e.x.none(), t.x.none());
  }
}

TEST(BuildBasis, Examples) {
  auto b = build_basis(bv("100"));
  EXPECT_TRUE(b.network.empty());
  EXPECT_EQ(b.pivot, 0u);
  EXPECT_EQ(b.rotation, Rotation::hadamard);

  b = build_basis(bv("110"));
  ASSERT_EQ(b.network.size(), 1u);
  EXPECT_EQ(b.network[0], (Cnot{0, 1}));
  EXPECT_EQ(matvec(b.matrix, bv("110")), bv("100"));

  b = build_basis(bv("000"));
  EXPECT_TRUE(b.network.empty());
  EXPECT_FALSE(b.pivot);
  EXPECT_EQ(b.rotation, Rotation::none);

  EXPECT_EQ(build_basis(bv("011"), Part::im).rotation, Rotation::y_basis);
}

TEST(BuildBasis, AllOnesPairsConjugatesOnEveryLabel) {
  const auto key = bv("1111");
  auto b = build_basis(key);
  EXPECT_EQ(b.network.size(), 3u);
  EXPECT_EQ(matvec(b.matrix, key), BitVector::unit(4, 0));
  for (std::uint64_t v = 0; v < 16; ++v) {
    auto label = oracle::from_mask(v, 4);
    EXPECT_EQ(matvec(b.matrix, label) ^ matvec(b.matrix, label ^ key), BitVector::unit(4, 0));
  }
}

TEST(BuildBasis, MatrixIsProductOfElementaryCnots) {
  SplitMix64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const std::size_t q = 1 + rng.below(9);
    auto key = oracle::random_vector(q, rng);
    auto b = build_basis(key);
    BitMatrix prod = BitMatrix::identity(q);
    for (const auto& g : b.network) {
      BitMatrix e = BitMatrix::identity(q);
      e.set(g.target, g.control);
      prod = e * prod;
      EXPECT_LT(g.control, g.target);
    }
    EXPECT_EQ(prod, b.matrix);
    EXPECT_EQ(b.matrix * b.inverse, BitMatrix::identity(q));
    if (key.any()) {
      EXPECT_EQ(matvec(b.matrix, key), BitVector::unit(q, *b.pivot));
      EXPECT_EQ(*b.pivot, *key.lowest_set());
    }
    // Agrees with the permutation it induces on basis states.
    auto u = oracle::cnot_network_unitary(b.network, q);
    for (int s = 0; s < 5; ++s) {
      auto v = oracle::random_vector(q, rng);
      std::uint64_t vi = 0, wi = 0;
      auto w = matvec(b.matrix, v);
      for (std::size_t i = 0; i < q; ++i) {
        vi |= v.test(i) ? std::uint64_t{1} << i : 0;
        wi |= w.test(i) ? std::uint64_t{1} << i : 0;
      }
      EXPECT_EQ(u(static_cast<Eigen::Index>(wi), static_cast<Eigen::Index>(vi)), std::complex<double>(1.0));
    }
  }
}

TEST(PauliExpand, DiagonalSingleQubit) {
  auto e = pauli_expand(manual_term("0", {{"0", 1}}));
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].first.to_string(), "I");
  EXPECT_DOUBLE_EQ(e[0].second, 0.5);
  EXPECT_EQ(e[1].first.to_string(), "Z");
  EXPECT_DOUBLE_EQ(e[1].second, 0.5);
}

TEST(PauliExpand, PairOfProjectorsGivesX) {
  auto e = pauli_expand(manual_term("1", {{"0", 1}, {"1", 1}}));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].first.to_string(), "X");
  EXPECT_DOUBLE_EQ(e[0].second, 1.0);
}

TEST(PauliExpand, ImaginaryPartGivesY) {
  // O = |1><0|, Im O = (|1><0| - |0><1|)/(2i) = -Y/2.
  auto e = pauli_expand(manual_term("1", {{"0", 1}}, Part::im));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].first.to_string(), "Y");
  EXPECT_DOUBLE_EQ(e[0].second, -0.5);
}

TEST(PauliExpand, MatchesDenseProjectorMatrix) {
  SplitMix64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t q = 1 + rng.below(4);
    const Part part = rng.below(2) ? Part::re : Part::im;
    auto term = random_term(q, rng, part);
    auto expanded = pauli_sum(pauli_expand(term), q);
    auto direct = oracle::encoded_term_matrix(term);
    EXPECT_LT((expanded - direct).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((direct - direct.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(PauliExpand, ScaleGuard) {
  EncodedXPTerm t;
  t.x = BitVector(13);
  EXPECT_THROW(pauli_expand(t), std::invalid_argument);
}

TEST(GroupTerms, FullHamiltonianCountsMatchBound) {
  SplitMix64 rng(4);
  for (std::size_t m : {4u, 6u, 8u}) {
    for (std::size_t n : {1u, 2u, 3u}) {
      if (2 * n >= m) continue;
      SCOPED_TRACE(testing::Message() << "M=" << m << " N=" << n);
      auto h = oracle::full_hamiltonian(m, n, rng);
      auto terms = hamiltonian_terms(h, n);
      const std::size_t bound = 1 + c(m, 2) + c(m, 4);

      // Without compression the groups are the distinct fermionic X-vectors.
      auto jw = encode_hamiltonian(h, SubspaceCode::identity(m, n));
      EXPECT_EQ(jw.groups.size(), distinct_x_count(terms));
      if (n >= 2) {
        EXPECT_EQ(jw.groups.size(), bound);
      }

      // A compressed code can send different a to the same G a; the groups
      // are then the distinct encoded X-strings, never more than before.
      auto code = code_for(m, n, m + n);
      auto enc = encode_hamiltonian(h, code);
      std::set<BitVector> encoded_x;
      for (const auto& t : terms) encoded_x.insert(code.encode(t.x));
      EXPECT_EQ(enc.groups.size(), encoded_x.size());
      EXPECT_LE(enc.groups.size(), jw.groups.size());
      EXPECT_LE(enc.groups.size(), bound);
      EXPECT_EQ(enc.term_count(), terms.size());
    }
  }
}

TEST(GroupTerms, FourModeFullTwoRdmHasEightGroups) {
  SplitMix64 rng(5);
  auto h = oracle::full_hamiltonian(4, 2, rng);
  auto enc = encode_hamiltonian(h, SubspaceCode::identity(4, 2));
  EXPECT_EQ(enc.groups.size(), 8u);
  // Brute-force distinct a vectors over every listed ladder product.
  std::set<BitVector> xs;
  for (const auto& [k, v] : h.one_body()) xs.insert(BitVector::unit(4, k[0]) ^ BitVector::unit(4, k[1]));
  for (const auto& [k, v] : h.two_body()) {
    xs.insert(BitVector::unit(4, k[0]) ^ BitVector::unit(4, k[1]) ^ BitVector::unit(4, k[2]) ^ BitVector::unit(4, k[3]));
  }
  EXPECT_EQ(xs.size(), 8u);
}

TEST(GroupTerms, DiagonalOnlyHamiltonianHasOneGroup) {
  FermionHamiltonian h(5, 2);
  for (std::size_t i = 0; i < 5; ++i) h.set_one_body(i, i, 0.1 * static_cast<double>(i + 1));
  h.set_two_body(0, 1, 1, 0, 0.3);
  auto enc = encode_hamiltonian(h, code_for(5, 2, 0));
  ASSERT_EQ(enc.groups.size(), 1u);
  EXPECT_TRUE(enc.groups[0].x_key.none());
  EXPECT_EQ(enc.groups[0].basis.rotation, Rotation::none);
}

TEST(GroupTerms, OrderedByKeyAndDeterministic) {
  SplitMix64 rng(6);
  auto h = oracle::full_hamiltonian(6, 2, rng);
  auto code = code_for(6, 2, 1);
  auto a = encode_hamiltonian(h, code);
  auto b = encode_hamiltonian(h, code);
  EXPECT_EQ(group_report_json(a.groups), group_report_json(b.groups));
  for (std::size_t i = 1; i < a.groups.size(); ++i) EXPECT_LT(a.groups[i - 1].x_key, a.groups[i].x_key);
  for (const auto& g : a.groups)
    for (const auto& t : g.terms) EXPECT_EQ(t.x, g.x_key);
}

TEST(GroupTerms, PauliStringsCommuteWithinEveryGroup) {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    auto h = oracle::full_hamiltonian(6, 2, rng);
    auto code = code_for(6, 2, 10 + trial);
    ASSERT_LE(code.qubits(), 8u);
    for (const auto& g : encode_hamiltonian(h, code).groups) {
      std::vector<PauliString> strings;
      for (const auto& t : g.terms)
        for (const auto& [p, v] : pauli_expand(t)) strings.push_back(p);
      for (std::size_t i = 0; i < strings.size(); ++i)
        for (std::size_t j = i + 1; j < strings.size(); ++j) ASSERT_TRUE(commutes(strings[i], strings[j]));
    }
  }
}

TEST(GroupTerms, NetworkDiagonalizesEveryGroup) {
  // After the CNOT network the group acts as pivot-X times a diagonal; after
  // the pivot rotation it is diagonal.
  SplitMix64 rng(8);
  auto h = oracle::full_hamiltonian(6, 2, rng);
  auto code = code_for(6, 2, 4);
  const std::size_t q = code.qubits();
  ASSERT_LE(q, 8u);
  for (const auto& g : encode_hamiltonian(h, code).groups) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << q);
    oracle::CMat op = oracle::CMat::Zero(dim, dim);
    for (const auto& t : g.terms) op += oracle::encoded_term_matrix(t);
    const auto u = oracle::cnot_network_unitary(g.basis.network, q);
    const oracle::CMat conj = u * op * u.adjoint();
    const std::uint64_t flip = g.basis.pivot ? std::uint64_t{1} << *g.basis.pivot : 0;
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index col = 0; col < dim; ++col) {
        if ((static_cast<std::uint64_t>(r ^ col) & ~flip) != 0) {
          ASSERT_LT(std::abs(conj(r, col)), 1e-12);
        }
      }
    oracle::CMat rot = oracle::CMat::Identity(dim, dim);
    if (g.basis.pivot) {
      rot = oracle::on_qubit(oracle::hadamard(), *g.basis.pivot, q);
      if (g.basis.rotation == Rotation::y_basis) rot = rot * oracle::on_qubit(oracle::s_dagger(), *g.basis.pivot, q);
    }
    const oracle::CMat diag = rot * conj * rot.adjoint();
    oracle::CMat off = diag;
    off.diagonal().setZero();
    EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(GroupTerms, ImaginaryTermsGetTheirOwnYBasisGroup) {
  auto code = four_mode_code();
  const LadderOp ops[] = {cre(0), ann(1)};
  auto re = encode_term(decompose_term(ops, 4, 1, 1.0, Part::re), code);
  auto im = encode_term(decompose_term(ops, 4, 1, 1.0, Part::im), code);
  auto groups = group_terms({re, im});
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].part, Part::re);
  EXPECT_EQ(groups[1].part, Part::im);
  EXPECT_EQ(groups[1].basis.rotation, Rotation::y_basis);
}

TEST(GroupReport, JsonFields) {
  auto groups = group_terms({manual_term("110", {{"010", 1}})});
  auto js = group_report_json(groups);
  for (const char* key : {"\"x_key\": \"110\"", "\"pivot\": 0", "\"rotation\": \"H\"", "\"cnots\""})
    EXPECT_NE(js.find(key), std::string::npos) << key << "\n" << js;
}
