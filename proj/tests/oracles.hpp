#pragma once

// Reference implementations used only by the tests. They are written the
// slow, obvious way and share no code with the library beyond the value
// types.

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "linenc/encoding.hpp"
#include "linenc/fermion.hpp"
#include "linenc/gf2.hpp"
#include "linenc/rng.hpp"

namespace oracle {

using linenc::BitMatrix;
using linenc::BitVector;
using CMat = Eigen::MatrixXcd;

inline BitVector random_vector(std::size_t n, linenc::SplitMix64& rng) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, (rng() & 1U) != 0);
  return v;
}

inline BitMatrix random_matrix(std::size_t r, std::size_t c, linenc::SplitMix64& rng) {
  BitMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, (rng() & 1U) != 0);
  return m;
}

inline BitVector from_mask(std::uint64_t mask, std::size_t n) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, ((mask >> i) & 1U) != 0);
  return v;
}

/// Entry-by-entry parity.
inline BitVector naive_matvec(const BitMatrix& m, const BitVector& v) {
  BitVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    int acc = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc ^= (m.test(i, j) && v.test(j)) ? 1 : 0;
    out.set(i, acc != 0);
  }
  return out;
}

/// Every x with m x = target, by enumeration.
inline std::vector<BitVector> all_solutions(const BitMatrix& m, const BitVector& target) {
  std::vector<BitVector> out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m.cols()); ++x) {
    auto v = from_mask(x, m.cols());
    if (naive_matvec(m, v) == target) out.push_back(v);
  }
  return out;
}

// --- Fock space by Kronecker products ------------------------------------
// Mode i is bit i of the 2^M index. The factor for mode 0 is the rightmost
// Kronecker factor so that it acts on the least significant bit.

inline CMat kron_chain(const std::vector<CMat>& factors_by_mode) {
  CMat out = CMat::Identity(1, 1);
  for (const auto& f : factors_by_mode) {
    CMat next = Eigen::kroneckerProduct(f, out).eval();
    out = next;
  }
  return out;
}

inline CMat pauli_i() { return CMat::Identity(2, 2); }
inline CMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline CMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMat pauli_y() {
  CMat m(2, 2);
  m << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  return m;
}
/// |0><1| in the (|0>, |1>) basis: removes a particle.
inline CMat lowering() {
  CMat m(2, 2);
  m << 0, 1, 0, 0;
  return m;
}

/// Jordan-Wigner annihilator on mode j of M: Z on every lower mode.
inline CMat jw_annihilator(std::size_t j, std::size_t modes) {
  std::vector<CMat> f(modes, pauli_i());
  for (std::size_t m = 0; m < j; ++m) f[m] = pauli_z();
  f[j] = lowering();
  return kron_chain(f);
}

inline CMat jw_hamiltonian(const linenc::FermionHamiltonian& h) {
  const std::size_t m = h.modes();
  std::vector<CMat> a;
  for (std::size_t j = 0; j < m; ++j) a.push_back(jw_annihilator(j, m));
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << m);
  CMat out = CMat::Zero(dim, dim);
  for (const auto& [k, v] : h.one_body()) out += v * a[k[0]].adjoint() * a[k[1]];
  for (const auto& [k, v] : h.two_body()) out += v * a[k[0]].adjoint() * a[k[1]].adjoint() * a[k[2]] * a[k[3]];
  return out;
}

/// Restriction of a 2^M operator to the weight-N states, in the order given.
inline CMat restrict_to(const CMat& full, const std::vector<BitVector>& basis) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  CMat out(n, n);
  auto idx = [](const BitVector& b) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b.test(i)) x |= std::uint64_t{1} << i;
    return static_cast<Eigen::Index>(x);
  };
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = full(idx(basis[r]), idx(basis[c]));
  return out;
}

/// Dense matrix of a Hermitian Pauli string (qubit q = bit q of the index).
inline CMat pauli_matrix(const linenc::PauliString& p) {
  std::vector<CMat> f;
  for (std::size_t q = 0; q < p.x.size(); ++q) {
    const bool x = p.x.test(q), z = p.z.test(q);
    f.push_back(x && z ? pauli_y() : x ? pauli_x() : z ? pauli_z() : pauli_i());
  }
  return kron_chain(f);
}

/// coefficient * Re or Im of X^{Ga} sum_b s (|Gb> <Gb| -/+ ...) built from projectors.
inline CMat encoded_term_matrix(const linenc::EncodedXPTerm& t) {
  const std::size_t q = t.x.size();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << q);
  auto idx = [](const BitVector& b) {
    std::uint64_t x = 0;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b.test(i)) x |= std::uint64_t{1} << i;
    return static_cast<Eigen::Index>(x);
  };
  // O = sum s |G(a+b)><Gb|.
  CMat o = CMat::Zero(dim, dim);
  for (const auto& p : t.pairs) o(idx(p.conjugate), idx(p.label)) += static_cast<double>(p.sign);
  const CMat herm = t.part == linenc::Part::re ? CMat(0.5 * (o + o.adjoint()))
                                               : CMat((o - o.adjoint()) / std::complex<double>(0, 2));
  return t.coefficient * herm;
}

/// |v> -> |C v> for a CNOT list applied in order, as a permutation matrix.
inline CMat cnot_network_unitary(const std::vector<linenc::Cnot>& network, std::size_t qubits) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << qubits);
  CMat u = CMat::Zero(dim, dim);
  for (std::uint64_t v = 0; v < static_cast<std::uint64_t>(dim); ++v) {
    std::uint64_t w = v;
    for (const auto& c : network)
      if ((w >> c.control) & 1U) w ^= std::uint64_t{1} << c.target;
    u(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(v)) = 1.0;
  }
  return u;
}

/// Single-qubit gate g on qubit q of n.
inline CMat on_qubit(const CMat& g, std::size_t q, std::size_t n) {
  std::vector<CMat> f(n, pauli_i());
  f[q] = g;
  return kron_chain(f);
}

inline CMat hadamard() {
  CMat m(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  m << r, r, r, -r;
  return m;
}

inline CMat s_dagger() {
  CMat m(2, 2);
  m << 1, 0, 0, std::complex<double>(0, -1);
  return m;
}

/// Every one-body entry and every two-body entry with i != j, k != l, with
/// random real coefficients; the conjugate of each entry gets the same value.
inline linenc::FermionHamiltonian full_hamiltonian(std::size_t m, std::size_t n, linenc::SplitMix64& rng) {
  linenc::FermionHamiltonian h(m, n, rng.uniform(-1, 1));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) h.set_one_body(i, j, rng.uniform(-1, 1));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l)
          if (i != j && k != l) h.set_two_body(i, j, k, l, rng.uniform(-0.5, 0.5));
  return h;
}

}  // namespace oracle
