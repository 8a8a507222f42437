#pragma once

// Second-quantized Hamiltonians on M spin-orbitals, exact ladder action on
// Fock bitstrings, and the X/P decomposition of each term.
//
// Modes are 0-based in the API and 1-based in files. A ladder product is
// written left to right as in the operator expression and acts right to left.

#include <algorithm>
#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "linenc/gf2.hpp"

namespace linenc {

struct LadderOp {
  std::size_t mode;
  bool create;
};

inline LadderOp cre(std::size_t mode) { return {mode, true}; }
inline LadderOp ann(std::size_t mode) { return {mode, false}; }

struct LadderResult {
  int sign;
  BitVector state;
};

/// Jordan-Wigner action: each operator on mode i picks up (-1)^(occupied
/// modes below i). nullopt when the product annihilates the state.
std::optional<LadderResult> apply_ladder(std::span<const LadderOp> ops, const BitVector& state);

enum class Part { re, im };
const char* to_string(Part p) noexcept;

/// coefficient * Re(O) or coefficient * Im(O), where
///   O |b> = s0 (-1)^(c.b) |a xor b>  for b in support, and 0 otherwise,
/// Re O = (O + O^dag)/2 and Im O = (O - O^dag)/(2i).
struct XPTerm {
  double coefficient = 1.0;
  BitVector x;
  BitVector c;
  int s0 = 1;
  std::vector<BitVector> support;  // sorted
  Part part = Part::re;

  [[nodiscard]] std::size_t modes() const noexcept { return x.size(); }
  [[nodiscard]] bool diagonal() const noexcept { return x.none(); }
  [[nodiscard]] int sign(const BitVector& b) const { return c.dot(b) ? -s0 : s0; }
  [[nodiscard]] bool contains(const BitVector& b) const {
    return std::binary_search(support.begin(), support.end(), b);
  }
};

/// Throws std::invalid_argument for a product that does not conserve particle
/// number, std::runtime_error if the signs on the support are not affine in b.
XPTerm decompose_term(std::span<const LadderOp> ops, std::size_t modes, std::size_t electrons,
                      double coefficient = 1.0, Part part = Part::re);

class FermionHamiltonian {
 public:
  using OneKey = std::array<std::size_t, 2>;
  using TwoKey = std::array<std::size_t, 4>;

  FermionHamiltonian() = default;
  FermionHamiltonian(std::size_t modes, std::size_t electrons, double core_energy = 0.0)
      : modes_(modes), electrons_(electrons), core_energy_(core_energy) {}

  [[nodiscard]] std::size_t modes() const noexcept { return modes_; }
  [[nodiscard]] std::size_t electrons() const noexcept { return electrons_; }
  [[nodiscard]] double core_energy() const noexcept { return core_energy_; }
  void set_core_energy(double e) noexcept { core_energy_ = e; }

  /// Coefficient of a+_i a_j; the conjugate entry h_ji is set to the same value.
  void set_one_body(std::size_t i, std::size_t j, double value);
  /// Coefficient of a+_i a+_j a_k a_l; the conjugate entry g_lkji is set too.
  void set_two_body(std::size_t i, std::size_t j, std::size_t k, std::size_t l, double value);

  /// Both members of each conjugate pair are present.
  [[nodiscard]] const std::map<OneKey, double>& one_body() const noexcept { return one_body_; }
  [[nodiscard]] const std::map<TwoKey, double>& two_body() const noexcept { return two_body_; }

  /// Renames mode i to perm[i] in every coefficient.
  [[nodiscard]] FermionHamiltonian permuted(std::span<const std::size_t> perm) const;

  /// Native text format: MODES / ELECTRONS / ECORE header, then 1B and 2B lines.
  static FermionHamiltonian parse(const std::string& text);
  [[nodiscard]] std::string write() const;
  /// Native or FCIDUMP, chosen by content.
  static FermionHamiltonian load(const std::filesystem::path& path);

  friend bool operator==(const FermionHamiltonian&, const FermionHamiltonian&) = default;

 private:
  void check_index(std::size_t i) const;

  std::size_t modes_ = 0;
  std::size_t electrons_ = 0;
  double core_energy_ = 0.0;
  std::map<OneKey, double> one_body_;
  std::map<TwoKey, double> two_body_;
};

/// Chemist-notation spatial-orbital FCIDUMP, expanded to spin-orbitals with
/// index 2p + spin.
FermionHamiltonian import_fcidump(const std::string& text);

/// Real parts of every nonvanishing term, with terms that share the same
/// Re operator (conjugate pairs in particular) merged.
std::vector<XPTerm> hamiltonian_terms(const FermionHamiltonian& h, std::size_t electrons, double drop_below = 1e-12);

/// All weight-N states of length M in combination order.
std::vector<BitVector> fock_basis(std::size_t modes, std::size_t electrons);

/// Matrix of H (without the core energy) on fock_basis(M, N).
Eigen::MatrixXd dense_hamiltonian(const FermionHamiltonian& h, std::size_t electrons);

/// Lowest eigenvalue plus the core energy; needs C(M,N) <= 10^4.
double exact_ground_energy(const FermionHamiltonian& h, std::size_t electrons);

}  // namespace linenc
