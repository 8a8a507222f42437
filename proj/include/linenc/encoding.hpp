#pragma once

// Fermionic X/P terms pushed through an encoder, grouped by encoded X-string,
// and the CNOT network that turns each group into a single-qubit measurement.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linenc/fermion.hpp"
#include "linenc/gf2.hpp"
#include "linenc/subspace_code.hpp"

namespace linenc {

struct ProjectorPair {
  BitVector label;      // G b
  BitVector conjugate;  // G (a xor b)
  int sign = 1;         // s0 (-1)^(c.b)
};

struct EncodedXPTerm {
  double coefficient = 0.0;
  BitVector x;  // G a
  std::vector<ProjectorPair> pairs;
  Part part = Part::re;
  XPTerm source;
};

EncodedXPTerm encode_term(const XPTerm& term, const SubspaceCode& code);

struct Cnot {
  std::size_t control;
  std::size_t target;
  friend bool operator==(const Cnot&, const Cnot&) = default;
};

enum class Rotation { none, hadamard, y_basis };
const char* to_string(Rotation r) noexcept;

struct MeasurementBasis {
  std::vector<Cnot> network;
  /// Action of the network on computational labels: |v> -> |matrix v>.
  BitMatrix matrix;
  BitMatrix inverse;
  std::optional<std::size_t> pivot;  // empty for a zero X-string
  Rotation rotation = Rotation::none;
};

/// Star network from the lowest set bit of x_key to every other set bit.
MeasurementBasis build_basis(const BitVector& x_key, Part part = Part::re);

struct MeasurementGroup {
  BitVector x_key;
  Part part = Part::re;
  std::vector<EncodedXPTerm> terms;
  MeasurementBasis basis;
};

/// One group per (x_key, part), ordered by x_key with Re before Im.
std::vector<MeasurementGroup> group_terms(std::vector<EncodedXPTerm> terms);

struct EncodedHamiltonian {
  std::size_t qubits = 0;
  double core_energy = 0.0;
  std::vector<MeasurementGroup> groups;

  [[nodiscard]] std::size_t term_count() const noexcept;
};

EncodedHamiltonian encode_hamiltonian(const FermionHamiltonian& h, const SubspaceCode& code);

/// i^(x.z) X^x Z^z, a Hermitian Pauli with Y wherever both bits are set.
struct PauliString {
  BitVector x;
  BitVector z;
  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.z <=> b.z;
  }
};

bool commutes(const PauliString& a, const PauliString& b);

/// Exact real Pauli expansion of an encoded term; Q <= 12.
std::vector<std::pair<PauliString, double>> pauli_expand(const EncodedXPTerm& term);

/// Number of distinct fermionic X-vectors a, before encoding.
std::size_t distinct_x_count(const std::vector<XPTerm>& terms);

/// Per group: x_key, part, term count, CNOT list, pivot, rotation.
std::string group_report_json(const std::vector<MeasurementGroup>& groups);

}  // namespace linenc
