#pragma once

// Dense state-vector simulation. Qubit q is bit q of the amplitude index and
// the q-th character of a label, so |10> has amplitude index 1.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "linenc/encoding.hpp"
#include "linenc/gf2.hpp"
#include "linenc/subspace_code.hpp"

namespace linenc {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kMaxSimQubits = 20;

enum class GateKind { x, ry, h, sdg, cnot };

struct Gate {
  GateKind kind;
  std::size_t q0;
  std::size_t q1 = 0;  // target, for CNOT
  double theta = 0.0;  // for Ry

  static Gate X(std::size_t q) { return {GateKind::x, q}; }
  static Gate Ry(std::size_t q, double theta) { return {GateKind::ry, q, 0, theta}; }
  static Gate H(std::size_t q) { return {GateKind::h, q}; }
  static Gate Sdg(std::size_t q) { return {GateKind::sdg, q}; }
  static Gate CNOT(std::size_t control, std::size_t target) { return {GateKind::cnot, control, target}; }
};

class StateVector {
 public:
  /// |0...0> on `qubits` qubits; throws beyond kMaxSimQubits.
  explicit StateVector(std::size_t qubits);
  static StateVector basis_state(const BitVector& label);
  static StateVector from_amplitudes(std::size_t qubits, std::vector<Amplitude> amplitudes);

  [[nodiscard]] std::size_t qubits() const noexcept { return qubits_; }
  [[nodiscard]] const std::vector<Amplitude>& amplitudes() const noexcept { return amps_; }
  [[nodiscard]] Amplitude amplitude(const BitVector& label) const;
  [[nodiscard]] double norm_squared() const noexcept;

  void apply(const Gate& g);
  void apply(std::span<const Gate> gates);

  static std::uint64_t index_of(const BitVector& label);
  [[nodiscard]] BitVector label_of(std::uint64_t index) const;

 private:
  void check_qubit(std::size_t q) const;

  std::size_t qubits_;
  std::vector<Amplitude> amps_;
};

/// Leading Ry column, then `layers` blocks of (CNOT chain q->q+1, Ry column).
struct HeaCircuit {
  std::size_t qubits = 0;
  std::size_t layers = 0;

  [[nodiscard]] std::size_t parameter_count() const noexcept { return qubits * (layers + 1); }
  [[nodiscard]] std::size_t cnot_count() const noexcept { return qubits == 0 ? 0 : layers * (qubits - 1); }
  [[nodiscard]] std::vector<Gate> gates(std::span<const double> theta) const;
};

void run_hea(StateVector& state, const HeaCircuit& circuit, std::span<const double> theta);

/// |G occupation> by X gates.
StateVector prepare_encoded_reference(const SubspaceCode& code, const BitVector& occupation);

/// Label obtained from `label` by `count` passes of the CNOT chain.
BitVector apply_cnot_chain(BitVector label, std::size_t count);
BitVector undo_cnot_chain(BitVector label, std::size_t count);

using Histogram = std::map<BitVector, double>;

/// Exact probabilities after the basis change; zero entries are omitted.
Histogram measure_distribution(const StateVector& state, const MeasurementBasis& basis);
/// Empirical frequencies of `shots` samples drawn with `seed`.
Histogram measure_distribution(const StateVector& state, const MeasurementBasis& basis, std::uint64_t shots,
                               std::uint64_t seed);

/// Copy of the state with the network and pivot rotation applied.
StateVector rotate_to_basis(const StateVector& state, const MeasurementBasis& basis);

std::string histogram_json(const Histogram& h);

}  // namespace linenc
