#pragma once

// Classical decoding of measured histograms back to fermionic expectation
// values: undo the basis network on each outcome, look the label up in the
// syndrome table, keep only number-conserving states.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "linenc/encoding.hpp"
#include "linenc/statevector.hpp"
#include "linenc/subspace_code.hpp"

namespace linenc {

struct DecodedExpectation {
  double value = 0.0;
  /// Probability of outcomes that decode to a weight-N state.
  double post_selected_mass = 0.0;
  double discarded_mass = 0.0;
  /// Part of post_selected_mass on states no term of the group acts on.
  double unmatched_mass = 0.0;
  std::size_t outcome_count = 0;
};

struct OutcomeWeight {
  double weight = 0.0;  // contribution per unit probability
  bool post_selected = false;
  bool matched = false;
};

/// Decoding of a single measured bitstring d for one group.
OutcomeWeight fed_outcome_weight(const BitVector& outcome, const MeasurementGroup& group, const LookupDecoder& decoder);

DecodedExpectation fed_decode_group(const Histogram& histogram, const MeasurementGroup& group, const SubspaceCode& code,
                                    const LookupDecoder& decoder);

struct EnergyEstimate {
  double energy = 0.0;
  std::vector<DecodedExpectation> groups;
};

/// core + sum over groups; exact probabilities when `shots` is empty,
/// otherwise `shots` samples per group from SplitMix64::stream(seed, group).
EnergyEstimate evaluate_energy(const EncodedHamiltonian& h, const StateVector& state, const SubspaceCode& code,
                               const LookupDecoder& decoder, std::optional<std::uint64_t> shots = std::nullopt,
                               std::uint64_t seed = 0);

/// Exact-probability energy with every outcome weight tabulated once; the
/// repeated-evaluation path used by the optimizer.
class EnergyEvaluator {
 public:
  EnergyEvaluator(const EncodedHamiltonian& h, const SubspaceCode& code, const LookupDecoder& decoder);
  [[nodiscard]] double operator()(const StateVector& state) const;

 private:
  const EncodedHamiltonian* h_;
  std::vector<std::vector<double>> weights_;  // [group][outcome index]
};

/// Per group: x_key, value, post_selected_mass, discarded_mass, outcome count.
std::string decode_report_json(const std::vector<MeasurementGroup>& groups, const EnergyEstimate& estimate);

}  // namespace linenc
