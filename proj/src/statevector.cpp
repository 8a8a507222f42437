#include "linenc/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "linenc/rng.hpp"

namespace linenc {

StateVector::StateVector(std::size_t qubits) : qubits_(qubits) {
  if (qubits > kMaxSimQubits) {
    throw std::invalid_argument("state vector limited to " + std::to_string(kMaxSimQubits) + " qubits, got " +
                                std::to_string(qubits));
  }
  amps_.assign(std::size_t{1} << qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::basis_state(const BitVector& label) {
  StateVector s(label.size());
  s.amps_[0] = 0.0;
  s.amps_[index_of(label)] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::size_t qubits, std::vector<Amplitude> amplitudes) {
  StateVector s(qubits);
  if (amplitudes.size() != s.amps_.size()) throw std::invalid_argument("amplitude count must be 2^qubits");
  s.amps_ = std::move(amplitudes);
  return s;
}

Amplitude StateVector::amplitude(const BitVector& label) const {
  if (label.size() != qubits_) throw std::invalid_argument("label length mismatch");
  return amps_[index_of(label)];
}

double StateVector::norm_squared() const noexcept {
  double n = 0.0;
  for (const auto& a : amps_) n += std::norm(a);
  return n;
}

std::uint64_t StateVector::index_of(const BitVector& label) {
  return label.empty() ? 0 : label.words()[0];
}

BitVector StateVector::label_of(std::uint64_t index) const {
  BitVector v(qubits_);
  if (qubits_ > 0) v.words()[0] = index;
  return v;
}

void StateVector::check_qubit(std::size_t q) const {
  if (q >= qubits_) throw std::out_of_range("qubit " + std::to_string(q) + " out of range");
}

void StateVector::apply(const Gate& g) {
  check_qubit(g.q0);
  const std::size_t n = amps_.size();
  const std::size_t bit = std::size_t{1} << g.q0;
  switch (g.kind) {
    case GateKind::x:
      for (std::size_t i = 0; i < n; ++i) {
        if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
      }
      break;
    case GateKind::ry: {
      const double c = std::cos(g.theta / 2);
      const double s = std::sin(g.theta / 2);
      for (std::size_t i = 0; i < n; ++i) {
        if (i & bit) continue;
        const Amplitude a0 = amps_[i];
        const Amplitude a1 = amps_[i | bit];
        amps_[i] = c * a0 - s * a1;
        amps_[i | bit] = s * a0 + c * a1;
      }
      break;
    }
    case GateKind::h: {
      const double r = 1.0 / std::sqrt(2.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (i & bit) continue;
        const Amplitude a0 = amps_[i];
        const Amplitude a1 = amps_[i | bit];
        amps_[i] = r * (a0 + a1);
        amps_[i | bit] = r * (a0 - a1);
      }
      break;
    }
    case GateKind::sdg:
      for (std::size_t i = 0; i < n; ++i) {
        if (i & bit) amps_[i] *= Amplitude{0.0, -1.0};
      }
      break;
    case GateKind::cnot: {
      check_qubit(g.q1);
      if (g.q1 == g.q0) throw std::invalid_argument("CNOT control equals target");
      const std::size_t tbit = std::size_t{1} << g.q1;
      for (std::size_t i = 0; i < n; ++i) {
        if ((i & bit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
      }
      break;
    }
  }
}

void StateVector::apply(std::span<const Gate> gates) {
  for (const auto& g : gates) apply(g);
}

std::vector<Gate> HeaCircuit::gates(std::span<const double> theta) const {
  if (theta.size() != parameter_count()) {
    throw std::invalid_argument("HEA expects " + std::to_string(parameter_count()) + " parameters, got " +
                                std::to_string(theta.size()));
  }
  std::vector<Gate> out;
  out.reserve(parameter_count() + cnot_count());
  std::size_t p = 0;
  for (std::size_t q = 0; q < qubits; ++q) out.push_back(Gate::Ry(q, theta[p++]));
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t q = 0; q + 1 < qubits; ++q) out.push_back(Gate::CNOT(q, q + 1));
    for (std::size_t q = 0; q < qubits; ++q) out.push_back(Gate::Ry(q, theta[p++]));
  }
  return out;
}

void run_hea(StateVector& state, const HeaCircuit& circuit, std::span<const double> theta) {
  if (circuit.qubits != state.qubits()) throw std::invalid_argument("circuit and state qubit counts differ");
  state.apply(circuit.gates(theta));
}

StateVector prepare_encoded_reference(const SubspaceCode& code, const BitVector& occupation) {
  if (occupation.size() != code.modes()) throw std::invalid_argument("occupation length must equal the mode count");
  if (occupation.weight() != code.electrons()) {
    throw std::invalid_argument("occupation weight " + std::to_string(occupation.weight()) + " != electrons " +
                                std::to_string(code.electrons()));
  }
  StateVector s(code.qubits());
  for (auto q : code.encode(occupation).support()) s.apply(Gate::X(q));
  return s;
}

BitVector apply_cnot_chain(BitVector label, std::size_t count) {
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t q = 0; q + 1 < label.size(); ++q) {
      if (label[q]) label.flip(q + 1);
    }
  }
  return label;
}

BitVector undo_cnot_chain(BitVector label, std::size_t count) {
  for (std::size_t r = 0; r < count; ++r) {
    for (std::size_t q = label.size(); q-- > 1;) {
      if (label[q - 1]) label.flip(q);
    }
  }
  return label;
}

StateVector rotate_to_basis(const StateVector& state, const MeasurementBasis& basis) {
  StateVector s = state;
  for (const auto& c : basis.network) s.apply(Gate::CNOT(c.control, c.target));
  if (basis.pivot) {
    if (basis.rotation == Rotation::y_basis) s.apply(Gate::Sdg(*basis.pivot));
    if (basis.rotation != Rotation::none) s.apply(Gate::H(*basis.pivot));
  }
  return s;
}

Histogram measure_distribution(const StateVector& state, const MeasurementBasis& basis) {
  const StateVector s = rotate_to_basis(state, basis);
  Histogram h;
  const auto& a = s.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double p = std::norm(a[i]);
    if (p > 0.0) h.emplace(s.label_of(i), p);
  }
  return h;
}

Histogram measure_distribution(const StateVector& state, const MeasurementBasis& basis, std::uint64_t shots,
                               std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shot count must be positive");
  const StateVector s = rotate_to_basis(state, basis);
  const auto& a = s.amplitudes();
  std::vector<double> cdf(a.size());
  double run = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cdf[i] = run += std::norm(a[i]);
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> counts(a.size(), 0);
  for (std::uint64_t k = 0; k < shots; ++k) {
    const double u = rng.uniform() * run;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++counts[static_cast<std::size_t>(it - cdf.begin())];
  }
  Histogram h;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) h.emplace(s.label_of(i), static_cast<double>(counts[i]) / static_cast<double>(shots));
  }
  return h;
}

std::string histogram_json(const Histogram& h) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, p] : h) j[k.to_string()] = p;
  return j.dump(2);
}

}  // namespace linenc
