#include "linenc/fed.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "linenc/rng.hpp"

namespace linenc {

namespace {

// An outcome fixes the pair {g, g xor Ga} of encoded labels, and only one of
// the two need be the image of a weight-N state, so both are looked up.
struct Candidate {
  const BitVector* state;
  BitVector label;
};

// Sum of s(b*) * factor(label of b*) over the distinct support states b*
// reachable from the candidates as b or a xor b.
template <class Factor>
double term_weight(const XPTerm& t, const BitVector& x_key, std::span<const Candidate> cands, bool& matched,
                   Factor&& factor) {
  const BitVector* seen[4];
  std::size_t n_seen = 0;
  double acc = 0.0;
  for (const auto& c : cands) {
    for (int flip = 0; flip < 2; ++flip) {
      const BitVector b = flip ? (*c.state ^ t.x) : *c.state;
      auto it = std::lower_bound(t.support.begin(), t.support.end(), b);
      if (it == t.support.end() || *it != b) continue;
      if (std::find(seen, seen + n_seen, &*it) != seen + n_seen) continue;
      seen[n_seen++] = &*it;
      acc += t.sign(b) * factor(flip ? (c.label ^ x_key) : c.label);
    }
  }
  if (n_seen > 0) matched = true;
  return acc;
}

}  // namespace

OutcomeWeight fed_outcome_weight(const BitVector& outcome, const MeasurementGroup& group, const LookupDecoder& decoder) {
  const std::size_t q = group.x_key.size();
  if (outcome.size() != q) throw std::invalid_argument("outcome length does not match the group's qubit count");
  const auto& basis = group.basis;
  OutcomeWeight out;

  Candidate found[2];
  std::size_t n = 0;
  double eigen = 1.0;
  if (basis.pivot) {
    BitVector m0 = outcome;
    if (m0[*basis.pivot]) {
      eigen = -1.0;
      m0.flip(*basis.pivot);
    }
    BitVector g = matvec(basis.inverse, m0);
    BitVector g2 = g ^ group.x_key;
    if (const auto* s = decoder.find(g)) found[n++] = {s, std::move(g)};
    if (const auto* s = decoder.find(g2)) found[n++] = {s, std::move(g2)};
  } else if (const auto* s = decoder.find(outcome)) {
    found[n++] = {s, outcome};
  }
  if (n == 0) return out;
  out.post_selected = true;
  const std::span<const Candidate> cands(found, n);

  for (const auto& et : group.terms) {
    const XPTerm& t = et.source;
    if (!basis.pivot) {
      // Diagonal: Re O = O and Im O = 0.
      if (t.part == Part::re) {
        out.weight += t.coefficient * term_weight(t, group.x_key, cands, out.matched, [](const BitVector&) { return 1.0; });
      }
    } else if (t.part == Part::re) {
      out.weight += 0.5 * t.coefficient * eigen *
                    term_weight(t, group.x_key, cands, out.matched, [](const BitVector&) { return 1.0; });
    } else {
      // After the network the pair difference P^{Mg} - P^{Mg+e_p} is +-Z on
      // the pivot, and X Z = -iY there; the sign is set by the pivot bit of M g.
      const std::size_t p = *basis.pivot;
      out.weight += 0.5 * t.coefficient * eigen *
                    term_weight(t, group.x_key, cands, out.matched,
                                [&](const BitVector& label) { return matvec(basis.matrix, label)[p] ? 1.0 : -1.0; });
    }
  }
  return out;
}

DecodedExpectation fed_decode_group(const Histogram& histogram, const MeasurementGroup& group, const SubspaceCode& code,
                                    const LookupDecoder& decoder) {
  if (group.x_key.size() != code.qubits()) throw std::invalid_argument("group and code qubit counts differ");
  DecodedExpectation out;
  for (const auto& [d, p] : histogram) {
    if (p <= 0.0) continue;
    ++out.outcome_count;
    const auto w = fed_outcome_weight(d, group, decoder);
    if (!w.post_selected) {
      out.discarded_mass += p;
      continue;
    }
    out.post_selected_mass += p;
    if (!w.matched) out.unmatched_mass += p;
    out.value += w.weight * p;
  }
  return out;
}

EnergyEstimate evaluate_energy(const EncodedHamiltonian& h, const StateVector& state, const SubspaceCode& code,
                               const LookupDecoder& decoder, std::optional<std::uint64_t> shots, std::uint64_t seed) {
  if (state.qubits() != h.qubits) throw std::invalid_argument("state and Hamiltonian qubit counts differ");
  EnergyEstimate est;
  est.energy = h.core_energy;
  for (std::size_t i = 0; i < h.groups.size(); ++i) {
    const auto& g = h.groups[i];
    const Histogram hist = shots ? measure_distribution(state, g.basis, *shots, SplitMix64::stream(seed, i)())
                                 : measure_distribution(state, g.basis);
    est.groups.push_back(fed_decode_group(hist, g, code, decoder));
    est.energy += est.groups.back().value;
  }
  return est;
}

EnergyEvaluator::EnergyEvaluator(const EncodedHamiltonian& h, const SubspaceCode& code, const LookupDecoder& decoder)
    : h_(&h) {
  if (h.qubits != code.qubits()) throw std::invalid_argument("Hamiltonian and code qubit counts differ");
  if (h.qubits > kMaxSimQubits) throw std::invalid_argument("too many qubits to tabulate outcome weights");
  const std::size_t dim = std::size_t{1} << h.qubits;
  const StateVector probe(h.qubits);
  for (const auto& g : h.groups) {
    std::vector<double> w(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) w[d] = fed_outcome_weight(probe.label_of(d), g, decoder).weight;
    weights_.push_back(std::move(w));
  }
}

double EnergyEvaluator::operator()(const StateVector& state) const {
  double e = h_->core_energy;
  for (std::size_t i = 0; i < h_->groups.size(); ++i) {
    const StateVector s = rotate_to_basis(state, h_->groups[i].basis);
    const auto& a = s.amplitudes();
    const auto& w = weights_[i];
    double v = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
      if (w[d] != 0.0) v += w[d] * std::norm(a[d]);
    }
    e += v;
  }
  return e;
}

std::string decode_report_json(const std::vector<MeasurementGroup>& groups, const EnergyEstimate& estimate) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < groups.size() && i < estimate.groups.size(); ++i) {
    const auto& r = estimate.groups[i];
    nlohmann::ordered_json j;
    j["x_key"] = groups[i].x_key.to_string();
    j["part"] = to_string(groups[i].part);
    j["value"] = r.value;
    j["post_selected_mass"] = r.post_selected_mass;
    j["discarded_mass"] = r.discarded_mass;
    j["outcome_count"] = r.outcome_count;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace linenc
