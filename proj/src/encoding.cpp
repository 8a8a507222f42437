#include "linenc/encoding.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace linenc {

EncodedXPTerm encode_term(const XPTerm& term, const SubspaceCode& code) {
  if (term.modes() != code.modes()) {
    throw std::invalid_argument("term has " + std::to_string(term.modes()) + " modes, code has " +
                                std::to_string(code.modes()));
  }
  EncodedXPTerm e;
  e.coefficient = term.coefficient;
  e.part = term.part;
  e.x = code.encode(term.x);
  e.pairs.reserve(term.support.size());
  for (const auto& b : term.support) {
    BitVector g = code.encode(b);
    BitVector conjugate = g ^ e.x;
    e.pairs.push_back({std::move(g), std::move(conjugate), term.sign(b)});
  }
  e.source = term;
  return e;
}

const char* to_string(Rotation r) noexcept {
  switch (r) {
    case Rotation::none:
      return "none";
    case Rotation::hadamard:
      return "H";
    case Rotation::y_basis:
      return "Sdg,H";
  }
  return "?";
}

MeasurementBasis build_basis(const BitVector& x_key, Part part) {
  const std::size_t q = x_key.size();
  MeasurementBasis basis;
  basis.matrix = BitMatrix::identity(q);
  basis.pivot = x_key.lowest_set();
  if (basis.pivot) {
    for (auto t : x_key.support()) {
      if (t == *basis.pivot) continue;
      basis.network.push_back({*basis.pivot, t});
      // Left-multiply by the elementary CNOT: row t ^= row control.
      basis.matrix.xor_row_into(t, *basis.pivot);
    }
    basis.rotation = part == Part::re ? Rotation::hadamard : Rotation::y_basis;
  }
  basis.inverse = invert(basis.matrix);
  return basis;
}

std::vector<MeasurementGroup> group_terms(std::vector<EncodedXPTerm> terms) {
  std::map<std::pair<BitVector, Part>, std::vector<EncodedXPTerm>> buckets;
  for (auto& t : terms) buckets[{t.x, t.part}].push_back(std::move(t));
  std::vector<MeasurementGroup> groups;
  groups.reserve(buckets.size());
  for (auto& [key, members] : buckets) {
    MeasurementGroup g;
    g.x_key = key.first;
    g.part = key.second;
    g.terms = std::move(members);
    g.basis = build_basis(g.x_key, g.part);
    groups.push_back(std::move(g));
  }
  return groups;
}

std::size_t EncodedHamiltonian::term_count() const noexcept {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.terms.size();
  return n;
}

EncodedHamiltonian encode_hamiltonian(const FermionHamiltonian& h, const SubspaceCode& code) {
  if (h.modes() != code.modes()) throw std::invalid_argument("Hamiltonian and code disagree on the mode count");
  EncodedHamiltonian out;
  out.qubits = code.qubits();
  out.core_energy = h.core_energy();
  std::vector<EncodedXPTerm> encoded;
  for (const auto& t : hamiltonian_terms(h, code.electrons())) encoded.push_back(encode_term(t, code));
  out.groups = group_terms(std::move(encoded));
  return out;
}

std::string PauliString::to_string() const {
  std::string s(x.size(), 'I');
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] && z[i]) {
      s[i] = 'Y';
    } else if (x[i]) {
      s[i] = 'X';
    } else if (z[i]) {
      s[i] = 'Z';
    }
  }
  return s;
}

bool commutes(const PauliString& a, const PauliString& b) { return a.x.dot(b.z) == a.z.dot(b.x); }

std::vector<std::pair<PauliString, double>> pauli_expand(const EncodedXPTerm& term) {
  const std::size_t q = term.x.size();
  if (q > 12) throw std::invalid_argument("pauli_expand is limited to 12 qubits");
  const bool re = term.part == Part::re;
  const double scale = term.coefficient / static_cast<double>(std::uint64_t{1} << q);
  std::vector<std::pair<PauliString, double>> out;

  // P^g = 2^-Q sum_z (-1)^(g.z) Z^z. The Re combination keeps z with even
  // x.z, the Im combination odd x.z; X^x Z^z = (-i)^w P with w = |x and z|.
  BitVector z(q);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << q); ++mask) {
    if (q > 0) z.words()[0] = mask;
    const bool odd = term.x.dot(z);
    if (odd == re) continue;
    double acc = 0.0;
    for (const auto& p : term.pairs) acc += p.label.dot(z) ? -p.sign : p.sign;
    if (acc == 0.0) continue;
    const std::size_t w = (term.x & z).weight();
    const int phase = re ? ((w / 2) % 2 ? -1 : 1) : (((w + 1) / 2) % 2 ? -1 : 1);
    out.push_back({PauliString{term.x, z}, scale * acc * phase});
  }
  return out;
}

std::size_t distinct_x_count(const std::vector<XPTerm>& terms) {
  std::set<BitVector> xs;
  for (const auto& t : terms) xs.insert(t.x);
  return xs.size();
}

std::string group_report_json(const std::vector<MeasurementGroup>& groups) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& g : groups) {
    nlohmann::ordered_json j;
    j["x_key"] = g.x_key.to_string();
    j["part"] = to_string(g.part);
    j["terms"] = g.terms.size();
    nlohmann::ordered_json cnots = nlohmann::ordered_json::array();
    for (const auto& c : g.basis.network) cnots.push_back({c.control, c.target});
    j["cnots"] = cnots;
    j["pivot"] = g.basis.pivot ? nlohmann::ordered_json(*g.basis.pivot) : nlohmann::ordered_json(nullptr);
    j["rotation"] = to_string(g.basis.rotation);
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

}  // namespace linenc
