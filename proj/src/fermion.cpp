#include "linenc/fermion.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace linenc {

namespace {

bool parity_below(const BitVector& s, std::size_t i) {
  auto w = s.words();
  unsigned acc = 0;
  for (std::size_t k = 0; k < i / 64; ++k) acc += static_cast<unsigned>(std::popcount(w[k]));
  if (i % 64 != 0) acc += static_cast<unsigned>(std::popcount(w[i / 64] & ((BitVector::Word{1} << (i % 64)) - 1)));
  return (acc & 1U) != 0;
}

FermionHamiltonian::OneKey conj(const FermionHamiltonian::OneKey& k) { return {k[1], k[0]}; }
FermionHamiltonian::TwoKey conj(const FermionHamiltonian::TwoKey& k) { return {k[3], k[2], k[1], k[0]}; }

bool values_conflict(double a, double b) { return std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)); }

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Re(O) as a function of the unordered pair {b, a xor b}: the weight on each
// canonical representative min(b, a xor b). For a = 0 the pair is just b.
using ReForm = std::pair<BitVector, std::vector<std::pair<BitVector, int>>>;

std::pair<ReForm, int> normalized_re_form(const XPTerm& t) {
  std::map<BitVector, int> w;
  for (const auto& b : t.support) {
    const BitVector partner = b ^ t.x;
    w[std::min(b, partner)] += t.sign(b);
  }
  ReForm form{t.x, {}};
  for (const auto& [rep, v] : w) {
    if (v != 0) form.second.emplace_back(rep, v);
  }
  int flip = 1;
  if (!form.second.empty() && form.second.front().second < 0) {
    flip = -1;
    for (auto& e : form.second) e.second = -e.second;
  }
  return {std::move(form), flip};
}

}  // namespace

std::optional<LadderResult> apply_ladder(std::span<const LadderOp> ops, const BitVector& state) {
  LadderResult r{1, state};
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    if (it->mode >= state.size()) {
      throw std::invalid_argument("ladder mode " + std::to_string(it->mode) + " out of range for " +
                                  std::to_string(state.size()) + " modes");
    }
    if (r.state[it->mode] == it->create) return std::nullopt;
    if (parity_below(r.state, it->mode)) r.sign = -r.sign;
    r.state.flip(it->mode);
  }
  return r;
}

const char* to_string(Part p) noexcept { return p == Part::re ? "Re" : "Im"; }

XPTerm decompose_term(std::span<const LadderOp> ops, std::size_t modes, std::size_t electrons, double coefficient,
                      Part part) {
  std::ptrdiff_t balance = 0;
  XPTerm t;
  t.coefficient = coefficient;
  t.part = part;
  t.x = BitVector(modes);
  t.c = BitVector(modes);
  for (const auto& op : ops) {
    if (op.mode >= modes) throw std::invalid_argument("ladder mode out of range");
    balance += op.create ? 1 : -1;
    t.x.flip(op.mode);
  }
  if (balance != 0) throw std::invalid_argument("ladder product does not conserve particle number");

  std::vector<int> signs;
  for (auto& b : fock_basis(modes, electrons)) {
    auto r = apply_ladder(ops, b);
    if (!r) continue;
    if (r->state != (b ^ t.x)) throw std::logic_error("ladder image is not b xor a");
    signs.push_back(r->sign);
    t.support.push_back(std::move(b));
  }
  if (t.support.empty()) return t;

  // Fit sign(b) = s0 (-1)^(c.b): unknowns (s0 bit, c) against rows [1 | b].
  BitMatrix rows(t.support.size(), modes + 1);
  BitVector target(t.support.size());
  for (std::size_t i = 0; i < t.support.size(); ++i) {
    rows.set(i, 0);
    for (auto m : t.support[i].support()) rows.set(i, m + 1);
    if (signs[i] < 0) target.set(i);
  }
  auto fit = solve_affine(rows, target);
  if (!fit) throw std::runtime_error("ladder product signs are not an affine function of the occupation");
  t.s0 = (*fit)[0] ? -1 : 1;
  for (std::size_t m = 0; m < modes; ++m) t.c.set(m, (*fit)[m + 1]);
  for (std::size_t i = 0; i < t.support.size(); ++i) {
    if (t.sign(t.support[i]) != signs[i]) throw std::runtime_error("fitted sign disagrees with ladder action");
  }
  std::sort(t.support.begin(), t.support.end());
  return t;
}

// ---------------------------------------------------------------------------

void FermionHamiltonian::check_index(std::size_t i) const {
  if (i >= modes_) {
    throw std::invalid_argument("mode index " + std::to_string(i + 1) + " exceeds MODES " + std::to_string(modes_));
  }
}

void FermionHamiltonian::set_one_body(std::size_t i, std::size_t j, double value) {
  check_index(i);
  check_index(j);
  one_body_[{i, j}] = value;
  one_body_[{j, i}] = value;
}

void FermionHamiltonian::set_two_body(std::size_t i, std::size_t j, std::size_t k, std::size_t l, double value) {
  for (auto m : {i, j, k, l}) check_index(m);
  two_body_[{i, j, k, l}] = value;
  two_body_[{l, k, j, i}] = value;
}

FermionHamiltonian FermionHamiltonian::permuted(std::span<const std::size_t> perm) const {
  if (perm.size() != modes_) throw std::invalid_argument("permutation length must equal the mode count");
  FermionHamiltonian out(modes_, electrons_, core_energy_);
  for (const auto& [k, v] : one_body_) out.one_body_[{perm[k[0]], perm[k[1]]}] = v;
  for (const auto& [k, v] : two_body_) out.two_body_[{perm[k[0]], perm[k[1]], perm[k[2]], perm[k[3]]}] = v;
  return out;
}

FermionHamiltonian FermionHamiltonian::parse(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  int header = 0;
  FermionHamiltonian h;
  std::map<OneKey, std::pair<double, std::size_t>> one;
  std::map<TwoKey, std::pair<double, std::size_t>> two;

  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag)) continue;

    auto read_index = [&]() {
      long long v = 0;
      if (!(ls >> v)) fail("expected a mode index");
      if (v < 1 || static_cast<std::size_t>(v) > h.modes_) fail("mode index " + std::to_string(v) + " out of range");
      return static_cast<std::size_t>(v - 1);
    };
    auto read_value = [&]() {
      std::string tok;
      if (!(ls >> tok)) fail("expected a value");
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size() || !std::isfinite(v)) fail("bad number '" + tok + "'");
      return v;
    };
    auto read_count = [&]() {
      long long v = -1;
      if (!(ls >> v) || v < 0) fail("expected a nonnegative integer");
      return static_cast<std::size_t>(v);
    };

    if (header == 0) {
      if (tag != "MODES") fail("expected MODES");
      h.modes_ = read_count();
    } else if (header == 1) {
      if (tag != "ELECTRONS") fail("expected ELECTRONS");
      h.electrons_ = read_count();
      if (h.electrons_ > h.modes_) fail("more electrons than modes");
    } else if (header == 2) {
      if (tag != "ECORE") fail("expected ECORE");
      h.core_energy_ = read_value();
    } else if (tag == "1B") {
      OneKey k{read_index(), read_index()};
      const double v = read_value();
      auto& slot = one.try_emplace(k, 0.0, lineno).first->second;
      slot.first += v;
    } else if (tag == "2B") {
      TwoKey k{read_index(), read_index(), read_index(), read_index()};
      const double v = read_value();
      auto& slot = two.try_emplace(k, 0.0, lineno).first->second;
      slot.first += v;
    } else {
      fail("unknown record '" + tag + "'");
    }
    if (header < 3) ++header;
    std::string extra;
    if (ls >> extra) fail("trailing token '" + extra + "'");
  }
  if (header < 3) {
    ++lineno;
    fail("missing MODES / ELECTRONS / ECORE header");
  }

  auto complete = [&](auto& raw_map, auto& target) {
    for (const auto& [k, entry] : raw_map) {
      const auto ck = conj(k);
      if (auto it = raw_map.find(ck); it != raw_map.end() && values_conflict(it->second.first, entry.first)) {
        lineno = std::max(entry.second, it->second.second);
        fail("coefficient conflicts with its Hermitian conjugate");
      }
      target[k] = entry.first;
      target[ck] = entry.first;
    }
  };
  complete(one, h.one_body_);
  complete(two, h.two_body_);
  return h;
}

std::string FermionHamiltonian::write() const {
  std::ostringstream out;
  out << "MODES " << modes_ << "\nELECTRONS " << electrons_ << "\nECORE " << format_double(core_energy_) << "\n";
  for (const auto& [k, v] : one_body_) {
    if (conj(k) < k) continue;
    out << "1B " << k[0] + 1 << ' ' << k[1] + 1 << ' ' << format_double(v) << '\n';
  }
  for (const auto& [k, v] : two_body_) {
    if (conj(k) < k) continue;
    out << "2B " << k[0] + 1 << ' ' << k[1] + 1 << ' ' << k[2] + 1 << ' ' << k[3] + 1 << ' ' << format_double(v) << '\n';
  }
  return out.str();
}

FermionHamiltonian FermionHamiltonian::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    if (text.find("&FCI") != std::string::npos) return import_fcidump(text);
    return parse(text);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

std::vector<XPTerm> hamiltonian_terms(const FermionHamiltonian& h, std::size_t electrons, double drop_below) {
  const std::size_t m = h.modes();
  std::vector<XPTerm> terms;
  std::vector<int> flips;
  std::map<ReForm, std::size_t> index;

  auto add = [&](std::span<const LadderOp> ops, double value) {
    if (value == 0.0) return;
    XPTerm t = decompose_term(ops, m, electrons, value);
    if (t.support.empty()) return;
    auto [form, flip] = normalized_re_form(t);
    if (form.second.empty()) return;
    if (auto it = index.find(form); it != index.end()) {
      terms[it->second].coefficient += value * flip * flips[it->second];
      return;
    }
    index.emplace(std::move(form), terms.size());
    terms.push_back(std::move(t));
    flips.push_back(flip);
  };

  for (const auto& [k, v] : h.one_body()) {
    const LadderOp ops[] = {cre(k[0]), ann(k[1])};
    add(ops, v);
  }
  for (const auto& [k, v] : h.two_body()) {
    const LadderOp ops[] = {cre(k[0]), cre(k[1]), ann(k[2]), ann(k[3])};
    add(ops, v);
  }

  std::vector<XPTerm> out;
  for (auto& t : terms) {
    if (std::abs(t.coefficient) >= drop_below) out.push_back(std::move(t));
  }
  return out;
}

std::vector<BitVector> fock_basis(std::size_t modes, std::size_t electrons) { return weight_vectors(modes, electrons); }

Eigen::MatrixXd dense_hamiltonian(const FermionHamiltonian& h, std::size_t electrons) {
  const auto basis = fock_basis(h.modes(), electrons);
  if (basis.size() > 20000) throw std::invalid_argument("Fock basis too large for a dense matrix");
  std::unordered_map<BitVector, std::size_t> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos.emplace(basis[i], i);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n, n);

  auto accumulate = [&](std::span<const LadderOp> ops, double value) {
    for (std::size_t col = 0; col < basis.size(); ++col) {
      auto r = apply_ladder(ops, basis[col]);
      if (!r) continue;
      mat(static_cast<Eigen::Index>(pos.at(r->state)), static_cast<Eigen::Index>(col)) += r->sign * value;
    }
  };
  for (const auto& [k, v] : h.one_body()) {
    const LadderOp ops[] = {cre(k[0]), ann(k[1])};
    accumulate(ops, v);
  }
  for (const auto& [k, v] : h.two_body()) {
    const LadderOp ops[] = {cre(k[0]), cre(k[1]), ann(k[2]), ann(k[3])};
    accumulate(ops, v);
  }
  return mat;
}

double exact_ground_energy(const FermionHamiltonian& h, std::size_t electrons) {
  if (binomial(h.modes(), electrons) > 10000) {
    throw std::invalid_argument("exact diagonalization is limited to C(M,N) <= 10^4 states");
  }
  const Eigen::MatrixXd mat = dense_hamiltonian(h, electrons);
  if (mat.rows() == 0) throw std::invalid_argument("empty Fock basis");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  return solver.eigenvalues()(0) + h.core_energy();
}

}  // namespace linenc
