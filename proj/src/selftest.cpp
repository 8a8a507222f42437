#include "linenc/selftest.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "linenc/encoding.hpp"
#include "linenc/fed.hpp"
#include "linenc/fermion.hpp"
#include "linenc/rng.hpp"
#include "linenc/statevector.hpp"
#include "linenc/subspace_code.hpp"

namespace linenc {

namespace {

std::size_t ceil_log2_u64(std::uint64_t x) {
  std::size_t q = 0;
  while ((std::uint64_t{1} << q) < x) ++q;
  return q;
}

// A code for N electrons on M modes with Q chosen at random. Above half
// filling the search runs on holes: G is injective on weight N exactly when
// it is injective on weight M - N, since G(1 + h) = G1 + Gh.
SubspaceCode random_code(std::size_t m, std::size_t n, SplitMix64& rng) {
  const std::size_t lo = std::max<std::size_t>(1, ceil_log2_u64(binomial(m, n)));
  std::size_t q = lo >= m ? m : lo + rng.below(m - lo + 1);
  const std::size_t k = std::min(n, m - n);
  const std::uint64_t seed = rng();
  for (; q < m && k >= 1; ++q) {
    RleOptions opt;
    opt.max_attempts = 200;
    auto r = rle_search(m, k, q, seed, opt);
    if (r.code) return SubspaceCode(r.code->generator(), n, seed);
  }
  return SubspaceCode::identity(m, n);
}

FermionHamiltonian random_hamiltonian(std::size_t m, std::size_t n, SplitMix64& rng) {
  FermionHamiltonian h(m, n, rng.uniform(-1.0, 1.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) h.set_one_body(i, j, rng.uniform(-1.0, 1.0));
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) {
          if (i == j || k == l) continue;
          h.set_two_body(i, j, k, l, rng.uniform(-0.5, 0.5));
        }
      }
    }
  }
  return h;
}

double gaussian(SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

std::size_t SelftestReport::passed() const noexcept {
  std::size_t n = 0;
  for (const auto& t : trials) n += t.passed ? 1 : 0;
  return n;
}

SelftestReport run_selftest(std::size_t modes, std::size_t electrons, std::size_t trials, std::uint64_t seed,
                            bool inject_fault) {
  if (modes < 1) throw std::invalid_argument("selftest needs at least one mode");
  if (electrons > modes) throw std::invalid_argument("more electrons than modes");
  if (binomial(modes, electrons) > 10000) throw std::invalid_argument("Fock basis too large for the dense oracle");

  SelftestReport rep;
  rep.modes = modes;
  rep.electrons = electrons;
  rep.seed = seed;
  const auto basis = fock_basis(modes, electrons);

  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng = SplitMix64::stream(seed, t);
    SelftestTrial trial;
    try {
      const SubspaceCode code = random_code(modes, electrons, rng);
      trial.qubits = code.qubits();
      const auto h = random_hamiltonian(modes, electrons, rng);

      Eigen::VectorXcd psi(static_cast<Eigen::Index>(basis.size()));
      for (auto& a : psi) a = {gaussian(rng), gaussian(rng)};
      psi.normalize();
      std::vector<Amplitude> amps(std::size_t{1} << code.qubits(), 0.0);
      for (std::size_t i = 0; i < basis.size(); ++i) {
        amps[StateVector::index_of(code.encode(basis[i]))] = psi(static_cast<Eigen::Index>(i));
      }
      const auto state = StateVector::from_amplitudes(code.qubits(), std::move(amps));

      auto enc = encode_hamiltonian(h, code);
      if (inject_fault) {
        for (auto& g : enc.groups) {
          if (g.basis.pivot && !g.terms.empty()) {
            g.terms.front().source.s0 = -g.terms.front().source.s0;
            break;
          }
        }
      }
      trial.groups = enc.groups.size();
      const auto decoder = LookupDecoder::build(code);
      const auto est = evaluate_energy(enc, state, code, decoder);
      trial.decoded = est.energy;
      trial.post_selected_mass = 1.0;
      for (const auto& g : est.groups) trial.post_selected_mass = std::min(trial.post_selected_mass, g.post_selected_mass);

      const Eigen::MatrixXd mat = dense_hamiltonian(h, electrons);
      trial.oracle = (psi.adjoint() * mat.cast<std::complex<double>>() * psi)(0).real() + h.core_energy();
      trial.passed = std::abs(trial.decoded - trial.oracle) <= rep.tolerance;
      for (const auto& g : est.groups) {
        if (std::abs(g.post_selected_mass - 1.0) > 1e-10) trial.passed = false;
      }
    } catch (const std::exception& e) {
      trial.error = e.what();
      trial.passed = false;
    }
    rep.trials.push_back(std::move(trial));
  }
  return rep;
}

std::string selftest_json(const SelftestReport& r) {
  nlohmann::ordered_json j;
  j["modes"] = r.modes;
  j["electrons"] = r.electrons;
  j["seed"] = r.seed;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed();
  j["trials"] = r.trials.size();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& t : r.trials) {
    nlohmann::ordered_json e;
    e["qubits"] = t.qubits;
    e["groups"] = t.groups;
    e["decoded"] = t.decoded;
    e["oracle"] = t.oracle;
    e["abs_error"] = std::abs(t.decoded - t.oracle);
    e["passed"] = t.passed;
    if (!t.error.empty()) e["error"] = t.error;
    arr.push_back(std::move(e));
  }
  j["results"] = arr;
  return j.dump(2);
}

}  // namespace linenc
