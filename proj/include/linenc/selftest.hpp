#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace linenc {

struct SelftestTrial {
  std::size_t qubits = 0;
  std::size_t groups = 0;
  double decoded = 0.0;
  double oracle = 0.0;
  double post_selected_mass = 0.0;
  bool passed = false;
  std::string error;
};

struct SelftestReport {
  std::size_t modes = 0;
  std::size_t electrons = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  std::vector<SelftestTrial> trials;

  [[nodiscard]] std::size_t passed() const noexcept;
  [[nodiscard]] bool all_passed() const noexcept { return passed() == trials.size(); }
};

/// Random code, random Hermitian number-conserving Hamiltonian and random
/// state on the encoded physical subspace per trial; the decoded energy must
/// match <psi|H|psi> computed in the Fock basis. `inject_fault` flips the
/// global sign of one encoded term after encoding.
SelftestReport run_selftest(std::size_t modes, std::size_t electrons, std::size_t trials, std::uint64_t seed,
                            bool inject_fault = false);

std::string selftest_json(const SelftestReport& r);

}  // namespace linenc
