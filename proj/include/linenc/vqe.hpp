#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "linenc/fermion.hpp"
#include "linenc/subspace_code.hpp"

namespace linenc {

inline constexpr double kHartreeToKcal = 627.509474;
inline constexpr double kChemicalAccuracyKcal = 1.0;

struct VqeConfig {
  std::size_t layers = 1;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> shots;  // empty = exact probabilities
  double init_scale = 0.01;            // radians
  std::size_t max_iterations = 500;
  double gradient_step = 1e-5;
  double convergence_tol = 1e-9;       // Hartree
  std::size_t memory = 10;             // L-BFGS history length
  std::size_t threads = 1;
  /// Reference occupation; defaults to the lowest N modes.
  std::optional<BitVector> occupation;
  /// Prepare the reference so that the circuit at zero parameters
  /// reproduces it: the CNOT chains are undone on the input label.
  bool compensate_reference = true;
};

struct RestartResult {
  double energy = 0.0;
  std::size_t iterations = 0;
  bool finite = true;
  std::vector<double> parameters;
  std::vector<double> trace;  // best energy after each iteration, starting point first
};

struct VqeResult {
  double best_energy = 0.0;
  double exact_energy = 0.0;
  double delta_e_kcal = 0.0;
  std::vector<double> best_parameters;
  std::vector<double> energy_trace;
  std::size_t best_restart = 0;
  std::size_t qubits = 0;
  std::size_t cnot_count = 0;
  std::size_t parameter_count = 0;
  std::vector<RestartResult> restarts;
  VqeConfig config;
};

VqeResult run_vqe(const FermionHamiltonian& h, const SubspaceCode& code, const VqeConfig& cfg);

std::string vqe_result_json(const VqeResult& r);

struct ScanPoint {
  std::string label;
  std::optional<VqeResult> result;
  std::string error;
};

/// One shared code for every file: `code` if given, otherwise the minimal
/// code for the first file's (M, N) built from cfg.seed.
std::vector<ScanPoint> potential_energy_scan(const std::vector<std::filesystem::path>& files,
                                             std::optional<SubspaceCode> code, const VqeConfig& cfg);

}  // namespace linenc
