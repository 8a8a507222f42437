#pragma once

// Particle-conserving linear encoders: a Q x M parity-check matrix G that is
// injective on the weight-N slice of F_2^M, the randomized search that finds
// one, and the table decoder that inverts it.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "linenc/gf2.hpp"

namespace linenc {

class SubspaceCode {
 public:
  /// The dual is computed as a kernel basis of `generator`.
  SubspaceCode(BitMatrix generator, std::size_t electrons, std::uint64_t seed = 0,
               std::size_t aux_qubits = 0);

  /// Q = M, G = I.
  static SubspaceCode identity(std::size_t modes, std::size_t electrons);

  [[nodiscard]] std::size_t modes() const noexcept { return generator_.cols(); }
  [[nodiscard]] std::size_t electrons() const noexcept { return electrons_; }
  [[nodiscard]] std::size_t qubits() const noexcept { return generator_.rows(); }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::size_t aux_qubits() const noexcept { return aux_qubits_; }
  [[nodiscard]] const BitMatrix& generator() const noexcept { return generator_; }
  [[nodiscard]] const BitMatrix& dual() const noexcept { return dual_; }

  [[nodiscard]] BitVector encode(const BitVector& state) const;

  friend bool operator==(const SubspaceCode&, const SubspaceCode&) = default;

 private:
  BitMatrix generator_;
  BitMatrix dual_;
  std::size_t electrons_;
  std::uint64_t seed_;
  std::size_t aux_qubits_;
};

class LookupDecoder {
 public:
  /// Tabulates G b for every weight-N b. Throws std::runtime_error naming the
  /// two states if they share a codeword.
  static LookupDecoder build(const SubspaceCode& code);

  [[nodiscard]] std::optional<BitVector> decode(const BitVector& word) const;
  [[nodiscard]] const BitVector* find(const BitVector& word) const;
  [[nodiscard]] std::size_t size() const noexcept { return table_.size(); }
  [[nodiscard]] const std::unordered_map<BitVector, BitVector>& table() const noexcept { return table_; }

 private:
  std::unordered_map<BitVector, BitVector> table_;
};

struct QubitBounds {
  std::size_t gv_qubits = 0;             // ceil log2 sum_{j<=N} C(M,2j)
  std::size_t impossibility_qubits = 0;  // ceil log2 sum_{j<=N/2} C(M,2j)
  std::size_t counting_qubits = 0;       // ceil log2 C(M,N)
  std::size_t theorem_qubits = 0;        // ceil(2N log2 M)
};

/// Exact big-integer evaluation. Requires M >= 2N >= 2.
QubitBounds qubit_bounds(std::size_t modes, std::size_t electrons);

struct RleOptions {
  std::size_t max_attempts = 1000;
  std::size_t threads = 1;
  /// When set, the search stops at the first attempt started past this point.
  std::optional<std::chrono::steady_clock::time_point> deadline;
  /// Cheap rejection on low-weight kernel elements before the full check.
  bool precheck = true;
};

struct RleOutcome {
  std::optional<SubspaceCode> code;
  std::size_t attempts = 0;
  bool timed_out = false;
};

/// Randomized search for G = [I_Q | D] with even-weight columns of D.
/// Attempt i draws from SplitMix64::stream(seed, i); the result is the
/// lowest successful attempt, independent of the thread count.
/// Throws std::invalid_argument unless N >= 1, M >= 2N and 1 <= Q < M.
RleOutcome rle_search(std::size_t modes, std::size_t electrons, std::size_t qubits, std::uint64_t seed,
                      const RleOptions& options = {});

/// rle_search at Q = base_qubits + extra, recorded as auxiliary qubits.
RleOutcome rle_with_aux(std::size_t modes, std::size_t electrons, std::size_t base_qubits, std::size_t extra,
                        std::uint64_t seed, const RleOptions& options = {});

struct MinimalCodeResult {
  SubspaceCode code;
  std::size_t attempts = 0;  // summed over every level tried
  std::vector<std::pair<std::size_t, std::size_t>> levels;  // (Q, attempts) per level
};

/// First Q at which rle_search succeeds, ascending from
/// max(gv - 2, impossibility, counting, 1). Q = M - 1 never fails.
MinimalCodeResult find_minimal_code(std::size_t modes, std::size_t electrons, std::uint64_t seed,
                                    const RleOptions& options = {});

enum class CheckStatus { passed, failed, skipped };
const char* to_string(CheckStatus s) noexcept;

struct CodeReport {
  bool duality = false;
  CheckStatus kernel = CheckStatus::skipped;
  CheckStatus injectivity = CheckStatus::skipped;
  /// Lightest nonzero even-weight kernel element, when the kernel was enumerated.
  std::optional<std::size_t> min_even_kernel_weight;
  std::optional<BitVector> min_even_kernel_element;
  /// Two weight-N states with the same codeword, if one was found.
  std::optional<std::pair<BitVector, BitVector>> collision;
  bool theorem_bound = false;

  /// Duality holds, nothing failed, and at least one certificate ran.
  [[nodiscard]] bool valid() const noexcept {
    return duality && kernel != CheckStatus::failed && injectivity != CheckStatus::failed &&
           (kernel == CheckStatus::passed || injectivity == CheckStatus::passed);
  }
};

/// Kernel enumeration runs when dim ker G <= 24, injectivity when C(M,N) <= 1e7.
CodeReport verify_code(const SubspaceCode& code);

/// Two distinct weight-N states whose difference is the even element k, or
/// nullopt if k is too heavy or M is too small to fit them.
std::optional<std::pair<BitVector, BitVector>> collision_from_kernel(const BitVector& k, std::size_t electrons);

std::string code_to_json(const SubspaceCode& code);
SubspaceCode code_from_json(const std::string& text);
void save_code(const SubspaceCode& code, const std::filesystem::path& path);
SubspaceCode load_code(const std::filesystem::path& path);

}  // namespace linenc
