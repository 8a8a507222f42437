#include "linenc/subspace_code.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "linenc/parallel.hpp"
#include "linenc/rng.hpp"

namespace linenc {

namespace {

using boost::multiprecision::cpp_int;

constexpr int kFormatVersion = 1;
constexpr std::uint64_t kMaxExhaustiveStates = 50'000'000;
constexpr std::uint64_t kVerifyInjectivityLimit = 10'000'000;
constexpr std::size_t kVerifyKernelDimLimit = 24;

cpp_int big_binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  cpp_int r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

// Smallest q with 2^q >= x.
std::size_t ceil_log2(const cpp_int& x) {
  if (x <= 1) return 0;
  return static_cast<std::size_t>(boost::multiprecision::msb(cpp_int(x - 1))) + 1;
}

std::size_t theorem_qubits(std::size_t modes, std::size_t electrons) {
  if (modes <= 1) return 0;
  return ceil_log2(boost::multiprecision::pow(cpp_int(modes), static_cast<unsigned>(2 * electrons)));
}

// True when C(M,N) > 2^Q, so no encoder on Q qubits can be injective.
bool pigeonhole_excludes(std::size_t modes, std::size_t electrons, std::size_t qubits) {
  return big_binomial(modes, electrons) > (cpp_int(1) << qubits);
}

std::uint64_t checked_state_count(std::size_t modes, std::size_t electrons) {
  const cpp_int count = big_binomial(modes, electrons);
  if (count > kMaxExhaustiveStates) {
    throw std::invalid_argument("C(" + std::to_string(modes) + "," + std::to_string(electrons) +
                                ") states is too many for an exhaustive injectivity check");
  }
  return static_cast<std::uint64_t>(count);
}

// Calls f(xor of the chosen words, chosen-set mask) over all N-subsets of
// `columns`; masks are only meaningful for up to 64 columns.
template <class F>
void for_each_codeword(const std::vector<std::uint64_t>& columns, std::size_t electrons, F&& f) {
  const std::size_t m = columns.size();
  auto rec = [&](auto&& self, std::size_t start, std::size_t left, std::uint64_t acc, std::uint64_t mask) -> void {
    if (left == 0) {
      f(acc, mask);
      return;
    }
    for (std::size_t i = start; i + left <= m; ++i) {
      self(self, i + 1, left - 1, acc ^ columns[i], m <= 64 ? mask | (std::uint64_t{1} << i) : 0);
    }
  };
  rec(rec, 0, electrons, 0, 0);
}

std::vector<BitVector> generator_columns(const BitMatrix& g) {
  std::vector<BitVector> cols;
  cols.reserve(g.cols());
  for (std::size_t c = 0; c < g.cols(); ++c) cols.push_back(g.column(c));
  return cols;
}

BitVector mask_to_state(std::uint64_t mask, std::size_t modes) {
  BitVector v(modes);
  if (modes > 0) v.words()[0] = mask;
  return v;
}

BitVector indices_to_state(const std::vector<std::size_t>& idx, std::size_t modes) {
  return BitVector::from_indices(modes, idx);
}

// Exhaustive injectivity on the weight-N slice. Returns a colliding pair when
// `want_pair` is set and one exists, or an empty pair marker otherwise.
struct InjectivityResult {
  bool injective = true;
  std::optional<std::pair<BitVector, BitVector>> collision;
};

InjectivityResult check_injective(const std::vector<BitVector>& columns, std::size_t qubits, std::size_t electrons,
                                  bool want_pair) {
  const std::size_t modes = columns.size();
  InjectivityResult out;
  if (qubits <= 64) {
    std::vector<std::uint64_t> words(modes);
    for (std::size_t i = 0; i < modes; ++i) words[i] = qubits == 0 ? 0 : columns[i].words()[0];
    const std::uint64_t count = checked_state_count(modes, electrons);
    if (want_pair && modes <= 64) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> keyed;
      keyed.reserve(count);
      for_each_codeword(words, electrons, [&](std::uint64_t key, std::uint64_t mask) { keyed.emplace_back(key, mask); });
      std::sort(keyed.begin(), keyed.end());
      auto it = std::adjacent_find(keyed.begin(), keyed.end(),
                                   [](const auto& a, const auto& b) { return a.first == b.first; });
      if (it != keyed.end()) {
        out.injective = false;
        out.collision = std::make_pair(mask_to_state(it->second, modes), mask_to_state(std::next(it)->second, modes));
      }
      return out;
    }
    if (!want_pair) {
      std::vector<std::uint64_t> keys;
      keys.reserve(count);
      for_each_codeword(words, electrons, [&](std::uint64_t key, std::uint64_t) { keys.push_back(key); });
      std::sort(keys.begin(), keys.end());
      out.injective = std::adjacent_find(keys.begin(), keys.end()) == keys.end();
      return out;
    }
  }
  checked_state_count(modes, electrons);
  std::unordered_map<BitVector, std::vector<std::size_t>> seen;
  bool done = false;
  for_each_combination(modes, electrons, [&](const std::vector<std::size_t>& idx) {
    if (done) return;
    BitVector key(qubits);
    for (auto i : idx) key ^= columns[i];
    auto [it, inserted] = seen.emplace(std::move(key), idx);
    if (!inserted) {
      out.injective = false;
      if (want_pair) out.collision = std::make_pair(indices_to_state(it->second, modes), indices_to_state(idx, modes));
      done = true;
    }
  });
  return out;
}

std::vector<std::size_t> column_weights(std::size_t qubits) {
  const std::size_t half = qubits / 2;
  const std::size_t lo = std::max<std::size_t>(2, half >= 1 ? half - 1 : 0);
  const std::size_t hi = std::min(qubits, half + 1);
  std::vector<std::size_t> w;
  for (std::size_t x = lo; x <= hi; ++x) {
    if (x % 2 == 0) w.push_back(x);
  }
  if (w.empty()) w.push_back(0);
  return w;
}

// Distinct positions from {0..n-1}, by partial Fisher-Yates.
std::vector<std::size_t> sample_subset(std::size_t n, std::size_t k, SplitMix64& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
  pool.resize(k);
  return pool;
}

// One RLE attempt; returns the D columns on success.
std::optional<std::vector<BitVector>> rle_attempt(std::size_t modes, std::size_t electrons, std::size_t qubits,
                                                  SplitMix64 rng, bool precheck) {
  const std::size_t r = modes - qubits;
  const auto weights = column_weights(qubits);
  std::vector<BitVector> d(r, BitVector(qubits));
  for (auto& col : d) {
    const std::size_t w = weights[rng.below(weights.size())];
    for (auto pos : sample_subset(qubits, w, rng)) col.set(pos);
  }

  // A kernel element (D v, v) has the parity of wt(v) because every column
  // of D is even, so low-weight even v give the candidate bad elements.
  if (precheck) {
    const std::size_t need = 2 * electrons + 2;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        if (d[i].xor_weight(d[j]) + 2 < need) return std::nullopt;
      }
    }
    std::size_t top = std::min(2 * electrons, r);
    top -= top % 2;
    if (top >= 4) {
      const std::size_t choices = (top - 4) / 2 + 1;
      for (std::size_t t = 0; t < 4 * r; ++t) {
        const std::size_t kk = 4 + 2 * rng.below(choices);
        BitVector acc(qubits);
        for (auto idx : sample_subset(r, kk, rng)) acc ^= d[idx];
        if (acc.weight() + kk < need) return std::nullopt;
      }
    }
  }

  std::vector<BitVector> columns;
  columns.reserve(modes);
  for (std::size_t q = 0; q < qubits; ++q) columns.push_back(BitVector::unit(qubits, q));
  for (const auto& col : d) columns.push_back(col);
  if (!check_injective(columns, qubits, electrons, false).injective) return std::nullopt;
  return d;
}

BitMatrix standard_form(std::size_t qubits, const std::vector<BitVector>& d) {
  BitMatrix g(qubits, qubits + d.size());
  for (std::size_t q = 0; q < qubits; ++q) g.set(q, q);
  for (std::size_t j = 0; j < d.size(); ++j) {
    for (auto q : d[j].support()) g.set(q, qubits + j);
  }
  return g;
}

void check_rle_args(std::size_t modes, std::size_t electrons, std::size_t qubits) {
  if (electrons < 1) throw std::invalid_argument("need at least one electron");
  if (modes < 2 * electrons) {
    throw std::invalid_argument("need modes >= 2 * electrons (got M=" + std::to_string(modes) +
                                ", N=" + std::to_string(electrons) + ")");
  }
  if (qubits < 1 || qubits >= modes) {
    throw std::invalid_argument("need 1 <= qubits < modes (got Q=" + std::to_string(qubits) +
                                ", M=" + std::to_string(modes) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

SubspaceCode::SubspaceCode(BitMatrix generator, std::size_t electrons, std::uint64_t seed, std::size_t aux_qubits)
    : generator_(std::move(generator)), electrons_(electrons), seed_(seed), aux_qubits_(aux_qubits) {
  const auto basis = kernel_basis(generator_);
  dual_ = basis.empty() ? BitMatrix(0, generator_.cols()) : BitMatrix::from_rows(basis);
}

SubspaceCode SubspaceCode::identity(std::size_t modes, std::size_t electrons) {
  return SubspaceCode(BitMatrix::identity(modes), electrons);
}

BitVector SubspaceCode::encode(const BitVector& state) const { return matvec(generator_, state); }

LookupDecoder LookupDecoder::build(const SubspaceCode& code) {
  const std::size_t m = code.modes();
  const std::size_t n = code.electrons();
  checked_state_count(m, n);
  const auto columns = generator_columns(code.generator());
  LookupDecoder dec;
  dec.table_.reserve(static_cast<std::size_t>(binomial(m, n)));
  for_each_combination(m, n, [&](const std::vector<std::size_t>& idx) {
    BitVector key(code.qubits());
    for (auto i : idx) key ^= columns[i];
    auto state = BitVector::from_indices(m, idx);
    auto [it, inserted] = dec.table_.emplace(std::move(key), state);
    if (!inserted) {
      throw std::runtime_error("encoder is not injective: " + it->second.to_string() + " and " + state.to_string() +
                               " both encode to " + it->first.to_string());
    }
  });
  return dec;
}

std::optional<BitVector> LookupDecoder::decode(const BitVector& word) const {
  if (const auto* s = find(word)) return *s;
  return std::nullopt;
}

const BitVector* LookupDecoder::find(const BitVector& word) const {
  auto it = table_.find(word);
  return it == table_.end() ? nullptr : &it->second;
}

QubitBounds qubit_bounds(std::size_t modes, std::size_t electrons) {
  if (electrons < 1 || modes < 2 * electrons) {
    throw std::invalid_argument("qubit bounds need M >= 2N >= 2 (got M=" + std::to_string(modes) +
                                ", N=" + std::to_string(electrons) + ")");
  }
  cpp_int gv = 0;
  cpp_int ham = 0;
  for (std::size_t j = 0; j <= electrons; ++j) {
    const cpp_int term = big_binomial(modes, 2 * j);
    gv += term;
    if (j <= electrons / 2) ham += term;
  }
  QubitBounds b;
  b.gv_qubits = ceil_log2(gv);
  b.impossibility_qubits = ceil_log2(ham);
  b.counting_qubits = ceil_log2(big_binomial(modes, electrons));
  b.theorem_qubits = theorem_qubits(modes, electrons);
  return b;
}

RleOutcome rle_search(std::size_t modes, std::size_t electrons, std::size_t qubits, std::uint64_t seed,
                      const RleOptions& options) {
  check_rle_args(modes, electrons, qubits);
  RleOutcome out;
  if (pigeonhole_excludes(modes, electrons, qubits)) return out;
  checked_state_count(modes, electrons);

  auto expired = [&] { return options.deadline && std::chrono::steady_clock::now() >= *options.deadline; };
  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  const std::size_t batch = threads == 1 ? 1 : 4 * threads;

  for (std::size_t base = 0; base < options.max_attempts; base += batch) {
    if (expired()) {
      out.timed_out = true;
      return out;
    }
    const std::size_t count = std::min(batch, options.max_attempts - base);
    std::vector<std::optional<std::vector<BitVector>>> results(count);
    parallel_for(count, threads, [&](std::size_t i) {
      results[i] = rle_attempt(modes, electrons, qubits, SplitMix64::stream(seed, base + i), options.precheck);
    });
    for (std::size_t i = 0; i < count; ++i) {
      if (results[i]) {
        out.attempts = base + i + 1;
        out.code = SubspaceCode(standard_form(qubits, *results[i]), electrons, seed);
        return out;
      }
    }
    out.attempts = base + count;
  }
  return out;
}

RleOutcome rle_with_aux(std::size_t modes, std::size_t electrons, std::size_t base_qubits, std::size_t extra,
                        std::uint64_t seed, const RleOptions& options) {
  if (base_qubits + extra >= modes) {
    throw std::invalid_argument("base qubits + extra must stay below the mode count");
  }
  auto out = rle_search(modes, electrons, base_qubits + extra, seed, options);
  if (out.code) out.code = SubspaceCode(out.code->generator(), electrons, seed, extra);
  return out;
}

MinimalCodeResult find_minimal_code(std::size_t modes, std::size_t electrons, std::uint64_t seed,
                                    const RleOptions& options) {
  const auto b = qubit_bounds(modes, electrons);
  std::size_t start = b.gv_qubits >= 2 ? b.gv_qubits - 2 : 0;
  start = std::max({start, b.impossibility_qubits, b.counting_qubits, std::size_t{1}});
  std::vector<std::pair<std::size_t, std::size_t>> levels;
  std::size_t total = 0;
  for (std::size_t q = start; q < modes; ++q) {
    auto r = rle_search(modes, electrons, q, seed, options);
    total += r.attempts;
    levels.emplace_back(q, r.attempts);
    if (r.code) return {std::move(*r.code), total, std::move(levels)};
    if (r.timed_out) break;
  }
  throw std::runtime_error("no encoder found for M=" + std::to_string(modes) + ", N=" + std::to_string(electrons) +
                           " within the attempt budget");
}

const char* to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::passed:
      return "passed";
    case CheckStatus::failed:
      return "failed";
    case CheckStatus::skipped:
      return "skipped";
  }
  return "?";
}

std::optional<std::pair<BitVector, BitVector>> collision_from_kernel(const BitVector& k, std::size_t electrons) {
  const std::size_t w = k.weight();
  if (w == 0 || w % 2 != 0) return std::nullopt;
  const std::size_t half = w / 2;
  if (half > electrons || k.size() - w < electrons - half) return std::nullopt;
  BitVector b(k.size());
  std::size_t inside = 0;
  std::size_t outside = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] && inside < half) {
      b.set(i);
      ++inside;
    } else if (!k[i] && outside < electrons - half) {
      b.set(i);
      ++outside;
    }
  }
  return std::make_pair(b, b ^ k);
}

CodeReport verify_code(const SubspaceCode& code) {
  const std::size_t m = code.modes();
  const std::size_t n = code.electrons();
  const auto& g = code.generator();
  const auto& c = code.dual();
  CodeReport rep;

  rep.duality = c.cols() == m && (c.rows() == 0 || (g * c.transpose()).is_zero()) && rank(c) == c.rows() &&
                c.rows() == m - rank(g);

  const std::size_t need = 2 * n + 2;
  const std::size_t dim = c.rows();
  if (dim <= kVerifyKernelDimLimit) {
    // Gray-code walk over every kernel element.
    std::vector<BitVector> rows;
    for (std::size_t r = 0; r < dim; ++r) rows.push_back(c.row(r));
    BitVector cur(m);
    for (std::uint64_t step = 1; step < (std::uint64_t{1} << dim); ++step) {
      cur ^= rows[static_cast<std::size_t>(std::countr_zero(step))];
      const std::size_t w = cur.weight();
      if (w % 2 == 0 && (!rep.min_even_kernel_weight || w < *rep.min_even_kernel_weight)) {
        rep.min_even_kernel_weight = w;
        rep.min_even_kernel_element = cur;
      }
    }
    const bool ok = !rep.min_even_kernel_weight || *rep.min_even_kernel_weight >= need;
    rep.kernel = ok ? CheckStatus::passed : CheckStatus::failed;
    if (!ok) rep.collision = collision_from_kernel(*rep.min_even_kernel_element, n);
  }

  if (big_binomial(m, n) <= kVerifyInjectivityLimit) {
    auto inj = check_injective(generator_columns(g), code.qubits(), n, true);
    rep.injectivity = inj.injective ? CheckStatus::passed : CheckStatus::failed;
    if (inj.collision && !rep.collision) rep.collision = inj.collision;
  }

  rep.theorem_bound = code.aux_qubits() > 0 || code.qubits() <= theorem_qubits(m, n);
  return rep;
}

std::string code_to_json(const SubspaceCode& code) {
  nlohmann::ordered_json j;
  j["format_version"] = kFormatVersion;
  j["modes"] = code.modes();
  j["electrons"] = code.electrons();
  j["qubits"] = code.qubits();
  j["aux_qubits"] = code.aux_qubits();
  j["seed"] = code.seed();
  j["generator_rows"] = code.generator().to_strings();
  return j.dump(2) + "\n";
}

SubspaceCode code_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    if (j.at("format_version").get<int>() != kFormatVersion) {
      throw std::runtime_error("unsupported code format_version " + j.at("format_version").dump());
    }
    const auto modes = j.at("modes").get<std::size_t>();
    const auto qubits = j.at("qubits").get<std::size_t>();
    const auto rows = j.at("generator_rows").get<std::vector<std::string>>();
    if (rows.size() != qubits) throw std::runtime_error("generator_rows has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(qubits));
    for (const auto& r : rows) {
      if (r.size() != modes) throw std::runtime_error("generator row length " + std::to_string(r.size()) + " != modes " + std::to_string(modes));
    }
    BitMatrix g = qubits == 0 ? BitMatrix(0, modes) : BitMatrix::from_strings(rows);
    return SubspaceCode(std::move(g), j.at("electrons").get<std::size_t>(), j.at("seed").get<std::uint64_t>(),
                        j.at("aux_qubits").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed code artifact: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed code artifact: ") + e.what());
  }
}

void save_code(const SubspaceCode& code, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << code_to_json(code);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SubspaceCode load_code(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return code_from_json(ss.str());
}

}  // namespace linenc
