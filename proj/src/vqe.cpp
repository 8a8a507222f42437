#include "linenc/vqe.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "linenc/encoding.hpp"
#include "linenc/fed.hpp"
#include "linenc/parallel.hpp"
#include "linenc/rng.hpp"
#include "linenc/statevector.hpp"

namespace linenc {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

template <class F>
Vec central_gradient(F& f, Vec x, double h) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double up = f(x);
    x[i] = xi - h;
    const double down = f(x);
    x[i] = xi;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

// Limited-memory BFGS with a backtracking Armijo line search.
template <class F>
RestartResult minimize(F& f, Vec x, const VqeConfig& cfg) {
  RestartResult r;
  double fx = f(x);
  r.trace.push_back(fx);
  if (!std::isfinite(fx)) {
    r.finite = false;
    r.energy = fx;
    r.parameters = std::move(x);
    return r;
  }
  Vec g = central_gradient(f, x, cfg.gradient_step);
  std::deque<std::pair<Vec, Vec>> history;  // (s, y)

  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    if (std::sqrt(dot(g, g)) < 1e-10) break;

    // Two-loop recursion for d = -H g.
    Vec d = g;
    std::vector<double> alpha(history.size());
    for (std::size_t k = history.size(); k-- > 0;) {
      const auto& [s, y] = history[k];
      alpha[k] = dot(s, d) / dot(y, s);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] -= alpha[k] * y[i];
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      const double gamma = dot(s, y) / dot(y, y);
      for (auto& v : d) v *= gamma;
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      const auto& [s, y] = history[k];
      const double beta = dot(y, d) / dot(y, s);
      for (std::size_t i = 0; i < d.size(); ++i) d[i] += (alpha[k] - beta) * s[i];
    }
    for (auto& v : d) v = -v;
    double slope = dot(g, d);
    if (!(slope < 0)) {
      history.clear();
      d = g;
      for (auto& v : d) v = -v;
      slope = dot(g, d);
    }

    double step = 1.0;
    Vec xn(x.size());
    double fn = fx;
    bool accepted = false;
    for (int k = 0; k < 40; ++k) {
      for (std::size_t i = 0; i < x.size(); ++i) xn[i] = x[i] + step * d[i];
      fn = f(xn);
      if (std::isfinite(fn) && fn <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    ++r.iterations;
    if (!accepted) {
      r.trace.push_back(fx);
      break;
    }
    Vec gn = central_gradient(f, xn, cfg.gradient_step);
    Vec s(x.size()), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = xn[i] - x[i];
      y[i] = gn[i] - g[i];
    }
    if (dot(s, y) > 1e-16) {
      history.emplace_back(std::move(s), std::move(y));
      if (history.size() > cfg.memory) history.pop_front();
    }
    const double change = fx - fn;
    x = std::move(xn);
    g = std::move(gn);
    fx = fn;
    r.trace.push_back(fx);
    if (std::abs(change) < cfg.convergence_tol) break;
  }
  r.energy = fx;
  r.parameters = std::move(x);
  return r;
}

}  // namespace

VqeResult run_vqe(const FermionHamiltonian& h, const SubspaceCode& code, const VqeConfig& cfg) {
  if (h.modes() != code.modes()) throw std::invalid_argument("Hamiltonian and code disagree on the mode count");
  if (cfg.init_scale < 0) throw std::invalid_argument("init_scale must be nonnegative");
  if (!(cfg.convergence_tol > 0)) throw std::invalid_argument("convergence_tol must be positive");
  if (cfg.restarts == 0) throw std::invalid_argument("need at least one restart");
  if (code.qubits() > kMaxSimQubits) throw std::invalid_argument("code needs more qubits than the simulator allows");

  const std::size_t n = code.electrons();
  BitVector occ(code.modes());
  if (cfg.occupation) {
    occ = *cfg.occupation;
  } else {
    for (std::size_t i = 0; i < n && i < occ.size(); ++i) occ.set(i);
  }

  const EncodedHamiltonian enc = encode_hamiltonian(h, code);
  const LookupDecoder decoder = LookupDecoder::build(code);
  const HeaCircuit circuit{code.qubits(), cfg.layers};
  if (occ.size() != code.modes() || occ.weight() != n) {
    throw std::invalid_argument("reference occupation must have length M and weight N");
  }
  BitVector ref_label = code.encode(occ);
  if (cfg.compensate_reference) ref_label = undo_cnot_chain(ref_label, cfg.layers);
  const StateVector reference = StateVector::basis_state(ref_label);

  std::optional<EnergyEvaluator> exact_eval;
  if (!cfg.shots) exact_eval.emplace(enc, code, decoder);

  VqeResult out;
  out.config = cfg;
  out.qubits = code.qubits();
  out.cnot_count = circuit.cnot_count();
  out.parameter_count = circuit.parameter_count();
  out.restarts.resize(cfg.restarts);

  parallel_for(cfg.restarts, cfg.threads, [&](std::size_t r) {
    SplitMix64 rng = SplitMix64::stream(cfg.seed, r);
    Vec theta(circuit.parameter_count());
    for (auto& t : theta) t = rng.uniform(-cfg.init_scale, cfg.init_scale);
    std::uint64_t evaluations = 0;
    auto energy = [&](const Vec& p) {
      StateVector s = reference;
      run_hea(s, circuit, p);
      if (exact_eval) return (*exact_eval)(s);
      const std::uint64_t shot_seed = SplitMix64::stream(cfg.seed ^ 0x5EEDULL, r * 1'000'003ULL + evaluations++)();
      return evaluate_energy(enc, s, code, decoder, cfg.shots, shot_seed).energy;
    };
    out.restarts[r] = minimize(energy, std::move(theta), cfg);
  });

  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < out.restarts.size(); ++r) {
    const auto& rr = out.restarts[r];
    if (!rr.finite || !std::isfinite(rr.energy)) continue;
    if (!best || rr.energy < out.restarts[*best].energy) best = r;
  }
  if (!best) throw std::runtime_error("every VQE restart produced a non-finite energy");
  out.best_restart = *best;
  out.best_energy = out.restarts[*best].energy;
  out.best_parameters = out.restarts[*best].parameters;
  out.energy_trace = out.restarts[*best].trace;

  if (binomial(h.modes(), n) <= 10000) {
    out.exact_energy = exact_ground_energy(h, n);
    out.delta_e_kcal = (out.best_energy - out.exact_energy) * kHartreeToKcal;
  } else {
    out.exact_energy = std::numeric_limits<double>::quiet_NaN();
    out.delta_e_kcal = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::string vqe_result_json(const VqeResult& r) {
  nlohmann::ordered_json j;
  j["best_energy"] = r.best_energy;
  j["exact_energy"] = r.exact_energy;
  j["delta_e_kcal"] = r.delta_e_kcal;
  j["qubits"] = r.qubits;
  j["cnot_count"] = r.cnot_count;
  j["parameter_count"] = r.parameter_count;
  j["best_restart"] = r.best_restart;
  j["best_parameters"] = r.best_parameters;
  j["energy_trace"] = r.energy_trace;
  nlohmann::ordered_json rs = nlohmann::ordered_json::array();
  for (const auto& x : r.restarts) {
    rs.push_back({{"energy", x.energy}, {"iterations", x.iterations}, {"finite", x.finite}});
  }
  j["restarts"] = rs;
  const auto& c = r.config;
  j["config"] = {{"layers", c.layers},
                 {"restarts", c.restarts},
                 {"seed", c.seed},
                 {"shots", c.shots ? nlohmann::ordered_json(*c.shots) : nlohmann::ordered_json("exact")},
                 {"init_scale", c.init_scale},
                 {"max_iterations", c.max_iterations},
                 {"gradient_step", c.gradient_step},
                 {"convergence_tol", c.convergence_tol},
                 {"memory", c.memory},
                 {"compensate_reference", c.compensate_reference}};
  return j.dump(2);
}

std::vector<ScanPoint> potential_energy_scan(const std::vector<std::filesystem::path>& files,
                                             std::optional<SubspaceCode> code, const VqeConfig& cfg) {
  std::vector<ScanPoint> out;
  std::optional<std::pair<std::size_t, std::size_t>> shape;
  for (const auto& f : files) {
    ScanPoint pt;
    pt.label = f.stem().string();
    try {
      const auto h = FermionHamiltonian::load(f);
      if (shape && *shape != std::make_pair(h.modes(), h.electrons())) {
        throw std::invalid_argument("scan files must share modes and electrons");
      }
      shape = std::make_pair(h.modes(), h.electrons());
      if (!code) code = find_minimal_code(h.modes(), h.electrons(), cfg.seed).code;
      pt.result = run_vqe(h, *code, cfg);
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace linenc
