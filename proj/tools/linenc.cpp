// linenc: command-line front end.
//
// Exit status: 0 success, 1 domain failure (search exhausted, invariant
// breach, failed self-test), 2 usage error or violated precondition.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "linenc/encoding.hpp"
#include "linenc/fed.hpp"
#include "linenc/fermion.hpp"
#include "linenc/selftest.hpp"
#include "linenc/subspace_code.hpp"
#include "linenc/vqe.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace linenc;

struct Globals {
  bool json = false;
  bool quiet = false;
  std::size_t threads = 1;
};

Globals g_opts;

// Text lines go to stdout unless --quiet or --json.
template <class... Args>
void say(const char* fmt, Args... args) {
  if (g_opts.quiet || g_opts.json) return;
  std::printf(fmt, args...);
  std::printf("\n");
}

void emit(const json& j) {
  if (g_opts.json) std::cout << j.dump(2) << "\n";
}

std::string fmt_e(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

SubspaceCode code_for(const FermionHamiltonian& h, const std::string& code_path, std::uint64_t seed) {
  if (!code_path.empty()) {
    auto code = load_code(code_path);
    if (code.modes() != h.modes() || code.electrons() != h.electrons()) {
      throw std::invalid_argument("code (M=" + std::to_string(code.modes()) + ", N=" + std::to_string(code.electrons()) +
                                  ") does not match the Hamiltonian (M=" + std::to_string(h.modes()) +
                                  ", N=" + std::to_string(h.electrons()) + ")");
    }
    return code;
  }
  RleOptions opt;
  opt.threads = g_opts.threads;
  return find_minimal_code(h.modes(), h.electrons(), seed, opt).code;
}

// ---------------------------------------------------------------------------

struct EncodeArgs {
  std::size_t modes = 0, electrons = 0, aux = 0, max_attempts = 1000;
  std::optional<std::size_t> qubits;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_encode(const EncodeArgs& a) {
  const auto bounds = qubit_bounds(a.modes, a.electrons);
  RleOptions opt;
  opt.max_attempts = a.max_attempts;
  opt.threads = g_opts.threads;

  std::optional<SubspaceCode> code;
  std::size_t attempts = 0;
  json levels = json::array();
  if (a.aux > 0) {
    const std::size_t base = a.qubits.value_or(bounds.gv_qubits);
    auto r = rle_with_aux(a.modes, a.electrons, base, a.aux, a.seed, opt);
    attempts = r.attempts;
    code = std::move(r.code);
  } else if (a.qubits) {
    auto r = rle_search(a.modes, a.electrons, *a.qubits, a.seed, opt);
    attempts = r.attempts;
    code = std::move(r.code);
  } else {
    try {
      auto r = find_minimal_code(a.modes, a.electrons, a.seed, opt);
      attempts = r.attempts;
      for (const auto& [q, n] : r.levels) levels.push_back({{"qubits", q}, {"attempts", n}});
      code = std::move(r.code);
    } catch (const std::runtime_error&) {
    }
  }
  if (!code) {
    std::fprintf(stderr, "encode: no valid encoder found after %zu attempts\n", attempts);
    return 1;
  }
  if (!a.out.empty()) save_code(*code, a.out);

  json j;
  j["modes"] = a.modes;
  j["electrons"] = a.electrons;
  j["qubits"] = code->qubits();
  j["aux_qubits"] = code->aux_qubits();
  j["theorem_bound"] = bounds.theorem_qubits;
  j["gv_qubits"] = bounds.gv_qubits;
  j["attempts"] = attempts;
  j["seed"] = a.seed;
  if (!levels.empty()) j["levels"] = levels;
  if (!a.out.empty()) j["out"] = a.out;
  j["code"] = json::parse(code_to_json(*code));
  emit(j);
  say("Q = %zu  (bound ceil(2N log2 M) = %zu, GV = %zu)", code->qubits(), bounds.theorem_qubits, bounds.gv_qubits);
  say("attempts = %zu  seed = %llu", attempts, static_cast<unsigned long long>(a.seed));
  if (!a.out.empty()) {
    say("wrote %s", a.out.c_str());
  } else if (!g_opts.json && !g_opts.quiet) {
    std::cout << code_to_json(*code);
  }
  return 0;
}

int cmd_bounds(std::size_t modes, std::size_t electrons) {
  const auto b = qubit_bounds(modes, electrons);
  emit({{"modes", modes},
        {"electrons", electrons},
        {"gv_qubits", b.gv_qubits},
        {"impossibility_qubits", b.impossibility_qubits},
        {"counting_qubits", b.counting_qubits},
        {"theorem_qubits", b.theorem_qubits}});
  say("gv_qubits            %zu", b.gv_qubits);
  say("impossibility_qubits %zu", b.impossibility_qubits);
  say("counting_qubits      %zu", b.counting_qubits);
  say("ceil(2N log2 M)      %zu", b.theorem_qubits);
  return 0;
}

struct TableArgs {
  std::size_t electrons = 0, qubits = 0, max_modes = 64, max_attempts = 100000;
  double budget = 60.0;
  std::uint64_t seed = 0;
};

int cmd_table(const TableArgs& a) {
  if (a.electrons < 1 || a.qubits < 1) throw std::invalid_argument("table needs --electrons >= 1 and --qubits >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  RleOptions opt;
  opt.max_attempts = a.max_attempts;
  opt.threads = g_opts.threads;
  opt.deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(a.budget));

  std::optional<std::size_t> best;
  std::string stop = "max-modes reached";
  json rows = json::array();
  for (std::size_t m = std::max(a.qubits + 1, 2 * a.electrons); m <= a.max_modes; ++m) {
    const auto r = rle_search(m, a.electrons, a.qubits, a.seed, opt);
    rows.push_back({{"modes", m}, {"success", r.code.has_value()}, {"attempts", r.attempts}});
    say("M = %2zu  %s  attempts = %zu", m, r.code ? "ok    " : "failed", r.attempts);
    if (!r.code) {
      stop = r.timed_out ? "budget exhausted" : (r.attempts == 0 ? "pigeonhole" : "attempts exhausted");
      break;
    }
    best = m;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit({{"electrons", a.electrons},
        {"qubits", a.qubits},
        {"max_modes", best ? json(*best) : json(nullptr)},
        {"stopped", stop},
        {"budget_seconds", a.budget},
        {"elapsed_seconds", secs},
        {"seed", a.seed},
        {"levels", rows}});
  if (best) {
    say("max modes M = %zu  (N = %zu, Q = %zu; %s; %.1f s of %.0f s budget)", *best, a.electrons, a.qubits, stop.c_str(),
        secs, a.budget);
  } else {
    say("no M encoded (N = %zu, Q = %zu; %s)", a.electrons, a.qubits, stop.c_str());
  }
  return 0;
}

int cmd_groups(const std::string& ham_path, const std::string& code_path, std::uint64_t seed) {
  const auto h = FermionHamiltonian::load(ham_path);
  const auto code = code_for(h, code_path, seed);
  const auto terms = hamiltonian_terms(h, code.electrons());
  std::vector<EncodedXPTerm> enc;
  for (const auto& t : terms) enc.push_back(encode_term(t, code));
  const auto groups = group_terms(std::move(enc));
  const std::size_t m = h.modes();
  const std::uint64_t bound = 1 + binomial(m, 2) + binomial(m, 4);
  const std::size_t distinct = distinct_x_count(terms);

  json j;
  j["modes"] = m;
  j["electrons"] = code.electrons();
  j["qubits"] = code.qubits();
  j["terms"] = terms.size();
  j["groups"] = groups.size();
  j["bound"] = bound;
  j["distinct_x"] = distinct;
  j["report"] = json::parse(group_report_json(groups));
  emit(j);
  say("groups = %zu  bound 1+C(M,2)+C(M,4) = %llu  distinct unencoded X = %zu  (Q = %zu, %zu terms)", groups.size(),
      static_cast<unsigned long long>(bound), distinct, code.qubits(), terms.size());
  for (const auto& grp : groups) {
    std::string net;
    for (const auto& c : grp.basis.network) net += " " + std::to_string(c.control) + "->" + std::to_string(c.target);
    say("  %s %s  terms=%zu  pivot=%s  rot=%s  cnots:%s", grp.x_key.to_string().c_str(), to_string(grp.part),
        grp.terms.size(), grp.basis.pivot ? std::to_string(*grp.basis.pivot).c_str() : "-", to_string(grp.basis.rotation),
        net.empty() ? " none" : net.c_str());
  }
  if (groups.size() > bound) {
    std::fprintf(stderr, "groups: %zu groups exceed the bound %llu\n", groups.size(), static_cast<unsigned long long>(bound));
    return 1;
  }
  return 0;
}

struct VqeArgs {
  std::vector<std::string> hamiltonians;
  std::string code, out, trace_csv;
  VqeConfig cfg;
  std::uint64_t shots = 0;
};

int cmd_vqe(VqeArgs a) {
  a.cfg.threads = g_opts.threads;
  if (a.shots > 0) a.cfg.shots = a.shots;
  std::optional<SubspaceCode> code;
  if (!a.code.empty()) code = load_code(a.code);

  json results = json::array();
  std::vector<std::filesystem::path> files(a.hamiltonians.begin(), a.hamiltonians.end());
  if (files.size() == 1) {
    const auto h = FermionHamiltonian::load(files[0]);
    const auto c = code ? *code : code_for(h, "", a.cfg.seed);
    if (c.modes() != h.modes() || c.electrons() != h.electrons()) {
      throw std::invalid_argument("code does not match the Hamiltonian's modes/electrons");
    }
    const auto r = run_vqe(h, c, a.cfg);
    json j = json::parse(vqe_result_json(r));
    j["hamiltonian"] = a.hamiltonians[0];
    results.push_back(j);
    say("energy      %s Ha", fmt_e(r.best_energy).c_str());
    say("exact       %s Ha", fmt_e(r.exact_energy).c_str());
    say("delta E     %.6f kcal/mol", r.delta_e_kcal);
    say("qubits %zu  layers %zu  CNOTs %zu  parameters %zu  restarts %zu", r.qubits, a.cfg.layers, r.cnot_count,
        r.parameter_count, a.cfg.restarts);
    if (!a.trace_csv.empty()) {
      std::ofstream csv(a.trace_csv);
      csv << "iteration,energy\n";
      for (std::size_t i = 0; i < r.energy_trace.size(); ++i) csv << i << ',' << fmt_e(r.energy_trace[i]) << '\n';
    }
  } else {
    const auto scan = potential_energy_scan(files, code, a.cfg);
    say("%-24s %16s %16s %14s", "label", "vqe (Ha)", "exact (Ha)", "dE (kcal/mol)");
    for (const auto& pt : scan) {
      json j;
      j["label"] = pt.label;
      if (pt.result) {
        j["result"] = json::parse(vqe_result_json(*pt.result));
        say("%-24s %16s %16s %14.6f", pt.label.c_str(), fmt_e(pt.result->best_energy).c_str(),
            fmt_e(pt.result->exact_energy).c_str(), pt.result->delta_e_kcal);
      } else {
        j["error"] = pt.error;
        say("%-24s error: %s", pt.label.c_str(), pt.error.c_str());
      }
      results.push_back(j);
    }
  }
  const json doc = results.size() == 1 ? results[0] : results;
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw std::runtime_error("cannot write " + a.out);
    f << doc.dump(2) << "\n";
  }
  emit(doc);
  return 0;
}

int cmd_fci(const std::string& ham_path, std::optional<std::size_t> electrons) {
  const auto h = FermionHamiltonian::load(ham_path);
  const std::size_t n = electrons.value_or(h.electrons());
  const double e = exact_ground_energy(h, n);
  emit({{"hamiltonian", ham_path}, {"modes", h.modes()}, {"electrons", n}, {"energy", e}});
  say("%s", fmt_e(e).c_str());
  return 0;
}

int cmd_selftest(std::size_t modes, std::size_t electrons, std::size_t trials, std::uint64_t seed, bool fault) {
  const auto r = run_selftest(modes, electrons, trials, seed, fault);
  if (g_opts.json) std::cout << selftest_json(r) << "\n";
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    const auto& t = r.trials[i];
    if (!t.passed) {
      say("trial %zu FAILED  Q=%zu  decoded=%s  oracle=%s  %s", i, t.qubits, fmt_e(t.decoded).c_str(),
          fmt_e(t.oracle).c_str(), t.error.c_str());
    }
  }
  say("%zu/%zu passed (M=%zu, N=%zu, seed=%llu, tol=%g)", r.passed(), r.trials.size(), modes, electrons,
      static_cast<unsigned long long>(seed), r.tolerance);
  return r.all_passed() ? 0 : 1;
}

int cmd_decode_check(const std::string& code_path) {
  const auto code = load_code(code_path);
  const auto rep = verify_code(code);
  const auto dec = LookupDecoder::build(code);
  std::size_t checked = 0, bad = 0;
  for (const auto& b : fock_basis(code.modes(), code.electrons())) {
    ++checked;
    const auto back = dec.decode(code.encode(b));
    if (!back || *back != b) ++bad;
  }
  const bool size_ok = dec.size() == checked;
  const bool ok = bad == 0 && size_ok && rep.valid();
  json j;
  j["modes"] = code.modes();
  j["electrons"] = code.electrons();
  j["qubits"] = code.qubits();
  j["states"] = checked;
  j["round_trip_failures"] = bad;
  j["duality"] = rep.duality;
  j["kernel"] = to_string(rep.kernel);
  j["injectivity"] = to_string(rep.injectivity);
  j["min_even_kernel_weight"] = rep.min_even_kernel_weight ? json(*rep.min_even_kernel_weight) : json(nullptr);
  j["theorem_bound"] = rep.theorem_bound;
  j["valid"] = ok;
  emit(j);
  say("states %zu  round-trip failures %zu  duality %s  kernel %s  injectivity %s", checked, bad,
      rep.duality ? "ok" : "FAILED", to_string(rep.kernel), to_string(rep.injectivity));
  if (rep.min_even_kernel_weight) say("min even kernel weight %zu (need >= %zu)", *rep.min_even_kernel_weight, 2 * code.electrons() + 2);
  say("%s", ok ? "decode-check passed" : "decode-check FAILED");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle-conserving qubit compression: encoder search, measurement grouping, decoding and VQE"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", g_opts.json, "Machine-readable output");
  app.add_flag("--quiet", g_opts.quiet, "Suppress text output");
  app.add_option("--threads", g_opts.threads, "Worker cap")->check(CLI::PositiveNumber);

  std::function<int()> run;

  EncodeArgs ea;
  auto* enc = app.add_subcommand("encode", "Search for an encoder and write the code artifact");
  enc->add_option("--modes", ea.modes)->required();
  enc->add_option("--electrons", ea.electrons)->required();
  enc->add_option("--qubits", ea.qubits, "Target Q; minimal Q when omitted");
  enc->add_option("--seed", ea.seed);
  enc->add_option("--aux", ea.aux, "Extra qubits on top of --qubits (default: GV bound)");
  enc->add_option("--max-attempts", ea.max_attempts)->check(CLI::PositiveNumber);
  enc->add_option("--out", ea.out, "Artifact path");
  enc->callback([&] { run = [&] { return cmd_encode(ea); }; });

  std::size_t b_modes = 0, b_electrons = 0;
  auto* bnd = app.add_subcommand("bounds", "Qubit-count bounds for (M, N)");
  bnd->add_option("--modes", b_modes)->required();
  bnd->add_option("--electrons", b_electrons)->required();
  bnd->callback([&] { run = [&] { return cmd_bounds(b_modes, b_electrons); }; });

  TableArgs ta;
  auto* tab = app.add_subcommand("table", "Largest M encodable at fixed (N, Q)");
  tab->add_option("--electrons", ta.electrons)->required();
  tab->add_option("--qubits", ta.qubits)->required();
  tab->add_option("--max-modes", ta.max_modes);
  tab->add_option("--budget-seconds", ta.budget)->check(CLI::PositiveNumber);
  tab->add_option("--max-attempts", ta.max_attempts, "Attempt cap per M")->check(CLI::PositiveNumber);
  tab->add_option("--seed", ta.seed);
  tab->callback([&] { run = [&] { return cmd_table(ta); }; });

  std::string g_ham, g_code;
  std::uint64_t g_seed = 0;
  auto* grp = app.add_subcommand("groups", "Measurement groups of an encoded Hamiltonian");
  grp->add_option("--hamiltonian", g_ham)->required()->check(CLI::ExistingFile);
  grp->add_option("--code", g_code)->check(CLI::ExistingFile);
  grp->add_option("--seed", g_seed, "Seed for the minimal code when --code is omitted");
  grp->callback([&] { run = [&] { return cmd_groups(g_ham, g_code, g_seed); }; });

  VqeArgs va;
  auto* vqe = app.add_subcommand("vqe", "HEA VQE against the decoded energy");
  vqe->add_option("--hamiltonian", va.hamiltonians, "One file, or several for a scan")->required()->check(CLI::ExistingFile);
  vqe->add_option("--code", va.code)->check(CLI::ExistingFile);
  vqe->add_option("--layers", va.cfg.layers)->required();
  vqe->add_option("--seed", va.cfg.seed);
  vqe->add_option("--shots", va.shots, "Shots per group; exact probabilities when omitted");
  vqe->add_option("--restarts", va.cfg.restarts)->check(CLI::PositiveNumber);
  vqe->add_option("--init-scale", va.cfg.init_scale)->check(CLI::NonNegativeNumber);
  vqe->add_option("--max-iterations", va.cfg.max_iterations);
  vqe->add_option("--tol", va.cfg.convergence_tol)->check(CLI::PositiveNumber);
  vqe->add_option("--out", va.out, "Write the result JSON here");
  vqe->add_option("--trace-csv", va.trace_csv, "Write the best energy trace as CSV");
  vqe->callback([&] { run = [&] { return cmd_vqe(va); }; });

  std::string f_ham;
  std::optional<std::size_t> f_electrons;
  auto* fci = app.add_subcommand("fci", "Exact ground energy in the N-electron sector");
  fci->add_option("--hamiltonian", f_ham)->required()->check(CLI::ExistingFile);
  fci->add_option("--electrons", f_electrons, "Override the file's electron count");
  fci->callback([&] { run = [&] { return cmd_fci(f_ham, f_electrons); }; });

  std::size_t s_modes = 0, s_electrons = 0, s_trials = 20;
  std::uint64_t s_seed = 0;
  bool s_fault = false;
  auto* st = app.add_subcommand("selftest", "Decoded energy against the Fock-space oracle on random instances");
  st->add_option("--modes", s_modes)->required();
  st->add_option("--electrons", s_electrons)->required();
  st->add_option("--trials", s_trials);
  st->add_option("--seed", s_seed);
  st->add_flag("--inject-fault", s_fault)->group("");
  st->callback([&] { run = [&] { return cmd_selftest(s_modes, s_electrons, s_trials, s_seed, s_fault); }; });

  std::string d_code;
  auto* dc = app.add_subcommand("decode-check", "Lookup round trip over every state of a code artifact");
  dc->add_option("--code", d_code)->required()->check(CLI::ExistingFile);
  dc->callback([&] { run = [&] { return cmd_decode_check(d_code); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run();
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
