#include "vqs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vqs/analysis.hpp"
#include "vqs/errors.hpp"
#include "vqs/vqs.hpp"

namespace vqs {
namespace {

using ordered_json = nlohmann::ordered_json;

// Derivation tags for the per-command random streams.
constexpr std::uint64_t kAxesTag = 10;
constexpr std::uint64_t kTableTag = 11;
constexpr std::uint64_t kHaarTag = 12;

/// Shortest decimal form that parses back to the identical double.
std::string fmt_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

ObservableSum load_hamiltonian(const std::string& source) {
  if (source == "builtin:heisenberg") return builtin_heisenberg();
  if (source.rfind("builtin:", 0) == 0) {
    throw std::invalid_argument("unknown builtin hamiltonian: " + source);
  }
  return ObservableSum::load(source);
}

EvolutionMode parse_mode(const std::string& mode) {
  if (mode == "rte") return EvolutionMode::rte;
  if (mode == "ite") return EvolutionMode::ite;
  throw std::invalid_argument("unknown mode: " + mode);
}

Strategy parse_strategy(const std::string& strategy) {
  if (strategy == "exact") return Strategy::exact;
  if (strategy == "naive") return Strategy::naive;
  if (strategy == "cs") return Strategy::classical_shadow;
  if (strategy == "derand") return Strategy::derandomization;
  if (strategy == "ldf") return Strategy::ldf;
  if (strategy == "hybrid") return Strategy::hybrid;
  throw std::invalid_argument("unknown strategy: " + strategy);
}

GConvention parse_convention(const std::string& convention) {
  if (convention == "half") return GConvention::half;
  if (convention == "unit") return GConvention::unit;
  throw std::invalid_argument("unknown g convention: " + convention);
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::invalid_argument("write failed: " + path);
  std::cout << "wrote " << path << "\n";
}

struct CommonOpts {
  std::string hamiltonian;
  std::string mode = "ite";
  std::string strategy = "exact";
  double dt = 0.01;
  int steps = 5;
  long shots_total = 0;
  int trials = 5;
  int layers = 4;
  std::uint64_t seed = 1;
  double alpha = 0.0;
  double svd_cutoff = 1e-6;
  std::string g_convention = "half";
  std::string out;
  std::string format = "csv";
};

void add_format_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "Output path (prefix for multi-file output)");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

// ---------------------------------------------------------------- evolve --

int cmd_evolve(const CommonOpts& o) {
  const ObservableSum h = load_hamiltonian(o.hamiltonian);
  if (o.trials < 1) throw std::invalid_argument("trials must be at least 1");
  const EvolutionMode mode = parse_mode(o.mode);
  const Strategy strategy = parse_strategy(o.strategy);
  const RandomSource root(o.seed);

  std::vector<EvolutionTrace> traces;
  traces.reserve(o.trials);
  for (int trial = 0; trial < o.trials; ++trial) {
    RandomSource axes_rng =
        root.derive({kAxesTag, static_cast<std::uint64_t>(trial)});
    EvolutionConfig cfg;
    cfg.hamiltonian = h;
    cfg.mode = mode;
    cfg.strategy = strategy;
    cfg.ansatz =
        AnsatzSpec::hardware_efficient(h.n_qubits(), o.layers, axes_rng);
    cfg.dt = o.dt;
    cfg.steps = o.steps;
    cfg.shots_total = o.shots_total;
    cfg.svd_cutoff = o.svd_cutoff;
    cfg.alpha = o.alpha;
    cfg.seed = o.seed;
    cfg.trial = static_cast<std::uint64_t>(trial);
    cfg.pair_exact = true;
    traces.push_back(run_evolution(cfg));
  }

  const std::string prefix = o.out.empty() ? "evolve" : o.out;
  const int n_rows = o.steps + 1;

  for (int trial = 0; trial < o.trials; ++trial) {
    const EvolutionTrace& trace = traces[trial];
    const std::string path =
        prefix + "_trial" + std::to_string(trial) + "." + o.format;
    if (o.format == "csv") {
      std::string body = "# evolve-trace v1\nstep,t,energy,D_I\n";
      for (const StepRecord& r : trace.records) {
        body += std::to_string(r.step) + "," + fmt_double(r.t) + "," +
                fmt_double(r.energy) + "," + fmt_double(r.d_i) + "\n";
      }
      write_text_file(path, body);
    } else {
      ordered_json doc;
      doc["schema"] = "evolve-trace v1";
      doc["rows"] = ordered_json::array();
      for (const StepRecord& r : trace.records) {
        doc["rows"].push_back(
            {{"step", r.step}, {"t", r.t}, {"energy", r.energy},
             {"D_I", r.d_i}});
      }
      write_text_file(path, doc.dump(2) + "\n");
    }
  }

  std::vector<double> mean(n_rows, 0.0);
  std::vector<double> stderr_of_mean(n_rows, 0.0);
  for (int row = 0; row < n_rows; ++row) {
    double acc = 0.0;
    for (const EvolutionTrace& trace : traces) acc += trace.records[row].d_i;
    mean[row] = acc / o.trials;
    if (o.trials > 1) {
      double sq = 0.0;
      for (const EvolutionTrace& trace : traces) {
        const double d = trace.records[row].d_i - mean[row];
        sq += d * d;
      }
      stderr_of_mean[row] = std::sqrt(sq / (o.trials - 1) / o.trials);
    }
  }

  const std::string summary_path = prefix + "_summary." + o.format;
  if (o.format == "csv") {
    std::string body = "# evolve-summary v1\nstep,t,D_I_mean,D_I_stderr\n";
    for (int row = 0; row < n_rows; ++row) {
      body += std::to_string(row) + "," + fmt_double(row * o.dt) + "," +
              fmt_double(mean[row]) + "," + fmt_double(stderr_of_mean[row]) +
              "\n";
    }
    write_text_file(summary_path, body);
  } else {
    ordered_json doc;
    doc["schema"] = "evolve-summary v1";
    doc["rows"] = ordered_json::array();
    for (int row = 0; row < n_rows; ++row) {
      doc["rows"].push_back({{"step", row},
                             {"t", row * o.dt},
                             {"D_I_mean", mean[row]},
                             {"D_I_stderr", stderr_of_mean[row]}});
    }
    write_text_file(summary_path, doc.dump(2) + "\n");
  }

  std::cout << "final D_I mean " << fmt_double(mean[n_rows - 1]) << " stderr "
            << fmt_double(stderr_of_mean[n_rows - 1]) << "\n";
  return 0;
}

// -------------------------------------------------------------- variance --

int cmd_variance(const CommonOpts& o) {
  const ObservableSum h = load_hamiltonian(o.hamiltonian);
  const EvolutionMode mode = parse_mode(o.mode);
  const GConvention convention = parse_convention(o.g_convention);
  const RandomSource root(o.seed);
  RandomSource axes_rng = root.derive({kAxesTag});
  const AnsatzSpec ansatz =
      AnsatzSpec::hardware_efficient(h.n_qubits(), o.layers, axes_rng);
  const long n_total =
      o.shots_total > 0 ? o.shots_total : 5 * static_cast<long>(h.size());
  RandomSource table_rng = root.derive({kTableTag});
  const std::vector<VarianceRow> rows = variance_table(
      h, ansatz, mode, static_cast<int>(n_total), convention, 5, table_rng);

  const std::string path =
      o.out.empty() ? std::string("variance_table.") + o.format : o.out;
  if (o.format == "csv") {
    std::string body =
        "# variance-table v1\nparams,strategy,variance,approximation,diff\n";
    for (const VarianceRow& row : rows) {
      body += row.params_label + "," + row.strategy + "," +
              fmt_double(row.variance) + "," + fmt_double(row.approximation) +
              "," + fmt_double(row.diff) + "\n";
    }
    write_text_file(path, body);
  } else {
    ordered_json doc;
    doc["schema"] = "variance-table v1";
    doc["rows"] = ordered_json::array();
    for (const VarianceRow& row : rows) {
      doc["rows"].push_back({{"params", row.params_label},
                             {"strategy", row.strategy},
                             {"variance", row.variance},
                             {"approximation", row.approximation},
                             {"diff", row.diff}});
    }
    write_text_file(path, doc.dump(2) + "\n");
  }

  for (const VarianceRow& row : rows) {
    std::cout << row.params_label << " | " << row.strategy << " | variance "
              << fmt_double(row.variance) << " | approximation "
              << fmt_double(row.approximation) << " | diff "
              << fmt_double(row.diff) << "\n";
  }
  return 0;
}

// ----------------------------------------------------------- derandomize --

int cmd_derandomize(const CommonOpts& o, bool extend) {
  const ObservableSum h = load_hamiltonian(o.hamiltonian);
  if (o.shots_total < 1) {
    throw std::invalid_argument("derandomization needs --shots-total >= 1");
  }
  ObservableSum targets;
  if (extend) {
    for (const auto& term : h.terms()) {
      targets.add(term.coeff, extend_with_x(term.word));
    }
  } else {
    targets = h;
  }
  const MeasurementPlan plan = build_measurements_derandomization(
      targets, static_cast<int>(o.shots_total));

  std::string body = "# derandomized-plan v1\n";
  for (const PauliString& basis : plan.bases()) {
    body += basis.str() + "\n";
  }
  const std::string path = o.out.empty() ? "plan.txt" : o.out;
  write_text_file(path, body);

  std::map<std::string, int> counts;
  for (const PauliString& basis : plan.bases()) ++counts[basis.str()];
  for (const auto& [basis, count] : counts) {
    std::cout << basis << " x" << count << "\n";
  }
  return 0;
}

// ------------------------------------------------------------ haar-check --

/// Few-term mixed-locality observable used by the self-check: system words
/// XI, YI, ZX, IX padded with identities to the requested width, weights
/// 1.0, 0.8, 0.6, 0.4, each extended with the ancilla X.
ObservableSum haar_toy_observable(int n_system) {
  if (n_system < 2) {
    throw std::invalid_argument("haar check needs at least 2 system qubits");
  }
  const char* words[4] = {"XI", "YI", "ZX", "IX"};
  const double coeffs[4] = {1.0, 0.8, 0.6, 0.4};
  ObservableSum out;
  for (int j = 0; j < 4; ++j) {
    PauliString word(n_system);
    const std::string text = words[j];
    for (int q = 0; q < 2; ++q) {
      word.set_letter(q + 1, letter_from_char(text[q]));
    }
    out.add(coeffs[j], extend_with_x(word));
  }
  return out;
}

int cmd_haar_check(const CommonOpts& o, int n_system, int samples) {
  const ObservableSum toy = haar_toy_observable(n_system);
  PauliString dummy(toy.n_qubits());
  for (int q = 1; q <= toy.n_qubits(); ++q) dummy.set_letter(q, Letter::Z);
  const MeasurementPlan plan = MeasurementPlan::probabilistic({dummy});
  RandomSource rng = RandomSource(o.seed).derive({kHaarTag});
  const HaarReport report = haar_check(toy, plan, samples, rng);

  const std::vector<std::pair<std::string, double>> fields = {
      {"n_system_qubits", static_cast<double>(n_system)},
      {"n_qubits", static_cast<double>(report.n_qubits)},
      {"samples", static_cast<double>(report.samples)},
      {"mean_empirical", report.mean_empirical},
      {"mean_closed", report.mean_closed},
      {"mean_stderr", report.mean_stderr},
      {"var_empirical", report.var_empirical},
      {"var_closed", report.var_closed},
      {"naive_mean_empirical", report.naive_mean_empirical},
      {"naive_mean_closed", report.naive_mean_closed},
  };

  const std::string path =
      o.out.empty() ? std::string("haar_report.") + o.format : o.out;
  if (o.format == "csv") {
    std::string body = "# haar-report v1\nkey,value\n";
    for (const auto& [key, value] : fields) {
      body += key + "," + fmt_double(value) + "\n";
    }
    write_text_file(path, body);
  } else {
    ordered_json doc;
    doc["schema"] = "haar-report v1";
    for (const auto& [key, value] : fields) doc[key] = value;
    write_text_file(path, doc.dump(2) + "\n");
  }

  for (const auto& [key, value] : fields) {
    std::cout << key << " = " << fmt_double(value) << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{
      "Measurement-optimized variational quantum simulation toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  int haar_n = 2;
  int haar_samples = 5000;
  bool extend = false;

  CLI::App* evolve = app.add_subcommand(
      "evolve", "Run paired variational evolutions and write D_I traces");
  evolve->add_option("--hamiltonian", o.hamiltonian,
                     "builtin:heisenberg or a Hamiltonian file path")
      ->required();
  evolve->add_option("--mode", o.mode, "Evolution mode")
      ->check(CLI::IsMember({"rte", "ite"}));
  evolve->add_option("--strategy", o.strategy, "Gradient strategy")
      ->check(CLI::IsMember(
          {"exact", "naive", "cs", "derand", "ldf", "hybrid"}));
  evolve->add_option("--dt", o.dt, "Step size");
  evolve->add_option("--steps", o.steps, "Number of steps");
  evolve->add_option("--shots-total", o.shots_total,
                     "Measurement budget per gradient per step");
  evolve->add_option("--trials", o.trials, "Independent trials");
  evolve->add_option("--layers", o.layers, "Ansatz layers");
  evolve->add_option("--seed", o.seed, "Random seed");
  evolve->add_option("--alpha", o.alpha,
                     "Hybrid metric budget fraction (0 = auto)");
  evolve->add_option("--svd-cutoff", o.svd_cutoff,
                     "Relative singular value cutoff");
  add_format_flags(evolve, o);

  CLI::App* variance = app.add_subcommand(
      "variance", "Per-strategy gradient variance table");
  variance->add_option("--hamiltonian", o.hamiltonian,
                       "builtin:heisenberg or a Hamiltonian file path")
      ->required();
  variance->add_option("--mode", o.mode, "Evolution mode")
      ->check(CLI::IsMember({"rte", "ite"}));
  variance->add_option("--shots-total", o.shots_total,
                       "Total budget (default 5 per term)");
  variance->add_option("--layers", o.layers, "Ansatz layers");
  variance->add_option("--seed", o.seed, "Random seed");
  variance->add_option("--g-convention", o.g_convention,
                       "Derivative weight convention")
      ->check(CLI::IsMember({"half", "unit"}));
  add_format_flags(variance, o);

  CLI::App* derand = app.add_subcommand(
      "derandomize", "Export a derandomized measurement plan");
  derand->add_option("--hamiltonian", o.hamiltonian,
                     "builtin:heisenberg or a Hamiltonian file path")
      ->required();
  derand->add_option("--shots-total", o.shots_total, "Number of bases to emit")
      ->required();
  derand->add_flag("--extend", extend,
                   "Prepend the ancilla X to every term before building");
  derand->add_option("--out", o.out, "Output path");

  CLI::App* haar = app.add_subcommand(
      "haar-check", "Closed-form versus sampled variance functional");
  haar->add_option("--n", haar_n, "System qubits (>= 2)");
  haar->add_option("--samples", haar_samples, "Number of sampled states");
  haar->add_option("--seed", o.seed, "Random seed");
  add_format_flags(haar, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    app.exit(e);
    return 2;
  }

  try {
    if (evolve->parsed()) return cmd_evolve(o);
    if (variance->parsed()) return cmd_variance(o);
    if (derand->parsed()) return cmd_derandomize(o, extend);
    return cmd_haar_check(o, haar_n, haar_samples);
  } catch (const SingularM& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const PlanRejected& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const UncoveredTerm& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace vqs
