#include "vqs/vqs.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "vqs/errors.hpp"
#include "vqs/statevec.hpp"

namespace vqs {
namespace {

// Stream tags keep every estimate on its own shot stream, keyed further by
// (trial, strategy, step, entry).
constexpr std::uint64_t kGradientTag = 1;
constexpr std::uint64_t kMetricTag = 2;

std::uint64_t strategy_key(Strategy strategy) {
  return static_cast<std::uint64_t>(strategy);
}

bool strategy_uses_shots(Strategy strategy) {
  return strategy != Strategy::exact;
}

// The grouped builder draws each shot's group at random, so a low-weight
// group can end up with zero shots, leaving its terms with zero covering
// probability — a plan the estimator refuses. Redraws are bounded so a budget
// that cannot plausibly cover every group fails loudly instead of spinning.
constexpr int kMaxGroupedDraws = 100;

bool covers_all_targets(const MeasurementPlan& plan,
                        const ObservableSum& targets) {
  for (const ObservableSum::Term& t : targets.terms()) {
    if (plan.covering_q(t.word) <= 0.0) {
      return false;
    }
  }
  return true;
}

Eigen::MatrixXd symmetric_from_row_major(const std::vector<double>& values,
                                         int n) {
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = values[static_cast<std::size_t>(r) * n + c];
    }
  }
  return m;
}

}  // namespace

ObservableSum gradient_observable(const ObservableSum& hamiltonian,
                                  EvolutionMode mode, double& phi_out) {
  if (hamiltonian.empty()) {
    throw std::invalid_argument("gradient observable needs a nonempty sum");
  }
  phi_out = derivative_phase_and_weight(mode, 1.0).phase;
  ObservableSum out;
  for (const auto& term : hamiltonian.terms()) {
    const PhaseWeight pw = derivative_phase_and_weight(mode, term.coeff);
    out.add(pw.weight, extend_with_x(term.word));
  }
  return out;
}

ObservableSum metric_observable(int n_system, EvolutionMode mode,
                                const ObservableSum* bb_observable) {
  ObservableSum out;
  if (mode == EvolutionMode::general) {
    if (bb_observable == nullptr || bb_observable->empty()) {
      throw std::invalid_argument(
          "general mode needs generator-pair weights for the metric");
    }
    for (const auto& term : bb_observable->terms()) {
      out.add(0.25 * term.coeff, extend_with_x(term.word));
    }
  } else {
    PauliString word(n_system + 1);
    word.set_letter(1, Letter::X);
    out.add(0.25, word);
  }
  return out;
}

EvolutionDriver::EvolutionDriver(EvolutionConfig config)
    : config_(std::move(config)), root_(config_.seed) {
  if (config_.hamiltonian.empty()) {
    throw std::invalid_argument("evolution needs a nonempty hamiltonian");
  }
  if (config_.ansatz.n_params() <= 0) {
    throw std::invalid_argument("evolution needs a parameterized ansatz");
  }
  if (config_.hamiltonian.n_qubits() != config_.ansatz.n_qubits()) {
    throw std::invalid_argument(
        "hamiltonian and ansatz act on different registers");
  }
  if (config_.dt <= 0.0 || !std::isfinite(config_.dt)) {
    throw std::invalid_argument("step size must be positive");
  }
  if (config_.steps < 0) {
    throw std::invalid_argument("step count must be nonnegative");
  }
  if (config_.svd_cutoff < 0.0 || config_.svd_cutoff >= 1.0) {
    throw std::invalid_argument("svd cutoff must lie in [0, 1)");
  }

  v_observable_ = gradient_observable(config_.hamiltonian, config_.mode, phi_);
  m_observable_ = metric_observable(
      config_.ansatz.n_qubits(), config_.mode,
      config_.mode == EvolutionMode::general ? &config_.bb_observable
                                             : nullptr);

  if (strategy_uses_shots(config_.strategy) && config_.shots_total <= 0) {
    throw std::invalid_argument(
        "sampled strategies need a positive measurement budget");
  }

  switch (config_.strategy) {
    case Strategy::derandomization:
    case Strategy::hybrid:
      shared_plan_ = build_measurements_derandomization(
          v_observable_, static_cast<int>(config_.shots_total));
      break;
    case Strategy::naive: {
      const int k_terms = static_cast<int>(v_observable_.size());
      const int per_term = static_cast<int>(config_.shots_total) / k_terms;
      if (per_term < 1) {
        throw std::invalid_argument(
            "measurement budget below one shot per term");
      }
      naive_plan_ = build_measurements_naive(v_observable_, per_term);
      break;
    }
    default:
      break;
  }

  if (config_.strategy == Strategy::hybrid) {
    if (config_.alpha < 0.0 || config_.alpha > 1.0) {
      throw std::invalid_argument("metric budget fraction must lie in (0, 1]");
    }
    hybrid_alpha_ = config_.alpha > 0.0
                        ? config_.alpha
                        : hybrid_alpha_default(v_observable_, *shared_plan_);
  }
}

AssembledMV EvolutionDriver::assemble_MV(std::span<const double> params,
                                         int step) {
  const int n_params = config_.ansatz.n_params();
  if (static_cast<int>(params.size()) != n_params) {
    throw std::invalid_argument("parameter vector length mismatch");
  }

  AssembledMV out;
  out.v.resize(n_params);

  if (config_.strategy == Strategy::exact) {
    const std::vector<double> v =
        exact_V(config_.ansatz, params, config_.mode, config_.hamiltonian);
    for (int k = 0; k < n_params; ++k) out.v(k) = v[k];
  } else {
    for (int k = 1; k <= n_params; ++k) {
      RandomSource rng = root_.derive(
          {kGradientTag, config_.trial, strategy_key(config_.strategy),
           static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(k)});
      double value = 0.0;
      switch (config_.strategy) {
        case Strategy::naive:
          value = estimate_V_entry_naive(config_.ansatz, params, k,
                                         v_observable_, phi_, *naive_plan_,
                                         rng);
          break;
        case Strategy::classical_shadow: {
          const MeasurementPlan plan = build_measurements_classical_shadow(
              config_.ansatz.n_qubits() + 1,
              static_cast<int>(config_.shots_total), rng);
          value = estimate_V_entry(config_.ansatz, params, k, v_observable_,
                                   phi_, plan, rng);
          break;
        }
        case Strategy::ldf: {
          MeasurementPlan plan = build_measurements_ldf(
              v_observable_, static_cast<int>(config_.shots_total), rng);
          int draws = 1;
          while (!covers_all_targets(plan, v_observable_)) {
            if (++draws > kMaxGroupedDraws) {
              throw PlanRejected(
                  "no grouped plan covering every term after " +
                  std::to_string(kMaxGroupedDraws) + " draws");
            }
            plan = build_measurements_ldf(
                v_observable_, static_cast<int>(config_.shots_total), rng);
          }
          value = estimate_V_entry(config_.ansatz, params, k, v_observable_,
                                   phi_, plan, rng);
          break;
        }
        case Strategy::derandomization:
        case Strategy::hybrid:
          value = estimate_V_entry(config_.ansatz, params, k, v_observable_,
                                   phi_, *shared_plan_, rng);
          break;
        default:
          break;
      }
      out.v(k - 1) = value;
    }
  }

  if (config_.strategy == Strategy::hybrid) {
    const int m_shots = static_cast<int>(
        std::ceil(hybrid_alpha_ * static_cast<double>(config_.shots_total)));
    const NaivePlan m_plan = build_measurements_naive(m_observable_, m_shots);
    out.m.resize(n_params, n_params);
    for (int k = 1; k <= n_params; ++k) {
      for (int l = k; l <= n_params; ++l) {
        RandomSource rng = root_.derive(
            {kMetricTag, config_.trial, strategy_key(config_.strategy),
             static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(k),
             static_cast<std::uint64_t>(l)});
        const double value =
            estimate_M_entry_naive(config_.ansatz, params, k, l, m_observable_,
                                   0.0, m_plan, rng);
        out.m(k - 1, l - 1) = value;
        out.m(l - 1, k - 1) = value;
      }
    }
  } else {
    const std::vector<double> m = exact_M(
        config_.ansatz, params, config_.mode,
        config_.mode == EvolutionMode::general ? &config_.bb_observable
                                               : nullptr);
    out.m = symmetric_from_row_major(m, n_params);
  }

  return out;
}

EvolutionTrace EvolutionDriver::run() {
  const int n_params = config_.ansatz.n_params();
  std::vector<double> theta = config_.theta0.empty()
                                  ? std::vector<double>(n_params, 0.0)
                                  : config_.theta0;
  if (static_cast<int>(theta.size()) != n_params) {
    throw std::invalid_argument("initial parameter vector length mismatch");
  }
  std::vector<double> theta_exact = theta;
  const bool paired = config_.pair_exact;

  EvolutionTrace trace;
  auto record = [&](int step) {
    const StateVector state = prepare_state(config_.ansatz, theta);
    StepRecord row;
    row.step = step;
    row.t = step * config_.dt;
    row.energy = expectation(state, config_.hamiltonian);
    row.d_i = paired ? infidelity(config_.ansatz, theta_exact, theta) : 0.0;
    trace.records.push_back(row);
    trace.thetas.push_back(theta);
    if (paired) trace.thetas_exact.push_back(theta_exact);
  };

  record(0);
  for (int step = 1; step <= config_.steps; ++step) {
    if (paired && config_.strategy != Strategy::exact) {
      const std::vector<double> ve = exact_V(config_.ansatz, theta_exact,
                                             config_.mode, config_.hamiltonian);
      const std::vector<double> me = exact_M(
          config_.ansatz, theta_exact, config_.mode,
          config_.mode == EvolutionMode::general ? &config_.bb_observable
                                                 : nullptr);
      Eigen::VectorXd v(n_params);
      for (int k = 0; k < n_params; ++k) v(k) = ve[k];
      const Eigen::VectorXd delta =
          solve_step(symmetric_from_row_major(me, n_params), v, config_.dt,
                     config_.svd_cutoff);
      for (int k = 0; k < n_params; ++k) theta_exact[k] += delta(k);
    }

    const AssembledMV mv = assemble_MV(theta, step);
    const Eigen::VectorXd delta =
        solve_step(mv.m, mv.v, config_.dt, config_.svd_cutoff);
    trace.ms.push_back(mv.m);
    trace.vs.push_back(mv.v);
    trace.theta_dots.push_back(delta / config_.dt);
    for (int k = 0; k < n_params; ++k) theta[k] += delta(k);
    if (paired && config_.strategy == Strategy::exact) theta_exact = theta;

    record(step);
  }
  return trace;
}

AssembledMV assemble_MV(const EvolutionConfig& config,
                        std::span<const double> params, int step) {
  EvolutionDriver driver(config);
  return driver.assemble_MV(params, step);
}

EvolutionTrace run_evolution(const EvolutionConfig& config) {
  EvolutionDriver driver(config);
  return driver.run();
}

Eigen::VectorXd solve_step(const Eigen::MatrixXd& m, const Eigen::VectorXd& v,
                           double dt, double svd_cutoff) {
  if (m.rows() != m.cols() || m.rows() != v.size()) {
    throw std::invalid_argument("metric and gradient shapes do not match");
  }
  if (dt <= 0.0 || !std::isfinite(dt)) {
    throw std::invalid_argument("step size must be positive");
  }
  if (svd_cutoff < 0.0 || svd_cutoff >= 1.0) {
    throw std::invalid_argument("svd cutoff must lie in [0, 1)");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double tol = svd_cutoff * sigma_max;

  const Eigen::VectorXd utv = svd.matrixU().transpose() * v;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  int kept = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > 0.0 && sigma(i) >= tol) {
      out += svd.matrixV().col(i) * (utv(i) / sigma(i));
      ++kept;
    }
  }
  if (kept == 0) {
    throw SingularM("metric has no singular value above the cutoff");
  }
  return out * dt;
}

double infidelity(const AnsatzSpec& spec, std::span<const double> params_a,
                  std::span<const double> params_b) {
  const StateVector va = prepare_state(spec, params_a);
  const StateVector vb = prepare_state(spec, params_b);
  const std::complex<double> overlap = inner_product(va, vb);
  // Normalize by the states' own inner products so that identical
  // parameter vectors give exactly zero instead of the rounding residue of
  // the circuit norm.
  const double norm_a = inner_product(va, va).real();
  const double norm_b = inner_product(vb, vb).real();
  const double fidelity = std::norm(overlap) / (norm_a * norm_b);
  return std::sqrt(std::max(0.0, 1.0 - fidelity));
}

double hybrid_alpha_default(const ObservableSum& v_observable,
                            const MeasurementPlan& plan) {
  double weight_sum = 0.0;
  double acc = 0.0;
  for (const auto& term : v_observable.terms()) {
    const double w = term.coeff * term.coeff;
    weight_sum += w;
    acc += w / plan.covering_q(term.word);
  }
  if (weight_sum <= 0.0) {
    throw std::invalid_argument("gradient observable has no weight");
  }
  return std::min(1.0, 4.0 * weight_sum / acc);
}

ObservableSum builtin_heisenberg() {
  ObservableSum h(6);
  constexpr Letter kAxes[3] = {Letter::X, Letter::Y, Letter::Z};
  for (int j = 1; j <= 6; ++j) {
    const int next = j % 6 + 1;
    for (const Letter axis : kAxes) {
      PauliString word(6);
      word.set_letter(j, axis);
      word.set_letter(next, axis);
      h.add(0.1, word);
    }
  }
  for (int j = 1; j <= 6; ++j) {
    PauliString word(6);
    word.set_letter(j, Letter::Z);
    h.add(0.1, word);
  }
  return h;
}

}  // namespace vqs
