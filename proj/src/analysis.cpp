#include "vqs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "vqs/errors.hpp"

namespace vqs {
namespace {

double pow3(int exponent) {
  double value = 1.0;
  for (int i = 0; i < exponent; ++i) value *= 3.0;
  return value;
}

double squared_l2(std::span<const double> values) {
  double acc = 0.0;
  for (const double v : values) acc += v * v;
  return acc;
}

// Cross contribution of an ordered term pair (j, l), j != l, folded with its
// mirror: nonzero only when the word product carries a real phase, because
// term expectations are real and the mirrored pair conjugates the phase.
struct CrossTerm {
  double weight;
  PauliString word;
};

// Precomputed ingredients of the exact estimator variance for one plan, so
// evaluating many states against the same plan stays cheap.
struct VarianceModel {
  double diagonal = 0.0;
  std::vector<CrossTerm> cross;
  int n_shots = 0;
};

VarianceModel build_variance_model(const ObservableSum& observable,
                                   const MeasurementPlan& plan) {
  if (observable.empty()) {
    throw std::invalid_argument("variance needs a nonempty observable");
  }
  if (observable.n_qubits() != plan.n_qubits()) {
    throw std::invalid_argument(
        "observable and plan act on different registers");
  }
  const auto& terms = observable.terms();
  VarianceModel model;
  model.n_shots = plan.n_shots();
  for (const auto& term : terms) {
    model.diagonal += term.coeff * term.coeff / plan.covering_q(term.word);
  }
  for (std::size_t j = 0; j < terms.size(); ++j) {
    for (std::size_t l = j + 1; l < terms.size(); ++l) {
      const double g = g_factor(terms[j].word, terms[l].word, plan);
      if (g == 0.0) continue;
      const PhasedPauli product = multiply(terms[j].word, terms[l].word);
      if (product.phase_quarter % 2 != 0) continue;
      const double sign = product.phase_quarter == 0 ? 1.0 : -1.0;
      model.cross.push_back(
          {2.0 * terms[j].coeff * terms[l].coeff * g * sign, product.word});
    }
  }
  return model;
}

double eval_variance(const VarianceModel& model,
                     const ObservableSum& observable,
                     const StateVector& state) {
  double acc = model.diagonal;
  for (const auto& cross : model.cross) {
    acc += cross.weight * expectation(state, cross.word);
  }
  const double mean = expectation(state, observable);
  return (acc - mean * mean) / model.n_shots;
}

// Real part of the trace of a phased-word product against a second one, as
// a multiple of the full trace 2^n; zero unless the words multiply to the
// identity with a real accumulated phase.
double real_identity_weight(const PhasedPauli& a, const PhasedPauli& b) {
  const PhasedPauli product = multiply(a.word, b.word);
  if (!product.word.is_identity()) return 0.0;
  const int quarter =
      (a.phase_quarter + b.phase_quarter + product.phase_quarter) % 4;
  if (quarter % 2 != 0) return 0.0;
  return quarter == 0 ? 1.0 : -1.0;
}

}  // namespace

ObservableSum scaled_extended_terms(const ObservableSum& hamiltonian,
                                    GConvention convention) {
  const double scale = convention == GConvention::half ? 0.5 : 1.0;
  ObservableSum out;
  for (const auto& term : hamiltonian.terms()) {
    out.add(scale * term.coeff, extend_with_x(term.word));
  }
  return out;
}

double g_factor(const PauliString& a, const PauliString& b,
                const MeasurementPlan& plan) {
  if (a.n_qubits() != b.n_qubits() || a.n_qubits() != plan.n_qubits()) {
    throw std::invalid_argument("g factor needs words on the plan register");
  }
  if (plan.kind() == PlanKind::probabilistic) {
    double g = 1.0;
    for (int i = 1; i <= a.n_qubits(); ++i) {
      const Letter la = a.letter(i);
      const Letter lb = b.letter(i);
      if (la == Letter::I || lb == Letter::I) continue;
      if (la != lb) return 0.0;
      g *= 3.0;
    }
    return g;
  }
  const double qa = plan.covering_q(a);
  const double qb = plan.covering_q(b);
  double acc = 0.0;
  for (const auto& basis : plan.bases()) {
    acc += covering_f(a, basis) * covering_f(b, basis);
  }
  return acc / (static_cast<double>(plan.n_shots()) * qa * qb);
}

double variance_shadow(const StateVector& state,
                       const ObservableSum& observable,
                       const MeasurementPlan& plan) {
  if (state.n_qubits() != observable.n_qubits()) {
    throw std::invalid_argument(
        "state and observable act on different registers");
  }
  const VarianceModel model = build_variance_model(observable, plan);
  return eval_variance(model, observable, state);
}

double variance_naive(const StateVector& state,
                      const ObservableSum& observable) {
  if (state.n_qubits() != observable.n_qubits()) {
    throw std::invalid_argument(
        "state and observable act on different registers");
  }
  double acc = 0.0;
  for (const auto& term : observable.terms()) {
    const double mean = term.coeff * expectation(state, term.word);
    acc += term.coeff * term.coeff - mean * mean;
  }
  return acc;
}

double approximation_shadow(const ObservableSum& observable,
                            const MeasurementPlan& plan) {
  if (plan.n_shots() < 1) {
    throw std::invalid_argument("approximation needs a nonempty plan");
  }
  double acc = 0.0;
  for (const auto& term : observable.terms()) {
    acc += term.coeff * term.coeff / plan.covering_q(term.word);
  }
  return acc / plan.n_shots();
}

double approximation_shadow_cs(const ObservableSum& observable, int n_shots) {
  if (n_shots < 1) {
    throw std::invalid_argument("approximation needs a positive shot count");
  }
  double acc = 0.0;
  for (const auto& term : observable.terms()) {
    acc += term.coeff * term.coeff * pow3(term.word.locality());
  }
  return acc / n_shots;
}

double approximation_naive(const ObservableSum& observable, int n_naive) {
  if (n_naive < 1) {
    throw std::invalid_argument("approximation needs a positive shot count");
  }
  double acc = 0.0;
  for (const auto& term : observable.terms()) {
    acc += term.coeff * term.coeff;
  }
  return acc / n_naive;
}

std::vector<double> inverse_q(const ObservableSum& observable,
                              const MeasurementPlan& plan) {
  std::vector<double> out;
  out.reserve(observable.size());
  for (const auto& term : observable.terms()) {
    out.push_back(1.0 / plan.covering_q(term.word));
  }
  return out;
}

std::vector<double> inverse_q_cs(const ObservableSum& observable) {
  std::vector<double> out;
  out.reserve(observable.size());
  for (const auto& term : observable.terms()) {
    out.push_back(pow3(term.word.locality()));
  }
  return out;
}

double weighted_mean(const ObservableSum& observable,
                     std::span<const double> values) {
  if (values.size() != observable.size() || observable.empty()) {
    throw std::invalid_argument("one value per observable term required");
  }
  double weight_sum = 0.0;
  double acc = 0.0;
  const auto& terms = observable.terms();
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const double w = terms[j].coeff * terms[j].coeff;
    weight_sum += w;
    acc += w * values[j];
  }
  return acc / weight_sum;
}

double weighted_median(const ObservableSum& observable,
                       std::span<const double> values) {
  if (values.size() != observable.size() || observable.empty()) {
    throw std::invalid_argument("one value per observable term required");
  }
  const auto& terms = observable.terms();
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  double weight_sum = 0.0;
  for (const auto& term : terms) weight_sum += term.coeff * term.coeff;
  double cumulative = 0.0;
  for (const std::size_t j : order) {
    cumulative += terms[j].coeff * terms[j].coeff;
    if (cumulative >= 0.5 * weight_sum) return values[j];
  }
  return values[order.back()];
}

double shot_ratio_bound(const ObservableSum& gv_terms,
                        std::span<const double> inv_qv,
                        const ObservableSum& gm_terms,
                        std::span<const double> inv_qm, int n_params,
                        int n_deriv, int n_bb) {
  if (n_params < 1 || n_deriv < 1 || n_bb < 1) {
    throw std::invalid_argument("ratio bound needs positive counts");
  }
  const double typical_v = weighted_median(gv_terms, inv_qv);
  const double typical_m = weighted_median(gm_terms, inv_qm);
  const double n_ba = static_cast<double>(gv_terms.size());
  const double pg = static_cast<double>(n_params) * n_deriv;
  const double root_sum = std::sqrt(typical_v) + std::sqrt(typical_m);
  return (1.0 + pg) / (n_ba + pg * n_bb) * root_sum * root_sum;
}

double shot_ratio_bound_hybrid(const ObservableSum& gv_terms,
                               std::span<const double> inv_qv) {
  const double typical_v = weighted_median(gv_terms, inv_qv);
  return typical_v * 9.0 / (4.0 * static_cast<double>(gv_terms.size()));
}

HaarReport haar_check(const ObservableSum& observable,
                      const MeasurementPlan& plan, int samples,
                      RandomSource& rng) {
  if (samples < 1) {
    throw EmptySample("at least one sample is required");
  }
  if (observable.empty()) {
    throw std::invalid_argument("haar check needs a nonempty observable");
  }
  const int nq = observable.n_qubits();
  const double dim = std::ldexp(1.0, nq);
  const auto& terms = observable.terms();
  const std::vector<double> inv_q = inverse_q(observable, plan);

  HaarReport report;
  report.n_qubits = nq;
  report.samples = samples;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    report.mean_closed += terms[j].coeff * terms[j].coeff * inv_q[j];
    report.naive_mean_closed +=
        terms[j].coeff * terms[j].coeff * (1.0 - 1.0 / (dim + 1.0));
  }

  // Ordered pairs with their phased products: the closed-form variance sums
  // all of them, the per-state evaluation folds each with its mirror.
  struct Pair {
    double c;
    PhasedPauli product;
  };
  std::vector<Pair> pairs;
  std::vector<CrossTerm> folded;
  for (std::size_t r = 0; r < terms.size(); ++r) {
    for (std::size_t s = 0; s < terms.size(); ++s) {
      if (r == s) continue;
      const double g = g_factor(terms[r].word, terms[s].word, plan);
      if (g == 0.0) continue;
      const double c = terms[r].coeff * terms[s].coeff * g;
      pairs.push_back({c, multiply(terms[r].word, terms[s].word)});
      if (s > r) {
        const PhasedPauli& product = pairs.back().product;
        if (product.phase_quarter % 2 == 0) {
          const double sign = product.phase_quarter == 0 ? 1.0 : -1.0;
          folded.push_back({2.0 * c * sign, product.word});
        }
      }
    }
  }

  double quad = 0.0;
  for (const auto& a : pairs) {
    for (const auto& b : pairs) {
      const double w = real_identity_weight(a.product, b.product);
      if (w != 0.0) quad += a.c * b.c * w;
    }
  }
  report.var_closed = quad * dim / (dim * (dim + 1.0));

  double sum = 0.0;
  double sum_sq = 0.0;
  double naive_sum = 0.0;
  for (int s = 0; s < samples; ++s) {
    const StateVector state = haar_random_state(nq, rng);
    double value = report.mean_closed;
    for (const auto& cross : folded) {
      value += cross.weight * expectation(state, cross.word);
    }
    sum += value;
    sum_sq += value * value;
    double naive_value = 0.0;
    for (const auto& term : terms) {
      const double mean = term.coeff * expectation(state, term.word);
      naive_value += term.coeff * term.coeff - mean * mean;
    }
    naive_sum += naive_value;
  }
  report.mean_empirical = sum / samples;
  report.naive_mean_empirical = naive_sum / samples;
  if (samples > 1) {
    report.var_empirical =
        std::max(0.0, (sum_sq - samples * report.mean_empirical *
                                    report.mean_empirical) /
                          (samples - 1));
  }
  report.mean_stderr = std::sqrt(report.var_empirical / samples);
  return report;
}

DeltaQuantities delta_quantities(const Eigen::MatrixXd& m,
                                 const Eigen::VectorXd& v,
                                 std::span<const double> dv_naive,
                                 std::span<const double> dm_naive,
                                 std::span<const double> dv_shadow,
                                 std::span<const double> dm_shadow,
                                 double alpha, double svd_cutoff) {
  const std::size_t n = static_cast<std::size_t>(v.size());
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != n) {
    throw std::invalid_argument("metric and gradient shapes do not match");
  }
  if (dv_naive.size() != n || dv_shadow.size() != n ||
      dm_naive.size() != n * n || dm_shadow.size() != n * n) {
    throw std::invalid_argument("spread lists must cover every entry");
  }
  if (alpha <= 0.0 || alpha > 1.0) {
    throw std::invalid_argument("metric budget fraction must lie in (0, 1]");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double tol = svd_cutoff * sigma_max;
  double inv_fro_sq = 0.0;
  int kept = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > 0.0 && sigma(i) >= tol) {
      inv_fro_sq += 1.0 / (sigma(i) * sigma(i));
      ++kept;
    }
  }
  if (kept == 0) {
    throw SingularM("metric has no singular value above the cutoff");
  }
  const double inv_fro = std::sqrt(inv_fro_sq);
  const double v_norm = v.norm();
  const auto combine = [&](std::span<const double> dv,
                           std::span<const double> dm, double m_scale) {
    return inv_fro * std::sqrt(squared_l2(dv)) +
           inv_fro_sq * v_norm * std::sqrt(squared_l2(dm) * m_scale);
  };
  DeltaQuantities out;
  out.naive = combine(dv_naive, dm_naive, 1.0);
  out.shadow = combine(dv_shadow, dm_shadow, 1.0);
  out.hybrid = combine(dv_shadow, dm_naive, 1.0 / alpha);
  return out;
}

std::vector<VarianceRow> variance_table(const ObservableSum& hamiltonian,
                                        const AnsatzSpec& ansatz,
                                        EvolutionMode mode, int n_total,
                                        GConvention convention,
                                        int random_patterns,
                                        RandomSource& rng) {
  if (hamiltonian.n_qubits() != ansatz.n_qubits()) {
    throw std::invalid_argument(
        "hamiltonian and ansatz act on different registers");
  }
  if (random_patterns < 0) {
    throw std::invalid_argument("pattern count must be nonnegative");
  }
  const ObservableSum extended = scaled_extended_terms(hamiltonian, convention);
  const int n_ba = static_cast<int>(extended.size());
  const int n_naive = n_total / n_ba;
  if (n_naive < 1) {
    throw std::invalid_argument("measurement budget below one shot per term");
  }
  const double phi = derivative_phase_and_weight(mode, 1.0).phase;
  const int n_params = ansatz.n_params();

  RandomSource cs_rng = rng.derive({1});
  const MeasurementPlan cs_plan = build_measurements_classical_shadow(
      extended.n_qubits(), n_total, cs_rng);
  const MeasurementPlan dr_plan =
      build_measurements_derandomization(extended, n_total);
  const VarianceModel cs_model = build_variance_model(extended, cs_plan);
  const VarianceModel dr_model = build_variance_model(extended, dr_plan);

  const double naive_approx = approximation_naive(extended, n_naive);
  const double cs_approx = approximation_shadow_cs(extended, n_total);
  const double dr_approx = approximation_shadow(extended, dr_plan);

  std::vector<VarianceRow> rows;
  const auto add_pattern = [&](const std::string& label,
                               const std::vector<double>& params) {
    double naive_var = 0.0, cs_var = 0.0, dr_var = 0.0;
    double naive_diff = 0.0, cs_diff = 0.0, dr_diff = 0.0;
    for (int k = 1; k <= n_params; ++k) {
      const StateVector state = prepare_v_state(ansatz, params, k, phi);
      const double vn = variance_naive(state, extended) / n_naive;
      const double vc = eval_variance(cs_model, extended, state);
      const double vd = eval_variance(dr_model, extended, state);
      naive_var += vn;
      cs_var += vc;
      dr_var += vd;
      naive_diff += std::abs(vn - naive_approx);
      cs_diff += std::abs(vc - cs_approx);
      dr_diff += std::abs(vd - dr_approx);
    }
    rows.push_back({label, "naive", naive_var / n_params, naive_approx,
                    naive_diff / n_params});
    rows.push_back(
        {label, "classical shadow", cs_var / n_params, cs_approx,
         cs_diff / n_params});
    rows.push_back({label, "derandomization", dr_var / n_params, dr_approx,
                    dr_diff / n_params});
  };

  add_pattern("all zero", std::vector<double>(n_params, 0.0));
  for (int p = 1; p <= random_patterns; ++p) {
    std::vector<double> params(n_params);
    for (double& value : params) {
      value = rng.next_double() * 2.0 * std::numbers::pi;
    }
    add_pattern("random (pattern" + std::to_string(p) + ")", params);
  }
  return rows;
}

}  // namespace vqs
