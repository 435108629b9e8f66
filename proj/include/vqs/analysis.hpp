#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "vqs/ansatz.hpp"
#include "vqs/measure.hpp"
#include "vqs/pauli.hpp"
#include "vqs/random.hpp"
#include "vqs/statevec.hpp"

namespace vqs {

/// Magnitude convention for the per-term derivative weights G_r: half means
/// G_r = alpha_r / 2 (the rotation-gate generator carries -i/2), unit means
/// G_r = alpha_r. The closed-form tables in the reference results follow
/// the unit convention; estimation defaults to half.
enum class GConvention { half, unit };

/// Hamiltonian terms extended with the ancilla X and scaled per the
/// convention: the weighted words whose expectations sum to the gradient
/// entry.
ObservableSum scaled_extended_terms(const ObservableSum& hamiltonian,
                                    GConvention convention);

/// Pairwise covariance factor of the inverse-probability estimator under a
/// plan. Probabilistic plans use the letterwise closed form (3 when both
/// letters agree and are not I, 0 when they conflict, 1 otherwise);
/// deterministic plans average f*f/(q*q) over the emitted bases.
double g_factor(const PauliString& a, const PauliString& b,
                const MeasurementPlan& plan);

/// Exact variance of the plan's inverse-probability estimate of
/// sum_j a_j Tr(P_j rho) over the plan's own shot count.
double variance_shadow(const StateVector& state,
                       const ObservableSum& observable,
                       const MeasurementPlan& plan);

/// Per-single-shot variance sum of the term-by-term estimator,
/// sum_j [a_j^2 - (a_j Tr(P_j rho))^2]; divide by the per-term shot count
/// to get the estimator's variance.
double variance_naive(const StateVector& state,
                      const ObservableSum& observable);

/// State-independent surrogate of variance_shadow: (1/N) sum a^2/q with q
/// taken from the plan.
double approximation_shadow(const ObservableSum& observable,
                            const MeasurementPlan& plan);

/// Same surrogate with the analytic uniform-random-basis covering
/// probability q = 3^-locality.
double approximation_shadow_cs(const ObservableSum& observable, int n_shots);

/// State-independent surrogate of the term-by-term variance:
/// (1/n_naive) sum a^2.
double approximation_naive(const ObservableSum& observable, int n_naive);

/// Inverse covering probabilities per term, in term order.
std::vector<double> inverse_q(const ObservableSum& observable,
                              const MeasurementPlan& plan);
/// Analytic uniform-random-basis variant, 3^locality per term.
std::vector<double> inverse_q_cs(const ObservableSum& observable);

/// Average of values weighted by the squared term coefficients.
double weighted_mean(const ObservableSum& observable,
                     std::span<const double> values);

/// Weighted median: smallest value whose cumulative squared-coefficient
/// weight reaches half the total.
double weighted_median(const ObservableSum& observable,
                       std::span<const double> values);

/// Measurement-count ratio bound of the simultaneous strategy against
/// term-by-term estimation when both gradient and metric are sampled:
/// (1 + N_P N_g) / (N_BA + N_P N_g N_BB) times the squared sum of the
/// root typical inverse covering probabilities. Typical values are
/// weighted medians, matching the worked reference numbers.
double shot_ratio_bound(const ObservableSum& gv_terms,
                        std::span<const double> inv_qv,
                        const ObservableSum& gm_terms,
                        std::span<const double> inv_qm, int n_params,
                        int n_deriv, int n_bb);

/// Ratio bound for the hybrid strategy with the metric term-by-term and
/// its budget tuned away: (1/N_BA) * typical(1/q) * 9/4.
double shot_ratio_bound_hybrid(const ObservableSum& gv_terms,
                               std::span<const double> inv_qv);

/// Empirical statistics of the single-estimate variance functional over
/// uniformly random pure states, against its closed forms.
struct HaarReport {
  int n_qubits = 0;
  int samples = 0;
  /// Shadow functional sum a^2/q + cross terms.
  double mean_empirical = 0.0;
  double mean_closed = 0.0;
  double mean_stderr = 0.0;
  double var_empirical = 0.0;
  double var_closed = 0.0;
  /// Term-by-term functional sum [a^2 - (a Tr)^2].
  double naive_mean_empirical = 0.0;
  double naive_mean_closed = 0.0;
};

/// Samples normalized complex-Gaussian states on the observable's register
/// and compares the variance functionals against the closed-form averages.
/// Throws EmptySample when samples < 1.
HaarReport haar_check(const ObservableSum& observable,
                      const MeasurementPlan& plan, int samples,
                      RandomSource& rng);

/// First-order step-error magnitudes from estimator noise: each is
/// ||Minv||_F * sqrt(sum dV^2) + ||Minv||_F^2 * ||V||_2 * sqrt(sum dM^2),
/// with the hybrid combining the shadow gradient spread and the
/// term-by-term metric spread inflated by 1/sqrt(alpha).
struct DeltaQuantities {
  double naive = 0.0;
  double shadow = 0.0;
  double hybrid = 0.0;
};

DeltaQuantities delta_quantities(const Eigen::MatrixXd& m,
                                 const Eigen::VectorXd& v,
                                 std::span<const double> dv_naive,
                                 std::span<const double> dm_naive,
                                 std::span<const double> dv_shadow,
                                 std::span<const double> dm_shadow,
                                 double alpha, double svd_cutoff);

/// One row of the variance comparison table: k-averaged analytic variance
/// of the gradient estimate, its state-independent approximation, and the
/// k-averaged absolute difference.
struct VarianceRow {
  std::string params_label;
  std::string strategy;
  double variance = 0.0;
  double approximation = 0.0;
  double diff = 0.0;
};

/// Rows for the all-zero pattern plus random_patterns random parameter
/// patterns, each under the naive, classical-shadow, and derandomization
/// strategies with budget n_total per gradient entry.
std::vector<VarianceRow> variance_table(const ObservableSum& hamiltonian,
                                        const AnsatzSpec& ansatz,
                                        EvolutionMode mode, int n_total,
                                        GConvention convention,
                                        int random_patterns,
                                        RandomSource& rng);

}  // namespace vqs
