#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vqs/ansatz.hpp"
#include "vqs/estimator.hpp"
#include "vqs/measure.hpp"
#include "vqs/pauli.hpp"
#include "vqs/random.hpp"

namespace vqs {

/// How the gradient vector is obtained each step. The metric is computed
/// exactly for every strategy except hybrid, which samples it term-by-term
/// with a reduced budget.
enum class Strategy {
  exact,
  naive,
  classical_shadow,
  derandomization,
  ldf,
  hybrid,
};

struct EvolutionConfig {
  ObservableSum hamiltonian;
  EvolutionMode mode = EvolutionMode::ite;
  Strategy strategy = Strategy::exact;
  AnsatzSpec ansatz;
  /// Initial parameters; empty means all zero.
  std::vector<double> theta0;
  double dt = 0.01;
  int steps = 5;
  /// Measurement budget per gradient entry per step; unused when exact.
  long shots_total = 0;
  double svd_cutoff = 1e-6;
  /// Metric budget fraction for the hybrid strategy; 0 picks the default
  /// derived from the gradient plan.
  double alpha = 0.0;
  std::uint64_t seed = 1;
  std::uint64_t trial = 0;
  /// Track the exactly evolved trajectory alongside and record the distance
  /// to it.
  bool pair_exact = true;
  /// Generator-pair weights for general mode; ignored for rte/ite.
  ObservableSum bb_observable;
};

struct StepRecord {
  int step;
  double t;
  double energy;
  double d_i;
};

struct EvolutionTrace {
  std::vector<StepRecord> records;
  /// Parameters per record for this trace's trajectory.
  std::vector<std::vector<double>> thetas;
  /// Exactly evolved parameters per record; empty when not paired.
  std::vector<std::vector<double>> thetas_exact;
  /// Estimated metric, gradient, and parameter velocity per evolution step
  /// (one entry per step, none for the initial record).
  std::vector<Eigen::MatrixXd> ms;
  std::vector<Eigen::VectorXd> vs;
  std::vector<Eigen::VectorXd> theta_dots;
};

struct AssembledMV {
  Eigen::MatrixXd m;
  Eigen::VectorXd v;
};

/// Ancilla-extended gradient observable: each Hamiltonian term contributes
/// its derivative weight on the X-extended word. phi_out receives the
/// shared derivative phase for the mode.
ObservableSum gradient_observable(const ObservableSum& hamiltonian,
                                  EvolutionMode mode, double& phi_out);

/// Ancilla-extended metric observable: a single X-on-ancilla word with
/// weight 1/4 for rte/ite, or the generator-pair terms scaled by 1/4.
ObservableSum metric_observable(int n_system, EvolutionMode mode,
                                const ObservableSum* bb_observable = nullptr);

/// Runs one configuration; caches the per-run measurement plans. A grouped
/// plan that leaves any gradient term with zero covering probability is
/// redrawn (bounded), since estimation needs q > 0 for every term.
class EvolutionDriver {
 public:
  explicit EvolutionDriver(EvolutionConfig config);

  /// Metric and gradient at the given parameters, per the configured
  /// strategy. step keys the shot streams.
  AssembledMV assemble_MV(std::span<const double> params, int step);

  EvolutionTrace run();

  const EvolutionConfig& config() const { return config_; }

 private:
  EvolutionConfig config_;
  ObservableSum v_observable_;
  ObservableSum m_observable_;
  double phi_ = 0.0;
  std::optional<MeasurementPlan> shared_plan_;
  std::optional<NaivePlan> naive_plan_;
  double hybrid_alpha_ = 0.0;
  RandomSource root_;
};

AssembledMV assemble_MV(const EvolutionConfig& config,
                        std::span<const double> params, int step);

EvolutionTrace run_evolution(const EvolutionConfig& config);

/// Parameter update dtheta = thetadot * dt with thetadot from the
/// truncated-SVD pseudo-inverse of the metric. Singular values below cutoff
/// times the largest are dropped; throws SingularM when nothing remains.
Eigen::VectorXd solve_step(const Eigen::MatrixXd& m, const Eigen::VectorXd& v,
                           double dt, double svd_cutoff);

/// sqrt(1 - |<v(a)|v(b)>|^2) between the normalized circuit states of two
/// parameter vectors of one ansatz; equal vectors give exactly zero.
double infidelity(const AnsatzSpec& spec, std::span<const double> params_a,
                  std::span<const double> params_b);

/// Default metric budget fraction 4 / <1/q>, clamped into (0, 1], with the
/// average weighted by squared gradient weights.
double hybrid_alpha_default(const ObservableSum& v_observable,
                            const MeasurementPlan& plan);

/// Periodic six-site spin chain with uniform exchange and field weights.
ObservableSum builtin_heisenberg();

}  // namespace vqs
