#pragma once

#include <unordered_map>
#include <vector>

#include "vqs/pauli.hpp"
#include "vqs/random.hpp"
#include "vqs/statevec.hpp"

namespace vqs {

/// Whether a plan's covering probabilities are analytic (random bases drawn
/// from a known distribution) or empirical fractions over the stored bases.
enum class PlanKind { probabilistic, deterministic };

/// Knobs of the greedy derandomized allocation.
struct DerandomizationParams {
  /// Confidence-bound sharpness in the per-cover reward exp(-eta/2).
  double eta = 0.9;
  /// Scale of the pessimistic future-coverage weight.
  double gamma = 1.0;
};

/// A measurement allocation: one product basis per shot, plus the covering
/// probability q for every target term the plan was built against.
class MeasurementPlan {
 public:
  /// Plan over explicitly drawn random bases; q is 3^-locality per target.
  static MeasurementPlan probabilistic(std::vector<PauliString> bases);

  /// Plan over fixed bases; q is the exact fraction of bases covering each
  /// target term.
  static MeasurementPlan deterministic(std::vector<PauliString> bases,
                                       const ObservableSum& targets);

  PlanKind kind() const { return kind_; }
  const std::vector<PauliString>& bases() const { return bases_; }
  int n_shots() const { return static_cast<int>(bases_.size()); }
  int n_qubits() const { return n_; }

  /// Covering probability of a target term. For a deterministic plan the
  /// term must be one the plan was built against; asking for any other term
  /// throws UncoveredTerm rather than guessing.
  double covering_q(const PauliString& target) const;

 private:
  PlanKind kind_ = PlanKind::probabilistic;
  int n_ = 0;
  std::vector<PauliString> bases_;
  std::unordered_map<PauliString, double, PauliStringHash> q_;
};

/// 1 when the basis measures the target term: at every non-identity
/// position of the target the basis letter matches.
int covering_f(const PauliString& target, const PauliString& basis);

/// Product of outcome signs over the target's support, +1 for identity.
int estimate_mu(const PauliString& target, const MeasurementOutcome& outcome);

/// The target's own basis with identity positions filled with Z.
PauliString covering_basis(const PauliString& target);

/// Independent uniform letters from {X, Y, Z} on every qubit of every shot.
MeasurementPlan build_measurements_classical_shadow(int n_qubits, int n_shots,
                                                    RandomSource& rng);

/// Greedy letter-by-letter allocation minimizing a weighted
/// confidence-bound score over the target terms; deterministic given the
/// inputs, ties broken X before Y before Z. Throws PlanRejected if some
/// target ends uncovered.
MeasurementPlan build_measurements_derandomization(
    const ObservableSum& targets, int n_shots,
    const DerandomizationParams& params = {});

/// Grouping of targets into qubitwise-commuting classes by largest-degree-
/// first greedy coloring of the incompatibility graph.
struct LdfGrouping {
  /// Term indices per group.
  std::vector<std::vector<int>> members;
  /// Letterwise union of each group, identity positions filled with Z.
  std::vector<PauliString> bases;
  /// Sampling weight per group: sqrt of the summed squared coefficients.
  std::vector<double> weights;
};

LdfGrouping ldf_grouping(const ObservableSum& targets);

/// Per-shot random group basis drawn with probability proportional to the
/// group weight.
MeasurementPlan build_measurements_ldf(const ObservableSum& targets,
                                       int n_shots, RandomSource& rng);

/// Term-by-term allocation: every target is measured in its own covering
/// basis; the estimator averages each term's shots directly, no q involved.
struct NaivePlan {
  std::vector<PauliString> bases;
  std::vector<int> shots;
};

NaivePlan build_measurements_naive(const ObservableSum& targets, int n_naive);

}  // namespace vqs
