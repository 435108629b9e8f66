#pragma once

#include <span>
#include <vector>

#include "vqs/ansatz.hpp"
#include "vqs/measure.hpp"
#include "vqs/pauli.hpp"
#include "vqs/random.hpp"
#include "vqs/statevec.hpp"

namespace vqs {

/// Inverse-probability shot estimate of sum_j a_j Tr(P_j rho): every shot
/// contributes sum over the terms its basis covers of a_j mu_j / q_j, and
/// the estimate is the mean over all shots (uncovering shots count as
/// zero). Throws UncoveredTerm when some term has covering probability
/// zero under the plan.
double estimate_nu(const StateVector& state, const ObservableSum& observable,
                   const MeasurementPlan& plan, RandomSource& rng);

/// Term-by-term estimate: each term is measured in its own covering basis
/// and averaged directly, no covering probabilities involved.
double estimate_nu_naive(const StateVector& state,
                         const ObservableSum& observable,
                         const NaivePlan& plan, RandomSource& rng);

/// Gradient entry k from fresh shots on the parameter's Hadamard-test
/// state. The observable carries the ancilla-extended words with their
/// derivative weights; phi is the shared derivative phase.
double estimate_V_entry(const AnsatzSpec& spec, std::span<const double> params,
                        int k, const ObservableSum& v_observable, double phi,
                        const MeasurementPlan& plan, RandomSource& rng);

double estimate_V_entry_naive(const AnsatzSpec& spec,
                              std::span<const double> params, int k,
                              const ObservableSum& v_observable, double phi,
                              const NaivePlan& plan, RandomSource& rng);

/// Metric entry (k, l) with k <= l from fresh shots on the pair state.
double estimate_M_entry(const AnsatzSpec& spec, std::span<const double> params,
                        int k, int l, const ObservableSum& m_observable,
                        double phi, const MeasurementPlan& plan,
                        RandomSource& rng);

double estimate_M_entry_naive(const AnsatzSpec& spec,
                              std::span<const double> params, int k, int l,
                              const ObservableSum& m_observable, double phi,
                              const NaivePlan& plan, RandomSource& rng);

/// Exact gradient entry via state-vector inner products.
double exact_V_entry(const AnsatzSpec& spec, std::span<const double> params,
                     int k, EvolutionMode mode,
                     const ObservableSum& hamiltonian);

/// All gradient entries at once, reusing the derivative states.
std::vector<double> exact_V(const AnsatzSpec& spec,
                            std::span<const double> params, EvolutionMode mode,
                            const ObservableSum& hamiltonian);

/// Exact metric entry. bb_observable supplies the generator-pair weights in
/// general mode and is ignored for rte/ite, where the metric reduces to a
/// quarter of the derivative-state overlap.
double exact_M_entry(const AnsatzSpec& spec, std::span<const double> params,
                     int k, int l, EvolutionMode mode,
                     const ObservableSum* bb_observable = nullptr);

/// Full symmetric metric, row-major n_params x n_params.
std::vector<double> exact_M(const AnsatzSpec& spec,
                            std::span<const double> params, EvolutionMode mode,
                            const ObservableSum* bb_observable = nullptr);

}  // namespace vqs
