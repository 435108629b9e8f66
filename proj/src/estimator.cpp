#include "vqs/estimator.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <unordered_map>

#include "vqs/errors.hpp"

namespace vqs {

namespace {

struct PackedTerm {
  std::uint64_t code2;
  std::uint64_t support2;
  std::uint64_t support1;
  double scaled_coeff;
};

std::complex<double> phase_factor(double phi) {
  return {std::cos(phi), std::sin(phi)};
}

StateVector pauli_applied(const StateVector& state, const PauliString& word) {
  StateVector out = state;
  apply_pauli(out, word);
  return out;
}

}  // namespace

double estimate_nu(const StateVector& state, const ObservableSum& observable,
                   const MeasurementPlan& plan, RandomSource& rng) {
  if (observable.empty()) {
    throw std::invalid_argument("observable has no terms");
  }
  if (observable.n_qubits() != plan.n_qubits()) {
    throw std::invalid_argument("observable and plan register sizes differ");
  }
  std::vector<PackedTerm> packed;
  packed.reserve(observable.size());
  for (const ObservableSum::Term& t : observable.terms()) {
    const double q = plan.covering_q(t.word);
    if (q <= 0.0) {
      throw UncoveredTerm("term " + t.word.str() +
                          " has covering probability zero");
    }
    packed.push_back(PackedTerm{t.word.code(), t.word.support_mask2(),
                                t.word.support_mask(), t.coeff / q});
  }

  // Shots sharing a basis reuse one rotated copy of the state; the order of
  // draws is fixed by first appearance, so results depend only on the rng
  // stream and the plan.
  std::vector<std::pair<PauliString, int>> batches;
  std::unordered_map<PauliString, std::size_t, PauliStringHash> batch_index;
  for (const PauliString& basis : plan.bases()) {
    const auto [it, inserted] =
        batch_index.try_emplace(basis, batches.size());
    if (inserted) {
      batches.emplace_back(basis, 1);
    } else {
      batches[it->second].second += 1;
    }
  }

  double total = 0.0;
  for (const auto& [basis, count] : batches) {
    const std::uint64_t basis_code = basis.code();
    const std::vector<MeasurementOutcome> outcomes =
        sample_in_basis(state, basis, rng, count);
    // Only terms this basis covers can contribute; select them once.
    std::vector<const PackedTerm*> active;
    for (const PackedTerm& t : packed) {
      if ((t.code2 & t.support2) == (basis_code & t.support2)) {
        active.push_back(&t);
      }
    }
    for (const MeasurementOutcome& outcome : outcomes) {
      double nu_shot = 0.0;
      for (const PackedTerm* t : active) {
        const int parity =
            std::popcount(outcome.minus_mask & t->support1) & 1;
        nu_shot += parity ? -t->scaled_coeff : t->scaled_coeff;
      }
      total += nu_shot;
    }
  }
  return total / plan.n_shots();
}

double estimate_nu_naive(const StateVector& state,
                         const ObservableSum& observable,
                         const NaivePlan& plan, RandomSource& rng) {
  if (observable.size() != plan.bases.size()) {
    throw std::invalid_argument("plan does not match the observable's terms");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < observable.size(); ++j) {
    const ObservableSum::Term& t = observable.terms()[j];
    const int shots = plan.shots[j];
    if (shots < 1) {
      throw std::invalid_argument("term " + t.word.str() + " has no shots");
    }
    const std::vector<MeasurementOutcome> outcomes =
        sample_in_basis(state, plan.bases[j], rng, shots);
    long sum = 0;
    for (const MeasurementOutcome& outcome : outcomes) {
      sum += estimate_mu(t.word, outcome);
    }
    total += t.coeff * static_cast<double>(sum) / shots;
  }
  return total;
}

double estimate_V_entry(const AnsatzSpec& spec, std::span<const double> params,
                        int k, const ObservableSum& v_observable, double phi,
                        const MeasurementPlan& plan, RandomSource& rng) {
  const StateVector state = prepare_v_state(spec, params, k, phi);
  return estimate_nu(state, v_observable, plan, rng);
}

double estimate_V_entry_naive(const AnsatzSpec& spec,
                              std::span<const double> params, int k,
                              const ObservableSum& v_observable, double phi,
                              const NaivePlan& plan, RandomSource& rng) {
  const StateVector state = prepare_v_state(spec, params, k, phi);
  return estimate_nu_naive(state, v_observable, plan, rng);
}

double estimate_M_entry(const AnsatzSpec& spec, std::span<const double> params,
                        int k, int l, const ObservableSum& m_observable,
                        double phi, const MeasurementPlan& plan,
                        RandomSource& rng) {
  const StateVector state = prepare_m_state(spec, params, k, l, phi);
  return estimate_nu(state, m_observable, plan, rng);
}

double estimate_M_entry_naive(const AnsatzSpec& spec,
                              std::span<const double> params, int k, int l,
                              const ObservableSum& m_observable, double phi,
                              const NaivePlan& plan, RandomSource& rng) {
  const StateVector state = prepare_m_state(spec, params, k, l, phi);
  return estimate_nu_naive(state, m_observable, plan, rng);
}

double exact_V_entry(const AnsatzSpec& spec, std::span<const double> params,
                     int k, EvolutionMode mode,
                     const ObservableSum& hamiltonian) {
  const StateVector psi = prepare_state(spec, params);
  const StateVector dk = prepare_derivative_state(spec, params, k);
  double v = 0.0;
  for (const ObservableSum::Term& t : hamiltonian.terms()) {
    const PhaseWeight pw = derivative_phase_and_weight(mode, t.coeff);
    const std::complex<double> overlap =
        inner_product(dk, pauli_applied(psi, t.word));
    v += pw.weight * (phase_factor(pw.phase) * overlap).real();
  }
  return v;
}

std::vector<double> exact_V(const AnsatzSpec& spec,
                            std::span<const double> params, EvolutionMode mode,
                            const ObservableSum& hamiltonian) {
  const int n_p = spec.n_params();
  const StateVector psi = prepare_state(spec, params);
  std::vector<StateVector> derivatives;
  derivatives.reserve(static_cast<std::size_t>(n_p));
  for (int k = 1; k <= n_p; ++k) {
    derivatives.push_back(prepare_derivative_state(spec, params, k));
  }
  std::vector<double> v(static_cast<std::size_t>(n_p), 0.0);
  for (const ObservableSum::Term& t : hamiltonian.terms()) {
    const PhaseWeight pw = derivative_phase_and_weight(mode, t.coeff);
    const std::complex<double> phase = phase_factor(pw.phase);
    const StateVector rotated = pauli_applied(psi, t.word);
    for (int k = 0; k < n_p; ++k) {
      const std::complex<double> overlap =
          inner_product(derivatives[static_cast<std::size_t>(k)], rotated);
      v[static_cast<std::size_t>(k)] += pw.weight * (phase * overlap).real();
    }
  }
  return v;
}

double exact_M_entry(const AnsatzSpec& spec, std::span<const double> params,
                     int k, int l, EvolutionMode mode,
                     const ObservableSum* bb_observable) {
  const StateVector dk = prepare_derivative_state(spec, params, k);
  const StateVector dl = prepare_derivative_state(spec, params, l);
  if (mode != EvolutionMode::general) {
    return 0.25 * inner_product(dk, dl).real();
  }
  if (bb_observable == nullptr) {
    throw std::invalid_argument(
        "general mode needs the generator-pair observable");
  }
  double m = 0.0;
  for (const ObservableSum::Term& t : bb_observable->terms()) {
    m += 0.25 * t.coeff * inner_product(dk, pauli_applied(dl, t.word)).real();
  }
  return m;
}

std::vector<double> exact_M(const AnsatzSpec& spec,
                            std::span<const double> params, EvolutionMode mode,
                            const ObservableSum* bb_observable) {
  const int n_p = spec.n_params();
  std::vector<StateVector> derivatives;
  derivatives.reserve(static_cast<std::size_t>(n_p));
  for (int k = 1; k <= n_p; ++k) {
    derivatives.push_back(prepare_derivative_state(spec, params, k));
  }
  std::vector<double> m(static_cast<std::size_t>(n_p) *
                            static_cast<std::size_t>(n_p),
                        0.0);
  auto at = [&](int a, int b) -> double& {
    return m[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_p) +
             static_cast<std::size_t>(b)];
  };
  for (int a = 0; a < n_p; ++a) {
    for (int b = a; b < n_p; ++b) {
      double entry = 0.0;
      if (mode != EvolutionMode::general) {
        entry = 0.25 * inner_product(derivatives[static_cast<std::size_t>(a)],
                                     derivatives[static_cast<std::size_t>(b)])
                           .real();
      } else {
        if (bb_observable == nullptr) {
          throw std::invalid_argument(
              "general mode needs the generator-pair observable");
        }
        for (const ObservableSum::Term& t : bb_observable->terms()) {
          entry += 0.25 * t.coeff *
                   inner_product(
                       derivatives[static_cast<std::size_t>(a)],
                       pauli_applied(
                           derivatives[static_cast<std::size_t>(b)], t.word))
                       .real();
        }
      }
      at(a, b) = entry;
      at(b, a) = entry;
    }
  }
  return m;
}

}  // namespace vqs
