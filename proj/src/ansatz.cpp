#include "vqs/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vqs {

namespace {

/// Applies rotations [k_begin, k_end) in circuit order, including the CZ
/// block of every layer whose last rotation falls in the range. System
/// qubit j of the circuit lives at register position j + offset.
void apply_rotation_range(StateVector& state, const AnsatzSpec& spec,
                          std::span<const double> params, int offset,
                          int k_begin, int k_end) {
  for (int k = k_begin; k < k_end; ++k) {
    const RotationGate g = spec.gate(k);
    apply_rotation(state, g.qubit + offset, g.axis,
                   params[static_cast<std::size_t>(k - 1)]);
    if (k % spec.n_qubits() == 0) {
      for (const EntanglerPair& pair :
           spec.entanglers(k / spec.n_qubits())) {
        apply_cz(state, pair.a + offset, pair.b + offset);
      }
    }
  }
}

void check_params(const AnsatzSpec& spec, std::span<const double> params) {
  if (static_cast<int>(params.size()) != spec.n_params()) {
    throw std::invalid_argument("parameter count differs from ansatz");
  }
}

void check_param_index(const AnsatzSpec& spec, int k) {
  if (k < 1 || k > spec.n_params()) {
    throw std::out_of_range("parameter index out of range");
  }
}

PauliString shifted_word(const PauliString& word, int total_qubits) {
  PauliString out(total_qubits);
  for (int q = 1; q <= word.n_qubits(); ++q) {
    out.set_letter(q + total_qubits - word.n_qubits(), word.letter(q));
  }
  return out;
}

}  // namespace

PhaseWeight derivative_phase_and_weight(EvolutionMode mode, double alpha) {
  switch (mode) {
    case EvolutionMode::rte:
      return {alpha / 2.0, 0.0};
    case EvolutionMode::ite:
      return {alpha / 2.0, -std::numbers::pi / 2.0};
    case EvolutionMode::general:
      return {alpha / 2.0, std::numbers::pi / 2.0};
  }
  throw std::invalid_argument("invalid evolution mode");
}

AnsatzSpec AnsatzSpec::hardware_efficient(int n_qubits, int layers,
                                          RandomSource& rng) {
  std::vector<Letter> axes;
  axes.reserve(static_cast<std::size_t>(n_qubits) *
               static_cast<std::size_t>(layers));
  for (int i = 0; i < n_qubits * layers; ++i) {
    axes.push_back(static_cast<Letter>(1 + rng.next_below(3)));
  }
  return with_axes(n_qubits, layers, std::move(axes));
}

AnsatzSpec AnsatzSpec::with_axes(int n_qubits, int layers,
                                 std::vector<Letter> axes) {
  if (n_qubits < 1 || n_qubits > StateVector::kMaxQubits - 1) {
    throw std::invalid_argument("qubit count out of range");
  }
  if (layers < 1) {
    throw std::invalid_argument("layer count must be positive");
  }
  if (static_cast<int>(axes.size()) != n_qubits * layers) {
    throw std::invalid_argument("axis count differs from layers * qubits");
  }
  for (Letter axis : axes) {
    if (axis == Letter::I) {
      throw std::invalid_argument("rotation axis must be X, Y or Z");
    }
  }
  AnsatzSpec spec;
  spec.n_ = n_qubits;
  spec.layers_ = layers;
  spec.axes_ = std::move(axes);
  return spec;
}

RotationGate AnsatzSpec::gate(int k) const {
  check_param_index(*this, k);
  return {(k - 1) % n_ + 1, axes_[static_cast<std::size_t>(k - 1)]};
}

PauliString AnsatzSpec::insertion_word(int k) const {
  const RotationGate g = gate(k);
  PauliString word(n_);
  word.set_letter(g.qubit, g.axis);
  return word;
}

std::vector<EntanglerPair> AnsatzSpec::entanglers(int layer) const {
  if (layer < 1 || layer > layers_) {
    throw std::out_of_range("layer index out of range");
  }
  std::vector<EntanglerPair> first;
  for (int m = 1; 2 * m <= n_; ++m) {
    first.push_back({2 * m - 1, 2 * m});
  }
  std::vector<EntanglerPair> second;
  for (int m = 1; 2 * m + 1 <= n_; ++m) {
    second.push_back({2 * m, 2 * m + 1});
  }
  if (layer % 2 == 0) {
    std::swap(first, second);
  }
  first.insert(first.end(), second.begin(), second.end());
  return first;
}

StateVector reference_state(int n_qubits) {
  StateVector state(n_qubits);
  for (int q = 1; q <= n_qubits; ++q) {
    apply_hadamard(state, q);
  }
  return state;
}

StateVector prepare_state(const AnsatzSpec& spec,
                          std::span<const double> params) {
  check_params(spec, params);
  StateVector state = reference_state(spec.n_qubits());
  apply_rotation_range(state, spec, params, 0, 1, spec.n_params() + 1);
  return state;
}

StateVector prepare_derivative_state(const AnsatzSpec& spec,
                                     std::span<const double> params, int k) {
  check_params(spec, params);
  check_param_index(spec, k);
  StateVector state = reference_state(spec.n_qubits());
  apply_rotation_range(state, spec, params, 0, 1, k);
  apply_pauli(state, spec.insertion_word(k));
  apply_rotation_range(state, spec, params, 0, k, spec.n_params() + 1);
  return state;
}

StateVector prepare_v_state(const AnsatzSpec& spec,
                            std::span<const double> params, int k,
                            double phi) {
  check_params(spec, params);
  check_param_index(spec, k);
  const int total = spec.n_qubits() + 1;
  StateVector state(total);
  apply_hadamard(state, 1);
  apply_phase(state, 1, phi);
  for (int q = 2; q <= total; ++q) {
    apply_hadamard(state, q);
  }
  PauliString anc_x(total);
  anc_x.set_letter(1, Letter::X);
  apply_pauli(state, anc_x);
  apply_rotation_range(state, spec, params, 1, 1, k);
  apply_controlled_pauli(state, 1, shifted_word(spec.insertion_word(k), total));
  apply_pauli(state, anc_x);
  apply_rotation_range(state, spec, params, 1, k, spec.n_params() + 1);
  return state;
}

StateVector prepare_m_state(const AnsatzSpec& spec,
                            std::span<const double> params, int k, int l,
                            double phi) {
  check_params(spec, params);
  check_param_index(spec, k);
  check_param_index(spec, l);
  if (k > l) {
    throw std::invalid_argument("pair indices must satisfy k <= l");
  }
  const int total = spec.n_qubits() + 1;
  StateVector state(total);
  apply_hadamard(state, 1);
  // The circuit realizes Re[e^{-i psi} <.|.>] of its input phase psi, so
  // the contract's +phi convention needs the conjugate fed in.
  apply_phase(state, 1, -phi);
  for (int q = 2; q <= total; ++q) {
    apply_hadamard(state, q);
  }
  PauliString anc_x(total);
  anc_x.set_letter(1, Letter::X);
  apply_rotation_range(state, spec, params, 1, 1, k);
  apply_controlled_pauli(state, 1, shifted_word(spec.insertion_word(k), total));
  apply_pauli(state, anc_x);
  apply_rotation_range(state, spec, params, 1, k, l);
  apply_controlled_pauli(state, 1, shifted_word(spec.insertion_word(l), total));
  apply_pauli(state, anc_x);
  apply_rotation_range(state, spec, params, 1, l, spec.n_params() + 1);
  return state;
}

}  // namespace vqs
