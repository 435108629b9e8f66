#pragma once

#include <span>
#include <vector>

#include "vqs/pauli.hpp"
#include "vqs/random.hpp"
#include "vqs/statevec.hpp"

namespace vqs {

/// Flavour of the evolution generator pairing: real time, imaginary time,
/// or a caller-supplied generator pair.
enum class EvolutionMode { rte, ite, general };

/// Derivative weight G and uniform phase phi for one generator coefficient,
/// such that the k-th gradient entry is a sum of G * Re[e^{i phi} <...>]
/// overlaps. A negative coefficient keeps its sign in G.
struct PhaseWeight {
  double weight;
  double phase;
};

PhaseWeight derivative_phase_and_weight(EvolutionMode mode, double alpha);

/// One parameterized rotation: exp(-i theta sigma_axis / 2) on a qubit.
struct RotationGate {
  int qubit;
  Letter axis;
};

/// Entangled qubit pair of one layer's CZ block.
struct EntanglerPair {
  int a;
  int b;
};

/// Layered hardware-efficient ansatz: per layer one rotation per qubit
/// (axes fixed at construction) followed by a brick pattern of CZ gates.
/// Parameter k (1-based) is the rotation on qubit ((k-1) mod n) + 1 of
/// layer ((k-1) div n) + 1, so n_params() = layers * n.
class AnsatzSpec {
 public:
  AnsatzSpec() = default;

  /// Axes drawn uniformly from {X, Y, Z} per gate.
  static AnsatzSpec hardware_efficient(int n_qubits, int layers,
                                       RandomSource& rng);

  /// Fixed axes, one per parameter in layer-major order.
  static AnsatzSpec with_axes(int n_qubits, int layers,
                              std::vector<Letter> axes);

  int n_qubits() const { return n_; }
  int layers() const { return layers_; }
  int n_params() const { return layers_ * n_; }
  const std::vector<Letter>& axes() const { return axes_; }

  /// Rotation gate for 1-based parameter index k.
  RotationGate gate(int k) const;

  /// Pauli word (length n) with the gate's axis letter at its qubit; the
  /// word inserted immediately before rotation k in the derivative circuits.
  PauliString insertion_word(int k) const;

  /// CZ pairs of the 1-based layer in application order. Odd layers pair
  /// (2m-1, 2m) first and then (2m, 2m+1); even layers reverse the block
  /// order.
  std::vector<EntanglerPair> entanglers(int layer) const;

 private:
  int n_ = 0;
  int layers_ = 0;
  std::vector<Letter> axes_;
};

/// Uniform-superposition reference state on n qubits.
StateVector reference_state(int n_qubits);

/// Full ansatz state R(params) applied to the reference.
StateVector prepare_state(const AnsatzSpec& spec,
                          std::span<const double> params);

/// Reference evolved with the derivative word of parameter k inserted
/// immediately before rotation k.
StateVector prepare_derivative_state(const AnsatzSpec& spec,
                                     std::span<const double> params, int k);

/// Hadamard-test state on n+1 qubits (ancilla is qubit 1) whose ancilla-X
/// correlator gives the gradient overlap of parameter k:
/// Tr[(X (x) P) rho] = Re[e^{i phi} <ref| Rdag_k P R |ref>] for any system
/// word P, with Rdag_k the derivative-inserted circuit.
StateVector prepare_v_state(const AnsatzSpec& spec,
                            std::span<const double> params, int k, double phi);

/// Hadamard-test state on n+1 qubits pairing the derivative circuits of
/// parameters k and l (k <= l required):
/// Tr[(X (x) P) rho] = Re[e^{i phi} <ref| Rdag_k P R_l |ref>].
StateVector prepare_m_state(const AnsatzSpec& spec,
                            std::span<const double> params, int k, int l,
                            double phi);

}  // namespace vqs
