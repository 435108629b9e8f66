#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "vqs/pauli.hpp"
#include "vqs/random.hpp"

namespace vqs {

/// Outcome of one product-basis measurement: one sign per qubit.
struct MeasurementOutcome {
  std::uint32_t minus_mask = 0;
  int n = 0;

  /// +1 or -1 for the 1-based qubit position.
  int sign(int qubit) const {
    return (minus_mask >> (qubit - 1)) & 1u ? -1 : +1;
  }
};

/// Dense complex state vector on up to 24 qubits.
///
/// Qubit 1 (the leftmost letter of Pauli text, the ancilla slot in extended
/// registers) maps to the most significant amplitude-index bit, so the index
/// written in binary reads as the ket label.
class StateVector {
 public:
  static constexpr int kMaxQubits = 24;

  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits);

  int n_qubits() const { return n_; }
  std::uint64_t dim() const { return amps_.size(); }

  std::complex<double>& amp(std::uint64_t index) { return amps_[index]; }
  const std::complex<double>& amp(std::uint64_t index) const {
    return amps_[index];
  }
  std::vector<std::complex<double>>& data() { return amps_; }
  const std::vector<std::complex<double>>& data() const { return amps_; }

  double norm() const;

 private:
  int n_;
  std::vector<std::complex<double>> amps_;
};

/// exp(-i theta sigma_axis / 2) on one qubit; axis must be X, Y or Z.
void apply_rotation(StateVector& state, int qubit, Letter axis, double theta);

void apply_hadamard(StateVector& state, int qubit);

/// diag(1, e^{i phi}) on one qubit.
void apply_phase(StateVector& state, int qubit, double phi);

void apply_cz(StateVector& state, int qubit_a, int qubit_b);

/// Applies the whole Pauli word in one pass over the amplitudes.
void apply_pauli(StateVector& state, const PauliString& word);

/// Applies the word on the control-bit-one subspace; the word's letter at
/// the control position must be I.
void apply_controlled_pauli(StateVector& state, int control,
                            const PauliString& word);

std::complex<double> inner_product(const StateVector& a, const StateVector& b);

double expectation(const StateVector& state, const PauliString& word);
double expectation(const StateVector& state, const ObservableSum& observable);

/// Draws product-basis measurement outcomes. Basis letters must come from
/// {X, Y, Z}; the state must be normalized to within 1e-10.
std::vector<MeasurementOutcome> sample_in_basis(const StateVector& state,
                                                const PauliString& basis,
                                                RandomSource& rng,
                                                int n_shots);

/// Haar-random pure state from a normalized complex Gaussian vector.
StateVector haar_random_state(int n_qubits, RandomSource& rng);

}  // namespace vqs
