#include "vqs/statevec.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vqs {

namespace {

using Complex = std::complex<double>;

std::uint64_t index_bit(const StateVector& state, int qubit) {
  if (qubit < 1 || qubit > state.n_qubits()) {
    throw std::out_of_range("qubit index out of range");
  }
  return std::uint64_t{1} << (state.n_qubits() - qubit);
}

/// Applies the 2x2 matrix {{m00, m01}, {m10, m11}} on one qubit.
void apply_one_qubit(StateVector& state, int qubit, Complex m00, Complex m01,
                     Complex m10, Complex m11) {
  const std::uint64_t bit = index_bit(state, qubit);
  auto& a = state.data();
  for (std::uint64_t base = 0; base < a.size(); ++base) {
    if (base & bit) {
      continue;
    }
    const Complex lo = a[base];
    const Complex hi = a[base | bit];
    a[base] = m00 * lo + m01 * hi;
    a[base | bit] = m10 * lo + m11 * hi;
  }
}

void check_normalized(const StateVector& state) {
  if (std::abs(state.norm() - 1.0) > 1e-10) {
    throw std::logic_error("state vector is not normalized");
  }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count out of range");
  }
  amps_.assign(std::uint64_t{1} << n_qubits, Complex{0.0, 0.0});
  amps_[0] = Complex{1.0, 0.0};
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const Complex& c : amps_) {
    sum += std::norm(c);
  }
  return std::sqrt(sum);
}

void apply_rotation(StateVector& state, int qubit, Letter axis, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  switch (axis) {
    case Letter::X:
      apply_one_qubit(state, qubit, {c, 0}, {0, -s}, {0, -s}, {c, 0});
      return;
    case Letter::Y:
      apply_one_qubit(state, qubit, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
      return;
    case Letter::Z:
      apply_one_qubit(state, qubit, {c, -s}, {0, 0}, {0, 0}, {c, s});
      return;
    case Letter::I:
      break;
  }
  throw std::invalid_argument("rotation axis must be X, Y or Z");
}

void apply_hadamard(StateVector& state, int qubit) {
  const double r = 1.0 / std::sqrt(2.0);
  apply_one_qubit(state, qubit, {r, 0}, {r, 0}, {r, 0}, {-r, 0});
}

void apply_phase(StateVector& state, int qubit, double phi) {
  apply_one_qubit(state, qubit, {1, 0}, {0, 0}, {0, 0},
                  {std::cos(phi), std::sin(phi)});
}

void apply_cz(StateVector& state, int qubit_a, int qubit_b) {
  if (qubit_a == qubit_b) {
    throw std::invalid_argument("entangler qubits must differ");
  }
  const std::uint64_t mask =
      index_bit(state, qubit_a) | index_bit(state, qubit_b);
  auto& a = state.data();
  for (std::uint64_t idx = 0; idx < a.size(); ++idx) {
    if ((idx & mask) == mask) {
      a[idx] = -a[idx];
    }
  }
}

void apply_pauli(StateVector& state, const PauliString& word) {
  if (word.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("Pauli word length differs from register");
  }
  const int n = state.n_qubits();
  std::uint64_t flip = 0;
  std::uint64_t sign_bits = 0;
  int y_count = 0;
  for (int q = 1; q <= n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - q);
    switch (word.letter(q)) {
      case Letter::I:
        break;
      case Letter::X:
        flip |= bit;
        break;
      case Letter::Y:
        flip |= bit;
        sign_bits |= bit;
        ++y_count;
        break;
      case Letter::Z:
        sign_bits |= bit;
        break;
    }
  }
  // Per amplitude: sigma_x swaps, sigma_z flips the sign of |1>, and
  // sigma_y contributes i times a |1>-conditioned sign.
  Complex global{1.0, 0.0};
  switch (y_count & 3) {
    case 1:
      global = Complex{0.0, 1.0};
      break;
    case 2:
      global = Complex{-1.0, 0.0};
      break;
    case 3:
      global = Complex{0.0, -1.0};
      break;
  }
  auto& a = state.data();
  for (std::uint64_t idx = 0; idx < a.size(); ++idx) {
    const std::uint64_t partner = idx ^ flip;
    if (partner < idx) {
      continue;
    }
    const Complex phase_idx =
        (std::popcount(idx & sign_bits) & 1) ? -global : global;
    if (partner == idx) {
      a[idx] *= phase_idx;
      continue;
    }
    const Complex phase_partner =
        (std::popcount(partner & sign_bits) & 1) ? -global : global;
    const Complex tmp = a[idx];
    a[idx] = phase_partner * a[partner];
    a[partner] = phase_idx * tmp;
  }
}

void apply_controlled_pauli(StateVector& state, int control,
                            const PauliString& word) {
  if (word.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("Pauli word length differs from register");
  }
  if (word.letter(control) != Letter::I) {
    throw std::invalid_argument("word must act as identity on the control");
  }
  const std::uint64_t control_bit = index_bit(state, control);
  const int n = state.n_qubits();
  std::uint64_t flip = 0;
  std::uint64_t sign_bits = 0;
  int y_count = 0;
  for (int q = 1; q <= n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - q);
    switch (word.letter(q)) {
      case Letter::I:
        break;
      case Letter::X:
        flip |= bit;
        break;
      case Letter::Y:
        flip |= bit;
        sign_bits |= bit;
        ++y_count;
        break;
      case Letter::Z:
        sign_bits |= bit;
        break;
    }
  }
  Complex global{1.0, 0.0};
  switch (y_count & 3) {
    case 1:
      global = Complex{0.0, 1.0};
      break;
    case 2:
      global = Complex{-1.0, 0.0};
      break;
    case 3:
      global = Complex{0.0, -1.0};
      break;
  }
  auto& a = state.data();
  for (std::uint64_t idx = 0; idx < a.size(); ++idx) {
    if (!(idx & control_bit)) {
      continue;
    }
    const std::uint64_t partner = idx ^ flip;
    if (partner < idx) {
      continue;
    }
    const Complex phase_idx =
        (std::popcount(idx & sign_bits) & 1) ? -global : global;
    if (partner == idx) {
      a[idx] *= phase_idx;
      continue;
    }
    const Complex phase_partner =
        (std::popcount(partner & sign_bits) & 1) ? -global : global;
    const Complex tmp = a[idx];
    a[idx] = phase_partner * a[partner];
    a[partner] = phase_idx * tmp;
  }
}

std::complex<double> inner_product(const StateVector& a,
                                   const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("state sizes differ");
  }
  Complex sum{0.0, 0.0};
  for (std::uint64_t i = 0; i < a.dim(); ++i) {
    sum += std::conj(a.amp(i)) * b.amp(i);
  }
  return sum;
}

double expectation(const StateVector& state, const PauliString& word) {
  if (word.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("Pauli word length differs from register");
  }
  const int n = state.n_qubits();
  std::uint64_t flip = 0;
  std::uint64_t sign_bits = 0;
  int y_count = 0;
  for (int q = 1; q <= n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - q);
    switch (word.letter(q)) {
      case Letter::I:
        break;
      case Letter::X:
        flip |= bit;
        break;
      case Letter::Y:
        flip |= bit;
        sign_bits |= bit;
        ++y_count;
        break;
      case Letter::Z:
        sign_bits |= bit;
        break;
    }
  }
  Complex global{1.0, 0.0};
  switch (y_count & 3) {
    case 1:
      global = Complex{0.0, 1.0};
      break;
    case 2:
      global = Complex{-1.0, 0.0};
      break;
    case 3:
      global = Complex{0.0, -1.0};
      break;
  }
  const auto& a = state.data();
  Complex sum{0.0, 0.0};
  for (std::uint64_t idx = 0; idx < a.size(); ++idx) {
    const Complex phase =
        (std::popcount(idx & sign_bits) & 1) ? -global : global;
    sum += std::conj(a[idx ^ flip]) * phase * a[idx];
  }
  return sum.real();
}

double expectation(const StateVector& state, const ObservableSum& observable) {
  double sum = 0.0;
  for (const ObservableSum::Term& t : observable.terms()) {
    sum += t.coeff * expectation(state, t.word);
  }
  return sum;
}

std::vector<MeasurementOutcome> sample_in_basis(const StateVector& state,
                                                const PauliString& basis,
                                                RandomSource& rng,
                                                int n_shots) {
  if (basis.n_qubits() != state.n_qubits()) {
    throw std::invalid_argument("basis length differs from register");
  }
  if (n_shots < 0) {
    throw std::invalid_argument("shot count must be nonnegative");
  }
  check_normalized(state);

  StateVector rotated = state;
  const int n = state.n_qubits();
  for (int q = 1; q <= n; ++q) {
    switch (basis.letter(q)) {
      case Letter::X:
        apply_hadamard(rotated, q);
        break;
      case Letter::Y:
        apply_phase(rotated, q, -std::numbers::pi / 2.0);
        apply_hadamard(rotated, q);
        break;
      case Letter::Z:
        break;
      case Letter::I:
        throw std::invalid_argument("basis letters must be X, Y or Z");
    }
  }

  const auto& a = rotated.data();
  std::vector<MeasurementOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(n_shots));

  auto to_outcome = [n](std::uint64_t idx) {
    MeasurementOutcome out;
    out.n = n;
    for (int q = 1; q <= n; ++q) {
      if (idx & (std::uint64_t{1} << (n - q))) {
        out.minus_mask |= std::uint32_t{1} << (q - 1);
      }
    }
    return out;
  };

  if (n_shots == 1) {
    const double u = rng.next_double();
    double acc = 0.0;
    std::uint64_t pick = a.size() - 1;
    for (std::uint64_t idx = 0; idx < a.size(); ++idx) {
      acc += std::norm(a[idx]);
      if (u < acc) {
        pick = idx;
        break;
      }
    }
    outcomes.push_back(to_outcome(pick));
    return outcomes;
  }

  std::vector<double> cumulative(a.size());
  double acc = 0.0;
  for (std::uint64_t idx = 0; idx < a.size(); ++idx) {
    acc += std::norm(a[idx]);
    cumulative[idx] = acc;
  }
  for (int shot = 0; shot < n_shots; ++shot) {
    const double u = rng.next_double() * acc;
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::uint64_t pick =
        it == cumulative.end()
            ? a.size() - 1
            : static_cast<std::uint64_t>(it - cumulative.begin());
    outcomes.push_back(to_outcome(pick));
  }
  return outcomes;
}

StateVector haar_random_state(int n_qubits, RandomSource& rng) {
  StateVector state(n_qubits);
  double norm_sq = 0.0;
  for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
    const auto [re, im] = rng.next_gaussian_pair();
    state.amp(idx) = Complex{re, im};
    norm_sq += re * re + im * im;
  }
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
    state.amp(idx) *= scale;
  }
  return state;
}

}  // namespace vqs
