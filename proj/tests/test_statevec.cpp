#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dense_oracle.hpp"
#include "vqs/pauli.hpp"
#include "vqs/random.hpp"
#include "vqs/statevec.hpp"

using vqs::Letter;
using vqs::MeasurementOutcome;
using vqs::PauliString;
using vqs::RandomSource;
using vqs::StateVector;
namespace dt = vqs::testing;

TEST_CASE("a fresh register is the all-zero ket") {
  const StateVector s(3);
  CHECK(s.dim() == 8);
  CHECK(s.amp(0) == std::complex<double>(1.0, 0.0));
  CHECK(s.norm() == doctest::Approx(1.0));
  for (std::uint64_t i = 1; i < s.dim(); ++i) {
    CHECK(std::abs(s.amp(i)) == 0.0);
  }
}

TEST_CASE("haar states are normalized and seed-dependent") {
  RandomSource rng(31);
  const StateVector a = vqs::haar_random_state(3, rng);
  const StateVector b = vqs::haar_random_state(3, rng);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(vqs::inner_product(a, b)) < 0.999);
  RandomSource rng2(31);
  const StateVector a2 = vqs::haar_random_state(3, rng2);
  CHECK(dt::max_abs_diff(a2, dt::to_dense(a)) == 0.0);
}

TEST_CASE("single-qubit gates match their dense matrices") {
  const int n = 3;
  RandomSource rng(7);
  const StateVector start = vqs::haar_random_state(n, rng);
  const dt::DenseVector dense_start = dt::to_dense(start);

  for (int qubit = 1; qubit <= n; ++qubit) {
    for (Letter axis : {Letter::X, Letter::Y, Letter::Z}) {
      StateVector s = start;
      vqs::apply_rotation(s, qubit, axis, 0.83);
      CHECK(dt::max_abs_diff(
                s, dt::dense_rotation(n, qubit, axis, 0.83) * dense_start) <
            1e-13);
    }
    StateVector h = start;
    vqs::apply_hadamard(h, qubit);
    CHECK(dt::max_abs_diff(h, dt::dense_hadamard(n, qubit) * dense_start) <
          1e-13);

    StateVector p = start;
    vqs::apply_phase(p, qubit, -1.1);
    CHECK(dt::max_abs_diff(p, dt::dense_phase(n, qubit, -1.1) * dense_start) <
          1e-13);
  }
}

TEST_CASE("rotation about I is rejected") {
  StateVector s(1);
  CHECK_THROWS_AS(vqs::apply_rotation(s, 1, Letter::I, 0.5),
                  std::invalid_argument);
}

TEST_CASE("cz matches its dense matrix on every pair") {
  const int n = 3;
  RandomSource rng(8);
  const StateVector start = vqs::haar_random_state(n, rng);
  const dt::DenseVector dense_start = dt::to_dense(start);
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      StateVector s = start;
      vqs::apply_cz(s, a, b);
      CHECK(dt::max_abs_diff(s, dt::dense_cz(n, a, b) * dense_start) < 1e-13);
    }
  }
}

TEST_CASE("pauli words apply like their dense matrices") {
  const int n = 3;
  RandomSource rng(9);
  const StateVector start = vqs::haar_random_state(n, rng);
  const dt::DenseVector dense_start = dt::to_dense(start);
  for (const char* text : {"XYZ", "IIZ", "YIX", "ZZY", "III"}) {
    const PauliString word = PauliString::parse(text);
    StateVector s = start;
    vqs::apply_pauli(s, word);
    CHECK(dt::max_abs_diff(s, dt::dense_pauli(word) * dense_start) < 1e-13);
  }
}

TEST_CASE("controlled pauli words match the dense construction") {
  const int n = 3;
  RandomSource rng(10);
  const StateVector start = vqs::haar_random_state(n, rng);
  const dt::DenseVector dense_start = dt::to_dense(start);
  const struct {
    int control;
    const char* word;
  } cases[] = {{1, "IYZ"}, {2, "XIZ"}, {3, "ZXI"}, {1, "III"}};
  for (const auto& c : cases) {
    const PauliString word = PauliString::parse(c.word);
    StateVector s = start;
    vqs::apply_controlled_pauli(s, c.control, word);
    CHECK(dt::max_abs_diff(
              s, dt::dense_controlled_pauli(n, c.control, word) *
                     dense_start) < 1e-13);
  }
  StateVector s = start;
  CHECK_THROWS_AS(vqs::apply_controlled_pauli(s, 1, PauliString::parse("XII")),
                  std::invalid_argument);
}

TEST_CASE("inner product conjugates its first argument") {
  RandomSource rng(11);
  const StateVector a = vqs::haar_random_state(2, rng);
  const StateVector b = vqs::haar_random_state(2, rng);
  std::complex<double> expected{0.0, 0.0};
  for (std::uint64_t i = 0; i < a.dim(); ++i) {
    expected += std::conj(a.amp(i)) * b.amp(i);
  }
  CHECK(std::abs(vqs::inner_product(a, b) - expected) < 1e-14);
  CHECK(std::abs(vqs::inner_product(a, b) -
                 std::conj(vqs::inner_product(b, a))) < 1e-14);
}

TEST_CASE("expectations agree with the dense quadratic form") {
  const int n = 3;
  RandomSource rng(12);
  const StateVector s = vqs::haar_random_state(n, rng);
  const dt::DenseVector v = dt::to_dense(s);
  vqs::ObservableSum obs(3);
  obs.add(0.4, PauliString::parse("XIZ"));
  obs.add(-1.1, PauliString::parse("YYI"));
  double total = 0.0;
  for (const auto& term : obs.terms()) {
    const double dense_value =
        (v.adjoint() * dt::dense_pauli(term.word) * v)(0, 0).real();
    CHECK(vqs::expectation(s, term.word) ==
          doctest::Approx(dense_value).epsilon(1e-12));
    total += term.coeff * dense_value;
  }
  CHECK(vqs::expectation(s, obs) == doctest::Approx(total).epsilon(1e-12));
  const PauliString identity(3);
  CHECK(vqs::expectation(s, identity) == doctest::Approx(1.0));
}

TEST_CASE("measuring the computational basis on |0> is deterministic") {
  const StateVector s(2);
  RandomSource rng(13);
  const auto outcomes =
      vqs::sample_in_basis(s, PauliString::parse("ZZ"), rng, 50);
  REQUIRE(outcomes.size() == 50);
  for (const MeasurementOutcome& o : outcomes) {
    CHECK(o.sign(1) == 1);
    CHECK(o.sign(2) == 1);
  }
}

TEST_CASE("measuring X on |+> is deterministic") {
  StateVector s(1);
  vqs::apply_hadamard(s, 1);
  RandomSource rng(14);
  for (const MeasurementOutcome& o :
       vqs::sample_in_basis(s, PauliString::parse("X"), rng, 50)) {
    CHECK(o.sign(1) == 1);
  }
}

TEST_CASE("measuring Y eigenstates is deterministic") {
  // S H |0> = (|0> + i|1>)/sqrt(2), the +1 eigenstate of Y.
  StateVector s(1);
  vqs::apply_hadamard(s, 1);
  vqs::apply_phase(s, 1, std::numbers::pi / 2.0);
  RandomSource rng(15);
  for (const MeasurementOutcome& o :
       vqs::sample_in_basis(s, PauliString::parse("Y"), rng, 50)) {
    CHECK(o.sign(1) == 1);
  }
}

TEST_CASE("sample means track expectations") {
  RandomSource rng(16);
  const StateVector s = vqs::haar_random_state(2, rng);
  const PauliString target = PauliString::parse("XZ");
  const int shots = 40000;
  const auto outcomes = vqs::sample_in_basis(s, target, rng, shots);
  double mean = 0.0;
  for (const MeasurementOutcome& o : outcomes) {
    mean += o.sign(1) * o.sign(2);
  }
  mean /= shots;
  const double exact = vqs::expectation(s, target);
  // Bernoulli standard error is at most 1/sqrt(shots) = 0.005.
  CHECK(std::abs(mean - exact) < 0.025);
}

TEST_CASE("sampling validates its inputs") {
  StateVector s(2);
  RandomSource rng(17);
  CHECK_THROWS_AS(vqs::sample_in_basis(s, PauliString::parse("ZI"), rng, 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(vqs::sample_in_basis(s, PauliString::parse("Z"), rng, 3),
                  std::invalid_argument);
  s.amp(0) = 2.0;
  CHECK_THROWS_AS(vqs::sample_in_basis(s, PauliString::parse("ZZ"), rng, 3),
                  std::logic_error);
}
