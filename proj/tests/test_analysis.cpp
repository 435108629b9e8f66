#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "vqs/analysis.hpp"
#include "vqs/ansatz.hpp"
#include "vqs/errors.hpp"
#include "vqs/estimator.hpp"
#include "vqs/measure.hpp"
#include "vqs/pauli.hpp"
#include "vqs/random.hpp"
#include "vqs/statevec.hpp"
#include "vqs/vqs.hpp"

using vqs::AnsatzSpec;
using vqs::EvolutionMode;
using vqs::GConvention;
using vqs::Letter;
using vqs::MeasurementPlan;
using vqs::ObservableSum;
using vqs::PauliString;
using vqs::RandomSource;
using vqs::StateVector;

namespace {

MeasurementPlan any_probabilistic_plan(int n_qubits) {
  PauliString all_z(n_qubits);
  for (int q = 1; q <= n_qubits; ++q) {
    all_z.set_letter(q, Letter::Z);
  }
  return MeasurementPlan::probabilistic({all_z});
}

}  // namespace

TEST_CASE("extended term scaling follows the weight convention") {
  ObservableSum h(2);
  h.add(0.6, PauliString::parse("XZ"));
  h.add(-0.4, PauliString::parse("IY"));
  const ObservableSum half = vqs::scaled_extended_terms(h, GConvention::half);
  const ObservableSum unit = vqs::scaled_extended_terms(h, GConvention::unit);
  REQUIRE(half.size() == 2);
  CHECK(half.terms()[0].word.str() == "XXZ");
  CHECK(half.terms()[0].coeff == doctest::Approx(0.3));
  CHECK(half.terms()[1].coeff == doctest::Approx(-0.2));
  CHECK(unit.terms()[0].coeff == doctest::Approx(0.6));
  CHECK(unit.terms()[1].coeff == doctest::Approx(-0.4));
}

TEST_CASE("the random-basis covariance factor is a letterwise product") {
  const MeasurementPlan plan = any_probabilistic_plan(2);
  const auto g = [&](const char* a, const char* b) {
    return vqs::g_factor(PauliString::parse(a), PauliString::parse(b), plan);
  };
  CHECK(g("XI", "IZ") == doctest::Approx(1.0));
  CHECK(g("XZ", "XI") == doctest::Approx(3.0));
  CHECK(g("XI", "ZI") == doctest::Approx(0.0));
  CHECK(g("XZ", "XZ") == doctest::Approx(9.0));
  CHECK(g("II", "XY") == doctest::Approx(1.0));
}

TEST_CASE("the fixed-plan covariance factor averages over emitted bases") {
  ObservableSum targets(2);
  targets.add(1.0, PauliString::parse("XI"));
  targets.add(1.0, PauliString::parse("IZ"));
  const MeasurementPlan plan = MeasurementPlan::deterministic(
      {PauliString::parse("XX"), PauliString::parse("XZ")}, targets);
  CHECK(vqs::g_factor(PauliString::parse("XI"), PauliString::parse("IZ"),
                      plan) == doctest::Approx(1.0));
  CHECK(vqs::g_factor(PauliString::parse("XI"), PauliString::parse("XI"),
                      plan) == doctest::Approx(1.0));
  // Both terms covered only by the second basis: f f / (q q) = 4 on half
  // the shots.
  CHECK(vqs::g_factor(PauliString::parse("IZ"), PauliString::parse("IZ"),
                      plan) == doctest::Approx(2.0));
}

TEST_CASE("per-shot term-by-term variance is the Bernoulli sum") {
  StateVector zero(1);
  ObservableSum z(1);
  z.add(0.7, PauliString::parse("Z"));
  CHECK(vqs::variance_naive(zero, z) == doctest::Approx(0.0));
  ObservableSum x(1);
  x.add(0.7, PauliString::parse("X"));
  CHECK(vqs::variance_naive(zero, x) == doctest::Approx(0.49));
  ObservableSum both(1);
  both.add(0.7, PauliString::parse("Z"));
  both.add(0.7, PauliString::parse("X"));
  CHECK(vqs::variance_naive(zero, both) == doctest::Approx(0.49));
}

TEST_CASE("a single fully covered term has Bernoulli variance") {
  RandomSource rng(21);
  const StateVector state = vqs::haar_random_state(2, rng);
  ObservableSum obs(2);
  obs.add(0.8, PauliString::parse("XZ"));
  const MeasurementPlan plan = MeasurementPlan::deterministic(
      std::vector<PauliString>(10, PauliString::parse("XZ")), obs);
  const double tr = vqs::expectation(state, PauliString::parse("XZ"));
  CHECK(vqs::variance_shadow(state, obs, plan) ==
        doctest::Approx((0.64 - 0.64 * tr * tr) / 10.0));
}

TEST_CASE("closed-form variance matches resampling on a fixed plan") {
  RandomSource rng(22);
  const StateVector state = vqs::haar_random_state(2, rng);
  ObservableSum obs(2);
  obs.add(0.9, PauliString::parse("XX"));
  obs.add(-0.6, PauliString::parse("XI"));
  obs.add(0.4, PauliString::parse("IZ"));
  const MeasurementPlan plan = vqs::build_measurements_derandomization(
      obs, 20);
  const double closed = vqs::variance_shadow(state, obs, plan);

  const int reps = 6000;
  double mean = 0.0;
  double mean_sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    RandomSource rep_rng = rng.derive({static_cast<std::uint64_t>(r)});
    const double est = vqs::estimate_nu(state, obs, plan, rep_rng);
    mean += est;
    mean_sq += est * est;
  }
  mean /= reps;
  const double empirical = mean_sq / reps - mean * mean;
  CHECK(empirical == doctest::Approx(closed).epsilon(0.1));
}

TEST_CASE("closed-form variance matches resampling under random bases") {
  RandomSource rng(23);
  const StateVector state = vqs::haar_random_state(2, rng);
  ObservableSum obs(2);
  obs.add(0.7, PauliString::parse("XI"));
  obs.add(0.5, PauliString::parse("ZZ"));
  const int shots = 25;

  RandomSource model_rng(1);
  const MeasurementPlan model_plan =
      vqs::build_measurements_classical_shadow(2, shots, model_rng);
  const double closed = vqs::variance_shadow(state, obs, model_plan);

  const int reps = 6000;
  double mean = 0.0;
  double mean_sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    RandomSource rep_rng = rng.derive({static_cast<std::uint64_t>(r)});
    const MeasurementPlan plan =
        vqs::build_measurements_classical_shadow(2, shots, rep_rng);
    const double est = vqs::estimate_nu(state, obs, plan, rep_rng);
    mean += est;
    mean_sq += est * est;
  }
  mean /= reps;
  const double empirical = mean_sq / reps - mean * mean;
  CHECK(empirical == doctest::Approx(closed).epsilon(0.1));
}

TEST_CASE("the spin-chain surrogate columns come out exactly") {
  const ObservableSum extended =
      vqs::scaled_extended_terms(vqs::builtin_heisenberg(),
                                 GConvention::unit);
  CHECK(vqs::approximation_naive(extended, 5) == doctest::Approx(0.0480));
  CHECK(vqs::approximation_shadow_cs(extended, 120) ==
        doctest::Approx(0.0450));

  const std::vector<double> inv_q = vqs::inverse_q_cs(extended);
  int n27 = 0;
  int n9 = 0;
  for (double v : inv_q) {
    if (v == 27.0) {
      ++n27;
    } else if (v == 9.0) {
      ++n9;
    }
  }
  CHECK(n27 == 18);
  CHECK(n9 == 6);

  const MeasurementPlan plan =
      vqs::build_measurements_derandomization(extended, 120);
  const double derand_approx = vqs::approximation_shadow(extended, plan);
  CHECK(derand_approx > 0.004);
  CHECK(derand_approx < 0.008);
}

TEST_CASE("weighted averages use squared coefficients") {
  ObservableSum obs(1);
  obs.add(1.0, PauliString::parse("X"));
  obs.add(2.0, PauliString::parse("Y"));
  const std::vector<double> values = {10.0, 20.0};
  CHECK(vqs::weighted_mean(obs, values) == doctest::Approx(18.0));
  CHECK(vqs::weighted_median(obs, values) == doctest::Approx(20.0));

  ObservableSum even(1);
  even.add(1.0, PauliString::parse("X"));
  even.add(1.0, PauliString::parse("Y"));
  const std::vector<double> ascending = {3.0, 7.0};
  const std::vector<double> descending = {7.0, 3.0};
  CHECK(vqs::weighted_median(even, ascending) == doctest::Approx(3.0));
  CHECK(vqs::weighted_median(even, descending) == doctest::Approx(3.0));
}

TEST_CASE("measurement-ratio bounds reproduce the worked numbers") {
  const ObservableSum six = ObservableSum::parse(
                                "1 XXXZ\n1 XXII\n1 IIXZ\n1 YYZX\n1 YYII\n"
                                "1 IIZX\n")
                                .extended_with_x();
  const MeasurementPlan derand =
      vqs::build_measurements_derandomization(six, 10);
  CHECK(vqs::shot_ratio_bound_hybrid(six, vqs::inverse_q(six, derand)) ==
        doctest::Approx(0.75));
  const double six_cs =
      vqs::shot_ratio_bound_hybrid(six, vqs::inverse_q_cs(six));
  CHECK(six_cs == doctest::Approx(10.125));

  const ObservableSum chain =
      vqs::builtin_heisenberg().extended_with_x();
  CHECK(vqs::shot_ratio_bound_hybrid(chain, vqs::inverse_q_cs(chain)) ==
        doctest::Approx(2.53125));
}

TEST_CASE("the simultaneous-strategy bound combines both registers") {
  ObservableSum gv(1);
  gv.add(1.0, PauliString::parse("X"));
  ObservableSum gm(1);
  gm.add(1.0, PauliString::parse("Z"));
  const std::vector<double> inv_v = {4.0};
  const std::vector<double> inv_m = {1.0};
  // (1 + 2*1) / (1 + 2*1*1) * (sqrt(4) + sqrt(1))^2 = 9.
  CHECK(vqs::shot_ratio_bound(gv, inv_v, gm, inv_m, 2, 1, 1) ==
        doctest::Approx(9.0));
}

TEST_CASE("haar sampling matches the closed-form averages") {
  ObservableSum obs(3);
  obs.add(0.6, PauliString::parse("XXI"));
  obs.add(0.3, PauliString::parse("XIY"));
  const MeasurementPlan plan = any_probabilistic_plan(3);

  RandomSource rng(31);
  const vqs::HaarReport report = vqs::haar_check(obs, plan, 4000, rng);
  CHECK(report.n_qubits == 3);
  CHECK(report.samples == 4000);
  CHECK(report.mean_closed == doctest::Approx(0.36 * 9.0 + 0.09 * 9.0));
  const double d = 8.0;
  CHECK(report.naive_mean_closed ==
        doctest::Approx((0.36 + 0.09) * (1.0 - 1.0 / (d + 1.0))));
  CHECK(std::abs(report.mean_empirical - report.mean_closed) <
        4.0 * report.mean_stderr);
  CHECK(std::abs(report.naive_mean_empirical - report.naive_mean_closed) <
        0.02);
  CHECK(report.var_closed > 0.0);
  CHECK(report.var_empirical ==
        doctest::Approx(report.var_closed).epsilon(0.25));
  CHECK_THROWS_AS(vqs::haar_check(obs, plan, 0, rng), vqs::EmptySample);
}

TEST_CASE("step-error magnitudes combine the norms as stated") {
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd v(2);
  v << 1.0, 0.0;
  const std::vector<double> dv = {0.3, 0.4};
  const std::vector<double> zeros2 = {0.0, 0.0};
  const std::vector<double> zeros4 = {0.0, 0.0, 0.0, 0.0};

  const vqs::DeltaQuantities same = vqs::delta_quantities(
      m, v, dv, zeros4, dv, zeros4, 1.0, 1e-6);
  // ||Minv||_F = sqrt(2), sqrt(sum dv^2) = 0.5, and the metric spread is 0.
  CHECK(same.naive == doctest::Approx(std::sqrt(2.0) * 0.5));
  CHECK(same.shadow == doctest::Approx(same.naive));
  CHECK(same.hybrid == doctest::Approx(same.naive));

  const std::vector<double> dm = {0.1, 0.2, 0.2, 0.1};
  const double dm_norm = std::sqrt(0.01 + 0.04 + 0.04 + 0.01);
  const vqs::DeltaQuantities full = vqs::delta_quantities(
      m, v, dv, dm, zeros2, zeros4, 0.25, 1e-6);
  CHECK(full.naive ==
        doctest::Approx(std::sqrt(2.0) * 0.5 + 2.0 * 1.0 * dm_norm));
  CHECK(full.shadow == doctest::Approx(0.0));
  // The hybrid inflates the metric spread by 1/sqrt(alpha) = 2.
  CHECK(full.hybrid == doctest::Approx(2.0 * 1.0 * dm_norm * 2.0));

  CHECK_THROWS_AS(
      vqs::delta_quantities(Eigen::MatrixXd::Zero(2, 2), v, dv, dm, dv, dm,
                            1.0, 1e-6),
      vqs::SingularM);
}

TEST_CASE("variance tables carry one row per pattern and strategy") {
  ObservableSum h(2);
  h.add(0.5, PauliString::parse("XZ"));
  h.add(-0.3, PauliString::parse("ZI"));
  h.add(0.2, PauliString::parse("YY"));
  const AnsatzSpec ansatz = AnsatzSpec::with_axes(
      2, 2, {Letter::X, Letter::Y, Letter::Z, Letter::X});

  RandomSource rng(41);
  const std::vector<vqs::VarianceRow> rows = vqs::variance_table(
      h, ansatz, EvolutionMode::ite, 30, GConvention::unit, 2, rng);
  REQUIRE(rows.size() == 9);
  CHECK(rows[0].params_label == "all zero");
  CHECK(rows[0].strategy == "naive");
  CHECK(rows[1].strategy == "classical shadow");
  CHECK(rows[2].strategy == "derandomization");
  CHECK(rows[3].params_label == "random (pattern1)");
  CHECK(rows[6].params_label == "random (pattern2)");

  const ObservableSum extended =
      vqs::scaled_extended_terms(h, GConvention::unit);
  const double naive_approx = vqs::approximation_naive(extended, 10);
  const double cs_approx = vqs::approximation_shadow_cs(extended, 30);
  for (std::size_t r = 0; r < rows.size(); r += 3) {
    CHECK(rows[r].approximation == doctest::Approx(naive_approx));
    CHECK(rows[r + 1].approximation == doctest::Approx(cs_approx));
  }
  for (const vqs::VarianceRow& row : rows) {
    CHECK(row.variance >= 0.0);
    CHECK(row.diff >= std::abs(row.variance - row.approximation) - 1e-12);
  }

  RandomSource rng_again(41);
  const std::vector<vqs::VarianceRow> again = vqs::variance_table(
      h, ansatz, EvolutionMode::ite, 30, GConvention::unit, 2, rng_again);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    CHECK(rows[r].variance == again[r].variance);
    CHECK(rows[r].diff == again[r].diff);
  }

  CHECK_THROWS_AS(vqs::variance_table(h, ansatz, EvolutionMode::ite, 2,
                                      GConvention::unit, 0, rng),
                  std::invalid_argument);
}
