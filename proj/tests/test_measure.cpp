#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqs/errors.hpp"
#include "vqs/measure.hpp"
#include "vqs/pauli.hpp"
#include "vqs/random.hpp"
#include "vqs/vqs.hpp"

using vqs::Letter;
using vqs::MeasurementPlan;
using vqs::ObservableSum;
using vqs::PauliString;
using vqs::PlanKind;
using vqs::RandomSource;

namespace {

// Four-qubit six-term test Hamiltonian with two anticommuting cores.
ObservableSum four_qubit_six_terms() {
  return ObservableSum::parse(
      "1 XXXZ\n1 XXII\n1 IIXZ\n1 YYZX\n1 YYII\n1 IIZX\n");
}

std::map<std::string, int> basis_histogram(const MeasurementPlan& plan) {
  std::map<std::string, int> counts;
  for (const PauliString& b : plan.bases()) {
    counts[b.str()] += 1;
  }
  return counts;
}

}  // namespace

TEST_CASE("covering_f matches letters over the target support") {
  const auto f = [](const char* target, const char* basis) {
    return vqs::covering_f(PauliString::parse(target),
                           PauliString::parse(basis));
  };
  CHECK(f("XI", "XZ") == 1);
  CHECK(f("XI", "XX") == 1);
  CHECK(f("XI", "ZX") == 0);
  CHECK(f("II", "YZ") == 1);
  CHECK(f("XZ", "XZ") == 1);
  CHECK(f("XZ", "XY") == 0);
}

TEST_CASE("covering_basis fills identity slots with Z") {
  CHECK(vqs::covering_basis(PauliString::parse("XI")).str() == "XZ");
  CHECK(vqs::covering_basis(PauliString::parse("IYXI")).str() == "ZYXZ");
  CHECK(vqs::covering_basis(PauliString::parse("II")).str() == "ZZ");
}

TEST_CASE("estimate_mu multiplies outcome signs over the support") {
  vqs::MeasurementOutcome outcome;
  outcome.n = 3;
  outcome.minus_mask = 0b011;  // qubits 1 and 2 read -1
  CHECK(vqs::estimate_mu(PauliString::parse("XII"), outcome) == -1);
  CHECK(vqs::estimate_mu(PauliString::parse("XYI"), outcome) == 1);
  CHECK(vqs::estimate_mu(PauliString::parse("IIZ"), outcome) == 1);
  CHECK(vqs::estimate_mu(PauliString::parse("III"), outcome) == 1);
}

TEST_CASE("probabilistic plans use the analytic covering probability") {
  const MeasurementPlan plan = MeasurementPlan::probabilistic(
      {PauliString::parse("XX"), PauliString::parse("YZ")});
  CHECK(plan.kind() == PlanKind::probabilistic);
  CHECK(plan.n_shots() == 2);
  CHECK(plan.covering_q(PauliString::parse("XI")) == doctest::Approx(1.0 / 3));
  CHECK(plan.covering_q(PauliString::parse("XZ")) == doctest::Approx(1.0 / 9));
  CHECK(plan.covering_q(PauliString::parse("II")) == doctest::Approx(1.0));
  CHECK_THROWS_AS(MeasurementPlan::probabilistic({}), std::invalid_argument);
}

TEST_CASE("deterministic plans count covering fractions per target") {
  ObservableSum targets(2);
  targets.add(1.0, PauliString::parse("XI"));
  targets.add(1.0, PauliString::parse("IZ"));
  const MeasurementPlan plan = MeasurementPlan::deterministic(
      {PauliString::parse("XX"), PauliString::parse("XZ")}, targets);
  CHECK(plan.kind() == PlanKind::deterministic);
  CHECK(plan.covering_q(PauliString::parse("XI")) == doctest::Approx(1.0));
  CHECK(plan.covering_q(PauliString::parse("IZ")) == doctest::Approx(0.5));
  CHECK_THROWS_AS(plan.covering_q(PauliString::parse("ZZ")),
                  vqs::UncoveredTerm);
}

TEST_CASE("classical shadow bases are uniform letters and reproducible") {
  RandomSource rng_a(3);
  const MeasurementPlan a = vqs::build_measurements_classical_shadow(4, 50,
                                                                     rng_a);
  CHECK(a.n_shots() == 50);
  CHECK(a.n_qubits() == 4);
  for (const PauliString& b : a.bases()) {
    for (int q = 1; q <= 4; ++q) {
      CHECK(b.letter(q) != Letter::I);
    }
  }
  RandomSource rng_b(3);
  const MeasurementPlan b = vqs::build_measurements_classical_shadow(4, 50,
                                                                     rng_b);
  CHECK(a.bases() == b.bases());
}

TEST_CASE("greedy allocation splits the six-term case five and five") {
  const ObservableSum h = four_qubit_six_terms();
  const MeasurementPlan plan = vqs::build_measurements_derandomization(h, 10);
  const auto counts = basis_histogram(plan);
  REQUIRE(counts.size() == 2);
  CHECK(counts.at("XXXZ") == 5);
  CHECK(counts.at("YYZX") == 5);
  for (const auto& term : h.terms()) {
    CHECK(1.0 / plan.covering_q(term.word) == doctest::Approx(2.0));
  }
}

TEST_CASE("the ancilla-extended six-term case forces a leading X") {
  const ObservableSum ext = four_qubit_six_terms().extended_with_x();
  const MeasurementPlan plan = vqs::build_measurements_derandomization(ext,
                                                                       10);
  for (const PauliString& b : plan.bases()) {
    CHECK(b.letter(1) == Letter::X);
  }
  for (const auto& term : ext.terms()) {
    CHECK(1.0 / plan.covering_q(term.word) == doctest::Approx(2.0));
  }
}

TEST_CASE("an allocation that strands a term is rejected") {
  ObservableSum targets(1);
  targets.add(1.0, PauliString::parse("X"));
  targets.add(1.0, PauliString::parse("Z"));
  CHECK_THROWS_AS(vqs::build_measurements_derandomization(targets, 1),
                  vqs::PlanRejected);
  CHECK_NOTHROW(vqs::build_measurements_derandomization(targets, 2));
}

TEST_CASE("grouping the extended spin chain yields three axis classes") {
  const ObservableSum ext = vqs::builtin_heisenberg().extended_with_x();
  const vqs::LdfGrouping grouping = vqs::ldf_grouping(ext);
  REQUIRE(grouping.bases.size() == 3);
  std::set<std::string> bases;
  for (const PauliString& b : grouping.bases) {
    bases.insert(b.str());
  }
  CHECK(bases == std::set<std::string>{"XXXXXXX", "XYYYYYY", "XZZZZZZ"});

  // Terms partition: 6 + 6 in the X and Y classes, 12 in the Z class.
  std::multiset<std::size_t> sizes;
  std::size_t total = 0;
  for (const auto& group : grouping.members) {
    sizes.insert(group.size());
    total += group.size();
  }
  CHECK(total == ext.size());
  CHECK(sizes == std::multiset<std::size_t>{6, 6, 12});

  for (std::size_t g = 0; g < grouping.bases.size(); ++g) {
    const double expected =
        grouping.members[g].size() == 12 ? std::sqrt(0.12) : std::sqrt(0.06);
    CHECK(grouping.weights[g] == doctest::Approx(expected));
    for (int j : grouping.members[g]) {
      CHECK(vqs::covering_f(ext.terms()[static_cast<std::size_t>(j)].word,
                            grouping.bases[g]) == 1);
    }
  }
}

TEST_CASE("grouped sampling plans cover every target") {
  const ObservableSum ext = vqs::builtin_heisenberg().extended_with_x();
  RandomSource rng(5);
  const MeasurementPlan plan = vqs::build_measurements_ldf(ext, 40, rng);
  CHECK(plan.kind() == PlanKind::deterministic);
  CHECK(plan.n_shots() == 40);
  const vqs::LdfGrouping grouping = vqs::ldf_grouping(ext);
  std::set<std::string> allowed;
  for (const PauliString& b : grouping.bases) {
    allowed.insert(b.str());
  }
  for (const PauliString& b : plan.bases()) {
    CHECK(allowed.count(b.str()) == 1);
  }
  for (const auto& term : ext.terms()) {
    CHECK(plan.covering_q(term.word) > 0.0);
  }
}

TEST_CASE("term-by-term plans measure each word in its own basis") {
  ObservableSum targets(3);
  targets.add(0.5, PauliString::parse("XII"));
  targets.add(-0.25, PauliString::parse("IYZ"));
  const vqs::NaivePlan plan = vqs::build_measurements_naive(targets, 7);
  REQUIRE(plan.bases.size() == 2);
  CHECK(plan.bases[0].str() == "XZZ");
  CHECK(plan.bases[1].str() == "ZYZ");
  CHECK(plan.shots == std::vector<int>{7, 7});
  CHECK_THROWS_AS(vqs::build_measurements_naive(targets, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(vqs::build_measurements_naive(ObservableSum(2), 5),
                  std::invalid_argument);
}
