#include "vqs/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "vqs/errors.hpp"

namespace vqs {

namespace {

void check_targets(const ObservableSum& targets) {
  if (targets.empty()) {
    throw std::invalid_argument("target observable has no terms");
  }
}

void check_shots(int n_shots) {
  if (n_shots < 1) {
    throw std::invalid_argument("shot count must be positive");
  }
}

}  // namespace

MeasurementPlan MeasurementPlan::probabilistic(
    std::vector<PauliString> bases) {
  if (bases.empty()) {
    throw std::invalid_argument("plan needs at least one basis");
  }
  MeasurementPlan plan;
  plan.kind_ = PlanKind::probabilistic;
  plan.n_ = bases.front().n_qubits();
  plan.bases_ = std::move(bases);
  return plan;
}

MeasurementPlan MeasurementPlan::deterministic(std::vector<PauliString> bases,
                                               const ObservableSum& targets) {
  if (bases.empty()) {
    throw std::invalid_argument("plan needs at least one basis");
  }
  MeasurementPlan plan;
  plan.kind_ = PlanKind::deterministic;
  plan.n_ = bases.front().n_qubits();
  plan.bases_ = std::move(bases);
  for (const ObservableSum::Term& t : targets.terms()) {
    int count = 0;
    for (const PauliString& basis : plan.bases_) {
      count += covering_f(t.word, basis);
    }
    plan.q_[t.word] =
        static_cast<double>(count) / static_cast<double>(plan.n_shots());
  }
  return plan;
}

double MeasurementPlan::covering_q(const PauliString& target) const {
  if (kind_ == PlanKind::probabilistic) {
    return std::pow(3.0, -target.locality());
  }
  const auto it = q_.find(target);
  if (it == q_.end()) {
    throw UncoveredTerm("term " + target.str() +
                        " was not among the plan's targets");
  }
  return it->second;
}

int covering_f(const PauliString& target, const PauliString& basis) {
  const std::uint64_t support = target.support_mask2();
  return (target.code() & support) == (basis.code() & support) ? 1 : 0;
}

int estimate_mu(const PauliString& target, const MeasurementOutcome& outcome) {
  const std::uint64_t support = target.support_mask();
  return (std::popcount(outcome.minus_mask & support) & 1) ? -1 : +1;
}

PauliString covering_basis(const PauliString& target) {
  PauliString basis(target.n_qubits());
  for (int q = 1; q <= target.n_qubits(); ++q) {
    const Letter l = target.letter(q);
    basis.set_letter(q, l == Letter::I ? Letter::Z : l);
  }
  return basis;
}

MeasurementPlan build_measurements_classical_shadow(int n_qubits, int n_shots,
                                                    RandomSource& rng) {
  check_shots(n_shots);
  std::vector<PauliString> bases;
  bases.reserve(static_cast<std::size_t>(n_shots));
  for (int shot = 0; shot < n_shots; ++shot) {
    PauliString basis(n_qubits);
    for (int q = 1; q <= n_qubits; ++q) {
      basis.set_letter(q, static_cast<Letter>(1 + rng.next_below(3)));
    }
    bases.push_back(basis);
  }
  return MeasurementPlan::probabilistic(std::move(bases));
}

MeasurementPlan build_measurements_derandomization(
    const ObservableSum& targets, int n_shots,
    const DerandomizationParams& params) {
  check_targets(targets);
  check_shots(n_shots);
  const int n = targets.n_qubits();
  const int n_terms = static_cast<int>(targets.size());
  const double max_abs = targets.max_abs_coeff();

  // Per-term constants. tail_non_i[j][p] counts non-identity letters at
  // positions strictly greater than p, so the pessimistic weight for a term
  // still matching after position p is gamma / 3^tail_non_i[j][p].
  // match_factor[j][m] = (1 - gamma/3^m)^(1/w_j) is that weight folded into
  // the per-term score contribution, tabulated over the possible tails.
  std::vector<double> weight(static_cast<std::size_t>(n_terms));
  std::vector<std::vector<int>> tail_non_i(
      static_cast<std::size_t>(n_terms));
  std::vector<std::vector<double>> match_factor(
      static_cast<std::size_t>(n_terms));
  for (int j = 0; j < n_terms; ++j) {
    const ObservableSum::Term& t =
        targets.terms()[static_cast<std::size_t>(j)];
    weight[j] = std::abs(t.coeff) / max_abs;
    tail_non_i[j].assign(static_cast<std::size_t>(n) + 1, 0);
    for (int p = n - 1; p >= 0; --p) {
      tail_non_i[j][p] = tail_non_i[j][p + 1] +
                         (t.word.letter(p + 1) != Letter::I ? 1 : 0);
    }
    const int loc = t.word.locality();
    match_factor[j].assign(static_cast<std::size_t>(loc) + 1, 0.0);
    for (int m = 0; m <= loc; ++m) {
      const double base =
          std::max(0.0, 1.0 - params.gamma * std::pow(3.0, -m));
      match_factor[j][m] = std::pow(base, 1.0 / weight[j]);
    }
  }

  std::vector<int> cover_count(static_cast<std::size_t>(n_terms), 0);
  // cover_reward[j] = exp(-eta/2 * cover_count[j] / w_j) up to a common
  // shift that keeps the sum representable; the shift cancels in argmin.
  std::vector<double> cover_reward(static_cast<std::size_t>(n_terms), 1.0);
  auto refresh_cover_rewards = [&] {
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(static_cast<std::size_t>(n_terms));
    for (int j = 0; j < n_terms; ++j) {
      logs[j] = -params.eta / 2.0 * cover_count[j] / weight[j];
      max_log = std::max(max_log, logs[j]);
    }
    for (int j = 0; j < n_terms; ++j) {
      cover_reward[j] = std::exp(logs[j] - max_log);
    }
  };

  const Letter candidates[3] = {Letter::X, Letter::Y, Letter::Z};
  std::vector<char> matched(static_cast<std::size_t>(n_terms));
  std::vector<PauliString> bases;
  bases.reserve(static_cast<std::size_t>(n_shots));

  for (int shot = 0; shot < n_shots; ++shot) {
    std::fill(matched.begin(), matched.end(), char{1});
    PauliString basis(n);
    for (int pos = 1; pos <= n; ++pos) {
      double best_score = 0.0;
      Letter best_letter = Letter::X;
      for (int c = 0; c < 3; ++c) {
        double score = 0.0;
        for (int j = 0; j < n_terms; ++j) {
          if (!matched[j]) {
            score += cover_reward[j];
            continue;
          }
          const Letter lj = targets.terms()[static_cast<std::size_t>(j)]
                                .word.letter(pos);
          if (lj != Letter::I && lj != candidates[c]) {
            score += cover_reward[j];
          } else {
            score += cover_reward[j] * match_factor[j][tail_non_i[j][pos]];
          }
        }
        if (c == 0 || score < best_score) {
          best_score = score;
          best_letter = candidates[c];
        }
      }
      basis.set_letter(pos, best_letter);
      for (int j = 0; j < n_terms; ++j) {
        if (!matched[j]) {
          continue;
        }
        const Letter lj =
            targets.terms()[static_cast<std::size_t>(j)].word.letter(pos);
        if (lj != Letter::I && lj != best_letter) {
          matched[j] = 0;
        }
      }
    }
    for (int j = 0; j < n_terms; ++j) {
      if (matched[j]) {
        cover_count[j] += 1;
      }
    }
    refresh_cover_rewards();
    bases.push_back(basis);
  }

  for (int j = 0; j < n_terms; ++j) {
    if (cover_count[j] == 0) {
      throw PlanRejected(
          "derandomized allocation leaves term " +
          targets.terms()[static_cast<std::size_t>(j)].word.str() +
          " uncovered");
    }
  }
  return MeasurementPlan::deterministic(std::move(bases), targets);
}

LdfGrouping ldf_grouping(const ObservableSum& targets) {
  check_targets(targets);
  const int n_terms = static_cast<int>(targets.size());
  const int n = targets.n_qubits();

  std::vector<std::vector<int>> adjacency(
      static_cast<std::size_t>(n_terms));
  for (int j = 0; j < n_terms; ++j) {
    for (int m = j + 1; m < n_terms; ++m) {
      if (!qubitwise_commute(targets.terms()[static_cast<std::size_t>(j)].word,
                             targets.terms()[static_cast<std::size_t>(m)]
                                 .word)) {
        adjacency[j].push_back(m);
        adjacency[m].push_back(j);
      }
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n_terms));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return adjacency[static_cast<std::size_t>(a)].size() >
           adjacency[static_cast<std::size_t>(b)].size();
  });

  std::vector<int> color(static_cast<std::size_t>(n_terms), -1);
  int n_colors = 0;
  for (int v : order) {
    std::vector<char> used(static_cast<std::size_t>(n_colors) + 1, 0);
    for (int w : adjacency[static_cast<std::size_t>(v)]) {
      if (color[static_cast<std::size_t>(w)] >= 0) {
        used[static_cast<std::size_t>(color[static_cast<std::size_t>(w)])] =
            1;
      }
    }
    int c = 0;
    while (used[static_cast<std::size_t>(c)]) {
      ++c;
    }
    color[static_cast<std::size_t>(v)] = c;
    n_colors = std::max(n_colors, c + 1);
  }

  LdfGrouping grouping;
  grouping.members.assign(static_cast<std::size_t>(n_colors), {});
  for (int j = 0; j < n_terms; ++j) {
    grouping.members[static_cast<std::size_t>(color[static_cast<std::size_t>(
                         j)])]
        .push_back(j);
  }
  for (const std::vector<int>& group : grouping.members) {
    PauliString basis(n);
    double weight_sq = 0.0;
    for (int j : group) {
      const ObservableSum::Term& t =
          targets.terms()[static_cast<std::size_t>(j)];
      weight_sq += t.coeff * t.coeff;
      for (int q = 1; q <= n; ++q) {
        if (t.word.letter(q) != Letter::I) {
          basis.set_letter(q, t.word.letter(q));
        }
      }
    }
    for (int q = 1; q <= n; ++q) {
      if (basis.letter(q) == Letter::I) {
        basis.set_letter(q, Letter::Z);
      }
    }
    grouping.bases.push_back(basis);
    grouping.weights.push_back(std::sqrt(weight_sq));
  }
  return grouping;
}

MeasurementPlan build_measurements_ldf(const ObservableSum& targets,
                                       int n_shots, RandomSource& rng) {
  check_shots(n_shots);
  const LdfGrouping grouping = ldf_grouping(targets);
  std::vector<double> cumulative(grouping.weights.size());
  double total = 0.0;
  for (std::size_t g = 0; g < grouping.weights.size(); ++g) {
    total += grouping.weights[g];
    cumulative[g] = total;
  }
  std::vector<PauliString> bases;
  bases.reserve(static_cast<std::size_t>(n_shots));
  for (int shot = 0; shot < n_shots; ++shot) {
    const double u = rng.next_double() * total;
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t g = it == cumulative.end()
                              ? cumulative.size() - 1
                              : static_cast<std::size_t>(
                                    it - cumulative.begin());
    bases.push_back(grouping.bases[g]);
  }
  return MeasurementPlan::deterministic(std::move(bases), targets);
}

NaivePlan build_measurements_naive(const ObservableSum& targets,
                                   int n_naive) {
  check_targets(targets);
  if (n_naive < 1) {
    throw std::invalid_argument("per-term shot count must be positive");
  }
  NaivePlan plan;
  plan.bases.reserve(targets.size());
  plan.shots.assign(targets.size(), n_naive);
  for (const ObservableSum::Term& t : targets.terms()) {
    plan.bases.push_back(covering_basis(t.word));
  }
  return plan;
}

}  // namespace vqs
