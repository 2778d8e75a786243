#include "ixomd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ixomd {

namespace {

constexpr double kTieTolerance = 1e-12;

// Reach of every state split into its three factors: chance, max player's
// own prefix mu_{1:h-1}(s), min player's prefix nu_{1:h-1}(s).
struct StateReach {
  std::vector<double> chance;
  std::vector<double> max;
  std::vector<double> min;
};

StateReach forward_reach(const GameTree& game, const InfosetTable& mu,
                         const InfosetTable& nu) {
  const std::size_t S = game.num_states();
  StateReach reach{std::vector<double>(S, 0.0), std::vector<double>(S, 0.0),
                   std::vector<double>(S, 0.0)};
  for (const Successor& init : game.initial) {
    const auto s = static_cast<std::size_t>(init.next);
    reach.chance[s] = init.prob;
    reach.max[s] = 1.0;
    reach.min[s] = 1.0;
  }
  for (const auto& level : game.states_by_level()) {
    for (const StateId sid : level) {
      const auto s = static_cast<std::size_t>(sid);
      const StateNode& node = game.states[s];
      if (node.successors.empty()) continue;
      const auto& pa = mu[static_cast<std::size_t>(node.max_infoset)];
      const auto& pb = nu[static_cast<std::size_t>(node.min_infoset)];
      const std::size_t B = pb.size();
      for (std::size_t a = 0; a < pa.size(); ++a) {
        for (std::size_t b = 0; b < B; ++b) {
          for (const Successor& succ : node.successors[a * B + b]) {
            const auto c = static_cast<std::size_t>(succ.next);
            reach.chance[c] = reach.chance[s] * succ.prob;
            reach.max[c] = reach.max[s] * pa[a];
            reach.min[c] = reach.min[s] * pb[b];
          }
        }
      }
    }
  }
  return reach;
}

InfosetTable uniform_table(const GameTree& game, Role role) {
  InfosetTable table(game.num_infosets(role));
  for (std::size_t x = 0; x < table.size(); ++x) {
    const int n = game.num_actions(role, static_cast<InfoSetId>(x));
    table[x].assign(static_cast<std::size_t>(n), 1.0 / n);
  }
  return table;
}

// Shared body of exact_loss_vector and reward_table. With `complement`, the
// max player's entries use 1 - r.
InfosetTable opponent_weighted(const GameTree& game,
                               const BehaviorPolicy& opponent_policy, Role role,
                               bool complement) {
  const Role other = opponent(role);
  const InfosetTable opp = dense_policy(game, other, opponent_policy);
  const InfosetTable own = uniform_table(game, role);  // only shapes matter
  const StateReach reach = role == Role::kMax ? forward_reach(game, own, opp)
                                              : forward_reach(game, opp, own);
  InfosetTable table = zero_table(game, role);
  for (std::size_t s = 0; s < game.num_states(); ++s) {
    const StateNode& node = game.states[s];
    const double base =
        reach.chance[s] * (role == Role::kMax ? reach.min[s] : reach.max[s]);
    if (base == 0.0) continue;
    const auto A = static_cast<std::size_t>(game.state_max_actions(static_cast<StateId>(s)));
    const auto B = static_cast<std::size_t>(game.state_min_actions(static_cast<StateId>(s)));
    if (role == Role::kMax) {
      const auto& pb = opp[static_cast<std::size_t>(node.min_infoset)];
      auto& row = table[static_cast<std::size_t>(node.max_infoset)];
      for (std::size_t a = 0; a < A; ++a) {
        double acc = 0.0;
        for (std::size_t b = 0; b < B; ++b) {
          const double r = node.reward[a * B + b];
          acc += pb[b] * (complement ? 1.0 - r : r);
        }
        row[a] += base * acc;
      }
    } else {
      const auto& pa = opp[static_cast<std::size_t>(node.max_infoset)];
      auto& row = table[static_cast<std::size_t>(node.min_infoset)];
      for (std::size_t b = 0; b < B; ++b) {
        double acc = 0.0;
        for (std::size_t a = 0; a < A; ++a) acc += pa[a] * node.reward[a * B + b];
        row[b] += base * acc;
      }
    }
  }
  return table;
}

}  // namespace

InfosetTable zero_table(const GameTree& game, Role role) {
  InfosetTable table(game.num_infosets(role));
  for (std::size_t x = 0; x < table.size(); ++x) {
    table[x].assign(
        static_cast<std::size_t>(game.num_actions(role, static_cast<InfoSetId>(x))), 0.0);
  }
  return table;
}

InfosetTable dense_policy(const GameTree& game, Role role,
                          const BehaviorPolicy& policy) {
  InfosetTable table = zero_table(game, role);
  for (std::size_t x = 0; x < table.size(); ++x) {
    policy.fill(static_cast<InfoSetId>(x), static_cast<int>(table[x].size()), table[x]);
  }
  return table;
}

std::vector<double> expected_step_rewards(const GameTree& game,
                                          const BehaviorPolicy& mu,
                                          const BehaviorPolicy& nu) {
  const InfosetTable pm = dense_policy(game, Role::kMax, mu);
  const InfosetTable pn = dense_policy(game, Role::kMin, nu);
  const StateReach reach = forward_reach(game, pm, pn);
  std::vector<double> per_step(static_cast<std::size_t>(game.horizon), 0.0);
  for (std::size_t s = 0; s < game.num_states(); ++s) {
    const StateNode& node = game.states[s];
    const double w = reach.chance[s] * reach.max[s] * reach.min[s];
    if (w == 0.0) continue;
    const auto& pa = pm[static_cast<std::size_t>(node.max_infoset)];
    const auto& pb = pn[static_cast<std::size_t>(node.min_infoset)];
    double acc = 0.0;
    for (std::size_t a = 0; a < pa.size(); ++a) {
      for (std::size_t b = 0; b < pb.size(); ++b) {
        acc += pa[a] * pb[b] * node.reward[a * pb.size() + b];
      }
    }
    per_step[static_cast<std::size_t>(node.level)] += w * acc;
  }
  return per_step;
}

double expected_value(const GameTree& game, const BehaviorPolicy& mu,
                      const BehaviorPolicy& nu) {
  const auto steps = expected_step_rewards(game, mu, nu);
  return std::accumulate(steps.begin(), steps.end(), 0.0);
}

ValueSweep::ValueSweep(const GameTree& game)
    : game_(&game),
      weight_(game.num_states(), 0.0),
      pa_(static_cast<std::size_t>(game.max_actions)),
      pb_(static_cast<std::size_t>(game.min_actions)) {
  for (const auto& level : game.states_by_level()) {
    order_.insert(order_.end(), level.begin(), level.end());
  }
}

double ValueSweep::operator()(const BehaviorPolicy& mu, const BehaviorPolicy& nu) {
  std::fill(weight_.begin(), weight_.end(), 0.0);
  for (const Successor& init : game_->initial) {
    weight_[static_cast<std::size_t>(init.next)] += init.prob;
  }
  double total = 0.0;
  for (const StateId sid : order_) {
    const auto s = static_cast<std::size_t>(sid);
    const double w = weight_[s];
    if (w == 0.0) continue;
    const StateNode& node = game_->states[s];
    const int A = game_->state_max_actions(sid);
    const int B = game_->state_min_actions(sid);
    mu.fill(node.max_infoset, A, pa_);
    nu.fill(node.min_infoset, B, pb_);
    const auto Bs = static_cast<std::size_t>(B);
    for (std::size_t a = 0; a < static_cast<std::size_t>(A); ++a) {
      for (std::size_t b = 0; b < Bs; ++b) {
        const double p = w * pa_[a] * pb_[b];
        if (p == 0.0) continue;
        total += p * node.reward[a * Bs + b];
        if (node.successors.empty()) continue;
        for (const Successor& succ : node.successors[a * Bs + b]) {
          weight_[static_cast<std::size_t>(succ.next)] += p * succ.prob;
        }
      }
    }
  }
  return total;
}

InfosetTable exact_loss_vector(const GameTree& game,
                               const BehaviorPolicy& opponent_policy, Role role) {
  return opponent_weighted(game, opponent_policy, role, role == Role::kMax);
}

InfosetTable reward_table(const GameTree& game,
                          const BehaviorPolicy& opponent_policy, Role role) {
  return opponent_weighted(game, opponent_policy, role, false);
}

double plan_dot(const RealizationPlan& plan, const InfosetTable& table) {
  if (plan.weights.size() != table.size()) throw Error("plan/table size mismatch");
  double total = 0.0;
  for (std::size_t x = 0; x < table.size(); ++x) {
    for (std::size_t a = 0; a < table[x].size(); ++a) {
      total += plan.weights[x][a] * table[x][a];
    }
  }
  return total;
}

BestResponse optimize_table(const InfoSetTree& tree, const InfosetTable& table,
                            bool maximize) {
  if (table.size() != tree.size()) throw Error("table does not match info-set tree");
  BestResponse out{BehaviorPolicy(tree.role()), 0.0};
  std::vector<double> value(tree.size(), 0.0);
  std::vector<double> row;
  for (int h = tree.horizon() - 1; h >= 0; --h) {
    for (const InfoSetId x : tree.level(h)) {
      const int n = tree.num_actions(x);
      double best = 0.0;
      Action best_action = 0;
      for (Action a = 0; a < n; ++a) {
        double q = table[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)];
        for (const InfoSetId child : tree.children(x, a)) {
          q += value[static_cast<std::size_t>(child)];
        }
        const bool better = maximize ? q > best + kTieTolerance
                                     : q < best - kTieTolerance;
        if (a == 0 || better) {
          best = q;
          best_action = a;
        }
      }
      value[static_cast<std::size_t>(x)] = best;
      row.assign(static_cast<std::size_t>(n), 0.0);
      row[static_cast<std::size_t>(best_action)] = 1.0;
      out.policy.set(x, row);
    }
  }
  for (const InfoSetId root : tree.roots()) {
    out.value += value[static_cast<std::size_t>(root)];
  }
  return out;
}

BestResponse best_response(const GameTree& game,
                           const BehaviorPolicy& opponent_policy, Role role) {
  const InfoSetTree tree = build_infoset_tree(game, role);
  return optimize_table(tree, reward_table(game, opponent_policy, role),
                        role == Role::kMax);
}

ProfileReport evaluate_profile(const GameTree& game, const BehaviorPolicy& mu,
                               const BehaviorPolicy& nu) {
  ProfileReport report;
  report.value = expected_value(game, mu, nu);
  report.best_response_max = best_response(game, nu, Role::kMax).value;
  report.best_response_min = best_response(game, mu, Role::kMin).value;
  report.exploitability = report.best_response_max - report.best_response_min;
  report.native_value = game.scale.to_native_value(report.value, game.horizon);
  report.native_exploitability = game.scale.to_native_gap(report.exploitability);
  return report;
}

double exploitability(const GameTree& game, const BehaviorPolicy& mu,
                      const BehaviorPolicy& nu) {
  return best_response(game, nu, Role::kMax).value -
         best_response(game, mu, Role::kMin).value;
}

RegretTracker::RegretTracker(const GameTree& game, Role role)
    : game_(&game),
      role_(role),
      tree_(build_infoset_tree(game, role)),
      cumulative_(zero_table(game, role)) {}

void RegretTracker::add(const BehaviorPolicy& own,
                        const BehaviorPolicy& opponent_policy) {
  const InfosetTable loss = exact_loss_vector(*game_, opponent_policy, role_);
  played_ += plan_dot(realization_plan(tree_, own), loss);
  for (std::size_t x = 0; x < loss.size(); ++x) {
    for (std::size_t a = 0; a < loss[x].size(); ++a) cumulative_[x][a] += loss[x][a];
  }
  ++episodes_;
}

double RegretTracker::regret() const {
  return played_ - optimize_table(tree_, cumulative_, false).value;
}

double regret_bound(double T, double X, int A, int H, double eta,
                    double gamma, double delta) {
  if (!(T >= 1.0) || !(X >= 1.0) || A < 1 || H < 1 || !(eta > 0.0) ||
      !(gamma > 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw Error("bound needs T, X, A, H >= 1, eta, gamma > 0 and delta in (0,1)");
  }
  const double iota = std::log(3.0 * H * X * A / delta);
  const double log_a = std::log(static_cast<double>(A));
  const double h1 = 1.0 + H;
  return H * std::sqrt(2.0 * T * iota) + gamma * T * X * A +
         X * iota / (2.0 * gamma) + X * log_a / eta + eta * h1 * T * X * A +
         eta * h1 * H * iota / (2.0 * gamma);
}

double tuned_regret_bound(double T, double X, int A, int H, double delta) {
  if (!(T >= 1.0) || !(X >= 1.0) || A < 1 || H < 1 ||
      !(delta > 0.0 && delta < 1.0)) {
    throw Error("bound needs T, X, A, H >= 1 and delta in (0,1)");
  }
  const double iota = std::log(3.0 * H * X * A / delta);
  const double log_a = std::log(static_cast<double>(A));
  const double h1 = 1.0 + H;
  return H * std::sqrt(2.0 * T * iota) + X * std::sqrt(2.0 * T * A * iota) +
         2.0 * X * std::sqrt(T * h1 * A * log_a) +
         H * std::sqrt(h1 * iota * log_a / 2.0);
}

double average_profile_deviation(const InfoSetTree& tree,
                                 const std::vector<BehaviorPolicy>& snapshots,
                                 const BehaviorPolicy& average) {
  if (snapshots.empty()) throw Error("no snapshots to average");
  std::vector<RealizationPlan> plans;
  plans.reserve(snapshots.size());
  for (const auto& snap : snapshots) plans.push_back(realization_plan(tree, snap));
  std::vector<const RealizationPlan*> ptrs;
  for (const auto& plan : plans) ptrs.push_back(&plan);
  const std::vector<double> coefficients(plans.size(),
                                         1.0 / static_cast<double>(plans.size()));
  const RealizationPlan mean = combine_plans(ptrs, coefficients);
  const RealizationPlan avg = realization_plan(tree, average);
  double worst = 0.0;
  for (std::size_t x = 0; x < avg.weights.size(); ++x) {
    for (std::size_t a = 0; a < avg.weights[x].size(); ++a) {
      worst = std::max(worst, std::abs(avg.weights[x][a] - mean.weights[x][a]));
    }
  }
  return worst;
}

}  // namespace ixomd
