#ifndef IXOMD_TESTS_ORACLES_HPP
#define IXOMD_TESTS_ORACLES_HPP

// Slow, independent reference computations used only by tests.

#include <vector>

#include "ixomd/episode.hpp"
#include "ixomd/game_tree.hpp"
#include "ixomd/infoset_tree.hpp"
#include "ixomd/policy.hpp"

namespace oracle {

using namespace ixomd;

// One complete history with its probability under (mu, nu).
struct Path {
  double prob = 0.0;
  std::vector<StateId> states;
  std::vector<Action> max_actions;
  std::vector<Action> min_actions;
};

// Every positive-probability history of the game, by depth-first recursion.
std::vector<Path> enumerate_paths(const GameTree& game, const BehaviorPolicy& mu,
                                  const BehaviorPolicy& nu);

// The learner-visible record of `path` for one player.
Trajectory trajectory_of(const GameTree& game, const Path& path, Role role);

// V(mu, nu) by summing rewards over enumerated histories.
double enumerated_value(const GameTree& game, const BehaviorPolicy& mu,
                        const BehaviorPolicy& nu);

// mu_{1:h}(x, a) by multiplying per-step probabilities along each state's
// own history in the state tree. [x][a]; -1 marks info sets with no state.
std::vector<std::vector<double>> history_product_plan(const GameTree& game,
                                                      Role role,
                                                      const BehaviorPolicy& policy);

// All deterministic policies of `role` (capped; throws if more than `cap`).
std::vector<BehaviorPolicy> pure_policies(const GameTree& game, Role role,
                                          std::size_t cap = 1 << 16);

// max (or min) over pure policies of the enumerated value.
double brute_force_best_response(const GameTree& game,
                                 const BehaviorPolicy& opponent_policy, Role role);

// Z_h from the explicit sum form, h = 1..H (H entries).
std::vector<double> z_sum_form(const std::vector<double>& probs,
                               const std::vector<double>& losses, double eta);

// Numerical minimizer of eta * sum_h mu_{1:h}(x_h, a_h) l_h + D(mu || current)
// over the player's policies: softmax logits, BFGS with exact gradients, then
// Newton steps on the reach-scaled stationarity residual. `gradient_norm` is
// the norm of that residual at the returned point.
struct ArgminResult {
  BehaviorPolicy policy;
  double objective = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
};
ArgminResult omd_argmin(const InfoSetTree& tree, const BehaviorPolicy& current,
                        const Trajectory& traj, const std::vector<double>& losses,
                        double eta);

// Random strictly positive policy over every info set of the tree; entries of
// each row are drawn from [low, 1] before normalization.
BehaviorPolicy random_policy(const InfoSetTree& tree, Rng& rng,
                             double low = 0.05);

}  // namespace oracle

#endif  // IXOMD_TESTS_ORACLES_HPP
