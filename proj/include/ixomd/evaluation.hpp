#ifndef IXOMD_EVALUATION_HPP
#define IXOMD_EVALUATION_HPP

#include <cstdint>
#include <vector>

#include "ixomd/game_tree.hpp"
#include "ixomd/infoset_tree.hpp"
#include "ixomd/policy.hpp"
#include "ixomd/realization_plan.hpp"

namespace ixomd {

// Full-model quantities. Nothing here is visible to the learner.

// [x][a] table over one player's info sets.
using InfosetTable = std::vector<std::vector<double>>;

InfosetTable zero_table(const GameTree& game, Role role);

// Dense copy of a policy: [x][a] for every info set of the game.
InfosetTable dense_policy(const GameTree& game, Role role,
                          const BehaviorPolicy& policy);

// V(mu, nu): expected sum of rewards over the episode, in [0, H].
double expected_value(const GameTree& game, const BehaviorPolicy& mu,
                      const BehaviorPolicy& nu);

// Repeated V(mu, nu) on one game without re-deriving the level order or
// reallocating buffers; for per-episode bookkeeping in long runs.
class ValueSweep {
 public:
  explicit ValueSweep(const GameTree& game);
  double operator()(const BehaviorPolicy& mu, const BehaviorPolicy& nu);

 private:
  const GameTree* game_;
  std::vector<StateId> order_;
  std::vector<double> weight_;
  std::vector<double> pa_;
  std::vector<double> pb_;
};

// Per-step expected reward E[r_h], h = 1..H. Sums to expected_value.
std::vector<double> expected_step_rewards(const GameTree& game,
                                          const BehaviorPolicy& mu,
                                          const BehaviorPolicy& nu);

// Loss vector faced by `role` when the opponent plays `opponent_policy`:
//   max: l(x,a) = sum_{s in x, b} p(s) nu_{1:h}(s,b) (1 - r(s,a,b))
//   min: l(y,b) = sum_{s in y, a} p(s) mu_{1:h}(s,a) r(s,a,b)
// p(s) is the chance-only reach of s. Then <mu, l> = H - V for the max player
// and <nu, l> = V for the min player.
InfosetTable exact_loss_vector(const GameTree& game,
                               const BehaviorPolicy& opponent_policy, Role role);

// Reward-form counterpart: sum over member states of chance reach times
// opponent reach times r. <plan, table> = V for either role.
InfosetTable reward_table(const GameTree& game,
                          const BehaviorPolicy& opponent_policy, Role role);

// Sequence-form inner product <plan, table>.
double plan_dot(const RealizationPlan& plan, const InfosetTable& table);

struct BestResponse {
  BehaviorPolicy policy;  // deterministic at every info set
  double value = 0.0;
};

// Optimizes <plan, table> over the player's realization plans by backward
// induction on the info-set tree. Ties go to the lowest action id.
BestResponse optimize_table(const InfoSetTree& tree, const InfosetTable& table,
                            bool maximize);

// max over mu of V(mu, nu) for role max; min over nu of V(mu, nu) for role min.
BestResponse best_response(const GameTree& game,
                           const BehaviorPolicy& opponent_policy, Role role);

struct ProfileReport {
  double value = 0.0;
  double best_response_max = 0.0;  // max_mu V(mu, nu)
  double best_response_min = 0.0;  // min_nu V(mu, nu)
  double exploitability = 0.0;     // difference of the two, in [0,1]-reward units
  double native_value = 0.0;
  double native_exploitability = 0.0;
};

ProfileReport evaluate_profile(const GameTree& game, const BehaviorPolicy& mu,
                               const BehaviorPolicy& nu);

double exploitability(const GameTree& game, const BehaviorPolicy& mu,
                      const BehaviorPolicy& nu);

// Regret of one player against a sequence of opponents, computed in loss
// form: sum_t <mu^t, l^t> - min over comparators of <mu', sum_t l^t>.
class RegretTracker {
 public:
  RegretTracker(const GameTree& game, Role role);

  // Adds episode t with the player's policy and the opponent's policy.
  void add(const BehaviorPolicy& own, const BehaviorPolicy& opponent);

  std::uint64_t episodes() const { return episodes_; }
  double played_loss() const { return played_; }
  const InfosetTable& cumulative_loss() const { return cumulative_; }
  // max over comparators of the regret; never mutates the tracker.
  double regret() const;

 private:
  const GameTree* game_;
  Role role_;
  InfoSetTree tree_;
  InfosetTable cumulative_;
  double played_ = 0.0;
  std::uint64_t episodes_ = 0;
};

// H sqrt(2 T iota) + gamma T X A + X iota / (2 gamma) + X log A / eta
//   + eta (1+H) T X A + eta (1+H) H iota / (2 gamma),  iota = log(3 H X A / delta).
double regret_bound(double T, double X, int A, int H, double eta,
                    double gamma, double delta);

// The same bound at the tuned eta and gamma, in closed form:
// H sqrt(2 T iota) + X sqrt(2 T A iota) + 2 X sqrt(T (1+H) A log A)
//   + H sqrt((1+H) iota log A / 2).
double tuned_regret_bound(double T, double X, int A, int H, double delta);

// max over (x, a) of |plan(average) - mean_t plan(snapshot_t)|.
double average_profile_deviation(const InfoSetTree& tree,
                                 const std::vector<BehaviorPolicy>& snapshots,
                                 const BehaviorPolicy& average);

}  // namespace ixomd

#endif  // IXOMD_EVALUATION_HPP
