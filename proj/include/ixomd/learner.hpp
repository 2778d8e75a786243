#ifndef IXOMD_LEARNER_HPP
#define IXOMD_LEARNER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ixomd/episode.hpp"
#include "ixomd/infoset_tree.hpp"
#include "ixomd/policy.hpp"

namespace ixomd {

inline constexpr double kDefaultDelta = 0.1;

struct IXConfig {
  double eta = 0.1;
  double gamma = 0.1;  // 0 selects the plain importance-sampling estimator
  int horizon = 1;
  int max_actions = 1;

  void validate() const;
  friend bool operator==(const IXConfig&, const IXConfig&) = default;
};

// iota = log(3 H X A / delta).
double confidence_log_term(int horizon, double infosets, int actions,
                           double delta);

// Tuning for a run of T episodes.
//  * X given:  eta = sqrt(log A / (T (1+H) A)),  gamma = sqrt(iota / (2 T A)).
//  * X absent: same eta, gamma = 1 / sqrt(2 T A).
// With A = 1 the learner has nothing to learn and log A = 0; eta then falls
// back to 1 / sqrt(T) so the config stays valid.
IXConfig recommended_hyperparams(std::uint64_t T, int horizon, int actions,
                                 std::optional<double> infosets = std::nullopt,
                                 double delta = kDefaultDelta);

// Horizon-free fallback: eta = gamma = 1 / sqrt(T).
IXConfig recommended_hyperparams_t_only(std::uint64_t T, int horizon,
                                        int actions);

struct StepLoss {
  std::vector<double> values;  // estimated loss at the visited pair, per step
  std::vector<double> reach;   // mu_{1:h}(x_h, a_h) along the trajectory
};

// Backward normalizer recursion for one trajectory: returns log Z_1..log Z_{H+1}
// (H+1 entries, the last is 0). `probs[h]` is mu_h(a_h | x_h). The optional
// `others[h]` is the stored mass of the unsampled actions at x_h (1 - mu in
// exact arithmetic); passing it makes Z_h the exact normalizer of the stored
// row, so rounding does not compound across updates.
std::vector<double> backward_log_z(std::span<const double> probs,
                                   std::span<const double> losses, double eta,
                                   std::span<const double> others = {});

// Cumulative realization weights for visited info sets, updated lazily: an
// info set is only touched when a trajectory passes through it and catches up
// on the parent's growth since its previous visit.
class AverageAccumulator {
 public:
  struct Entry {
    int level = 0;
    Sequence pred;
    double last_parent = 0.0;  // parent muDot (or episode count at roots) at last visit
    std::vector<double> mu_dot;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  // Folds episode `t` (1-based) into the sums using the policy that generated
  // the trajectory. Throws Error if an info set shows up under a different
  // predecessor than on its first visit.
  void accumulate(const Trajectory& traj, const BehaviorPolicy& current,
                  std::uint64_t t);

  // muDot brought up to date at episode T, assuming each info set has played
  // its current policy since its last visit. Does not modify the accumulator.
  std::unordered_map<InfoSetId, std::vector<double>> flushed(
      std::uint64_t T, const BehaviorPolicy& current) const;

  // Average policy: normalized flushed muDot, uniform elsewhere.
  BehaviorPolicy finalize(std::uint64_t T, const BehaviorPolicy& current,
                          Role role) const;

  std::size_t size() const { return entries_.size(); }
  const Entry* find(InfoSetId x) const;
  const std::unordered_map<InfoSetId, Entry>& entries() const { return entries_; }
  void insert(InfoSetId x, Entry entry);

  friend bool operator==(const AverageAccumulator& lhs,
                         const AverageAccumulator& rhs) {
    return lhs.entries_ == rhs.entries_;
  }

 private:
  std::unordered_map<InfoSetId, Entry> entries_;
  std::vector<std::vector<InfoSetId>> by_level_;  // first-visit order per level
};

// Bandit learner for one player. Sees only its own trajectories; losses are
// 1 - r for the max player and r for the min player.
class IxomdLearner {
 public:
  IxomdLearner(Role role, IXConfig config);
  // Starts from `initial` instead of uniform; rows must be strictly positive.
  IxomdLearner(Role role, IXConfig config, BehaviorPolicy initial);

  Role role() const { return role_; }
  const IXConfig& config() const { return config_; }
  std::uint64_t episodes() const { return t_; }
  const BehaviorPolicy& policy() const { return policy_; }
  const AverageAccumulator& accumulator() const { return accumulator_; }
  std::uint64_t renormalizations() const { return renormalizations_; }

  // Current distribution at x; uniform if x was never updated.
  std::vector<double> act(InfoSetId x, int num_actions) const;

  StepLoss estimate_losses(const Trajectory& traj) const;

  // Closed-form lazy update along the trajectory; increments the episode count.
  void omd_update(const Trajectory& traj, const StepLoss& losses);

  // Adds the current policy's contribution for episode episodes() + 1.
  void accumulate_average(const Trajectory& traj);

  // accumulate_average, estimate_losses, omd_update.
  void observe(const Trajectory& traj);

  BehaviorPolicy finalize_average() const;
  BehaviorPolicy finalize_average(std::uint64_t T) const;

  // Bit-exact text state (policy, accumulator, counters, config).
  void write_state(std::ostream& out) const;
  static IxomdLearner read_state(std::istream& in);
  void save(const std::string& path) const;
  static IxomdLearner load(const std::string& path);

  friend bool operator==(const IxomdLearner&, const IxomdLearner&) = default;

 private:
  void check_trajectory(const Trajectory& traj) const;

  Role role_;
  IXConfig config_;
  BehaviorPolicy policy_;
  AverageAccumulator accumulator_;
  std::uint64_t t_ = 0;
  std::uint64_t renormalizations_ = 0;
};

// Dilated KL divergence sum_h sum_{x,a} p_{1:h}(x,a) log(p(a|x) / q(a|x)).
// Throws Error if q vanishes where p has mass.
double dilated_divergence(const InfoSetTree& tree, const BehaviorPolicy& p,
                          const BehaviorPolicy& q);

}  // namespace ixomd

#endif  // IXOMD_LEARNER_HPP
