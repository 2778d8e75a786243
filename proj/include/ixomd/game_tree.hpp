#ifndef IXOMD_GAME_TREE_HPP
#define IXOMD_GAME_TREE_HPP

#include <span>
#include <string>
#include <vector>

#include "ixomd/types.hpp"

namespace ixomd {

struct Successor {
  StateId next = 0;
  double prob = 0.0;
  friend bool operator==(const Successor&, const Successor&) = default;
};

// Per-step affine map back to the game's native payoff units:
// native = scale * r + offset.
struct RewardScale {
  double scale = 1.0;
  double offset = 0.0;

  double to_native_step(double r) const { return scale * r + offset; }
  // A full-episode value V in [0, H] maps to scale * V + H * offset.
  double to_native_value(double value, int horizon) const {
    return scale * value + horizon * offset;
  }
  double to_native_gap(double gap) const { return scale * gap; }
  friend bool operator==(const RewardScale&, const RewardScale&) = default;
};

struct StateNode {
  int level = 0;  // zero-based step index, h - 1
  InfoSetId max_infoset = 0;
  InfoSetId min_infoset = 0;
  // Indexed by joint action a * num_min_actions + b, where the action counts
  // are those of the two info sets containing this state.
  std::vector<double> reward;
  std::vector<std::vector<Successor>> successors;
  friend bool operator==(const StateNode&, const StateNode&) = default;
};

// Tabular episodic POMG arena. States are stored in one array; each carries
// its level and the two info-set labels. Chance lives in `initial` and in the
// successor lists.
struct GameTree {
  int horizon = 1;
  int max_actions = 1;  // A: largest action count over max info sets
  int min_actions = 1;  // B
  std::vector<StateNode> states;
  std::vector<Successor> initial;
  std::vector<int> max_infoset_actions;  // indexed by max info-set id
  std::vector<int> min_infoset_actions;
  // Optional human-readable names (no whitespace), empty or one per info set.
  std::vector<std::string> max_infoset_labels;
  std::vector<std::string> min_infoset_labels;
  RewardScale scale;
  std::string name;

  std::size_t num_states() const { return states.size(); }
  std::size_t num_infosets(Role role) const {
    return role == Role::kMax ? max_infoset_actions.size()
                              : min_infoset_actions.size();
  }
  int action_bound(Role role) const {
    return role == Role::kMax ? max_actions : min_actions;
  }
  InfoSetId infoset_of(Role role, StateId s) const {
    const StateNode& node = states[static_cast<std::size_t>(s)];
    return role == Role::kMax ? node.max_infoset : node.min_infoset;
  }
  int num_actions(Role role, InfoSetId x) const {
    const auto& counts =
        role == Role::kMax ? max_infoset_actions : min_infoset_actions;
    return counts[static_cast<std::size_t>(x)];
  }
  int state_max_actions(StateId s) const {
    return num_actions(Role::kMax, states[static_cast<std::size_t>(s)].max_infoset);
  }
  int state_min_actions(StateId s) const {
    return num_actions(Role::kMin, states[static_cast<std::size_t>(s)].min_infoset);
  }
  // Info set carrying `label`; throws Error if there is none.
  InfoSetId find_infoset(Role role, std::string_view label) const;
  std::string infoset_label(Role role, InfoSetId x) const;

  // States grouped by level, in id order.
  std::vector<std::vector<StateId>> states_by_level() const;

  friend bool operator==(const GameTree&, const GameTree&) = default;
};

enum class ViolationKind {
  kIndexRange,
  kStochasticity,
  kRewardRange,
  kTreeStructure,
  kLevelPartition,
  kPerfectRecall,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind kind) const;
  std::string summary() const;
};

inline constexpr double kProbabilityTolerance = 1e-9;

ValidationReport validate_game(const GameTree& game);

// Throws Error with the report summary when the game is not admissible.
void require_valid(const GameTree& game);

}  // namespace ixomd

#endif  // IXOMD_GAME_TREE_HPP
