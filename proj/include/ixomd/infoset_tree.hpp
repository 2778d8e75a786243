#ifndef IXOMD_INFOSET_TREE_HPP
#define IXOMD_INFOSET_TREE_HPP

#include <vector>

#include "ixomd/game_tree.hpp"

namespace ixomd {

// One player's view of the game: info sets grouped by level, each with the
// unique (info set, action) sequence that precedes it.
class InfoSetTree {
 public:
  InfoSetTree() = default;

  Role role() const { return role_; }
  int horizon() const { return static_cast<int>(levels_.size()); }
  std::size_t size() const { return parent_.size(); }

  const std::vector<InfoSetId>& level(int h) const {
    return levels_[static_cast<std::size_t>(h)];
  }
  const std::vector<std::vector<InfoSetId>>& levels() const { return levels_; }
  int level_of(InfoSetId x) const { return level_of_[idx(x)]; }
  const Sequence& parent(InfoSetId x) const { return parent_[idx(x)]; }
  int num_actions(InfoSetId x) const { return actions_[idx(x)]; }
  const std::vector<StateId>& states_of(InfoSetId x) const {
    return states_of_[idx(x)];
  }
  const std::vector<InfoSetId>& children(InfoSetId x, Action a) const {
    return children_[idx(x)][static_cast<std::size_t>(a)];
  }
  // Info sets at level 1.
  const std::vector<InfoSetId>& roots() const { return levels_.front(); }

  // Info sets where the player has a real choice (at least two actions).
  std::size_t num_decision_infosets() const;
  int max_actions() const;

  friend InfoSetTree build_infoset_tree(const GameTree& game, Role role);

 private:
  static std::size_t idx(InfoSetId x) { return static_cast<std::size_t>(x); }

  Role role_ = Role::kMax;
  std::vector<std::vector<InfoSetId>> levels_;
  std::vector<int> level_of_;
  std::vector<Sequence> parent_;
  std::vector<int> actions_;
  std::vector<std::vector<StateId>> states_of_;
  std::vector<std::vector<std::vector<InfoSetId>>> children_;
};

// Precondition: validate_game(game) is empty. Throws Error if two member
// states of an info set imply different parents.
InfoSetTree build_infoset_tree(const GameTree& game, Role role);

}  // namespace ixomd

#endif  // IXOMD_INFOSET_TREE_HPP
