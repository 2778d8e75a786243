#include "ixomd/infoset_tree.hpp"

#include <algorithm>
#include <string>

namespace ixomd {

std::size_t InfoSetTree::num_decision_infosets() const {
  return static_cast<std::size_t>(
      std::count_if(actions_.begin(), actions_.end(), [](int n) { return n > 1; }));
}

int InfoSetTree::max_actions() const {
  return actions_.empty() ? 0 : *std::max_element(actions_.begin(), actions_.end());
}

InfoSetTree build_infoset_tree(const GameTree& game, Role role) {
  InfoSetTree tree;
  tree.role_ = role;
  const std::size_t count = game.num_infosets(role);
  tree.levels_.assign(static_cast<std::size_t>(game.horizon), {});
  tree.level_of_.assign(count, -1);
  tree.parent_.assign(count, Sequence{});
  tree.actions_.resize(count);
  tree.states_of_.assign(count, {});
  tree.children_.resize(count);
  for (std::size_t x = 0; x < count; ++x) {
    tree.actions_[x] = game.num_actions(role, static_cast<InfoSetId>(x));
    tree.children_[x].assign(static_cast<std::size_t>(tree.actions_[x]), {});
  }

  // Own-parent sequence of every state, pushed forward along transitions.
  std::vector<Sequence> state_parent(game.num_states());
  std::vector<bool> assigned(count, false);
  const auto by_level = game.states_by_level();
  for (const auto& level_states : by_level) {
    for (const StateId s : level_states) {
      const StateNode& node = game.states[static_cast<std::size_t>(s)];
      const InfoSetId x = game.infoset_of(role, s);
      const auto xi = static_cast<std::size_t>(x);
      const Sequence& seq = state_parent[static_cast<std::size_t>(s)];
      if (!assigned[xi]) {
        assigned[xi] = true;
        tree.level_of_[xi] = node.level;
        tree.parent_[xi] = seq;
        tree.levels_[static_cast<std::size_t>(node.level)].push_back(x);
      } else if (!(tree.parent_[xi] == seq) || tree.level_of_[xi] != node.level) {
        throw Error(std::string(to_string(role)) + " info set " +
                    std::to_string(x) +
                    " has member states with different parents");
      }
      tree.states_of_[xi].push_back(s);

      const int a_count = game.state_max_actions(s);
      const int b_count = game.state_min_actions(s);
      for (int a = 0; a < a_count; ++a) {
        for (int b = 0; b < b_count; ++b) {
          const auto j = static_cast<std::size_t>(a * b_count + b);
          if (j >= node.successors.size()) continue;
          const Sequence child{x, role == Role::kMax ? a : b};
          for (const auto& succ : node.successors[j]) {
            state_parent[static_cast<std::size_t>(succ.next)] = child;
          }
        }
      }
    }
  }
  for (auto& level : tree.levels_) std::sort(level.begin(), level.end());
  for (std::size_t x = 0; x < count; ++x) {
    const Sequence& p = tree.parent_[x];
    if (!p.is_root()) {
      tree.children_[static_cast<std::size_t>(p.infoset)]
                    [static_cast<std::size_t>(p.action)]
                        .push_back(static_cast<InfoSetId>(x));
    }
  }
  return tree;
}

}  // namespace ixomd
