#include "ixomd/game_tree.hpp"

#include <cmath>
#include <sstream>

namespace ixomd {

Role parse_role(std::string_view text) {
  if (text == "max") return Role::kMax;
  if (text == "min") return Role::kMin;
  throw Error("unknown role '" + std::string(text) + "'");
}

InfoSetId GameTree::find_infoset(Role role, std::string_view label) const {
  const auto& labels = role == Role::kMax ? max_infoset_labels : min_infoset_labels;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    if (labels[x] == label) return static_cast<InfoSetId>(x);
  }
  throw Error("no " + std::string(to_string(role)) + " info set labelled '" +
              std::string(label) + "'");
}

std::string GameTree::infoset_label(Role role, InfoSetId x) const {
  const auto& labels = role == Role::kMax ? max_infoset_labels : min_infoset_labels;
  const auto i = static_cast<std::size_t>(x);
  if (i < labels.size() && !labels[i].empty()) return labels[i];
  return std::to_string(x);
}

std::vector<std::vector<StateId>> GameTree::states_by_level() const {
  std::vector<std::vector<StateId>> levels(static_cast<std::size_t>(horizon));
  for (std::size_t s = 0; s < states.size(); ++s) {
    const int level = states[s].level;
    if (level >= 0 && level < horizon) {
      levels[static_cast<std::size_t>(level)].push_back(static_cast<StateId>(s));
    }
  }
  return levels;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kIndexRange: return "index-range";
    case ViolationKind::kStochasticity: return "stochasticity";
    case ViolationKind::kRewardRange: return "reward-range";
    case ViolationKind::kTreeStructure: return "tree-structure";
    case ViolationKind::kLevelPartition: return "level-partition";
    case ViolationKind::kPerfectRecall: return "perfect-recall";
  }
  return "unknown";
}

bool ValidationReport::has(ViolationKind kind) const {
  for (const auto& v : violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << '[' << to_string(v.kind) << "] " << v.message << '\n';
  }
  return out.str();
}

namespace {

class Checker {
 public:
  explicit Checker(const GameTree& game) : game_(game) {}

  ValidationReport run() {
    if (!check_shape()) return std::move(report_);
    check_distributions();
    check_tree_structure();
    check_infosets(Role::kMax);
    check_infosets(Role::kMin);
    return std::move(report_);
  }

 private:
  template <typename... Parts>
  void add(ViolationKind kind, const Parts&... parts) {
    std::ostringstream out;
    (out << ... << parts);
    report_.violations.push_back({kind, out.str()});
  }

  bool check_counts(Role role) {
    bool ok = true;
    const auto& counts = role == Role::kMax ? game_.max_infoset_actions
                                            : game_.min_infoset_actions;
    const int bound = game_.action_bound(role);
    for (std::size_t x = 0; x < counts.size(); ++x) {
      if (counts[x] < 1 || counts[x] > bound) {
        add(ViolationKind::kIndexRange, to_string(role), " info set ", x,
            " has ", counts[x], " actions (bound ", bound, ")");
        ok = false;
      }
    }
    return ok;
  }

  // Index ranges and table sizes. Later checks assume these hold.
  bool check_shape() {
    bool ok = true;
    if (game_.horizon < 1) {
      add(ViolationKind::kIndexRange, "horizon ", game_.horizon, " < 1");
      return false;
    }
    if (game_.max_actions < 1 || game_.min_actions < 1) {
      add(ViolationKind::kIndexRange, "action bounds must be >= 1");
      return false;
    }
    ok = check_counts(Role::kMax) && ok;
    ok = check_counts(Role::kMin) && ok;
    for (const Role role : {Role::kMax, Role::kMin}) {
      const auto& labels = role == Role::kMax ? game_.max_infoset_labels
                                              : game_.min_infoset_labels;
      if (!labels.empty() && labels.size() != game_.num_infosets(role)) {
        add(ViolationKind::kIndexRange, to_string(role), " label count ",
            labels.size(), " differs from info-set count ",
            game_.num_infosets(role));
        ok = false;
      }
    }
    if (!ok) return false;
    const auto num_states = static_cast<StateId>(game_.states.size());
    for (StateId s = 0; s < num_states; ++s) {
      const StateNode& node = game_.states[static_cast<std::size_t>(s)];
      if (node.level < 0 || node.level >= game_.horizon) {
        add(ViolationKind::kIndexRange, "state ", s, " level ", node.level,
            " outside [0, ", game_.horizon, ")");
        ok = false;
        continue;
      }
      if (node.max_infoset < 0 ||
          static_cast<std::size_t>(node.max_infoset) >= game_.max_infoset_actions.size() ||
          node.min_infoset < 0 ||
          static_cast<std::size_t>(node.min_infoset) >= game_.min_infoset_actions.size()) {
        add(ViolationKind::kIndexRange, "state ", s, " has an unknown info set");
        ok = false;
        continue;
      }
      const auto joint = static_cast<std::size_t>(game_.state_max_actions(s) *
                                                  game_.state_min_actions(s));
      if (node.reward.size() != joint) {
        add(ViolationKind::kIndexRange, "state ", s, " has ", node.reward.size(),
            " rewards, expected ", joint);
        ok = false;
      }
      const bool last = node.level == game_.horizon - 1;
      const std::size_t expected_succ = last ? 0 : joint;
      if (node.successors.size() != expected_succ) {
        add(ViolationKind::kIndexRange, "state ", s, " has ",
            node.successors.size(), " successor lists, expected ",
            expected_succ);
        ok = false;
        continue;
      }
      for (const auto& list : node.successors) {
        for (const auto& succ : list) {
          if (succ.next < 0 || succ.next >= num_states) {
            add(ViolationKind::kIndexRange, "state ", s,
                " has successor out of range: ", succ.next);
            ok = false;
          }
        }
      }
    }
    for (const auto& init : game_.initial) {
      if (init.next < 0 || init.next >= num_states) {
        add(ViolationKind::kIndexRange, "initial state out of range: ",
            init.next);
        ok = false;
      }
    }
    return ok;
  }

  void check_vector(std::span<const Successor> dist, const std::string& what) {
    double total = 0.0;
    for (const auto& succ : dist) {
      if (!(succ.prob >= 0.0) || !std::isfinite(succ.prob)) {
        add(ViolationKind::kStochasticity, what, " has invalid probability ",
            succ.prob);
      }
      total += succ.prob;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
      add(ViolationKind::kStochasticity, what, " sums to ", total);
    }
  }

  void check_distributions() {
    check_vector(game_.initial, "initial distribution");
    for (std::size_t s = 0; s < game_.states.size(); ++s) {
      const StateNode& node = game_.states[s];
      for (std::size_t j = 0; j < node.reward.size(); ++j) {
        const double r = node.reward[j];
        if (!(r >= 0.0 && r <= 1.0)) {
          add(ViolationKind::kRewardRange, "state ", s, " joint action ", j,
              " reward ", r, " outside [0,1]");
        }
      }
      for (std::size_t j = 0; j < node.successors.size(); ++j) {
        std::ostringstream what;
        what << "transition (state " << s << ", joint action " << j << ")";
        check_vector(node.successors[j], what.str());
      }
    }
  }

  void check_tree_structure() {
    const std::size_t n = game_.states.size();
    std::vector<int> incoming(n, 0);
    parent_.assign(n, {-1, -1});
    for (const auto& init : game_.initial) {
      const auto idx = static_cast<std::size_t>(init.next);
      if (game_.states[idx].level != 0) {
        add(ViolationKind::kTreeStructure, "initial state ", init.next,
            " is not at level 1");
      }
      if (init.prob > 0.0) ++incoming[idx];
    }
    for (std::size_t s = 0; s < n; ++s) {
      const StateNode& node = game_.states[s];
      for (std::size_t j = 0; j < node.successors.size(); ++j) {
        for (const auto& succ : node.successors[j]) {
          const auto idx = static_cast<std::size_t>(succ.next);
          if (game_.states[idx].level != node.level + 1) {
            add(ViolationKind::kTreeStructure, "state ", s, " (level ",
                node.level + 1, ") transitions to state ", succ.next,
                " at level ", game_.states[idx].level + 1);
          }
          if (succ.prob > 0.0) {
            ++incoming[idx];
            parent_[idx] = {static_cast<StateId>(s), static_cast<int>(j)};
          }
        }
      }
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (incoming[s] != 1) {
        add(ViolationKind::kTreeStructure, "state ", s, " is reached by ",
            incoming[s], " histories (expected exactly 1)");
      }
    }
  }

  void check_infosets(Role role) {
    const std::size_t count = game_.num_infosets(role);
    std::vector<int> level(count, -1);
    std::vector<Sequence> parent(count);
    std::vector<bool> seen(count, false);
    for (std::size_t s = 0; s < game_.states.size(); ++s) {
      const StateNode& node = game_.states[s];
      const InfoSetId x = game_.infoset_of(role, static_cast<StateId>(s));
      const auto xi = static_cast<std::size_t>(x);
      Sequence seq;
      if (node.level > 0 && parent_[s].first >= 0) {
        const StateId p = parent_[s].first;
        const int joint = parent_[s].second;
        const int b_count = game_.state_min_actions(p);
        seq.infoset = game_.infoset_of(role, p);
        seq.action = role == Role::kMax ? joint / b_count : joint % b_count;
      }
      if (!seen[xi]) {
        seen[xi] = true;
        level[xi] = node.level;
        parent[xi] = seq;
        continue;
      }
      if (level[xi] != node.level) {
        add(ViolationKind::kLevelPartition, to_string(role), " info set ", x,
            " spans levels ", level[xi] + 1, " and ", node.level + 1);
      } else if (!(parent[xi] == seq)) {
        add(ViolationKind::kPerfectRecall, to_string(role), " info set ", x,
            " mixes own histories (", parent[xi].infoset, ",",
            parent[xi].action, ") and (", seq.infoset, ",", seq.action,
            ") at state ", s);
      }
    }
    for (std::size_t x = 0; x < count; ++x) {
      if (!seen[x]) {
        add(ViolationKind::kLevelPartition, to_string(role), " info set ", x,
            " contains no states");
      }
    }
  }

  const GameTree& game_;
  ValidationReport report_;
  std::vector<std::pair<StateId, int>> parent_;
};

}  // namespace

ValidationReport validate_game(const GameTree& game) {
  return Checker(game).run();
}

void require_valid(const GameTree& game) {
  const ValidationReport report = validate_game(game);
  if (!report.ok()) {
    throw Error("game '" + game.name + "' is not admissible:\n" +
                report.summary());
  }
}

}  // namespace ixomd
