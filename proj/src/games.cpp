#include "ixomd/games.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "ixomd/episode.hpp"
#include "ixomd/game_io.hpp"

namespace ixomd {

GameTree build_matrix_game(const std::vector<std::vector<double>>& payoff) {
  if (payoff.empty() || payoff.front().empty()) {
    throw Error("matrix game needs at least one row and one column");
  }
  const std::size_t cols = payoff.front().size();
  GameTree game;
  game.name = "matrix";
  game.horizon = 1;
  game.max_actions = static_cast<int>(payoff.size());
  game.min_actions = static_cast<int>(cols);
  game.max_infoset_actions = {game.max_actions};
  game.min_infoset_actions = {game.min_actions};
  StateNode node;
  for (const auto& row : payoff) {
    if (row.size() != cols) throw Error("matrix game rows differ in length");
    for (const double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error("matrix entry " + format_double(v) + " outside [0,1]");
      }
      node.reward.push_back(v);
    }
  }
  game.states.push_back(std::move(node));
  game.initial = {{0, 1.0}};
  return game;
}

GameTree load_matrix_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open matrix file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<double> row;
    double v = 0.0;
    while (fields >> v) row.push_back(v);
    if (!fields.eof()) throw Error("bad number in matrix file '" + path + "'");
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return build_matrix_game(rows);
}

namespace {

// Two-player limit poker with public betting, expanded into a fixed-horizon
// POMG: one betting action per step, the idle player has a single no-op
// action, and finished hands are padded with zero-chip absorbing states.
struct PokerRules {
  std::string name;
  std::vector<int> rank_counts;  // copies of each rank in the deck
  std::vector<int> bet_sizes;    // per round
  int max_raises = 1;            // bets + raises allowed per round
  int ante = 1;

  int rounds() const { return static_cast<int>(bet_sizes.size()); }
  int max_round_length() const { return max_raises + 2; }
  int horizon() const { return rounds() * max_round_length(); }
  int max_chips() const {
    int total = ante;
    for (const int size : bet_sizes) total += max_raises * size;
    return total;
  }
};

struct PokerNode {
  int cards[2] = {0, 0};
  int public_card = -1;
  int round = 0;
  int raises = 0;
  int actions_in_round = 0;
  bool facing_bet = false;
  int contrib[2] = {0, 0};
  bool finished = false;
  std::string history;
};

int acting_player(const PokerNode& node) {
  return node.actions_in_round % 2;
}

int legal_action_count(const PokerRules& rules, const PokerNode& node) {
  if (!node.facing_bet) return 2;                     // check, bet
  return node.raises < rules.max_raises ? 3 : 2;      // fold, call[, raise]
}

// Rank strength at showdown: a pair with the public card beats any high card.
int showdown_chips(const PokerNode& node) {
  auto strength = [&](int card) {
    return (card == node.public_card ? 100 : 0) + card;
  };
  const int s0 = strength(node.cards[0]);
  const int s1 = strength(node.cards[1]);
  if (s0 == s1) return 0;
  return s0 > s1 ? node.contrib[1] : -node.contrib[0];
}

class PokerBuilder {
 public:
  explicit PokerBuilder(PokerRules rules) : rules_(std::move(rules)) {
    horizon_ = rules_.horizon();
    max_chips_ = rules_.max_chips();
  }

  GameTree build() {
    game_.name = rules_.name;
    game_.horizon = horizon_;
    game_.max_actions = 1;
    game_.min_actions = 1;
    game_.scale = {2.0 * max_chips_, -static_cast<double>(max_chips_)};

    const int ranks = static_cast<int>(rules_.rank_counts.size());
    int deck = 0;
    for (const int c : rules_.rank_counts) deck += c;
    for (int c0 = 0; c0 < ranks; ++c0) {
      for (int c1 = 0; c1 < ranks; ++c1) {
        const int left = rules_.rank_counts[static_cast<std::size_t>(c1)] - (c0 == c1 ? 1 : 0);
        if (left <= 0) continue;
        const double p = static_cast<double>(rules_.rank_counts[static_cast<std::size_t>(c0)]) / deck *
                         static_cast<double>(left) / (deck - 1);
        PokerNode node;
        node.cards[0] = c0;
        node.cards[1] = c1;
        node.contrib[0] = node.contrib[1] = rules_.ante;
        game_.initial.push_back({expand(0, node), p});
      }
    }
    return std::move(game_);
  }

 private:
  InfoSetId infoset(Role role, int level, const PokerNode& node, int actions) {
    const int player = role == Role::kMax ? 0 : 1;
    // e.g. "h3/J/-/cb": step, own card, public card, public betting history.
    static constexpr char kRanks[] = "JQKABCDEFGHI";
    std::ostringstream key;
    key << 'h' << level + 1 << '/' << kRanks[node.cards[player]] << '/'
        << (node.public_card < 0 ? '-' : kRanks[node.public_card]) << '/'
        << node.history << (node.finished ? "/end" : "");
    auto& ids = role == Role::kMax ? max_ids_ : min_ids_;
    auto& counts = role == Role::kMax ? game_.max_infoset_actions
                                      : game_.min_infoset_actions;
    const auto [it, inserted] =
        ids.emplace(key.str(), static_cast<InfoSetId>(counts.size()));
    if (inserted) {
      counts.push_back(actions);
      (role == Role::kMax ? game_.max_infoset_labels : game_.min_infoset_labels)
          .push_back(key.str());
      int& bound = role == Role::kMax ? game_.max_actions : game_.min_actions;
      bound = std::max(bound, actions);
    }
    return it->second;
  }

  double mapped(int chips) const {
    return static_cast<double>(chips + max_chips_) / (2.0 * max_chips_);
  }

  // Applies the acting player's action; returns chips won by player 0 if the
  // hand ends, and the successor node(s) with their chance probabilities.
  int apply(const PokerNode& node, int action,
            std::vector<std::pair<PokerNode, double>>& next) const {
    PokerNode child = node;
    const int player = acting_player(node);
    const int bet = rules_.bet_sizes[static_cast<std::size_t>(node.round)];
    int chips = 0;
    bool round_over = false;
    if (!node.facing_bet) {
      if (action == 0) {  // check
        child.history += 'c';
        round_over = node.actions_in_round > 0;
      } else {            // bet
        child.history += 'b';
        child.contrib[player] = node.contrib[1 - player] + bet;
        child.raises += 1;
        child.facing_bet = true;
      }
    } else if (action == 0) {  // fold
      child.history += 'f';
      child.finished = true;
      chips = player == 0 ? -node.contrib[0] : node.contrib[1];
    } else if (action == 1) {  // call
      child.history += 'k';
      child.contrib[player] = node.contrib[1 - player];
      child.facing_bet = false;
      round_over = true;
    } else {                   // raise
      child.history += 'r';
      child.contrib[player] = node.contrib[1 - player] + bet;
      child.raises += 1;
    }
    child.actions_in_round += 1;
    if (child.finished) {
      next.emplace_back(child, 1.0);
      return chips;
    }
    if (!round_over) {
      next.emplace_back(child, 1.0);
      return 0;
    }
    if (child.round + 1 == rules_.rounds()) {
      child.finished = true;
      const int result = showdown_chips(child);
      next.emplace_back(child, 1.0);
      return result;
    }
    // Deal the public card and start the next round.
    child.round += 1;
    child.raises = 0;
    child.actions_in_round = 0;
    child.facing_bet = false;
    child.history += ':';
    std::vector<int> left = rules_.rank_counts;
    left[static_cast<std::size_t>(child.cards[0])] -= 1;
    left[static_cast<std::size_t>(child.cards[1])] -= 1;
    int remaining = 0;
    for (const int c : left) remaining += c;
    for (std::size_t rank = 0; rank < left.size(); ++rank) {
      if (left[rank] <= 0) continue;
      PokerNode dealt = child;
      dealt.public_card = static_cast<int>(rank);
      next.emplace_back(dealt, static_cast<double>(left[rank]) / remaining);
    }
    return 0;
  }

  StateId expand(int level, const PokerNode& node) {
    const int actor = acting_player(node);
    const int legal = node.finished ? 1 : legal_action_count(rules_, node);
    const int a_count = (!node.finished && actor == 0) ? legal : 1;
    const int b_count = (!node.finished && actor == 1) ? legal : 1;

    const auto id = static_cast<StateId>(game_.states.size());
    game_.states.emplace_back();
    {
      StateNode& state = game_.states.back();
      state.level = level;
      state.max_infoset = infoset(Role::kMax, level, node, a_count);
      state.min_infoset = infoset(Role::kMin, level, node, b_count);
    }
    std::vector<double> reward(static_cast<std::size_t>(a_count * b_count));
    std::vector<std::vector<Successor>> successors;
    const bool last = level + 1 == horizon_;
    if (!last) successors.resize(reward.size());

    for (int a = 0; a < a_count; ++a) {
      for (int b = 0; b < b_count; ++b) {
        const auto j = static_cast<std::size_t>(a * b_count + b);
        std::vector<std::pair<PokerNode, double>> next;
        int chips = 0;
        if (node.finished) {
          next.emplace_back(node, 1.0);
        } else {
          chips = apply(node, actor == 0 ? a : b, next);
        }
        reward[j] = mapped(chips);
        if (last) continue;
        for (const auto& [child, p] : next) {
          successors[j].push_back({expand(level + 1, child), p});
        }
      }
    }
    StateNode& state = game_.states[static_cast<std::size_t>(id)];
    state.reward = std::move(reward);
    state.successors = std::move(successors);
    return id;
  }

  PokerRules rules_;
  int horizon_ = 1;
  int max_chips_ = 1;
  GameTree game_;
  std::map<std::string, InfoSetId> max_ids_;
  std::map<std::string, InfoSetId> min_ids_;
};

}  // namespace

GameTree build_kuhn() {
  return PokerBuilder({"kuhn", {1, 1, 1}, {1}, 1, 1}).build();
}

GameTree build_leduc() {
  return PokerBuilder({"leduc", {2, 2, 2}, {2, 4}, 2, 1}).build();
}

void RandomTreeParams::validate() const {
  if (horizon < 1 || max_actions < 1 || min_actions < 1 || branching < 1 ||
      signals < 1) {
    throw Error("random tree parameters must satisfy H, A, B, branching, signals >= 1");
  }
  if (!(reward_low >= 0.0 && reward_low <= reward_high && reward_high <= 1.0)) {
    throw Error("random tree reward range must lie within [0,1]");
  }
}

GameTree build_random_tree(const RandomTreeParams& params) {
  params.validate();
  Rng rng(mix_seed(params.seed));
  GameTree game;
  game.name = "random";
  game.horizon = params.horizon;
  game.max_actions = params.max_actions;
  game.min_actions = params.min_actions;

  const auto joint = static_cast<std::size_t>(params.max_actions * params.min_actions);
  auto random_distribution = [&](int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& v : w) {
      v = 0.1 + uniform01(rng);
      total += v;
    }
    for (double& v : w) v /= total;
    return w;
  };

  // Info set of a new state = (own parent sequence, signal).
  std::map<std::tuple<InfoSetId, Action, int>, InfoSetId> max_ids;
  std::map<std::tuple<InfoSetId, Action, int>, InfoSetId> min_ids;
  auto label = [&](Role role, Sequence parent) {
    const int signal = static_cast<int>(rng() % static_cast<std::uint64_t>(params.signals));
    auto& ids = role == Role::kMax ? max_ids : min_ids;
    auto& counts = role == Role::kMax ? game.max_infoset_actions
                                      : game.min_infoset_actions;
    const auto [it, inserted] = ids.emplace(
        std::make_tuple(parent.infoset, parent.action, signal),
        static_cast<InfoSetId>(counts.size()));
    if (inserted) counts.push_back(game.action_bound(role));
    return it->second;
  };
  auto new_state = [&](int level, Sequence max_parent, Sequence min_parent) {
    StateNode node;
    node.level = level;
    node.max_infoset = label(Role::kMax, max_parent);
    node.min_infoset = label(Role::kMin, min_parent);
    node.reward.resize(joint);
    for (double& r : node.reward) {
      r = params.reward_low + (params.reward_high - params.reward_low) * uniform01(rng);
    }
    game.states.push_back(std::move(node));
    return static_cast<StateId>(game.states.size() - 1);
  };

  std::vector<StateId> frontier;
  const auto p0 = random_distribution(params.branching);
  for (int k = 0; k < params.branching; ++k) {
    const StateId s = new_state(0, Sequence{}, Sequence{});
    game.initial.push_back({s, p0[static_cast<std::size_t>(k)]});
    frontier.push_back(s);
  }
  for (int level = 1; level < params.horizon; ++level) {
    const std::size_t width = frontier.size() * joint *
                              static_cast<std::size_t>(params.branching);
    if (width > params.max_level_width) {
      throw Error("random tree level " + std::to_string(level + 1) + " would hold " +
                  std::to_string(width) + " states (cap " +
                  std::to_string(params.max_level_width) + ")");
    }
    std::vector<StateId> next_frontier;
    next_frontier.reserve(width);
    for (const StateId s : frontier) {
      std::vector<std::vector<Successor>> lists(joint);
      const InfoSetId x = game.states[static_cast<std::size_t>(s)].max_infoset;
      const InfoSetId y = game.states[static_cast<std::size_t>(s)].min_infoset;
      for (int a = 0; a < params.max_actions; ++a) {
        for (int b = 0; b < params.min_actions; ++b) {
          const auto j = static_cast<std::size_t>(a * params.min_actions + b);
          const auto probs = random_distribution(params.branching);
          for (int k = 0; k < params.branching; ++k) {
            const StateId child = new_state(level, {x, a}, {y, b});
            lists[j].push_back({child, probs[static_cast<std::size_t>(k)]});
            next_frontier.push_back(child);
          }
        }
      }
      game.states[static_cast<std::size_t>(s)].successors = std::move(lists);
    }
    frontier = std::move(next_frontier);
  }
  return game;
}

RandomTreeParams parse_random_params(const std::string& text) {
  std::vector<long long> values;
  std::istringstream in(text);
  std::string field;
  while (std::getline(in, field, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stoll(field, &used));
      if (used != field.size()) throw Error("trailing characters");
    } catch (const std::exception&) {
      throw Error("bad random-tree parameter '" + field + "'");
    }
  }
  if (values.size() != 5 && values.size() != 6) {
    throw Error("random tree spec must be H,A,B,branching,seed[,signals]");
  }
  RandomTreeParams params;
  params.horizon = static_cast<int>(values[0]);
  params.max_actions = static_cast<int>(values[1]);
  params.min_actions = static_cast<int>(values[2]);
  params.branching = static_cast<int>(values[3]);
  params.seed = static_cast<std::uint64_t>(values[4]);
  if (values.size() == 6) params.signals = static_cast<int>(values[5]);
  params.validate();
  return params;
}

GameTree load_game_spec(const std::string& spec) {
  if (spec == "kuhn") return build_kuhn();
  if (spec == "leduc") return build_leduc();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    if (kind == "matrix") return load_matrix_game(arg);
    if (kind == "random") return build_random_tree(parse_random_params(arg));
    if (kind == "file") return load_game_file(arg);
  }
  throw Error("unknown game spec '" + spec +
              "' (expected kuhn, leduc, matrix:<file>, random:<params> or file:<path>)");
}

}  // namespace ixomd
