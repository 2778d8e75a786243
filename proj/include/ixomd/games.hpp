#ifndef IXOMD_GAMES_HPP
#define IXOMD_GAMES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ixomd/game_tree.hpp"

namespace ixomd {

// One-shot game: H = 1, a single state, one info set per player.
// Entries must lie in [0, 1]; payoff[a][b] is the max player's reward.
GameTree build_matrix_game(const std::vector<std::vector<double>>& payoff);

// Whitespace-separated rows, one per max action.
GameTree load_matrix_game(const std::string& path);

// Kuhn poker (3 cards, ante 1, bet 1), H = 3. Chip payoffs in [-2, 2] are
// mapped per step by r = (chips + 2) / 4.
GameTree build_kuhn();

// Leduc hold'em (J,J,Q,Q,K,K; ante 1; bets 2 then 4; at most two raises per
// round), H = 8. Chip payoffs in [-13, 13] are mapped by r = (chips + 13) / 26.
GameTree build_leduc();

struct RandomTreeParams {
  int horizon = 3;
  int max_actions = 2;
  int min_actions = 2;
  int branching = 2;     // chance successors per (state, a, b)
  std::uint64_t seed = 0;
  int signals = 2;       // observation alphabet size per player and step
  double reward_low = 0.0;
  double reward_high = 1.0;
  std::size_t max_level_width = std::size_t{1} << 20;

  void validate() const;
};

// Random tree-structured game. Each new state emits one signal per player;
// an info set is the player's own history of (signal, action) pairs, so
// perfect recall holds by construction. Throws Error if a level would hold
// more than `max_level_width` states.
GameTree build_random_tree(const RandomTreeParams& params);

// "H,A,B,branching,seed[,signals]"
RandomTreeParams parse_random_params(const std::string& text);

// kuhn | leduc | matrix:<file> | random:<params> | file:<game file>
GameTree load_game_spec(const std::string& spec);

}  // namespace ixomd

#endif  // IXOMD_GAMES_HPP
