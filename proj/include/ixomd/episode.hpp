#ifndef IXOMD_EPISODE_HPP
#define IXOMD_EPISODE_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ixomd/game_tree.hpp"
#include "ixomd/policy.hpp"

namespace ixomd {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits, so draws are
// reproducible independent of the standard library's distributions.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index drawn from a probability vector by inverse CDF.
std::size_t sample_index(std::span<const double> probs, Rng& rng);

// SplitMix64 finalizer, used to derive independent generator seeds.
std::uint64_t mix_seed(std::uint64_t seed);

// What one player sees at one step. `num_actions` is the action oracle's
// answer for the observed info set; the model itself is never exposed.
struct Step {
  InfoSetId infoset = 0;
  Action action = 0;
  int num_actions = 1;
  double reward = 0.0;  // raw r_h in [0,1] for both roles
  friend bool operator==(const Step&, const Step&) = default;
};

struct Trajectory {
  Role role = Role::kMax;
  std::uint64_t episode = 0;
  std::vector<Step> steps;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct Episode {
  Trajectory max;
  Trajectory min;
  std::vector<StateId> states;  // ground-truth state sequence (evaluation only)
};

// Plays one episode. Precondition: validate_game(game) is empty.
Episode sample_episode(const GameTree& game, const BehaviorPolicy& mu,
                       const BehaviorPolicy& nu, Rng& rng);

}  // namespace ixomd

#endif  // IXOMD_EPISODE_HPP
