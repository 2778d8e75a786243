#include "ixomd/episode.hpp"

#include <algorithm>

namespace ixomd {

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cumulative += probs[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

std::uint64_t mix_seed(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

StateId sample_successor(std::span<const Successor> dist, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  StateId last_positive = dist.front().next;
  for (const auto& succ : dist) {
    if (succ.prob <= 0.0) continue;
    cumulative += succ.prob;
    last_positive = succ.next;
    if (u < cumulative) return succ.next;
  }
  return last_positive;
}

}  // namespace

Episode sample_episode(const GameTree& game, const BehaviorPolicy& mu,
                       const BehaviorPolicy& nu, Rng& rng) {
  Episode episode;
  episode.max.role = Role::kMax;
  episode.min.role = Role::kMin;
  const auto horizon = static_cast<std::size_t>(game.horizon);
  episode.max.steps.reserve(horizon);
  episode.min.steps.reserve(horizon);
  episode.states.reserve(horizon);

  std::vector<double> probs(static_cast<std::size_t>(
      std::max(game.max_actions, game.min_actions)));
  StateId s = sample_successor(game.initial, rng);
  for (std::size_t h = 0; h < horizon; ++h) {
    const StateNode& node = game.states[static_cast<std::size_t>(s)];
    episode.states.push_back(s);
    const int a_count = game.state_max_actions(s);
    const int b_count = game.state_min_actions(s);

    mu.fill(node.max_infoset, a_count, probs);
    const auto a = static_cast<Action>(
        sample_index(std::span<const double>(probs.data(), static_cast<std::size_t>(a_count)), rng));
    nu.fill(node.min_infoset, b_count, probs);
    const auto b = static_cast<Action>(
        sample_index(std::span<const double>(probs.data(), static_cast<std::size_t>(b_count)), rng));

    const auto joint = static_cast<std::size_t>(a * b_count + b);
    const double r = node.reward[joint];
    episode.max.steps.push_back({node.max_infoset, a, a_count, r});
    episode.min.steps.push_back({node.min_infoset, b, b_count, r});
    if (h + 1 < horizon) s = sample_successor(node.successors[joint], rng);
  }
  return episode;
}

}  // namespace ixomd
