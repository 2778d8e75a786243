#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "ixomd/episode.hpp"
#include "ixomd/evaluation.hpp"
#include "ixomd/game_io.hpp"
#include "ixomd/game_tree.hpp"
#include "ixomd/games.hpp"
#include "ixomd/infoset_tree.hpp"
#include "ixomd/realization_plan.hpp"
#include "oracles.hpp"

using namespace ixomd;

namespace {

// H levels, one state per level, single actions: the simplest valid tree.
GameTree chain_game(int H) {
  GameTree g;
  g.horizon = H;
  for (int h = 0; h < H; ++h) {
    StateNode node;
    node.level = h;
    node.max_infoset = h;
    node.min_infoset = h;
    node.reward = {0.5};
    if (h + 1 < H) node.successors = {{{h + 1, 1.0}}};
    g.states.push_back(node);
    g.max_infoset_actions.push_back(1);
    g.min_infoset_actions.push_back(1);
  }
  g.initial = {{0, 1.0}};
  return g;
}

// Depth-2 binary tree for the max player (B = 1). Level-2 states are told
// apart by the max player's first action unless `merge` puts both in one
// info set, which breaks perfect recall.
GameTree binary_tree(bool merge) {
  GameTree g;
  g.horizon = 2;
  g.max_actions = 2;
  StateNode root;
  root.level = 0;
  root.max_infoset = 0;
  root.min_infoset = 0;
  root.reward = {0.2, 0.7};
  root.successors = {{{1, 1.0}}, {{2, 1.0}}};
  g.states.push_back(root);
  for (int a = 0; a < 2; ++a) {
    StateNode leaf;
    leaf.level = 1;
    leaf.max_infoset = merge ? 1 : 1 + a;
    leaf.min_infoset = 1;
    leaf.reward = {0.1 * (a + 1), 0.9};
    g.states.push_back(leaf);
  }
  g.max_infoset_actions = merge ? std::vector<int>{2, 2} : std::vector<int>{2, 2, 2};
  g.min_infoset_actions = {1, 1};
  g.initial = {{0, 1.0}};
  return g;
}

GameTree small_random(std::uint64_t seed, int H = 3) {
  RandomTreeParams p;
  p.horizon = H;
  p.max_actions = 2;
  p.min_actions = 2;
  p.branching = 2;
  p.signals = 2;
  p.seed = seed;
  return build_random_tree(p);
}

}  // namespace

TEST(ValidateGame, BenchmarksAreAdmissible) {
  EXPECT_TRUE(validate_game(build_kuhn()).ok()) << validate_game(build_kuhn()).summary();
  EXPECT_TRUE(validate_game(build_matrix_game({{1, 0}, {0, 1}})).ok());
  EXPECT_TRUE(validate_game(chain_game(4)).ok());
  EXPECT_TRUE(validate_game(binary_tree(false)).ok());
}

TEST(ValidateGame, DetectsPerfectRecallBreach) {
  const auto report = validate_game(binary_tree(true));
  EXPECT_TRUE(report.has(ViolationKind::kPerfectRecall)) << report.summary();
}

TEST(ValidateGame, DetectsLevelPartitionBreach) {
  GameTree g = chain_game(2);
  g.states[1].max_infoset = 0;
  g.max_infoset_actions.pop_back();
  const auto report = validate_game(g);
  EXPECT_TRUE(report.has(ViolationKind::kLevelPartition)) << report.summary();
}

TEST(ValidateGame, DetectsSharedSuccessor) {
  // Both root actions lead to the same state: two histories reach it.
  GameTree g = binary_tree(false);
  g.states[0].successors = {{{1, 1.0}}, {{1, 1.0}}};
  const auto report = validate_game(g);
  EXPECT_TRUE(report.has(ViolationKind::kTreeStructure)) << report.summary();
}

TEST(ValidateGame, DetectsBadProbabilitiesAndRewards) {
  GameTree g = chain_game(2);
  g.states[0].successors = {{{1, 0.9}}};
  g.states[1].reward = {1.5};
  const auto report = validate_game(g);
  EXPECT_TRUE(report.has(ViolationKind::kStochasticity));
  EXPECT_TRUE(report.has(ViolationKind::kRewardRange));
  g.initial = {{0, -0.5}, {1, 1.5}};
  EXPECT_TRUE(validate_game(g).has(ViolationKind::kStochasticity));
}

TEST(ValidateGame, DetectsIndexErrorsWithoutCrashing) {
  GameTree g = chain_game(2);
  g.states[0].successors = {{{7, 1.0}}};
  EXPECT_TRUE(validate_game(g).has(ViolationKind::kIndexRange));
  g = chain_game(2);
  g.states[1].reward = {0.1, 0.2};
  EXPECT_TRUE(validate_game(g).has(ViolationKind::kIndexRange));
  EXPECT_THROW(require_valid(g), Error);
}

TEST(InfoSetTree, MatrixGameHasSingleRoots) {
  const GameTree g = build_matrix_game({{0.2, 0.4, 0.6}, {1, 0, 0.5}});
  for (const Role role : {Role::kMax, Role::kMin}) {
    const InfoSetTree tree = build_infoset_tree(g, role);
    ASSERT_EQ(tree.size(), 1u);
    EXPECT_TRUE(tree.parent(0).is_root());
    EXPECT_EQ(tree.roots().size(), 1u);
  }
}

TEST(InfoSetTree, ChainIsLinear) {
  const InfoSetTree tree = build_infoset_tree(chain_game(5), Role::kMax);
  ASSERT_EQ(tree.horizon(), 5);
  for (InfoSetId x = 1; x < 5; ++x) {
    EXPECT_EQ(tree.parent(x), (Sequence{x - 1, 0}));
    EXPECT_EQ(tree.level_of(x), x);
  }
}

TEST(InfoSetTree, KuhnDecisionCountsMatchHistoryEnumeration) {
  const GameTree g = build_kuhn();
  // Independent count: each player decides with each of 3 cards at 2
  // public betting histories ("" and "cb" for the first player, "c" and "b"
  // for the second).
  for (const Role role : {Role::kMax, Role::kMin}) {
    const InfoSetTree tree = build_infoset_tree(g, role);
    EXPECT_EQ(tree.num_decision_infosets(), 6u);
    for (InfoSetId x = 0; x < static_cast<InfoSetId>(tree.size()); ++x) {
      if (tree.level_of(x) > 0) {
        EXPECT_EQ(tree.level_of(tree.parent(x).infoset), tree.level_of(x) - 1);
      }
    }
  }
}

TEST(InfoSetTree, RejectsInconsistentParents) {
  EXPECT_THROW(build_infoset_tree(binary_tree(true), Role::kMax), Error);
}

TEST(RealizationPlan, UniformDepthTwoBinaryTree) {
  const GameTree g = binary_tree(false);
  const InfoSetTree tree = build_infoset_tree(g, Role::kMax);
  const RealizationPlan plan = realization_plan(tree, BehaviorPolicy(Role::kMax));
  for (const InfoSetId x : tree.level(1)) {
    for (Action a = 0; a < 2; ++a) EXPECT_DOUBLE_EQ(plan.weight(x, a), 0.25);
  }
}

TEST(RealizationPlan, DeterministicPolicyGivesUnitPath) {
  const GameTree g = binary_tree(false);
  const InfoSetTree tree = build_infoset_tree(g, Role::kMax);
  BehaviorPolicy pol(Role::kMax);
  for (InfoSetId x = 0; x < 3; ++x) pol.set(x, std::vector<double>{0.0, 1.0});
  const RealizationPlan plan = realization_plan(tree, pol);
  int ones = 0;
  for (const InfoSetId x : tree.level(1)) {
    for (Action a = 0; a < 2; ++a) {
      const double w = plan.weight(x, a);
      EXPECT_TRUE(w == 0.0 || w == 1.0);
      ones += w == 1.0;
    }
  }
  EXPECT_EQ(ones, 1);
}

TEST(RealizationPlan, KuhnUniformMatchesHistoryProducts) {
  const GameTree g = build_kuhn();
  for (const Role role : {Role::kMax, Role::kMin}) {
    const InfoSetTree tree = build_infoset_tree(g, role);
    const BehaviorPolicy uniform(role);
    const RealizationPlan plan = realization_plan(tree, uniform);
    const auto brute = oracle::history_product_plan(g, role, uniform);
    for (std::size_t x = 0; x < brute.size(); ++x) {
      for (std::size_t a = 0; a < brute[x].size(); ++a) {
        EXPECT_NEAR(plan.weights[x][a], brute[x][a], 1e-12);
      }
    }
  }
}

TEST(RealizationPlan, ConsistencyAndInverseOnRandomPolicies) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GameTree g = small_random(seed);
    Rng rng(seed);
    for (const Role role : {Role::kMax, Role::kMin}) {
      const InfoSetTree tree = build_infoset_tree(g, role);
      const BehaviorPolicy pol = oracle::random_policy(tree, rng);
      const RealizationPlan plan = realization_plan(tree, pol);
      EXPECT_LE(consistency_error(tree, plan), 1e-12);
      const auto brute = oracle::history_product_plan(g, role, pol);
      const BehaviorPolicy back = policy_from_plan(tree, plan);
      for (std::size_t x = 0; x < tree.size(); ++x) {
        const int n = tree.num_actions(static_cast<InfoSetId>(x));
        for (Action a = 0; a < n; ++a) {
          EXPECT_NEAR(plan.weights[x][static_cast<std::size_t>(a)],
                      brute[x][static_cast<std::size_t>(a)], 1e-12);
          EXPECT_NEAR(back.prob(static_cast<InfoSetId>(x), a, n),
                      pol.prob(static_cast<InfoSetId>(x), a, n), 1e-12);
        }
      }
    }
  }
}

TEST(RealizationPlan, RejectsForeignRows) {
  const GameTree g = build_kuhn();
  const InfoSetTree tree = build_infoset_tree(g, Role::kMax);
  BehaviorPolicy wrong_role(Role::kMin);
  EXPECT_THROW(realization_plan(tree, wrong_role), Error);
  BehaviorPolicy unknown(Role::kMax);
  unknown.set(100000, std::vector<double>{0.5, 0.5});
  EXPECT_THROW(realization_plan(tree, unknown), Error);
}

TEST(Properties, ProbabilityConservationPerLevel) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const GameTree g = small_random(seed, 4);
    Rng rng(seed + 100);
    const BehaviorPolicy mu = oracle::random_policy(build_infoset_tree(g, Role::kMax), rng);
    const BehaviorPolicy nu = oracle::random_policy(build_infoset_tree(g, Role::kMin), rng);
    // With every reward set to 1, the expected reward at step h is the
    // total reach mass of level h.
    GameTree ones = g;
    for (auto& node : ones.states) std::fill(node.reward.begin(), node.reward.end(), 1.0);
    const auto steps = expected_step_rewards(ones, mu, nu);
    for (const double m : steps) EXPECT_NEAR(m, 1.0, 1e-9);
  }
}

TEST(SampleEpisode, SameSeedSameEpisode) {
  const GameTree g = build_kuhn();
  const BehaviorPolicy mu(Role::kMax), nu(Role::kMin);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng r1(seed), r2(seed);
    for (int i = 0; i < 50; ++i) {
      const Episode e1 = sample_episode(g, mu, nu, r1);
      const Episode e2 = sample_episode(g, mu, nu, r2);
      EXPECT_EQ(e1.max, e2.max);
      EXPECT_EQ(e1.min, e2.min);
      EXPECT_EQ(e1.states, e2.states);
    }
  }
}

TEST(SampleEpisode, DeterministicGameIgnoresSeed) {
  const GameTree g = binary_tree(false);
  BehaviorPolicy mu(Role::kMax);
  mu.set(0, std::vector<double>{0.0, 1.0});
  mu.set(2, std::vector<double>{1.0, 0.0});
  const BehaviorPolicy nu(Role::kMin);
  Rng r1(1), r2(999);
  const Episode e1 = sample_episode(g, mu, nu, r1);
  const Episode e2 = sample_episode(g, mu, nu, r2);
  EXPECT_EQ(e1.max.steps, e2.max.steps);
  ASSERT_EQ(e1.max.steps.size(), 2u);
  EXPECT_EQ(e1.max.steps[0].action, 1);
  EXPECT_EQ(e1.max.steps[1].infoset, 2);
  EXPECT_DOUBLE_EQ(e1.max.steps[1].reward, 0.2);
}

TEST(SampleEpisode, TrajectoriesCarryOwnViewOnly) {
  const GameTree g = build_kuhn();
  Rng rng(3);
  const Episode e = sample_episode(g, BehaviorPolicy(Role::kMax), BehaviorPolicy(Role::kMin), rng);
  ASSERT_EQ(e.max.steps.size(), 3u);
  ASSERT_EQ(e.min.steps.size(), 3u);
  const InfoSetTree tmax = build_infoset_tree(g, Role::kMax);
  const InfoSetTree tmin = build_infoset_tree(g, Role::kMin);
  for (std::size_t h = 1; h < 3; ++h) {
    EXPECT_EQ(tmax.parent(e.max.steps[h].infoset),
              (Sequence{e.max.steps[h - 1].infoset, e.max.steps[h - 1].action}));
    EXPECT_EQ(tmin.parent(e.min.steps[h].infoset),
              (Sequence{e.min.steps[h - 1].infoset, e.min.steps[h - 1].action}));
    EXPECT_EQ(e.max.steps[h].reward, e.min.steps[h].reward);
  }
}

TEST(SampleEpisode, MatrixFrequenciesWithinThreeSigma) {
  const GameTree g = build_matrix_game({{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}});
  const BehaviorPolicy mu(Role::kMax), nu(Role::kMin);
  Rng rng(12345);
  const int N = 100000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < N; ++i) {
    const Episode e = sample_episode(g, mu, nu, rng);
    ++counts[static_cast<std::size_t>(e.max.steps[0].action * 3 + e.min.steps[0].action)];
  }
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(N * p * (1 - p));
  for (const int c : counts) EXPECT_LE(std::abs(c - N * p), 3 * sigma);
}

TEST(SampleEpisode, PathFrequenciesMatchEnumeration) {
  const GameTree g = small_random(77);
  Rng prng(5);
  const BehaviorPolicy mu = oracle::random_policy(build_infoset_tree(g, Role::kMax), prng, 0.3);
  const BehaviorPolicy nu = oracle::random_policy(build_infoset_tree(g, Role::kMin), prng, 0.3);
  const auto paths = oracle::enumerate_paths(g, mu, nu);
  std::map<std::vector<StateId>, double> exact;
  for (const auto& path : paths) {
    std::vector<StateId> key = path.states;
    for (std::size_t h = 0; h < path.states.size(); ++h) {
      key.push_back(path.max_actions[h] * 10 + path.min_actions[h]);
    }
    exact[key] += path.prob;
  }
  std::map<std::vector<StateId>, int> seen;
  Rng rng(2024);
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const Episode e = sample_episode(g, mu, nu, rng);
    std::vector<StateId> key = e.states;
    for (std::size_t h = 0; h < e.states.size(); ++h) {
      key.push_back(e.max.steps[h].action * 10 + e.min.steps[h].action);
    }
    ++seen[key];
  }
  for (const auto& [key, n] : seen) ASSERT_TRUE(exact.contains(key));
  for (const auto& [key, p] : exact) {
    const double sigma = std::sqrt(N * p * (1 - p));
    EXPECT_LE(std::abs(seen[key] - N * p), 4.5 * sigma + 1.0);
  }
}

TEST(GameIo, RoundTripIsIdentity) {
  for (const GameTree& g : {build_kuhn(), build_leduc(), small_random(9),
                            build_matrix_game({{0.25, 1}, {0, 1.0 / 3}})}) {
    const std::string text = serialize_game(g);
    const GameTree back = parse_game_string(text);
    EXPECT_EQ(back, g);
    EXPECT_EQ(serialize_game(back), text);
  }
}

TEST(GameIo, ReportsLineOfBadRecord) {
  const std::string bad = "ixomd-game 1\nhorizon 1\nactions 1 1\nstates 1\nstate 0 1 0 0\nbogus 3\nend\n";
  try {
    parse_game_string(bad);
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 6"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_game_string("ixomd-game 2\nend\n"), Error);
  EXPECT_THROW(parse_game_string("ixomd-game 1\nhorizon 1\nactions 1 1\n"), Error);
}

TEST(GameIo, HandWrittenFileParses) {
  const std::string text = R"(ixomd-game 1
# two-action matching pennies on [0,1]
name pennies
horizon 1
actions 2 2
infosets 1 1
states 1
state 0 1 0 0
initial 0 1
reward 0 0 0 1
reward 0 1 1 1
end
)";
  const GameTree g = parse_game_string(text);
  EXPECT_TRUE(validate_game(g).ok());
  EXPECT_DOUBLE_EQ(g.states[0].reward[1], 0.0);
  EXPECT_DOUBLE_EQ(expected_value(g, BehaviorPolicy(Role::kMax), BehaviorPolicy(Role::kMin)), 0.5);
}
