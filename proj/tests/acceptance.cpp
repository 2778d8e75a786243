// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Files are written to the working directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ixomd/episode.hpp"
#include "ixomd/evaluation.hpp"
#include "ixomd/games.hpp"
#include "ixomd/harness.hpp"
#include "ixomd/learner.hpp"
#include "ixomd/realization_plan.hpp"
#include "oracles.hpp"

namespace {

using namespace ixomd;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

GameTree random_game(std::uint64_t seed, int H, int A, int B, int branching,
                     int signals) {
  RandomTreeParams p;
  p.horizon = H;
  p.max_actions = A;
  p.min_actions = B;
  p.branching = branching;
  p.signals = signals;
  p.seed = seed;
  return build_random_tree(p);
}

// 1. Closed-form update against a numerical constrained minimizer.
Outcome omd_matches_argmin() {
  const auto start = Clock::now();
  double worst = 0.0;
  double worst_grad = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int H = 1 + static_cast<int>(seed % 3);
    const int A = 2 + static_cast<int>((seed / 3) % 2);
    const GameTree g = random_game(1000 + seed, H, A, 2, 2, 2);
    const InfoSetTree tree = build_infoset_tree(g, Role::kMax);
    Rng rng(mix_seed(seed));
    const BehaviorPolicy current = oracle::random_policy(tree, rng, 0.1);
    const double eta = 0.05 + 0.95 * uniform01(rng);
    const double gamma = 0.01 + 0.2 * uniform01(rng);
    IxomdLearner learner(Role::kMax, IXConfig{eta, gamma, g.horizon, g.max_actions},
                         current);
    const Episode ep = sample_episode(g, current, oracle::random_policy(
        build_infoset_tree(g, Role::kMin), rng, 0.1), rng);
    StepLoss loss = learner.estimate_losses(ep.max);
    for (double& l : loss.values) l = uniform01(rng) / gamma;  // arbitrary losses
    learner.omd_update(ep.max, loss);
    const auto ref = oracle::omd_argmin(tree, current, ep.max, loss.values, eta);
    worst_grad = std::max(worst_grad, ref.gradient_norm);
    for (std::size_t xi = 0; xi < tree.size(); ++xi) {
      const auto x = static_cast<InfoSetId>(xi);
      const int n = tree.num_actions(x);
      for (Action a = 0; a < n; ++a) {
        worst = std::max(worst, std::abs(learner.policy().prob(x, a, n) -
                                         ref.policy.prob(x, a, n)));
      }
    }
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-6 && secs < 120.0,
          "max |diff| " + num(worst) + " (tol 1e-6), oracle grad " + num(worst_grad) +
              ", " + num(secs) + " s (limit 120)"};
}

// 2. Backward Z recursion against the explicit sum form.
Outcome z_recursion() {
  const auto start = Clock::now();
  Rng rng(2024);
  double worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const auto H = 1 + static_cast<std::size_t>(rng() % 8);
    std::vector<double> probs(H), losses(H);
    for (std::size_t h = 0; h < H; ++h) {
      probs[h] = 0.01 + 0.99 * uniform01(rng);
      losses[h] = 20.0 * uniform01(rng);
    }
    const double eta = 0.5 * uniform01(rng);
    const auto log_z = backward_log_z(probs, losses, eta);
    const auto z = oracle::z_sum_form(probs, losses, eta);
    for (std::size_t h = 0; h < H; ++h) {
      worst = std::max(worst, std::abs(std::exp(log_z[h]) - z[h]));
    }
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-12 && secs < 10.0,
          "max |diff| " + num(worst) + " (tol 1e-12), " + num(secs) + " s (limit 10)"};
}

// 3. Average profile from accumulators vs mixture of stored snapshots, and
// incremental muDot vs naive per-episode sums.
Outcome average_profile() {
  RunConfig c;
  c.game = "kuhn";
  c.episodes = 100;
  c.snapshot = true;
  const RunReport r = run_single(c, 3);
  const double snap = std::max(r.snapshot_deviation_max.value_or(1.0),
                               r.snapshot_deviation_min.value_or(1.0));

  const GameTree g = build_kuhn();
  const InfoSetTree tmax = build_infoset_tree(g, Role::kMax);
  const auto X = static_cast<double>(g.num_infosets(Role::kMax));
  IxomdLearner mu(Role::kMax, recommended_hyperparams(100, 3, 2, X));
  IxomdLearner nu(Role::kMin, recommended_hyperparams(100, 3, 2, X));
  Rng rng(mix_seed(3));
  std::vector<std::vector<double>> naive(tmax.size());
  for (std::size_t x = 0; x < tmax.size(); ++x) {
    naive[x].assign(static_cast<std::size_t>(tmax.num_actions(static_cast<InfoSetId>(x))),
                    0.0);
  }
  double inc = 0.0;
  for (std::uint64_t t = 1; t <= 100; ++t) {
    const RealizationPlan plan = realization_plan(tmax, mu.policy());
    for (std::size_t x = 0; x < tmax.size(); ++x) {
      for (std::size_t a = 0; a < naive[x].size(); ++a) naive[x][a] += plan.weights[x][a];
    }
    const Episode ep = sample_episode(g, mu.policy(), nu.policy(), rng);
    mu.observe(ep.max);
    nu.observe(ep.min);
    for (const auto& [x, values] : mu.accumulator().flushed(t, mu.policy())) {
      for (std::size_t a = 0; a < values.size(); ++a) {
        inc = std::max(inc, std::abs(values[a] - naive[static_cast<std::size_t>(x)][a]));
      }
    }
  }
  return {snap <= 1e-10 && inc <= 1e-10,
          "snapshot deviation " + num(snap) + ", muDot vs naive " + num(inc) +
              " (tol 1e-10)"};
}

// 4. IS and IX estimator expectations on an enumerable one-step game.
Outcome estimator_laws() {
  const GameTree g = random_game(21, 1, 3, 2, 2, 3);
  const InfoSetTree tree = build_infoset_tree(g, Role::kMax);
  Rng rng(4);
  const BehaviorPolicy mu = oracle::random_policy(tree, rng, 0.1);
  const BehaviorPolicy nu =
      oracle::random_policy(build_infoset_tree(g, Role::kMin), rng, 0.1);
  const double gamma = 0.07;
  const IxomdLearner ix(Role::kMax, IXConfig{0.1, gamma, 1, g.max_actions}, mu);
  const IxomdLearner is(Role::kMax, IXConfig{0.1, 0.0, 1, g.max_actions}, mu);
  InfosetTable e_ix = zero_table(g, Role::kMax);
  InfosetTable e_is = zero_table(g, Role::kMax);
  bool pointwise = true;
  std::size_t outcomes = 0;
  for (const auto& path : oracle::enumerate_paths(g, mu, nu)) {
    const Trajectory traj = oracle::trajectory_of(g, path, Role::kMax);
    const double l_ix = ix.estimate_losses(traj).values[0];
    const double l_is = is.estimate_losses(traj).values[0];
    pointwise = pointwise && l_ix <= l_is;
    const auto x = static_cast<std::size_t>(traj.steps[0].infoset);
    const auto a = static_cast<std::size_t>(traj.steps[0].action);
    e_ix[x][a] += path.prob * l_ix;
    e_is[x][a] += path.prob * l_is;
    ++outcomes;
  }
  const InfosetTable exact = exact_loss_vector(g, nu, Role::kMax);
  double err_is = 0.0, err_ix = 0.0;
  for (std::size_t x = 0; x < exact.size(); ++x) {
    const int n = static_cast<int>(exact[x].size());
    for (std::size_t a = 0; a < exact[x].size(); ++a) {
      const double m = mu.prob(static_cast<InfoSetId>(x), static_cast<Action>(a), n);
      err_is = std::max(err_is, std::abs(e_is[x][a] - exact[x][a]));
      err_ix = std::max(err_ix, std::abs(e_ix[x][a] - m / (m + gamma) * exact[x][a]));
    }
  }
  return {err_is <= 1e-12 && err_ix <= 1e-12 && pointwise,
          std::to_string(outcomes) + " outcomes, E[IS] err " + num(err_is) +
              ", E[IX] err " + num(err_ix) + " (tol 1e-12), IX <= IS pointwise: " +
              (pointwise ? "yes" : "no")};
}

// 5. Convergence of self-play exploitability on Kuhn.
Outcome convergence() {
  RunConfig c;
  c.game = "kuhn";
  c.episodes = 1000000;
  c.probes = {1000, 10000, 100000, 1000000};
  c.track_regret = false;
  c.seeds = {0, 1, 2, 3, 4};
  const auto start = Clock::now();
  const auto reports = run_all(c);
  const double secs = seconds_since(start);
  int decreasing = 0;
  bool slopes_ok = true;
  double lo = 0.0, hi = -1.0;
  std::string finals;
  for (const RunReport& r : reports) {
    bool strict = true;
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      strict = strict && r.rows[i].exploitability < r.rows[i - 1].exploitability;
    }
    decreasing += strict ? 1 : 0;
    const double slope = loglog_slope(r.rows, 10000, 1000000);
    slopes_ok = slopes_ok && slope >= -0.75 && slope <= -0.25;
    lo = hi < lo ? slope : std::min(lo, slope);
    hi = std::max(hi, slope);
    finals += (finals.empty() ? "" : " ") + num(r.rows.back().exploitability);
  }
  return {decreasing >= 4 && slopes_ok,
          std::to_string(decreasing) + "/5 strictly decreasing, slopes over 1e4..1e6 in [" +
              num(lo) + ", " + num(hi) + "] (need [-0.75, -0.25]), final " + finals +
              ", " + num(secs / 5.0) + " s per seed"};
}

// 6. Empirical regret against a uniform opponent vs the high-probability bound.
Outcome bound_validity() {
  RunConfig c;
  c.game = "kuhn";
  c.episodes = 100000;
  c.opponent = "fixed:uniform";
  c.probes = {100000};
  c.seeds.clear();
  for (std::uint64_t s = 0; s < 20; ++s) c.seeds.push_back(s);
  const auto reports = run_all(c);
  int held = 0;
  double worst_ratio = 0.0;
  for (const RunReport& r : reports) {
    const ProbeRow& row = r.rows.back();
    held += row.regret_max <= row.bound_max ? 1 : 0;
    worst_ratio = std::max(worst_ratio, row.regret_max / row.bound_max);
  }
  return {held >= 18 && reports.size() == 20,
          std::to_string(held) + "/" + std::to_string(reports.size()) +
              " seeds within bound (need 18/20), largest regret/bound " + num(worst_ratio)};
}

// 7. Per-episode learner cost independent of the number of info sets, and
// learner memory bounded by visited info sets.
struct TimingResult {
  double median_ns = 0.0;
  std::size_t infosets = 0;
  bool memory_ok = true;
};

TimingResult time_learner(const GameTree& g, std::uint64_t episodes) {
  const auto X = static_cast<double>(g.num_infosets(Role::kMax));
  const auto Y = static_cast<double>(g.num_infosets(Role::kMin));
  IxomdLearner mu(Role::kMax, recommended_hyperparams(episodes, g.horizon, g.max_actions, X));
  IxomdLearner nu(Role::kMin, recommended_hyperparams(episodes, g.horizon, g.min_actions, Y));
  Rng rng(mix_seed(7));
  std::vector<double> ns;
  ns.reserve(episodes);
  TimingResult out;
  out.infosets = g.num_infosets(Role::kMax);
  const auto H = static_cast<std::uint64_t>(g.horizon);
  for (std::uint64_t t = 1; t <= episodes; ++t) {
    const Episode ep = sample_episode(g, mu.policy(), nu.policy(), rng);
    const auto t0 = Clock::now();
    mu.observe(ep.max);
    const auto t1 = Clock::now();
    nu.observe(ep.min);
    ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
    const std::size_t cap = std::min<std::uint64_t>(t * H, out.infosets);
    out.memory_ok = out.memory_ok && mu.accumulator().size() <= cap &&
                    mu.policy().size() <= cap;
  }
  std::nth_element(ns.begin(), ns.begin() + static_cast<long>(ns.size() / 2), ns.end());
  out.median_ns = ns[ns.size() / 2];
  return out;
}

Outcome complexity() {
  const std::uint64_t episodes = 50000;
  const GameTree small = random_game(1, 5, 3, 3, 1, 1);
  const GameTree mid = random_game(1, 5, 3, 3, 1, 2);
  const GameTree large = random_game(1, 5, 3, 3, 2, 3);
  time_learner(small, 2000);  // warm-up
  const TimingResult a = time_learner(small, episodes);
  const TimingResult b = time_learner(mid, episodes);
  const TimingResult c = time_learner(large, episodes);
  const double ratio = std::max(a.median_ns, c.median_ns) / std::min(a.median_ns, c.median_ns);
  const bool memory = a.memory_ok && b.memory_ok && c.memory_ok;
  return {ratio < 2.0 && memory,
          "median ns/episode X=" + std::to_string(a.infosets) + ": " + num(a.median_ns) +
              ", X=" + std::to_string(b.infosets) + ": " + num(b.median_ns) +
              ", X=" + std::to_string(c.infosets) + ": " + num(c.median_ns) +
              ", ratio X~1e2 vs X~1e4 " + num(ratio) + " (need < 2), memory <= min(tH, X): " +
              (memory ? "yes" : "no")};
}

// 8. (regret_max + regret_min) / T equals exploitability of the average profile.
Outcome bridge_identity() {
  RunConfig c;
  c.game = "kuhn";
  c.episodes = 200;
  c.eval_every = 1;
  const RunReport r = run_single(c, 8);
  double worst = 0.0;
  for (const ProbeRow& row : r.rows) {
    const double t = static_cast<double>(row.episode);
    worst = std::max(worst, std::abs((row.regret_max + row.regret_min) / t -
                                     row.exploitability));
  }
  const GameTree g = build_kuhn();
  const double direct = exploitability(g, r.average_max, r.average_min);
  const double final_gap = std::abs(
      (r.rows.back().regret_max + r.rows.back().regret_min) / 200.0 - direct);
  return {worst <= 1e-9 && final_gap <= 1e-9,
          "max gap over 200 probes " + num(worst) + ", final vs direct " + num(final_gap) +
              " (tol 1e-9)"};
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 9. Identical CSV bytes for repeated runs; split runs equal unsplit runs.
Outcome determinism() {
  bool same = true;
  bool split = true;
  for (const std::string opponent : {"selfplay", "fixed:uniform"}) {
    RunConfig c;
    c.game = "kuhn";
    c.episodes = 1000;
    c.eval_every = 50;
    c.opponent = opponent;
    const std::string tag = opponent == "selfplay" ? "sp" : "fx";
    emit_csv(run_single(c, 17), "acc_" + tag + "_a.csv");
    emit_csv(run_single(c, 17), "acc_" + tag + "_b.csv");
    same = same && file_bytes("acc_" + tag + "_a.csv") == file_bytes("acc_" + tag + "_b.csv");

    RunConfig head = c;
    head.stop_after = 500;
    head.checkpoint = "acc_" + tag + ".ckpt";
    run_single(head, 17);
    RunConfig tail = c;
    tail.resume = head.checkpoint;
    emit_csv(run_single(tail, 17), "acc_" + tag + "_split.csv");
    split = split &&
            file_bytes("acc_" + tag + "_a.csv") == file_bytes("acc_" + tag + "_split.csv");
  }
  return {same && split, std::string("repeat identical: ") + (same ? "yes" : "no") +
                             ", split == unsplit: " + (split ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"closed-form update matches numerical argmin", omd_matches_argmin},
      {"Z recursion identity", z_recursion},
      {"average profile identity", average_profile},
      {"estimator laws", estimator_laws},
      {"convergence rate on Kuhn", convergence},
      {"regret bound validity", bound_validity},
      {"per-episode cost and memory", complexity},
      {"bridge identity", bridge_identity},
      {"determinism and checkpoint equivalence", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                checks[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
