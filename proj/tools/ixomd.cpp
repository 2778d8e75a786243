// ixomd command-line driver.
//
//   ixomd run --game kuhn --episodes 100000 --seeds 0,1,2 --out kuhn_{seed}.csv
//   ixomd run --config run.json --episodes 5000
//   ixomd validate --game file:game.txt
//   ixomd export --game leduc --out leduc.txt
//   ixomd evaluate --game kuhn --max-policy mu.txt --min-policy nu.txt
//   ixomd plot-data --csv kuhn_0.csv
//   ixomd bound --game kuhn --episodes 100000

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ixomd/evaluation.hpp"
#include "ixomd/game_io.hpp"
#include "ixomd/games.hpp"
#include "ixomd/harness.hpp"
#include "ixomd/infoset_tree.hpp"

namespace {

using namespace ixomd;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct RunFlags {
  std::string config_file;
  std::string game;
  std::uint64_t episodes = 0;
  std::string eta;
  std::string gamma;
  double delta = 0.0;
  std::uint64_t eval_every = 0;
  std::vector<std::uint64_t> probes;
  std::vector<std::uint64_t> seeds;
  bool snapshot = false;
  std::string out;
  std::string opponent;
  std::string checkpoint;
  std::string resume;
  std::uint64_t stop_after = 0;
  bool no_regret = false;
  bool wall_clock = false;
  std::string summary;
  bool quiet = false;
};

std::optional<double> auto_or_value(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw Error("bad number '" + text + "'");
  return v;
}

// Config file first, then every flag the user actually passed.
RunConfig build_config(const CLI::App& cmd, const RunFlags& f) {
  RunConfig c;
  if (!f.config_file.empty()) c = load_run_config(f.config_file);
  auto given = [&](const char* name) { return cmd.count(name) > 0; };
  if (given("--game")) c.game = f.game;
  if (given("--episodes")) c.episodes = f.episodes;
  if (given("--eta")) c.eta = auto_or_value(f.eta);
  if (given("--gamma")) c.gamma = auto_or_value(f.gamma);
  if (given("--delta")) c.delta = f.delta;
  if (given("--eval-every")) c.eval_every = f.eval_every;
  if (given("--probes")) c.probes = f.probes;
  if (given("--seeds")) c.seeds = f.seeds;
  if (given("--snapshot")) c.snapshot = f.snapshot;
  if (given("--out")) c.out = f.out;
  if (given("--opponent")) c.opponent = f.opponent;
  if (given("--checkpoint")) c.checkpoint = f.checkpoint;
  if (given("--resume")) c.resume = f.resume;
  if (given("--stop-after")) c.stop_after = f.stop_after;
  if (given("--no-regret")) c.track_regret = false;
  if (given("--wall-clock")) c.wall_clock = true;
  c.validate();
  return c;
}

int do_run(const CLI::App& cmd, const RunFlags& flags) {
  const RunConfig config = build_config(cmd, flags);
  const std::vector<RunReport> reports = run_all(config);
  for (const RunReport& r : reports) {
    const std::string csv = csv_path_for(config, r.seed);
    if (!csv.empty()) emit_csv(r, csv);
    if (!flags.summary.empty()) {
      RunConfig one = config;
      one.out = flags.summary;
      const std::string path = csv_path_for(one, r.seed);
      std::ofstream out(path);
      if (!out) throw Error("cannot write " + path);
      out << report_json(r) << '\n';
    }
    if (flags.quiet) continue;
    std::cout << "seed " << r.seed << ": " << r.game_name << ", "
              << r.episodes_run << "/" << config.episodes << " episodes, eta "
              << fmt(r.max_config.eta) << ", gamma " << fmt(r.max_config.gamma);
    if (!r.rows.empty()) {
      const ProbeRow& last = r.rows.back();
      std::cout << ", exploitability " << fmt(last.exploitability) << " (native "
                << fmt(r.scale.to_native_gap(last.exploitability)) << ")"
                << ", regret_max " << fmt(last.regret_max);
      if (!std::isnan(last.bound_max)) std::cout << " / bound " << fmt(last.bound_max);
    }
    std::cout << ", native value "
              << fmt(r.scale.to_native_value(r.final_value, r.horizon));
    if (r.snapshot_deviation_max) {
      std::cout << ", snapshot deviation " << fmt(*r.snapshot_deviation_max);
      if (r.snapshot_deviation_min) std::cout << " / " << fmt(*r.snapshot_deviation_min);
    }
    std::cout << '\n';
    if (csv.empty()) write_csv(r.rows, std::cout);
  }
  return 0;
}

int do_validate(const std::string& spec) {
  const GameTree game = load_game_spec(spec);
  const ValidationReport report = validate_game(game);
  if (!report.ok()) {
    std::cout << report.summary() << '\n';
    return 1;
  }
  const InfoSetTree tmax = build_infoset_tree(game, Role::kMax);
  const InfoSetTree tmin = build_infoset_tree(game, Role::kMin);
  std::cout << "ok: " << game.name << ", H=" << game.horizon << ", states "
            << game.num_states() << ", max info sets " << tmax.size() << " ("
            << tmax.num_decision_infosets() << " with a choice, A=" << game.max_actions
            << "), min info sets " << tmin.size() << " ("
            << tmin.num_decision_infosets() << " with a choice, B=" << game.min_actions
            << ")\n";
  return 0;
}

int do_export(const std::string& spec, const std::string& out) {
  const GameTree game = load_game_spec(spec);
  require_valid(game);
  if (out.empty() || out == "-") {
    std::cout << serialize_game(game);
  } else {
    save_game_file(game, out);
  }
  return 0;
}

int do_evaluate(const std::string& spec, const std::string& max_file,
                const std::string& min_file) {
  const GameTree game = load_game_spec(spec);
  require_valid(game);
  const BehaviorPolicy mu = max_file.empty() ? BehaviorPolicy(Role::kMax)
                                             : load_policy(max_file);
  const BehaviorPolicy nu = min_file.empty() ? BehaviorPolicy(Role::kMin)
                                             : load_policy(min_file);
  if (mu.role() != Role::kMax || nu.role() != Role::kMin) {
    throw Error("policy files must have roles max and min respectively");
  }
  const ProfileReport r = evaluate_profile(game, mu, nu);
  std::cout << "value " << r.value << "\nbest_response_max " << r.best_response_max
            << "\nbest_response_min " << r.best_response_min << "\nexploitability "
            << r.exploitability << "\nnative_value " << r.native_value
            << "\nnative_exploitability " << r.native_exploitability << '\n';
  return 0;
}

int do_plot_data(const std::string& csv, const std::string& out) {
  const std::vector<ProbeRow> rows = read_csv_file(csv);
  if (out.empty() || out == "-") {
    write_plot_data(rows, std::cout);
  } else {
    std::ofstream file(out);
    if (!file) throw Error("cannot write " + out);
    write_plot_data(rows, file);
  }
  return 0;
}

int do_bound(const std::string& spec, std::uint64_t T, double delta) {
  const GameTree game = load_game_spec(spec);
  require_valid(game);
  for (const Role role : {Role::kMax, Role::kMin}) {
    const auto X = static_cast<double>(game.num_infosets(role));
    const int A = game.action_bound(role);
    const IXConfig c = recommended_hyperparams(T, game.horizon, A, X, delta);
    const double b = regret_bound(static_cast<double>(T), X, A, game.horizon,
                                  c.eta, c.gamma, delta);
    std::cout << to_string(role) << ": X=" << X << " A=" << A << " eta "
              << fmt(c.eta) << " gamma " << fmt(c.gamma) << " bound " << fmt(b)
              << " (per episode " << fmt(b / static_cast<double>(T)) << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IXOMD self-play learner and evaluation harness"};
  app.require_subcommand(1);

  RunFlags rf;
  CLI::App* run = app.add_subcommand("run", "train by self-play or against an opponent");
  run->add_option("--config", rf.config_file, "JSON run configuration")
      ->check(CLI::ExistingFile);
  run->add_option("--game", rf.game, "kuhn | leduc | matrix:<file> | random:<H,A,B,branching,seed> | file:<path>");
  run->add_option("--episodes", rf.episodes, "number of episodes T");
  run->add_option("--eta", rf.eta, "learning rate or 'auto'");
  run->add_option("--gamma", rf.gamma, "implicit-exploration parameter or 'auto'");
  run->add_option("--delta", rf.delta, "confidence level for tuning and the bound");
  run->add_option("--eval-every", rf.eval_every, "probe stride (default: powers of two)");
  run->add_option("--probes", rf.probes, "explicit probe episodes")->delimiter(',');
  run->add_option("--seeds", rf.seeds, "comma-separated seeds")->delimiter(',');
  run->add_flag("--snapshot", rf.snapshot, "store every policy and check the average profile");
  run->add_option("--out", rf.out, "CSV path; {seed} is replaced by the seed");
  run->add_option("--opponent", rf.opponent, "selfplay | fixed:<policy|uniform> | scripted:<script>");
  run->add_option("--checkpoint", rf.checkpoint, "write a checkpoint when the run stops");
  run->add_option("--resume", rf.resume, "continue from a checkpoint")->check(CLI::ExistingFile);
  run->add_option("--stop-after", rf.stop_after, "stop after this many episodes");
  run->add_flag("--no-regret", rf.no_regret, "skip per-episode value tracking");
  run->add_flag("--wall-clock", rf.wall_clock, "record elapsed milliseconds");
  run->add_option("--summary", rf.summary, "JSON summary path; {seed} is replaced");
  run->add_flag("--quiet", rf.quiet, "no console output");

  std::string game_spec = "kuhn";
  std::string out;
  CLI::App* validate = app.add_subcommand("validate", "check a game and print its size");
  validate->add_option("--game", game_spec)->required();

  CLI::App* exporter = app.add_subcommand("export", "write a game in the text format");
  exporter->add_option("--game", game_spec)->required();
  exporter->add_option("--out", out, "output file (default stdout)");

  std::string max_file, min_file;
  CLI::App* evaluate = app.add_subcommand("evaluate", "exploitability of a policy pair");
  evaluate->add_option("--game", game_spec)->required();
  evaluate->add_option("--max-policy", max_file, "max player policy (default uniform)");
  evaluate->add_option("--min-policy", min_file, "min player policy (default uniform)");

  std::string csv;
  CLI::App* plot = app.add_subcommand("plot-data", "log10 episode / log10 exploitability pairs");
  plot->add_option("--csv", csv)->required()->check(CLI::ExistingFile);
  plot->add_option("--out", out, "output file (default stdout)");

  std::uint64_t bound_T = 1000;
  double bound_delta = kDefaultDelta;
  CLI::App* bound = app.add_subcommand("bound", "regret bound at the tuned parameters");
  bound->add_option("--game", game_spec)->required();
  bound->add_option("--episodes", bound_T);
  bound->add_option("--delta", bound_delta);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return do_run(*run, rf);
    if (*validate) return do_validate(game_spec);
    if (*exporter) return do_export(game_spec, out);
    if (*evaluate) return do_evaluate(game_spec, max_file, min_file);
    if (*plot) return do_plot_data(csv, out);
    if (*bound) return do_bound(game_spec, bound_T, bound_delta);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
