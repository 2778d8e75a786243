#include "ixomd/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ixomd/checked_file.hpp"
#include "ixomd/episode.hpp"
#include "ixomd/evaluation.hpp"
#include "ixomd/game_io.hpp"
#include "ixomd/games.hpp"
#include "ixomd/infoset_tree.hpp"
#include "ixomd/realization_plan.hpp"

namespace ixomd {

namespace {

constexpr std::string_view kCheckpointMagic = "ixomd-checkpoint";
constexpr int kCheckpointVersion = 1;
constexpr const char* kVersion = "1.0.0";

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

double parse_decimal(const std::string& token, const std::string& where) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw Error(where + ": bad number '" + token + "'");
  }
  return value;
}

std::uint64_t parse_count(const std::string& token, const std::string& where) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw Error(where + ": bad count '" + token + "'");
  }
  return value;
}

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

// Everything the run needs from the full model, built once per seed.
struct Setup {
  GameTree game;
  InfoSetTree tree_max;
  InfoSetTree tree_min;
  IXConfig config_max;
  std::optional<IXConfig> config_min;
  OpponentScript script;
  std::vector<RealizationPlan> script_plans;
  std::vector<std::uint64_t> probes;
  double bound_max = kNaN;
  double bound_min = kNaN;
};

double bound_for(const RunConfig& config, const GameTree& game, Role role,
                 const IXConfig& lc) {
  if (lc.eta <= 0.0 || lc.gamma <= 0.0) return kNaN;
  const auto X = static_cast<double>(game.num_infosets(role));
  return regret_bound(static_cast<double>(config.episodes), X,
                      game.action_bound(role), game.horizon, lc.eta, lc.gamma,
                      config.delta);
}

Setup make_setup(const RunConfig& config) {
  config.validate();
  Setup setup;
  setup.game = load_game_spec(config.game);
  require_valid(setup.game);
  setup.tree_max = build_infoset_tree(setup.game, Role::kMax);
  setup.tree_min = build_infoset_tree(setup.game, Role::kMin);
  setup.config_max = learner_config(config, setup.game, Role::kMax);
  setup.bound_max = bound_for(config, setup.game, Role::kMax, setup.config_max);
  if (config.self_play()) {
    setup.config_min = learner_config(config, setup.game, Role::kMin);
    setup.bound_min = bound_for(config, setup.game, Role::kMin, *setup.config_min);
  } else {
    setup.script = load_opponent(config.opponent, setup.game);
    for (const BehaviorPolicy& p : setup.script.policies) {
      setup.script_plans.push_back(realization_plan(setup.tree_min, p));
    }
  }
  setup.probes = probe_schedule(config);
  return setup;
}

struct LoopState {
  std::uint64_t t = 0;
  Rng rng;
  double value_sum = 0.0;            // sum of V(mu^u, nu^u) over played episodes
  std::vector<std::uint64_t> counts;  // episodes per script entry
  std::vector<ProbeRow> rows;
  double elapsed_ms = 0.0;
  IxomdLearner max;
  std::optional<IxomdLearner> min;
};

std::string fingerprint(const RunConfig& config, const Setup& setup,
                        std::uint64_t seed) {
  std::ostringstream out;
  out << "game " << std::quoted(config.game) << " episodes " << config.episodes
      << " eta " << hex_double(setup.config_max.eta) << " gamma "
      << hex_double(setup.config_max.gamma);
  if (setup.config_min) {
    out << " eta_min " << hex_double(setup.config_min->eta) << " gamma_min "
        << hex_double(setup.config_min->gamma);
  }
  out << " delta " << hex_double(config.delta) << " opponent "
      << std::quoted(config.opponent) << " regret " << config.track_regret
      << " seed " << seed << " probes " << setup.probes.size();
  for (const std::uint64_t p : setup.probes) out << ' ' << p;
  return out.str();
}

void write_checkpoint(const std::string& path, const std::string& print,
                      const LoopState& state) {
  std::ostringstream body;
  body << "config " << print << '\n'
       << "t " << state.t << '\n'
       << "rng " << state.rng << '\n'
       << "value_sum " << hex_double(state.value_sum) << '\n'
       << "elapsed " << hex_double(state.elapsed_ms) << '\n'
       << "counts " << state.counts.size();
  for (const std::uint64_t c : state.counts) body << ' ' << c;
  body << '\n' << "rows " << state.rows.size() << '\n';
  for (const ProbeRow& r : state.rows) {
    body << r.episode << ' ' << hex_double(r.exploitability) << ' '
         << hex_double(r.regret_max) << ' ' << hex_double(r.regret_min) << ' '
         << hex_double(r.bound_max) << ' ' << hex_double(r.bound_min) << ' '
         << hex_double(r.wall_ms) << '\n';
  }
  body << "learner max\n";
  state.max.write_state(body);
  if (state.min) {
    body << "learner min\n";
    state.min->write_state(body);
  }
  body << "done\n";
  write_checked_file(path, kCheckpointMagic, kCheckpointVersion, body.str());
}

void expect_word(std::istream& in, std::string_view word) {
  std::string token;
  if (!(in >> token) || token != word) {
    throw Error("checkpoint: expected '" + std::string(word) + "', found '" +
                token + "'");
  }
}

template <typename T>
T read_value(std::istream& in, std::string_view what) {
  T value{};
  if (!(in >> value)) throw Error("checkpoint: bad " + std::string(what));
  return value;
}

double read_hex(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw Error("checkpoint: unexpected end of input");
  return parse_hex_double(token);
}

LoopState read_checkpoint(const std::string& path, const std::string& print,
                          bool self_play) {
  const std::string body =
      read_checked_file(path, kCheckpointMagic, kCheckpointVersion);
  std::istringstream in(body);
  std::string line;
  std::getline(in, line);
  if (line != "config " + print) {
    throw Error("checkpoint " + path +
                " was written by a different run configuration");
  }
  LoopState state{0, Rng{}, 0.0, {}, {}, 0.0,
                  IxomdLearner(Role::kMax, IXConfig{}), std::nullopt};
  expect_word(in, "t");
  state.t = read_value<std::uint64_t>(in, "episode count");
  expect_word(in, "rng");
  if (!(in >> state.rng)) throw Error("checkpoint: bad generator state");
  expect_word(in, "value_sum");
  state.value_sum = read_hex(in);
  expect_word(in, "elapsed");
  state.elapsed_ms = read_hex(in);
  expect_word(in, "counts");
  state.counts.resize(read_value<std::size_t>(in, "count list"));
  for (auto& c : state.counts) c = read_value<std::uint64_t>(in, "count");
  expect_word(in, "rows");
  state.rows.resize(read_value<std::size_t>(in, "row count"));
  for (ProbeRow& r : state.rows) {
    r.episode = read_value<std::uint64_t>(in, "row");
    r.exploitability = read_hex(in);
    r.regret_max = read_hex(in);
    r.regret_min = read_hex(in);
    r.bound_max = read_hex(in);
    r.bound_min = read_hex(in);
    r.wall_ms = read_hex(in);
  }
  expect_word(in, "learner");
  expect_word(in, "max");
  state.max = IxomdLearner::read_state(in);
  if (self_play) {
    expect_word(in, "learner");
    expect_word(in, "min");
    state.min = IxomdLearner::read_state(in);
  }
  expect_word(in, "done");
  return state;
}

BehaviorPolicy uniform_average(Role role) { return BehaviorPolicy(role); }

// Opponent mixture over the script, weighted by how often each entry played.
BehaviorPolicy opponent_average(const Setup& setup, const LoopState& state) {
  if (setup.script.policies.size() == 1) return setup.script.policies.front();
  std::vector<const RealizationPlan*> plans;
  std::vector<double> weights;
  double total = 0.0;
  for (std::size_t k = 0; k < setup.script_plans.size(); ++k) {
    plans.push_back(&setup.script_plans[k]);
    weights.push_back(static_cast<double>(state.counts[k]));
    total += weights.back();
  }
  if (total == 0.0) return setup.script.policies.front();
  for (double& w : weights) w /= total;
  return policy_from_plan(setup.tree_min, combine_plans(plans, weights));
}

struct Averages {
  BehaviorPolicy max;
  BehaviorPolicy min;
};

Averages current_averages(const Setup& setup, const LoopState& state) {
  Averages avg{uniform_average(Role::kMax), uniform_average(Role::kMin)};
  if (state.t > 0) avg.max = state.max.finalize_average();
  if (state.min) {
    if (state.t > 0) avg.min = state.min->finalize_average();
  } else {
    avg.min = opponent_average(setup, state);
  }
  return avg;
}

ProbeRow make_probe(const RunConfig& config, const Setup& setup,
                    const LoopState& state, double wall_ms) {
  const Averages avg = current_averages(setup, state);
  const double br_max = best_response(setup.game, avg.min, Role::kMax).value;
  const double br_min = best_response(setup.game, avg.max, Role::kMin).value;
  const auto t = static_cast<double>(state.t);
  ProbeRow row;
  row.episode = state.t;
  row.exploitability = std::max(0.0, br_max - br_min);
  row.regret_max = config.track_regret ? t * br_max - state.value_sum : kNaN;
  row.regret_min = config.track_regret && state.min ? state.value_sum - t * br_min
                                                    : kNaN;
  row.bound_max = setup.bound_max;
  row.bound_min = setup.bound_min;
  row.wall_ms = wall_ms;
  return row;
}

RunReport run_impl(const RunConfig& config, std::uint64_t seed) {
  const Setup setup = make_setup(config);
  const std::string print = fingerprint(config, setup, seed);

  LoopState state{0, Rng(mix_seed(seed)), 0.0, {}, {}, 0.0,
                  IxomdLearner(Role::kMax, setup.config_max), std::nullopt};
  if (setup.config_min) state.min.emplace(Role::kMin, *setup.config_min);
  state.counts.assign(setup.script.policies.size(), 0);
  if (!config.resume.empty()) {
    state = read_checkpoint(config.resume, print, config.self_play());
    if (state.max.config() != setup.config_max ||
        state.counts.size() != setup.script.policies.size()) {
      throw Error("checkpoint " + config.resume + " does not match the run");
    }
  }

  std::vector<BehaviorPolicy> snaps_max;
  std::vector<BehaviorPolicy> snaps_min;
  ValueSweep sweep(setup.game);
  auto next_probe = std::upper_bound(setup.probes.begin(), setup.probes.end(), state.t);
  const std::uint64_t stop = std::min(config.episodes, config.stop_after.value_or(config.episodes));
  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    if (!config.wall_clock) return 0.0;
    const std::chrono::duration<double, std::milli> d =
        std::chrono::steady_clock::now() - started;
    return state.elapsed_ms + d.count();
  };

  while (state.t < stop) {
    std::size_t entry = 0;
    if (!state.min) {
      entry = setup.script.index_at(state.t + 1);
      ++state.counts[entry];
    }
    const BehaviorPolicy& mu = state.max.policy();
    const BehaviorPolicy& nu = state.min ? state.min->policy()
                                         : setup.script.policies[entry];
    if (config.snapshot) {
      snaps_max.push_back(mu);
      snaps_min.push_back(nu);
    }
    const Episode ep = sample_episode(setup.game, mu, nu, state.rng);
    if (config.track_regret) state.value_sum += sweep(mu, nu);
    state.max.observe(ep.max);
    if (state.min) state.min->observe(ep.min);
    ++state.t;
    if (next_probe != setup.probes.end() && *next_probe == state.t) {
      state.rows.push_back(make_probe(config, setup, state, elapsed()));
      ++next_probe;
    }
  }

  if (!config.checkpoint.empty()) {
    LoopState saved = state;
    saved.elapsed_ms = elapsed();
    write_checkpoint(config.checkpoint, print, saved);
  }

  RunReport report;
  report.config = config;
  report.seed = seed;
  report.game_name = setup.game.name;
  report.episodes_run = state.t;
  report.completed = state.t == config.episodes;
  report.max_config = setup.config_max;
  report.min_config = setup.config_min;
  report.infosets_max = setup.game.num_infosets(Role::kMax);
  report.infosets_min = setup.game.num_infosets(Role::kMin);
  report.learner_entries_max = state.max.accumulator().size();
  report.learner_entries_min = state.min ? state.min->accumulator().size() : 0;
  report.rows = std::move(state.rows);
  Averages avg = current_averages(setup, state);
  report.final_value = expected_value(setup.game, avg.max, avg.min);
  report.scale = setup.game.scale;
  report.horizon = setup.game.horizon;
  if (config.snapshot && state.t > 0) {
    report.snapshot_deviation_max =
        average_profile_deviation(setup.tree_max, snaps_max, avg.max);
    if (state.min) {
      report.snapshot_deviation_min =
          average_profile_deviation(setup.tree_min, snaps_min, avg.min);
    }
  }
  report.renormalizations =
      state.max.renormalizations() + (state.min ? state.min->renormalizations() : 0);
  report.average_max = std::move(avg.max);
  report.average_min = std::move(avg.min);
  return report;
}

}  // namespace

void RunConfig::validate() const {
  if (episodes < 1) throw Error("episodes must be at least 1");
  if (eval_every && *eval_every < 1) throw Error("eval-every must be at least 1");
  if (seeds.empty()) throw Error("at least one seed is required");
  if (eta && !(*eta > 0.0 && std::isfinite(*eta))) throw Error("eta must be positive");
  if (gamma && !(*gamma >= 0.0 && std::isfinite(*gamma))) {
    throw Error("gamma must be non-negative");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw Error("delta must lie in (0, 1)");
  if (snapshot && episodes > snapshot_limit) {
    throw Error("snapshot mode stores every policy; episodes exceed the limit of " +
                std::to_string(snapshot_limit));
  }
  if (snapshot && (!checkpoint.empty() || !resume.empty())) {
    throw Error("snapshot mode cannot be combined with checkpoint or resume");
  }
  if ((!checkpoint.empty() || !resume.empty()) && seeds.size() != 1) {
    throw Error("checkpoint and resume need exactly one seed");
  }
  if (stop_after && *stop_after > episodes) {
    throw Error("stop-after exceeds the episode count");
  }
  if (!self_play() && !opponent.starts_with("fixed:") &&
      !opponent.starts_with("scripted:")) {
    throw Error("opponent must be selfplay, fixed:<file> or scripted:<file>");
  }
}

RunConfig parse_run_config(const std::string& json_text, RunConfig base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error("config: top level must be an object");
  auto optional_real = [](const nlohmann::json& v) -> std::optional<double> {
    if (v.is_string() && v.get<std::string>() == "auto") return std::nullopt;
    return v.get<double>();
  };
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "game") base.game = v.get<std::string>();
      else if (key == "episodes") base.episodes = v.get<std::uint64_t>();
      else if (key == "eta") base.eta = optional_real(v);
      else if (key == "gamma") base.gamma = optional_real(v);
      else if (key == "delta") base.delta = v.get<double>();
      else if (key == "eval_every") base.eval_every = v.get<std::uint64_t>();
      else if (key == "probes") base.probes = v.get<std::vector<std::uint64_t>>();
      else if (key == "seeds") {
        base.seeds = v.is_array() ? v.get<std::vector<std::uint64_t>>()
                                  : std::vector<std::uint64_t>{v.get<std::uint64_t>()};
      } else if (key == "snapshot") base.snapshot = v.get<bool>();
      else if (key == "out") base.out = v.get<std::string>();
      else if (key == "opponent") base.opponent = v.get<std::string>();
      else if (key == "checkpoint") base.checkpoint = v.get<std::string>();
      else if (key == "resume") base.resume = v.get<std::string>();
      else if (key == "stop_after") base.stop_after = v.get<std::uint64_t>();
      else if (key == "track_regret") base.track_regret = v.get<bool>();
      else if (key == "wall_clock") base.wall_clock = v.get<bool>();
      else throw Error("config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), std::move(base));
}

bool same_row(const ProbeRow& a, const ProbeRow& b) {
  auto same = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.episode == b.episode && same(a.exploitability, b.exploitability) &&
         same(a.regret_max, b.regret_max) && same(a.regret_min, b.regret_min) &&
         same(a.bound_max, b.bound_max) && same(a.bound_min, b.bound_min) &&
         same(a.wall_ms, b.wall_ms);
}

std::vector<std::uint64_t> probe_schedule(const RunConfig& config) {
  const std::uint64_t T = config.episodes;
  std::vector<std::uint64_t> probes;
  if (!config.probes.empty()) {
    for (const std::uint64_t p : config.probes) {
      if (p >= 1 && p <= T) probes.push_back(p);
    }
  } else if (config.eval_every) {
    for (std::uint64_t p = *config.eval_every; p <= T; p += *config.eval_every) {
      probes.push_back(p);
    }
  } else {
    for (std::uint64_t p = 1; p <= T; p *= 2) probes.push_back(p);
  }
  probes.push_back(T);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

IXConfig learner_config(const RunConfig& config, const GameTree& game, Role role) {
  IXConfig lc = recommended_hyperparams(
      config.episodes, game.horizon, game.action_bound(role),
      static_cast<double>(game.num_infosets(role)), config.delta);
  if (config.eta) lc.eta = *config.eta;
  if (config.gamma) lc.gamma = *config.gamma;
  lc.validate();
  return lc;
}

RunReport run_self_play(const RunConfig& config, std::uint64_t seed) {
  if (!config.self_play()) throw Error("run_self_play needs opponent=selfplay");
  return run_impl(config, seed);
}

RunReport run_vs_opponent(const RunConfig& config, std::uint64_t seed) {
  if (config.self_play()) throw Error("run_vs_opponent needs a fixed or scripted opponent");
  return run_impl(config, seed);
}

RunReport run_single(const RunConfig& config, std::uint64_t seed) {
  return run_impl(config, seed);
}

std::vector<RunReport> run_all(const RunConfig& config) {
  config.validate();
  const std::size_t workers =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<RunReport> reports;
  reports.reserve(config.seeds.size());
  for (std::size_t begin = 0; begin < config.seeds.size(); begin += workers) {
    const std::size_t end = std::min(config.seeds.size(), begin + workers);
    std::vector<std::future<RunReport>> jobs;
    for (std::size_t i = begin; i < end; ++i) {
      jobs.push_back(std::async(std::launch::async, run_single, std::cref(config),
                                config.seeds[i]));
    }
    for (auto& job : jobs) reports.push_back(job.get());
  }
  return reports;
}

std::string csv_path_for(const RunConfig& config, std::uint64_t seed) {
  if (config.out.empty()) return {};
  std::string path = config.out;
  const std::string token = "{seed}";
  if (const auto pos = path.find(token); pos != std::string::npos) {
    return path.replace(pos, token.size(), std::to_string(seed));
  }
  if (config.seeds.size() == 1) return path;
  const std::filesystem::path p(path);
  const std::string stem = p.stem().string() + ".seed" + std::to_string(seed);
  return (p.parent_path() / (stem + p.extension().string())).string();
}

void write_csv(const std::vector<ProbeRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ProbeRow& r : rows) {
    out << r.episode << ',' << csv_number(r.exploitability) << ','
        << csv_number(r.regret_max) << ',' << csv_number(r.regret_min) << ','
        << csv_number(r.bound_max) << ',' << csv_number(r.bound_min) << ','
        << csv_number(r.wall_ms) << '\n';
  }
}

void emit_csv(const RunReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  write_csv(report.rows, out);
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

std::vector<ProbeRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) {
    throw Error("csv: missing or unexpected header");
  }
  std::vector<ProbeRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::istringstream fields(trim(line));
    for (std::string cell; std::getline(fields, cell, ',');) cells.push_back(cell);
    const std::string where = "csv line " + std::to_string(line_no);
    if (cells.size() != 7) throw Error(where + ": expected 7 columns");
    auto number = [&](const std::string& cell) {
      if (cell == "nan") return kNaN;
      return parse_decimal(cell, where);
    };
    ProbeRow r;
    r.episode = parse_count(cells[0], where);
    r.exploitability = number(cells[1]);
    r.regret_max = number(cells[2]);
    r.regret_min = number(cells[3]);
    r.bound_max = number(cells[4]);
    r.bound_min = number(cells[5]);
    r.wall_ms = number(cells[6]);
    if (!rows.empty() && r.episode <= rows.back().episode) {
      throw Error(where + ": episodes must increase");
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<ProbeRow> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_csv(in);
}

void write_plot_data(const std::vector<ProbeRow>& rows, std::ostream& out) {
  for (const ProbeRow& r : rows) {
    if (!(r.exploitability > 0.0)) continue;
    out << csv_number(std::log10(static_cast<double>(r.episode))) << ' '
        << csv_number(std::log10(r.exploitability)) << '\n';
  }
}

double loglog_slope(const std::vector<ProbeRow>& rows, std::uint64_t from,
                    std::uint64_t to) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const ProbeRow& r : rows) {
    if (r.episode < from || r.episode > to || !(r.exploitability > 0.0)) continue;
    const double x = std::log10(static_cast<double>(r.episode));
    const double y = std::log10(r.exploitability);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom <= 0.0) {
    throw Error("slope fit needs at least two distinct probes in range");
  }
  return (n * sxy - sx * sy) / denom;
}

std::string report_json(const RunReport& report) {
  using nlohmann::json;
  auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  const RunConfig& c = report.config;
  json doc;
  doc["version"] = kVersion;
  doc["config"] = {
      {"game", c.game},
      {"episodes", c.episodes},
      {"eta", c.eta ? json(*c.eta) : json("auto")},
      {"gamma", c.gamma ? json(*c.gamma) : json("auto")},
      {"delta", c.delta},
      {"eval_every", c.eval_every ? json(*c.eval_every) : json(nullptr)},
      {"opponent", c.opponent},
      {"snapshot", c.snapshot},
      {"track_regret", c.track_regret},
  };
  doc["seed"] = report.seed;
  doc["game_name"] = report.game_name;
  doc["horizon"] = report.horizon;
  doc["episodes_run"] = report.episodes_run;
  doc["completed"] = report.completed;
  doc["learner_max"] = {{"eta", report.max_config.eta},
                        {"gamma", report.max_config.gamma}};
  if (report.min_config) {
    doc["learner_min"] = {{"eta", report.min_config->eta},
                          {"gamma", report.min_config->gamma}};
  }
  doc["infosets"] = {{"max", report.infosets_max}, {"min", report.infosets_min}};
  doc["learner_entries"] = {{"max", report.learner_entries_max},
                            {"min", report.learner_entries_min}};
  doc["renormalizations"] = report.renormalizations;
  doc["final_value"] = report.final_value;
  doc["final_native_value"] =
      report.scale.to_native_value(report.final_value, report.horizon);
  if (!report.rows.empty()) {
    const ProbeRow& last = report.rows.back();
    doc["final_exploitability"] = last.exploitability;
    doc["final_native_exploitability"] =
        report.scale.to_native_gap(last.exploitability);
  }
  if (report.snapshot_deviation_max) {
    doc["snapshot_deviation_max"] = *report.snapshot_deviation_max;
  }
  if (report.snapshot_deviation_min) {
    doc["snapshot_deviation_min"] = *report.snapshot_deviation_min;
  }
  json rows = json::array();
  for (const ProbeRow& r : report.rows) {
    rows.push_back({{"episode", r.episode},
                    {"exploitability", num(r.exploitability)},
                    {"regret_max", num(r.regret_max)},
                    {"regret_min", num(r.regret_min)},
                    {"bound_max", num(r.bound_max)},
                    {"bound_min", num(r.bound_min)},
                    {"wall_ms", num(r.wall_ms)}});
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2);
}

std::string policy_to_string(const BehaviorPolicy& policy) {
  std::ostringstream out;
  out << "ixomd-policy 1\nrole " << to_string(policy.role()) << '\n';
  for (const InfoSetId x : policy.infosets()) {
    out << "infoset " << x;
    for (const double p : policy.stored(x)) out << ' ' << format_double(p);
    out << '\n';
  }
  return out.str();
}

void save_policy(const BehaviorPolicy& policy, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << policy_to_string(policy);
  if (!out) throw Error("write failed: " + path);
}

BehaviorPolicy parse_policy(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      line = trim(line.substr(0, line.find('#')));
      if (!line.empty()) return true;
    }
    return false;
  };
  auto where = [&] { return source + ":" + std::to_string(line_no); };
  if (!next() || line != "ixomd-policy 1") {
    throw Error(source + ": expected header 'ixomd-policy 1'");
  }
  if (!next()) throw Error(source + ": missing role line");
  const auto role_words = split_words(line);
  if (role_words.size() != 2 || role_words[0] != "role") {
    throw Error(where() + ": expected 'role <max|min>'");
  }
  BehaviorPolicy policy(parse_role(role_words[1]));
  while (next()) {
    const auto words = split_words(line);
    if (words.size() < 3 || words[0] != "infoset") {
      throw Error(where() + ": expected 'infoset <id> <probabilities>'");
    }
    const std::uint64_t id = parse_count(words[1], where());
    if (id > static_cast<std::uint64_t>(std::numeric_limits<InfoSetId>::max())) {
      throw Error(where() + ": info set id out of range");
    }
    const auto x = static_cast<InfoSetId>(id);
    if (policy.contains(x)) throw Error(where() + ": duplicate info set");
    std::vector<double> probs;
    double sum = 0.0;
    for (std::size_t i = 2; i < words.size(); ++i) {
      const double p = parse_decimal(words[i], where());
      if (!(p >= 0.0 && p <= 1.0)) throw Error(where() + ": probability outside [0,1]");
      probs.push_back(p);
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
      throw Error(where() + ": probabilities sum to " + format_double(sum));
    }
    policy.set(x, probs);
  }
  return policy;
}

BehaviorPolicy load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open policy " + path);
  return parse_policy(in, path);
}

std::size_t OpponentScript::index_at(std::uint64_t t) const {
  if (lengths.empty()) throw Error("empty opponent script");
  std::uint64_t cycle = 0;
  for (const std::uint64_t n : lengths) cycle += n;
  std::uint64_t pos = (t - 1) % cycle;
  for (std::size_t k = 0; k < lengths.size(); ++k) {
    if (pos < lengths[k]) return k;
    pos -= lengths[k];
  }
  return lengths.size() - 1;
}

OpponentScript load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open script " + path);
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  OpponentScript script;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (!header) {
      if (line != "ixomd-script 1") throw Error(where + ": expected 'ixomd-script 1'");
      header = true;
      continue;
    }
    const auto words = split_words(line);
    if (words.size() != 2) throw Error(where + ": expected '<episodes> <policy>'");
    const std::uint64_t n = parse_count(words[0], where);
    if (n == 0) throw Error(where + ": episode count must be positive");
    script.lengths.push_back(n);
    if (words[1] == "uniform") {
      script.policies.emplace_back(Role::kMin);
    } else {
      const std::filesystem::path p(words[1]);
      script.policies.push_back(load_policy((p.is_absolute() ? p : dir / p).string()));
    }
  }
  if (!header) throw Error(path + ": expected 'ixomd-script 1'");
  if (script.lengths.empty()) throw Error(path + ": script has no entries");
  return script;
}

OpponentScript load_opponent(const std::string& spec, const GameTree& game) {
  OpponentScript script;
  if (spec.starts_with("fixed:")) {
    const std::string arg = spec.substr(6);
    script.lengths = {1};
    script.policies.push_back(arg == "uniform" ? BehaviorPolicy(Role::kMin)
                                               : load_policy(arg));
  } else if (spec.starts_with("scripted:")) {
    script = load_script(spec.substr(9));
  } else {
    throw Error("unknown opponent '" + spec + "'");
  }
  for (const BehaviorPolicy& p : script.policies) {
    if (p.role() != Role::kMin) throw Error("opponent policy must have role min");
    for (const InfoSetId x : p.infosets()) {
      if (x < 0 || static_cast<std::size_t>(x) >= game.num_infosets(Role::kMin) ||
          static_cast<int>(p.stored(x).size()) != game.num_actions(Role::kMin, x)) {
        throw Error("opponent policy does not fit the game at info set " +
                    std::to_string(x));
      }
    }
  }
  return script;
}

}  // namespace ixomd
