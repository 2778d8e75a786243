#ifndef IXOMD_HARNESS_HPP
#define IXOMD_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ixomd/game_tree.hpp"
#include "ixomd/learner.hpp"
#include "ixomd/policy.hpp"

namespace ixomd {

struct RunConfig {
  std::string game = "kuhn";
  std::uint64_t episodes = 1000;
  std::optional<double> eta;    // unset: tuned from T, H, A, X and delta
  std::optional<double> gamma;  // unset: tuned
  double delta = kDefaultDelta;
  std::optional<std::uint64_t> eval_every;  // unset: powers of two plus T
  std::vector<std::uint64_t> probes;        // explicit list, overrides the above
  std::vector<std::uint64_t> seeds = {0};
  bool snapshot = false;
  std::uint64_t snapshot_limit = 10000;
  std::string out;  // CSV path; "{seed}" is replaced, or a suffix added for several seeds
  // selfplay | fixed:<policy file or "uniform"> | scripted:<script file>
  std::string opponent = "selfplay";
  std::string checkpoint;                 // written when the run stops
  std::string resume;                     // checkpoint to continue from
  std::optional<std::uint64_t> stop_after;  // stop early (for checkpointing)
  bool track_regret = true;
  bool wall_clock = false;  // record elapsed time; otherwise wall_ms is 0

  void validate() const;
  bool self_play() const { return opponent == "selfplay"; }
};

// JSON config file. Keys mirror the CLI flags with dashes replaced by
// underscores ("eval_every", "stop_after", ...); "eta"/"gamma" may be "auto".
// Unknown keys are rejected. Missing keys keep their values in `base`.
RunConfig parse_run_config(const std::string& json_text, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

struct ProbeRow {
  std::uint64_t episode = 0;
  double exploitability = 0.0;
  double regret_max = 0.0;
  double regret_min = 0.0;  // NaN when the min player does not learn
  double bound_max = 0.0;
  double bound_min = 0.0;
  double wall_ms = 0.0;
};

bool same_row(const ProbeRow& a, const ProbeRow& b);

struct RunReport {
  RunConfig config;
  std::uint64_t seed = 0;
  std::string game_name;
  std::uint64_t episodes_run = 0;  // < config.episodes after an early stop
  bool completed = false;
  IXConfig max_config;
  std::optional<IXConfig> min_config;
  std::size_t infosets_max = 0;
  std::size_t infosets_min = 0;
  std::size_t learner_entries_max = 0;  // accumulator size: visited info sets
  std::size_t learner_entries_min = 0;
  std::vector<ProbeRow> rows;
  BehaviorPolicy average_max{Role::kMax};
  BehaviorPolicy average_min{Role::kMin};
  double final_value = 0.0;  // V(average_max, average_min or opponent), [0,1] units
  RewardScale scale;
  int horizon = 1;
  std::optional<double> snapshot_deviation_max;
  std::optional<double> snapshot_deviation_min;
  std::uint64_t renormalizations = 0;
};

// Probe episodes: explicit list, multiples of eval_every, or powers of two;
// T is always included. Sorted, unique, within [1, T].
std::vector<std::uint64_t> probe_schedule(const RunConfig& config);

// Tuned or overridden learner settings for one role.
IXConfig learner_config(const RunConfig& config, const GameTree& game, Role role);

RunReport run_self_play(const RunConfig& config, std::uint64_t seed);
RunReport run_vs_opponent(const RunConfig& config, std::uint64_t seed);
RunReport run_single(const RunConfig& config, std::uint64_t seed);
// One report per seed; seeds run concurrently on independent generators.
std::vector<RunReport> run_all(const RunConfig& config);

std::string csv_path_for(const RunConfig& config, std::uint64_t seed);

inline constexpr const char* kCsvHeader =
    "episode,exploitability,regret_max,regret_min,bound_max,bound_min,wall_ms";
void write_csv(const std::vector<ProbeRow>& rows, std::ostream& out);
void emit_csv(const RunReport& report, const std::string& path);
std::vector<ProbeRow> read_csv(std::istream& in);
std::vector<ProbeRow> read_csv_file(const std::string& path);

// "log10(episode) log10(exploitability)" per row with positive exploitability.
void write_plot_data(const std::vector<ProbeRow>& rows, std::ostream& out);

// Least-squares slope of log10 exploitability against log10 episode over the
// rows with episode in [from, to].
double loglog_slope(const std::vector<ProbeRow>& rows, std::uint64_t from,
                    std::uint64_t to);

// Structured summary of a run (config echo, tuning, rows, final profile
// statistics) as pretty-printed JSON.
std::string report_json(const RunReport& report);

// Policy files: "ixomd-policy 1", "role <max|min>", then
// "infoset <id> <p_1> ... <p_n>" lines; unlisted info sets are uniform.
void save_policy(const BehaviorPolicy& policy, const std::string& path);
BehaviorPolicy load_policy(const std::string& path);
std::string policy_to_string(const BehaviorPolicy& policy);
BehaviorPolicy parse_policy(std::istream& in, const std::string& source);

// Scripted opponents: "ixomd-script 1" then "<episodes> <policy>" lines, where
// <policy> is a policy file (relative to the script) or "uniform". The list
// repeats until the run ends.
struct OpponentScript {
  std::vector<std::uint64_t> lengths;
  std::vector<BehaviorPolicy> policies;
  // Index of the policy used at episode t (1-based).
  std::size_t index_at(std::uint64_t t) const;
};
OpponentScript load_script(const std::string& path);
// Validates the opponent spec against the game and returns the script
// (a single entry for fixed opponents).
OpponentScript load_opponent(const std::string& spec, const GameTree& game);

}  // namespace ixomd

#endif  // IXOMD_HARNESS_HPP
