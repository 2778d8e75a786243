#include "ixomd/learner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>

#include "ixomd/checked_file.hpp"
#include "ixomd/realization_plan.hpp"

namespace ixomd {

namespace {

constexpr double kNormalizationDrift = 1e-9;
constexpr std::string_view kLearnerMagic = "ixomd-learner";
constexpr int kLearnerVersion = 1;

}  // namespace

void IXConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error("eta must be positive and finite");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error("gamma must be non-negative and finite");
  }
  if (horizon < 1) throw Error("horizon must be at least 1");
  if (max_actions < 1) throw Error("action bound must be at least 1");
}

double confidence_log_term(int horizon, double infosets, int actions,
                           double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error("delta must lie in (0,1)");
  if (horizon < 1 || !(infosets >= 1.0) || actions < 1) {
    throw Error("iota needs H, X, A >= 1");
  }
  return std::log(3.0 * horizon * infosets * actions / delta);
}

IXConfig recommended_hyperparams(std::uint64_t T, int horizon, int actions,
                                 std::optional<double> infosets, double delta) {
  if (T == 0) throw Error("cannot tune for T = 0 episodes");
  if (horizon < 1 || actions < 1) throw Error("tuning needs H, A >= 1");
  const double t = static_cast<double>(T);
  const double a = actions;
  IXConfig config;
  config.horizon = horizon;
  config.max_actions = actions;
  config.eta = actions > 1 ? std::sqrt(std::log(a) / (t * (1.0 + horizon) * a))
                           : 1.0 / std::sqrt(t);
  if (infosets) {
    const double iota = confidence_log_term(horizon, *infosets, actions, delta);
    config.gamma = std::sqrt(iota / (2.0 * t * a));
  } else {
    config.gamma = 1.0 / std::sqrt(2.0 * t * a);
  }
  return config;
}

IXConfig recommended_hyperparams_t_only(std::uint64_t T, int horizon,
                                        int actions) {
  if (T == 0) throw Error("cannot tune for T = 0 episodes");
  IXConfig config;
  config.horizon = horizon;
  config.max_actions = actions;
  config.eta = config.gamma = 1.0 / std::sqrt(static_cast<double>(T));
  return config;
}

std::vector<double> backward_log_z(std::span<const double> probs,
                                   std::span<const double> losses, double eta,
                                   std::span<const double> others) {
  if (probs.size() != losses.size() ||
      (!others.empty() && others.size() != probs.size())) {
    throw Error("backward_log_z: input lengths differ");
  }
  const std::size_t H = probs.size();
  std::vector<double> log_z(H + 1, 0.0);
  for (std::size_t h = H; h-- > 0;) {
    // Z_h = (1 - mu) + mu * exp(-eta l + log Z_{h+1}). The log1p form is exact
    // at the zero-loss fixed point; when the kept term is tiny relative to the
    // row it loses precision, so the sum is taken in log space instead.
    const double rest = others.empty() ? 1.0 - probs[h] : others[h];
    const double inner = -eta * losses[h] + log_z[h + 1];
    const double total = rest + probs[h];
    const double change = probs[h] * std::expm1(inner) / total;
    if (change > -0.5) {
      log_z[h] = std::log(total) + std::log1p(change);
    } else if (rest <= 0.0) {
      log_z[h] = std::log(probs[h]) + inner;
    } else {
      const double spread = std::log(rest);
      const double kept = std::log(probs[h]) + inner;
      const double hi = std::max(spread, kept);
      log_z[h] = hi + std::log1p(std::exp(std::min(spread, kept) - hi));
    }
    if (!std::isfinite(log_z[h])) {
      std::ostringstream msg;
      msg << "normalizer overflow at step " << h + 1 << " (mu=" << probs[h]
          << ", loss=" << losses[h] << ", eta=" << eta << ")";
      throw Error(msg.str());
    }
  }
  return log_z;
}

// ---------------------------------------------------------------------------

const AverageAccumulator::Entry* AverageAccumulator::find(InfoSetId x) const {
  const auto it = entries_.find(x);
  return it == entries_.end() ? nullptr : &it->second;
}

void AverageAccumulator::insert(InfoSetId x, Entry entry) {
  const auto level = static_cast<std::size_t>(entry.level);
  if (by_level_.size() <= level) by_level_.resize(level + 1);
  if (entries_.emplace(x, std::move(entry)).second) by_level_[level].push_back(x);
}

void AverageAccumulator::accumulate(const Trajectory& traj,
                                    const BehaviorPolicy& current,
                                    std::uint64_t t) {
  if (by_level_.size() < traj.steps.size()) by_level_.resize(traj.steps.size());
  Sequence parent;
  const std::vector<double>* parent_mu_dot = nullptr;
  for (std::size_t h = 0; h < traj.steps.size(); ++h) {
    const Step& step = traj.steps[h];
    auto [it, fresh] = entries_.try_emplace(step.infoset);
    Entry& entry = it->second;
    if (fresh) {
      entry.level = static_cast<int>(h);
      entry.pred = parent;
      entry.mu_dot.assign(static_cast<std::size_t>(step.num_actions), 0.0);
      by_level_[h].push_back(step.infoset);
    } else if (entry.pred != parent || entry.level != static_cast<int>(h)) {
      throw Error("info set " + std::to_string(step.infoset) +
                  " reached through a different history than before "
                  "(perfect recall violated)");
    } else if (entry.mu_dot.size() != static_cast<std::size_t>(step.num_actions)) {
      throw Error("info set " + std::to_string(step.infoset) +
                  " changed its action count");
    }
    const double parent_value =
        parent_mu_dot == nullptr
            ? static_cast<double>(t)
            : (*parent_mu_dot)[static_cast<std::size_t>(parent.action)];
    const double diff = parent_value - entry.last_parent;
    entry.last_parent = parent_value;
    const auto row = current.stored(step.infoset);
    const double uniform = 1.0 / step.num_actions;
    for (std::size_t a = 0; a < entry.mu_dot.size(); ++a) {
      entry.mu_dot[a] += diff * (row.empty() ? uniform : row[a]);
    }
    parent = {step.infoset, step.action};
    parent_mu_dot = &entry.mu_dot;
  }
}

std::unordered_map<InfoSetId, std::vector<double>> AverageAccumulator::flushed(
    std::uint64_t T, const BehaviorPolicy& current) const {
  std::unordered_map<InfoSetId, std::vector<double>> out;
  out.reserve(entries_.size());
  for (const auto& level : by_level_) {
    for (const InfoSetId x : level) {
      const Entry& entry = entries_.at(x);
      const double parent_value =
          entry.pred.is_root()
              ? static_cast<double>(T)
              : out.at(entry.pred.infoset)[static_cast<std::size_t>(entry.pred.action)];
      const double diff = parent_value - entry.last_parent;
      std::vector<double> values = entry.mu_dot;
      const auto row = current.stored(x);
      const double uniform = 1.0 / static_cast<double>(values.size());
      for (std::size_t a = 0; a < values.size(); ++a) {
        values[a] += diff * (row.empty() ? uniform : row[a]);
      }
      out.emplace(x, std::move(values));
    }
  }
  return out;
}

BehaviorPolicy AverageAccumulator::finalize(std::uint64_t T,
                                            const BehaviorPolicy& current,
                                            Role role) const {
  BehaviorPolicy average(role);
  for (auto& [x, values] : flushed(T, current)) {
    const double total = std::accumulate(values.begin(), values.end(), 0.0);
    if (total > 0.0) {
      for (double& v : values) v /= total;
    } else {
      // Reachable only through a branch the learner never played; its mass
      // is zero in every iterate, so any distribution is consistent.
      std::fill(values.begin(), values.end(), 1.0 / static_cast<double>(values.size()));
    }
    average.set(x, values);
  }
  return average;
}

// ---------------------------------------------------------------------------

IxomdLearner::IxomdLearner(Role role, IXConfig config)
    : role_(role), config_(config), policy_(role) {
  config_.validate();
}

IxomdLearner::IxomdLearner(Role role, IXConfig config, BehaviorPolicy initial)
    : IxomdLearner(role, config) {
  if (initial.role() != role) throw Error("initial policy belongs to the other player");
  for (const InfoSetId x : initial.infosets()) {
    const auto row = initial.stored(x);
    if (static_cast<int>(row.size()) > config_.max_actions) {
      throw Error("initial policy row exceeds the action bound");
    }
  }
  policy_ = std::move(initial);
}

std::vector<double> IxomdLearner::act(InfoSetId x, int num_actions) const {
  return policy_.distribution(x, num_actions);
}

void IxomdLearner::check_trajectory(const Trajectory& traj) const {
  if (traj.role != role_) throw Error("trajectory belongs to the other player");
  if (static_cast<int>(traj.steps.size()) != config_.horizon) {
    throw Error("trajectory has " + std::to_string(traj.steps.size()) +
                " steps, horizon is " + std::to_string(config_.horizon));
  }
  for (const Step& step : traj.steps) {
    if (step.num_actions < 1 || step.num_actions > config_.max_actions ||
        step.action < 0 || step.action >= step.num_actions) {
      throw Error("trajectory step has action " + std::to_string(step.action) +
                  " of " + std::to_string(step.num_actions) +
                  " (bound " + std::to_string(config_.max_actions) + ")");
    }
  }
}

StepLoss IxomdLearner::estimate_losses(const Trajectory& traj) const {
  check_trajectory(traj);
  StepLoss out;
  out.values.resize(traj.steps.size());
  out.reach.resize(traj.steps.size());
  double reach = 1.0;
  for (std::size_t h = 0; h < traj.steps.size(); ++h) {
    const Step& step = traj.steps[h];
    reach *= policy_.prob(step.infoset, step.action, step.num_actions);
    const double loss = role_ == Role::kMax ? 1.0 - step.reward : step.reward;
    const double denom = reach + config_.gamma;
    if (!(denom > 0.0)) {
      throw Error("zero reach at step " + std::to_string(h + 1) +
                  " with gamma = 0: trajectory inconsistent with the policy");
    }
    out.reach[h] = reach;
    out.values[h] = loss / denom;
  }
  return out;
}

void IxomdLearner::omd_update(const Trajectory& traj, const StepLoss& losses) {
  check_trajectory(traj);
  const std::size_t H = traj.steps.size();
  if (losses.values.size() != H) throw Error("loss vector length mismatch");

  std::vector<double> probs(H);
  std::vector<double> others(H, 0.0);
  for (std::size_t h = 0; h < H; ++h) {
    const Step& step = traj.steps[h];
    const auto row = policy_.stored(step.infoset);
    if (row.empty()) {
      probs[h] = 1.0 / step.num_actions;
      others[h] = (step.num_actions - 1) * probs[h];
    } else {
      if (static_cast<int>(row.size()) != step.num_actions) {
        throw Error("info set " + std::to_string(step.infoset) + " changed its action count");
      }
      probs[h] = row[static_cast<std::size_t>(step.action)];
      for (std::size_t a = 0; a < row.size(); ++a) {
        if (static_cast<Action>(a) != step.action) others[h] += row[a];
      }
    }
  }
  const std::vector<double> log_z =
      backward_log_z(probs, losses.values, config_.eta, others);

  for (std::size_t h = 0; h < H; ++h) {
    const Step& step = traj.steps[h];
    if (step.num_actions == 1) continue;  // a single action stays at 1
    auto row = policy_.mutable_row(step.infoset, step.num_actions);
    const double others = std::exp(-log_z[h]);
    const double chosen =
        std::exp(-config_.eta * losses.values[h] + log_z[h + 1] - log_z[h]);
    double total = 0.0;
    for (std::size_t a = 0; a < row.size(); ++a) {
      row[a] *= static_cast<Action>(a) == step.action ? chosen : others;
      total += row[a];
    }
    if (std::abs(total - 1.0) > kNormalizationDrift) {
      for (double& v : row) v /= total;
      ++renormalizations_;
      std::clog << "ixomd: renormalized info set " << step.infoset
                << " (drift " << total - 1.0 << ") at episode " << t_ + 1 << '\n';
    }
  }
  ++t_;
}

void IxomdLearner::accumulate_average(const Trajectory& traj) {
  check_trajectory(traj);
  accumulator_.accumulate(traj, policy_, t_ + 1);
}

void IxomdLearner::observe(const Trajectory& traj) {
  accumulate_average(traj);
  omd_update(traj, estimate_losses(traj));
}

BehaviorPolicy IxomdLearner::finalize_average() const {
  return finalize_average(t_);
}

BehaviorPolicy IxomdLearner::finalize_average(std::uint64_t T) const {
  return accumulator_.finalize(T, policy_, role_);
}

// ---------------------------------------------------------------------------

void IxomdLearner::write_state(std::ostream& out) const {
  out << "role " << to_string(role_) << '\n'
      << "config " << hex_double(config_.eta) << ' ' << hex_double(config_.gamma)
      << ' ' << config_.horizon << ' ' << config_.max_actions << '\n'
      << "episodes " << t_ << '\n'
      << "renormalizations " << renormalizations_ << '\n';
  const auto ids = policy_.infosets();
  out << "policy " << ids.size() << '\n';
  for (const InfoSetId x : ids) {
    const auto row = policy_.stored(x);
    out << x << ' ' << row.size();
    for (const double p : row) out << ' ' << hex_double(p);
    out << '\n';
  }
  std::vector<InfoSetId> visited;
  visited.reserve(accumulator_.size());
  for (const auto& [x, entry] : accumulator_.entries()) visited.push_back(x);
  std::sort(visited.begin(), visited.end(), [&](InfoSetId a, InfoSetId b) {
    const int la = accumulator_.find(a)->level;
    const int lb = accumulator_.find(b)->level;
    return la != lb ? la < lb : a < b;
  });
  out << "accumulator " << visited.size() << '\n';
  for (const InfoSetId x : visited) {
    const auto& entry = *accumulator_.find(x);
    out << x << ' ' << entry.level << ' ' << entry.pred.infoset << ' '
        << entry.pred.action << ' ' << hex_double(entry.last_parent) << ' '
        << entry.mu_dot.size();
    for (const double v : entry.mu_dot) out << ' ' << hex_double(v);
    out << '\n';
  }
  out << "end\n";
}

namespace {

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string token;
    if (!(in_ >> token)) throw Error("learner state: unexpected end of input");
    return token;
  }
  void expect(std::string_view keyword) {
    const std::string token = word();
    if (token != keyword) {
      throw Error("learner state: expected '" + std::string(keyword) +
                  "', found '" + token + "'");
    }
  }
  template <typename Int>
  Int integer() {
    const std::string token = word();
    Int value{};
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
      throw Error("learner state: bad integer '" + token + "'");
    }
    return value;
  }
  double real() { return parse_hex_double(word()); }

 private:
  std::istream& in_;
};

}  // namespace

IxomdLearner IxomdLearner::read_state(std::istream& in) {
  TokenReader reader(in);
  reader.expect("role");
  const Role role = parse_role(reader.word());
  reader.expect("config");
  IXConfig config;
  config.eta = reader.real();
  config.gamma = reader.real();
  config.horizon = reader.integer<int>();
  config.max_actions = reader.integer<int>();
  IxomdLearner learner(role, config);
  reader.expect("episodes");
  learner.t_ = reader.integer<std::uint64_t>();
  reader.expect("renormalizations");
  learner.renormalizations_ = reader.integer<std::uint64_t>();

  reader.expect("policy");
  const auto rows = reader.integer<std::size_t>();
  std::vector<double> buffer;
  for (std::size_t i = 0; i < rows; ++i) {
    const auto x = reader.integer<InfoSetId>();
    const auto n = reader.integer<std::size_t>();
    if (n < 1 || n > static_cast<std::size_t>(config.max_actions)) {
      throw Error("learner state: bad action count for info set " + std::to_string(x));
    }
    buffer.resize(n);
    for (double& p : buffer) p = reader.real();
    if (learner.policy_.contains(x)) throw Error("learner state: duplicate policy row");
    learner.policy_.set(x, buffer);
  }

  reader.expect("accumulator");
  const auto entries = reader.integer<std::size_t>();
  for (std::size_t i = 0; i < entries; ++i) {
    const auto x = reader.integer<InfoSetId>();
    AverageAccumulator::Entry entry;
    entry.level = reader.integer<int>();
    entry.pred.infoset = reader.integer<InfoSetId>();
    entry.pred.action = reader.integer<Action>();
    entry.last_parent = reader.real();
    const auto n = reader.integer<std::size_t>();
    if (n < 1 || n > static_cast<std::size_t>(config.max_actions) ||
        entry.level < 0 || entry.level >= config.horizon) {
      throw Error("learner state: malformed accumulator entry " + std::to_string(x));
    }
    entry.mu_dot.resize(n);
    for (double& v : entry.mu_dot) v = reader.real();
    if (!entry.pred.is_root() && learner.accumulator_.find(entry.pred.infoset) == nullptr) {
      throw Error("learner state: accumulator entry before its predecessor");
    }
    if (learner.accumulator_.find(x) != nullptr) {
      throw Error("learner state: duplicate accumulator entry");
    }
    learner.accumulator_.insert(x, std::move(entry));
  }
  reader.expect("end");
  return learner;
}

void IxomdLearner::save(const std::string& path) const {
  std::ostringstream body;
  write_state(body);
  write_checked_file(path, kLearnerMagic, kLearnerVersion, body.str());
}

IxomdLearner IxomdLearner::load(const std::string& path) {
  std::istringstream body(read_checked_file(path, kLearnerMagic, kLearnerVersion));
  return read_state(body);
}

// ---------------------------------------------------------------------------

double dilated_divergence(const InfoSetTree& tree, const BehaviorPolicy& p,
                          const BehaviorPolicy& q) {
  const RealizationPlan plan = realization_plan(tree, p);
  double total = 0.0;
  for (std::size_t x = 0; x < tree.size(); ++x) {
    const auto id = static_cast<InfoSetId>(x);
    const int n = tree.num_actions(id);
    for (Action a = 0; a < n; ++a) {
      const double w = plan.weight(id, a);
      if (w == 0.0) continue;
      const double pa = p.prob(id, a, n);
      const double qa = q.prob(id, a, n);
      if (!(qa > 0.0)) {
        throw Error("dilated divergence: q has no mass at info set " +
                    std::to_string(x) + ", action " + std::to_string(a));
      }
      total += w * std::log(pa / qa);
    }
  }
  return total;
}

}  // namespace ixomd
