#include "ixomd/realization_plan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ixomd {

RealizationPlan realization_plan(const InfoSetTree& tree,
                                 const BehaviorPolicy& policy) {
  if (policy.role() != tree.role()) {
    throw Error("policy role does not match the info-set tree");
  }
  for (const InfoSetId x : policy.infosets()) {
    if (x < 0 || static_cast<std::size_t>(x) >= tree.size()) {
      throw Error("policy refers to unknown info set " + std::to_string(x));
    }
    if (static_cast<int>(policy.stored(x).size()) != tree.num_actions(x)) {
      throw Error("policy row size mismatch at info set " + std::to_string(x));
    }
  }
  RealizationPlan plan;
  plan.role = tree.role();
  plan.weights.resize(tree.size());
  plan.prefix.assign(tree.size(), 0.0);
  for (const auto& level : tree.levels()) {
    for (const InfoSetId x : level) {
      const auto xi = static_cast<std::size_t>(x);
      const Sequence& p = tree.parent(x);
      const double prefix = p.is_root() ? 1.0 : plan.weight(p.infoset, p.action);
      plan.prefix[xi] = prefix;
      const int n = tree.num_actions(x);
      plan.weights[xi].resize(static_cast<std::size_t>(n));
      policy.fill(x, n, plan.weights[xi]);
      for (double& w : plan.weights[xi]) w *= prefix;
    }
  }
  return plan;
}

BehaviorPolicy policy_from_plan(const InfoSetTree& tree,
                                const RealizationPlan& plan) {
  BehaviorPolicy policy(tree.role());
  std::vector<double> row;
  for (std::size_t x = 0; x < tree.size(); ++x) {
    const auto& w = plan.weights[x];
    double total = 0.0;
    for (const double v : w) total += v;
    if (total <= 0.0) continue;
    row.assign(w.begin(), w.end());
    for (double& v : row) v /= total;
    policy.set(static_cast<InfoSetId>(x), row);
  }
  return policy;
}

RealizationPlan combine_plans(const std::vector<const RealizationPlan*>& plans,
                              const std::vector<double>& coefficients) {
  if (plans.empty() || plans.size() != coefficients.size()) {
    throw Error("combine_plans needs one coefficient per plan");
  }
  RealizationPlan out = *plans.front();
  for (auto& row : out.weights) std::fill(row.begin(), row.end(), 0.0);
  std::fill(out.prefix.begin(), out.prefix.end(), 0.0);
  for (std::size_t k = 0; k < plans.size(); ++k) {
    const RealizationPlan& plan = *plans[k];
    for (std::size_t x = 0; x < out.weights.size(); ++x) {
      out.prefix[x] += coefficients[k] * plan.prefix[x];
      for (std::size_t a = 0; a < out.weights[x].size(); ++a) {
        out.weights[x][a] += coefficients[k] * plan.weights[x][a];
      }
    }
  }
  return out;
}

double consistency_error(const InfoSetTree& tree, const RealizationPlan& plan) {
  double worst = 0.0;
  for (std::size_t x = 0; x < tree.size(); ++x) {
    double total = 0.0;
    for (const double w : plan.weights[x]) {
      total += w;
      if (w < 0.0) worst = std::max(worst, -w);
    }
    const Sequence& p = tree.parent(static_cast<InfoSetId>(x));
    const double expected = p.is_root() ? 1.0 : plan.weight(p.infoset, p.action);
    worst = std::max(worst, std::abs(total - expected));
  }
  return worst;
}

}  // namespace ixomd
