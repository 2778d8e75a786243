#ifndef IXOMD_REALIZATION_PLAN_HPP
#define IXOMD_REALIZATION_PLAN_HPP

#include <vector>

#include "ixomd/infoset_tree.hpp"
#include "ixomd/policy.hpp"

namespace ixomd {

// Sequence-form reach weights over one player's info-set tree. Dense: every
// info set of the tree has a row.
struct RealizationPlan {
  Role role = Role::kMax;
  std::vector<std::vector<double>> weights;  // [x][a] = mu_{1:h}(x, a)
  std::vector<double> prefix;                // [x]    = mu_{1:h-1}(x)

  double weight(InfoSetId x, Action a) const {
    return weights[static_cast<std::size_t>(x)][static_cast<std::size_t>(a)];
  }
};

// Throws Error if the policy stores an info set the tree does not know, or a
// row whose size differs from the tree's action count.
RealizationPlan realization_plan(const InfoSetTree& tree,
                                 const BehaviorPolicy& policy);

// Inverse map on the support: pol(a|x) = weight / prefix, uniform where the
// prefix is zero.
BehaviorPolicy policy_from_plan(const InfoSetTree& tree,
                                const RealizationPlan& plan);

// Weighted sum of plans (e.g. a mixture); weights need not be normalized.
RealizationPlan combine_plans(const std::vector<const RealizationPlan*>& plans,
                              const std::vector<double>& coefficients);

// Largest absolute violation of the consistency equations.
double consistency_error(const InfoSetTree& tree, const RealizationPlan& plan);

}  // namespace ixomd

#endif  // IXOMD_REALIZATION_PLAN_HPP
