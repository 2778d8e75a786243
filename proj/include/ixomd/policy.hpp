#ifndef IXOMD_POLICY_HPP
#define IXOMD_POLICY_HPP

#include <span>
#include <unordered_map>
#include <vector>

#include "ixomd/types.hpp"

namespace ixomd {

// Sparse behavioral policy: action distributions for the info sets that have
// been written, uniform over the local action count everywhere else.
class BehaviorPolicy {
 public:
  explicit BehaviorPolicy(Role role = Role::kMax) : role_(role) {}

  Role role() const { return role_; }
  std::size_t size() const { return index_.size(); }
  bool contains(InfoSetId x) const { return index_.contains(x); }

  // Stored distribution, or an empty span for default (uniform) info sets.
  std::span<const double> stored(InfoSetId x) const;

  double prob(InfoSetId x, Action a, int num_actions) const;
  void fill(InfoSetId x, int num_actions, std::span<double> out) const;
  std::vector<double> distribution(InfoSetId x, int num_actions) const;

  // Row for x, created as uniform if absent. The span is invalidated by the
  // next insertion of a new info set.
  std::span<double> mutable_row(InfoSetId x, int num_actions);
  void set(InfoSetId x, std::span<const double> probs);

  // Stored info sets in ascending id order.
  std::vector<InfoSetId> infosets() const;

  friend bool operator==(const BehaviorPolicy& lhs, const BehaviorPolicy& rhs);

 private:
  struct Slot {
    std::size_t offset;
    int count;
  };

  Role role_;
  std::unordered_map<InfoSetId, Slot> index_;
  std::vector<double> data_;
};

}  // namespace ixomd

#endif  // IXOMD_POLICY_HPP
