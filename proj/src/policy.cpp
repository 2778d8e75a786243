#include "ixomd/policy.hpp"

#include <algorithm>
#include <string>

namespace ixomd {

std::span<const double> BehaviorPolicy::stored(InfoSetId x) const {
  const auto it = index_.find(x);
  if (it == index_.end()) return {};
  return {data_.data() + it->second.offset,
          static_cast<std::size_t>(it->second.count)};
}

double BehaviorPolicy::prob(InfoSetId x, Action a, int num_actions) const {
  const auto it = index_.find(x);
  if (it == index_.end()) return 1.0 / num_actions;
  return data_[it->second.offset + static_cast<std::size_t>(a)];
}

void BehaviorPolicy::fill(InfoSetId x, int num_actions,
                          std::span<double> out) const {
  const auto row = stored(x);
  if (row.empty()) {
    std::fill(out.begin(), out.begin() + num_actions, 1.0 / num_actions);
    return;
  }
  if (static_cast<int>(row.size()) != num_actions) {
    throw Error("info set " + std::to_string(x) + " stores " +
                std::to_string(row.size()) + " actions, caller expects " +
                std::to_string(num_actions));
  }
  std::copy(row.begin(), row.end(), out.begin());
}

std::vector<double> BehaviorPolicy::distribution(InfoSetId x,
                                                 int num_actions) const {
  std::vector<double> out(static_cast<std::size_t>(num_actions));
  fill(x, num_actions, out);
  return out;
}

std::span<double> BehaviorPolicy::mutable_row(InfoSetId x, int num_actions) {
  auto it = index_.find(x);
  if (it == index_.end()) {
    const std::size_t offset = data_.size();
    data_.insert(data_.end(), static_cast<std::size_t>(num_actions),
                 1.0 / num_actions);
    it = index_.emplace(x, Slot{offset, num_actions}).first;
  } else if (it->second.count != num_actions) {
    throw Error("info set " + std::to_string(x) + " stores " +
                std::to_string(it->second.count) + " actions, caller expects " +
                std::to_string(num_actions));
  }
  return {data_.data() + it->second.offset,
          static_cast<std::size_t>(num_actions)};
}

void BehaviorPolicy::set(InfoSetId x, std::span<const double> probs) {
  auto row = mutable_row(x, static_cast<int>(probs.size()));
  std::copy(probs.begin(), probs.end(), row.begin());
}

std::vector<InfoSetId> BehaviorPolicy::infosets() const {
  std::vector<InfoSetId> out;
  out.reserve(index_.size());
  for (const auto& [x, slot] : index_) out.push_back(x);
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const BehaviorPolicy& lhs, const BehaviorPolicy& rhs) {
  if (lhs.role_ != rhs.role_ || lhs.size() != rhs.size()) return false;
  for (const auto& [x, slot] : lhs.index_) {
    const auto other = rhs.stored(x);
    const auto mine = lhs.stored(x);
    if (!std::equal(mine.begin(), mine.end(), other.begin(), other.end())) {
      return false;
    }
  }
  return true;
}

}  // namespace ixomd
