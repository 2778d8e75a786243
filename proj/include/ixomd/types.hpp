#ifndef IXOMD_TYPES_HPP
#define IXOMD_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ixomd {

using StateId = std::int32_t;
using InfoSetId = std::int32_t;
using Action = std::int32_t;

inline constexpr InfoSetId kNoInfoSet = -1;

// Max player receives r_h, min player receives -r_h.
enum class Role : std::uint8_t { kMax = 0, kMin = 1 };

inline Role opponent(Role role) {
  return role == Role::kMax ? Role::kMin : Role::kMax;
}

inline std::string_view to_string(Role role) {
  return role == Role::kMax ? "max" : "min";
}

Role parse_role(std::string_view text);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (info set, action) pair; the root sequence has infoset == kNoInfoSet.
struct Sequence {
  InfoSetId infoset = kNoInfoSet;
  Action action = 0;

  bool is_root() const { return infoset == kNoInfoSet; }
  friend bool operator==(const Sequence&, const Sequence&) = default;
};

}  // namespace ixomd

#endif  // IXOMD_TYPES_HPP
