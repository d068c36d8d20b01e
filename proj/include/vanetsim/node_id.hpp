#pragma once

#include <cstdint>
#include <limits>

namespace vanetsim {

using NodeId = std::uint16_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

}  // namespace vanetsim
