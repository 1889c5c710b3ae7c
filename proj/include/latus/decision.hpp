#pragma once

#include <cstddef>
#include <vector>

#include "latus/geometry.hpp"

namespace latus {

/// Per-slot control variables: which L-UAV serves each task, how the task is
/// split between the tiers, the CPU shares, and where the UAVs fly to.
/// Task vectors are index-aligned with the slot's task list.
struct Allocation {
  std::vector<std::size_t> assignment;  // task -> L-UAV index
  std::vector<double> alpha;            // fraction computed on the L-UAV
  std::vector<double> f_lu;             // Hz granted by the matched L-UAV
  std::vector<double> f_h;              // Hz granted by the H-UAV
  std::vector<bool> direct;             // task bypasses its L-UAV (V2HU link)
  std::vector<Vec2> luav_positions;
  Vec2 huav_position;
};

}  // namespace latus
