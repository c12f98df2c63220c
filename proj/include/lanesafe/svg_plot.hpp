#pragma once

#include <filesystem>

#include "lanesafe/simulator.hpp"

namespace lanesafe {

/// Top-down view: lane bands with dashed midlines, per-vehicle paths and
/// time-shadowed vehicle outlines at whole seconds.
void write_trajectory_svg(const TrajectoryLog& log, const std::filesystem::path& path);

/// One panel per vehicle with the time series of all seven barrier values
/// (clamped for display) and the zero line.
void write_barrier_svg(const TrajectoryLog& log, const std::filesystem::path& path);

}  // namespace lanesafe
