#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "lanesafe/vehicle_model.hpp"

namespace lanesafe {

/// Straight multi-lane road. Lane l (1-based) is centered at y = l * lane_width;
/// its drivable band is [y_lower(l), y_upper(l)], shrunk by the margin epsilon.
struct LaneGeometry {
    double lane_width = 4.0;  // w [m]
    int lane_count = 2;
    double epsilon = 0.1;     // boundary margin [m]

    double lane_center(int lane) const { return lane * lane_width; }
    double y_lower(int lane) const { return lane * lane_width - lane_width / 2.0 + epsilon; }
    double y_upper(int lane) const { return lane * lane_width + lane_width / 2.0 - epsilon; }
};

/// Lane index for a lateral position: nearest lane center, clamped to
/// [1, lane_count]. Also used for the ego during a lane change, so the
/// index (and with it the lane bounds) flips when a midline is crossed.
int lane_of(double y, const LaneGeometry& geometry);

/// The six neighbor slots, in canonical order.
enum class Slot : std::size_t {
    LeftFront = 0,   // +1F
    LeftBack = 1,    // +1B
    SameFront = 2,   // 0F
    SameBack = 3,    // 0B
    RightFront = 4,  // -1F
    RightBack = 5,   // -1B
};

constexpr std::size_t kSlotCount = 6;
constexpr std::array<Slot, kSlotCount> kAllSlots = {
    Slot::LeftFront, Slot::LeftBack, Slot::SameFront,
    Slot::SameBack, Slot::RightFront, Slot::RightBack};

std::string slot_name(Slot slot);

struct SlotOccupant {
    VehicleState state;
    bool is_mock = true;
};

/// The ego's world view: all six slots filled, real vehicles where one is
/// in range and a worst-case mock at distance r_S otherwise.
struct NeighborFrame {
    VehicleState ego;
    int ego_lane = 1;
    std::array<SlotOccupant, kSlotCount> slots;

    const SlotOccupant& slot(Slot s) const { return slots[static_cast<std::size_t>(s)]; }
    SlotOccupant& slot(Slot s) { return slots[static_cast<std::size_t>(s)]; }
};

/// Classify every vehicle within sensor_range into the six slots.
///
/// Relative lane is lane_of(other) - lane_of(ego); values outside
/// {-1, 0, +1} are ignored. Front/back is the sign of x_other - x_ego;
/// on an exact tie the left lane counts as front, the right lane as back,
/// and the same lane as front. When several vehicles compete for a slot
/// the one nearest in |x| wins. Empty slots receive a mock vehicle at
/// x_ego +/- sensor_range on the respective lane center, heading 0,
/// speed mock_speed.
NeighborFrame classify(const VehicleState& ego, std::span<const VehicleState> others,
                       const LaneGeometry& geometry, double sensor_range, double mock_speed);

}  // namespace lanesafe
