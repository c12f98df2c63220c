#include "lanesafe/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace lanesafe {

int lane_of(double y, const LaneGeometry& geometry) {
    const int nearest = static_cast<int>(std::lround(y / geometry.lane_width));
    return std::clamp(nearest, 1, geometry.lane_count);
}

std::string slot_name(Slot slot) {
    switch (slot) {
        case Slot::LeftFront: return "+1F";
        case Slot::LeftBack: return "+1B";
        case Slot::SameFront: return "0F";
        case Slot::SameBack: return "0B";
        case Slot::RightFront: return "-1F";
        case Slot::RightBack: return "-1B";
    }
    return "?";
}

namespace {

std::optional<Slot> slot_for(int relative_lane, double dx) {
    bool front;
    if (dx > 0.0) {
        front = true;
    } else if (dx < 0.0) {
        front = false;
    } else {
        // Identical x: left lane counts as front, right lane as back,
        // same lane as front.
        front = relative_lane >= 0;
    }
    switch (relative_lane) {
        case +1: return front ? Slot::LeftFront : Slot::LeftBack;
        case 0: return front ? Slot::SameFront : Slot::SameBack;
        case -1: return front ? Slot::RightFront : Slot::RightBack;
        default: return std::nullopt;
    }
}

int slot_relative_lane(Slot s) {
    switch (s) {
        case Slot::LeftFront:
        case Slot::LeftBack: return +1;
        case Slot::SameFront:
        case Slot::SameBack: return 0;
        case Slot::RightFront:
        case Slot::RightBack: return -1;
    }
    return 0;
}

bool slot_is_front(Slot s) {
    return s == Slot::LeftFront || s == Slot::SameFront || s == Slot::RightFront;
}

}  // namespace

NeighborFrame classify(const VehicleState& ego, std::span<const VehicleState> others,
                       const LaneGeometry& geometry, double sensor_range, double mock_speed) {
    NeighborFrame frame;
    frame.ego = ego;
    frame.ego_lane = lane_of(ego.y, geometry);

    std::array<double, kSlotCount> best_gap;
    best_gap.fill(std::numeric_limits<double>::infinity());
    std::array<bool, kSlotCount> occupied{};

    for (const VehicleState& other : others) {
        const double dx = other.x - ego.x;
        const double dy = other.y - ego.y;
        if (std::hypot(dx, dy) > sensor_range) {
            continue;
        }
        const int relative_lane = lane_of(other.y, geometry) - frame.ego_lane;
        const auto slot = slot_for(relative_lane, dx);
        if (!slot) {
            continue;
        }
        const auto idx = static_cast<std::size_t>(*slot);
        if (std::abs(dx) < best_gap[idx]) {
            best_gap[idx] = std::abs(dx);
            frame.slots[idx] = SlotOccupant{other, false};
            occupied[idx] = true;
        }
    }

    for (Slot s : kAllSlots) {
        const auto idx = static_cast<std::size_t>(s);
        if (occupied[idx]) {
            continue;
        }
        const int mock_lane = frame.ego_lane + slot_relative_lane(s);
        VehicleState mock;
        mock.x = ego.x + (slot_is_front(s) ? sensor_range : -sensor_range);
        mock.y = mock_lane * geometry.lane_width;
        mock.psi = 0.0;
        mock.v_applied = mock_speed;
        mock.omega_applied = 0.0;
        frame.slots[idx] = SlotOccupant{mock, true};
    }
    return frame;
}

}  // namespace lanesafe
