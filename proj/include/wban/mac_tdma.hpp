#pragma once

#include <cstdint>
#include <map>

#include "wban/core.hpp"

namespace wban {

/// Static slot ownership. Slot j of superframe s starts at
/// s * superframe_duration + slot_offset + j * slot_duration.
class TdmaSchedule {
 public:
  TdmaSchedule() = default;
  TdmaSchedule(SimTime slot_duration, std::uint32_t slots_per_superframe, SimTime slot_offset)
      : slot_duration_(slot_duration), slots_(slots_per_superframe), slot_offset_(slot_offset) {}

  /// Throws InvalidParameter on a duplicate or out-of-range slot index.
  void assign(NodeId node, std::uint32_t slot);
  /// Throws std::out_of_range for unassigned nodes.
  std::uint32_t slot_of(NodeId node) const;
  bool has_slot(NodeId node) const { return slots_by_node_.contains(node); }

  SimTime slot_duration() const { return slot_duration_; }
  std::uint32_t slots_per_superframe() const { return slots_; }
  SimTime slot_offset() const { return slot_offset_; }
  const std::map<NodeId, std::uint32_t>& assignments() const { return slots_by_node_; }

  /// slot_offset + slots * slot_duration must fit into the superframe.
  void validate(SimTime superframe_duration) const;

  SimTime slot_start(NodeId node, SimTime superframe_start) const;

 private:
  SimTime slot_duration_ = 0;
  std::uint32_t slots_ = 0;
  SimTime slot_offset_ = 0;
  std::map<NodeId, std::uint32_t> slots_by_node_;
};

/// A node's data slot is usable on superframes with index = 0 (mod multiplier).
bool slot_active(std::uint32_t multiplier, std::uint64_t superframe_index);

/// Start of the node's first usable slot at or after t.
SimTime next_active_slot_start(const TdmaSchedule& schedule, NodeId node, std::uint32_t multiplier,
                               SimTime superframe_duration, SimTime t);

}  // namespace wban
