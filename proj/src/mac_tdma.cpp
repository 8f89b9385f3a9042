#include "wban/mac_tdma.hpp"

#include <stdexcept>
#include <string>

namespace wban {

void TdmaSchedule::assign(NodeId node, std::uint32_t slot) {
  if (slot >= slots_)
    throw InvalidParameter("slot " + std::to_string(slot) + " of node " + std::to_string(node) +
                           " exceeds slots_per_superframe " + std::to_string(slots_));
  for (const auto& [other, s] : slots_by_node_)
    if (s == slot && other != node)
      throw InvalidParameter("slot " + std::to_string(slot) + " assigned to both node " + std::to_string(other) +
                             " and node " + std::to_string(node));
  slots_by_node_[node] = slot;
}

std::uint32_t TdmaSchedule::slot_of(NodeId node) const {
  auto it = slots_by_node_.find(node);
  if (it == slots_by_node_.end()) throw std::out_of_range("node " + std::to_string(node) + " has no TDMA slot");
  return it->second;
}

void TdmaSchedule::validate(SimTime superframe_duration) const {
  if (slot_duration_ <= 0 || slots_ == 0) throw InvalidParameter("TDMA needs a positive slot duration and slot count");
  const SimTime used = slot_offset_ + slot_duration_ * static_cast<SimTime>(slots_);
  if (used > superframe_duration)
    throw InvalidParameter("TDMA slots need " + std::to_string(used) + " us but the superframe lasts " +
                           std::to_string(superframe_duration) + " us");
}

SimTime TdmaSchedule::slot_start(NodeId node, SimTime superframe_start) const {
  return superframe_start + slot_offset_ + slot_duration_ * static_cast<SimTime>(slot_of(node));
}

bool slot_active(std::uint32_t multiplier, std::uint64_t superframe_index) {
  if (multiplier == 0) throw InvalidParameter("wakeup multiplier must be >= 1");
  return superframe_index % multiplier == 0;
}

SimTime next_active_slot_start(const TdmaSchedule& schedule, NodeId node, std::uint32_t multiplier,
                               SimTime superframe_duration, SimTime t) {
  if (multiplier == 0) throw InvalidParameter("wakeup multiplier must be >= 1");
  const SimTime in_frame = schedule.slot_start(node, 0);
  const SimTime period = superframe_duration * multiplier;
  // Active slots start at in_frame + m * period for m >= 0.
  if (t <= in_frame) return in_frame;
  const SimTime m = (t - in_frame + period - 1) / period;
  return in_frame + m * period;
}

}  // namespace wban
