#include "wban/wakeup.hpp"

#include <string>

namespace wban {

WakeupTable WakeupTable::build(std::span<const NodeProfile> profiles) {
  if (profiles.empty()) throw ConfigError("wakeup table needs at least one node");
  WakeupTable table;
  for (const auto& p : profiles) {
    if (p.id == kBnc) throw ConfigError("node id 0 is reserved for the BNC");
    if (p.wakeup_multiplier == 0) throw ConfigError("node " + std::to_string(p.id) + ": wakeup multiplier must be >= 1");
    if (!table.entries_.emplace(p.id, p.wakeup_multiplier).second)
      throw ConfigError("duplicate node id " + std::to_string(p.id));
  }
  return table;
}

std::uint32_t WakeupTable::multiplier(NodeId node) const {
  auto it = entries_.find(node);
  if (it == entries_.end()) throw std::out_of_range("node " + std::to_string(node) + " not in wakeup table");
  return it->second;
}

void WakeupTable::set_multiplier(NodeId node, std::uint32_t k) {
  auto it = entries_.find(node);
  if (it == entries_.end()) throw std::out_of_range("node " + std::to_string(node) + " not in wakeup table");
  if (k == 0) throw ConfigError("node " + std::to_string(node) + ": wakeup multiplier must be >= 1");
  it->second = k;
  ++version_;
}

std::map<std::uint32_t, std::set<NodeId>> WakeupTable::contention_groups() const {
  std::map<std::uint32_t, std::set<NodeId>> groups;
  for (const auto& [node, k] : entries_) groups[k].insert(node);
  return groups;
}

bool is_awake(const WakeupTable& table, NodeId node, std::uint64_t superframe_index) {
  return superframe_index % table.multiplier(node) == 0;
}

std::vector<std::uint64_t> bnc_schedule(const WakeupTable& table, std::uint64_t horizon) {
  std::vector<bool> awake(horizon, false);
  for (const auto& [k, members] : table.contention_groups())
    for (std::uint64_t i = 0; i < horizon; i += k) awake[i] = true;
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < horizon; ++i)
    if (awake[i]) out.push_back(i);
  return out;
}

AwakeFraction bnc_awake_fraction(const WakeupTable& table, std::uint64_t horizon) {
  return {bnc_schedule(table, horizon).size(), horizon};
}

WakeupSignal WakeupSignal::emergency(NodeId from) {
  return WakeupSignal(WakeupMode::Broadcast, WakeupDirection::ToBnc, WakeupPurpose::Emergency, from);
}

WakeupSignal WakeupSignal::on_demand(NodeId target, WakeupMode mode) {
  return WakeupSignal(mode, WakeupDirection::ToNode, WakeupPurpose::OnDemand, target);
}

SimTime activation_time(SimTime now, const WakeupTiming& timing, bool already_awake) {
  return now + timing.signal_airtime + (already_awake ? 0 : timing.wakeup_latency);
}

WakeupResult send_wakeup(const WakeupSignal& signal, std::span<const WakeupReceiver> receivers) {
  WakeupResult r;
  if (signal.direction() == WakeupDirection::ToBnc) {
    r.woken.push_back(kBnc);
    r.intended = 1;
    return r;
  }
  const WakeupReceiver* target = nullptr;
  for (const auto& rx : receivers)
    if (rx.id == signal.node()) target = &rx;
  if (target == nullptr) throw ConfigError("wakeup target " + std::to_string(signal.node()) + " does not exist");
  if (!target->has_receiver)
    throw ConfigError("wakeup target " + std::to_string(signal.node()) + " has no wakeup receiver");

  if (signal.addressing() == WakeupMode::FrequencyAddressed) {
    if (!target->frequency)
      throw ConfigError("node " + std::to_string(signal.node()) + " has no wakeup frequency assignment");
    r.woken.push_back(target->id);
    r.intended = 1;
    return r;
  }
  for (const auto& rx : receivers)
    if (rx.has_receiver) r.woken.push_back(rx.id);
  r.intended = 1;
  r.spurious = r.woken.size() - r.intended;
  return r;
}

}  // namespace wban
