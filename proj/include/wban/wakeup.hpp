#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "wban/core.hpp"

namespace wban {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Traffic-based wakeup table kept by the BNC: node -> superframe multiple.
class WakeupTable {
 public:
  /// Throws ConfigError on an empty list, a duplicate id or a zero multiplier.
  static WakeupTable build(std::span<const NodeProfile> profiles);

  std::uint64_t version() const { return version_; }
  const std::map<NodeId, std::uint32_t>& entries() const { return entries_; }
  bool contains(NodeId node) const { return entries_.contains(node); }

  /// Throws std::out_of_range for unknown nodes.
  std::uint32_t multiplier(NodeId node) const;
  /// Bumps the version. Throws std::out_of_range / ConfigError.
  void set_multiplier(NodeId node, std::uint32_t k);

  /// Nodes sharing a wakeup pattern contend with each other.
  std::map<std::uint32_t, std::set<NodeId>> contention_groups() const;

 private:
  std::uint64_t version_ = 0;
  std::map<NodeId, std::uint32_t> entries_;
};

bool is_awake(const WakeupTable& table, NodeId node, std::uint64_t superframe_index);

/// Union of every node's awake superframes below the horizon. Sorted.
std::vector<std::uint64_t> bnc_schedule(const WakeupTable& table, std::uint64_t horizon);

/// Exact rational |bnc_schedule| / horizon.
struct AwakeFraction {
  std::uint64_t awake = 0;
  std::uint64_t total = 0;
  double value() const { return total == 0 ? 0.0 : static_cast<double>(awake) / static_cast<double>(total); }
};
AwakeFraction bnc_awake_fraction(const WakeupTable& table, std::uint64_t horizon);

enum class WakeupMode : std::uint8_t { Broadcast, FrequencyAddressed };
enum class WakeupDirection : std::uint8_t { ToBnc, ToNode };
enum class WakeupPurpose : std::uint8_t { Emergency, OnDemand };

/// Emergency signals always go to the BNC and on-demand signals to a node.
class WakeupSignal {
 public:
  static WakeupSignal emergency(NodeId from);
  static WakeupSignal on_demand(NodeId target, WakeupMode mode);

  WakeupMode addressing() const { return addressing_; }
  WakeupDirection direction() const { return direction_; }
  WakeupPurpose purpose() const { return purpose_; }
  /// Sender for emergency signals, intended receiver for on-demand ones.
  NodeId node() const { return node_; }

 private:
  WakeupSignal(WakeupMode a, WakeupDirection d, WakeupPurpose p, NodeId n)
      : addressing_(a), direction_(d), purpose_(p), node_(n) {}

  WakeupMode addressing_;
  WakeupDirection direction_;
  WakeupPurpose purpose_;
  NodeId node_;
};

struct WakeupReceiver {
  NodeId id = 1;
  bool has_receiver = true;
  std::optional<std::uint32_t> frequency;
};

struct WakeupTiming {
  SimTime signal_airtime = 1000;
  SimTime wakeup_latency = 5000;
};

/// When a device summoned at `now` can use its data radio.
SimTime activation_time(SimTime now, const WakeupTiming& timing, bool already_awake);

struct WakeupResult {
  std::vector<NodeId> woken;  // kBnc for ToBnc signals
  std::size_t intended = 0;
  std::size_t spurious = 0;
};

/// Broadcast wakes every BN with a receiver, frequency addressing wakes only
/// the target, ToBnc wakes the BNC. Throws ConfigError when an addressed target
/// has no frequency (or no receiver).
WakeupResult send_wakeup(const WakeupSignal& signal, std::span<const WakeupReceiver> receivers);

}  // namespace wban
