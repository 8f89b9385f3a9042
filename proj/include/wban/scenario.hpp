#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wban/channel.hpp"
#include "wban/core.hpp"
#include "wban/mac_csma.hpp"
#include "wban/mac_tdma.hpp"
#include "wban/metrics.hpp"
#include "wban/traffic.hpp"
#include "wban/wakeup.hpp"

namespace wban {

enum class MacKind : std::uint8_t { Csma, Tdma };

std::string_view to_string(MacKind m);

struct NodeConfig {
  NodeProfile profile;
  GeneratorSpec traffic;
  std::optional<double> tx_power_dbm;
  bool wakeup_receiver = true;
  std::optional<std::uint32_t> wakeup_frequency;
  std::optional<std::uint32_t> slot;
};

struct OnDemandQuery {
  SimTime at = 0;
  NodeId target = 1;
  TrafficClass mode = TrafficClass::OnDemandNonContinuous;
  SimTime duration = 0;  // continuous mode only
  double rate_hz = 0;    // continuous mode only
};

struct TableUpdate {
  SimTime at = 0;
  NodeId node = 1;
  std::uint32_t multiplier = 1;
};

struct WakeupConfig {
  WakeupMode mode = WakeupMode::Broadcast;
  WakeupTiming timing;
  SimTime retry_timeout = 10 * kUsPerMs;
  std::vector<TableUpdate> updates;
};

struct TdmaConfig {
  SimTime slot_duration = 0;  // 0: split the superframe evenly
  std::uint32_t slots = 0;    // 0: one slot per node
};

struct FrameSizes {
  std::uint32_t beacon_bits = 240;
  std::uint32_t mac_overhead_bits = 120;
  std::uint32_t ack_bits = 88;
  std::uint32_t command_bits = 160;
};

struct Scenario {
  MacKind mac = MacKind::Csma;
  SimTime horizon = 600 * kUsPerSecond;
  SuperframeConfig superframe;
  BackoffPolicy backoff;
  ChannelParams channel;
  LinkErrorTable links;
  EnergyModel energy;
  Placement bnc_placement = Placement::on_body({});
  std::optional<double> bnc_tx_power_dbm;
  std::vector<NodeConfig> nodes;
  WakeupConfig wakeup;
  TdmaConfig tdma;
  std::vector<OnDemandQuery> on_demand;
  FrameSizes frames;
  std::vector<std::uint64_t> seeds = {1};

  const NodeConfig* find(NodeId id) const;
  std::vector<NodeProfile> profiles() const;
  std::uint32_t data_frame_bits(const NodeConfig& n) const { return n.traffic.payload_bits + frames.mac_overhead_bits; }
  double tx_power_dbm(const NodeConfig& n) const;
  double bnc_tx_dbm() const;
  /// Slot table with defaults materialised (mac = tdma only).
  TdmaSchedule tdma_schedule() const;
};

struct Issue {
  std::string location;  // "file:line:col" or a logical path
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Whole-scenario checks: every cross reference resolves and frames fit.
ValidationReport validate(const Scenario& s);

struct ScenarioError : std::runtime_error {
  explicit ScenarioError(ValidationReport r) : std::runtime_error(r.to_string()), report(std::move(r)) {}
  ValidationReport report;
};

/// Strict loader: unknown keys are errors, missing optional keys take defaults.
/// Throws ScenarioError listing every violation.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& text, const std::string& source_name = "<scenario>");

/// "7" -> {7}, "1..20" -> {1..20}.
std::optional<std::vector<std::uint64_t>> parse_seed_range(std::string_view text);

}  // namespace wban
