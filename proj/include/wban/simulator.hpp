#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wban/channel.hpp"
#include "wban/metrics.hpp"
#include "wban/scenario.hpp"

namespace wban {

struct RunOptions {
  bool trace = false;
  bool record_transmissions = false;
};

/// One over-the-air transmission on the data radio.
struct TxRecord {
  FrameKind kind = FrameKind::Data;
  NodeId src = kBnc;
  NodeId dst = kBnc;
  TrafficClass traffic_class = TrafficClass::NormalHigh;
  SimTime start = 0;
  SimTime end = 0;
  bool delivered = false;
};

/// A Data frame that reached the BNC for the first time.
struct DeliveryRecord {
  NodeId node = 1;
  TrafficClass traffic_class = TrafficClass::NormalHigh;
  std::uint64_t sequence = 0;
  SimTime created_at = 0;
  SimTime tx_start = 0;
  SimTime rx_end = 0;
  SimTime latency() const { return rx_end - created_at; }
};

struct RunResult {
  std::uint64_t seed = 0;
  MetricsLedger ledger;
  std::vector<DeliveryRecord> deliveries;
  std::vector<TxRecord> transmissions;
  std::vector<std::string> trace;
};

/// Runs one seeded simulation to the scenario horizon. The result is a pure
/// function of (scenario, seed). The scenario must already be validated.
RunResult run(const Scenario& scenario, std::uint64_t seed, const RunOptions& options = {});

}  // namespace wban
