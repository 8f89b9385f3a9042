#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wban/core.hpp"

namespace wban {

enum class RadioState : std::uint8_t { Tx, Rx, IdleListen, Sleep, WakeupRx };
constexpr std::size_t kRadioStateCount = 5;

std::string_view to_string(RadioState s);

/// Power draw in mW per radio state.
struct EnergyModel {
  double tx_mw = 52.2;
  double rx_mw = 56.4;
  double idle_listen_mw = 1.28;
  double sleep_mw = 0.06;
  double wakeup_rx_mw = 0.01;

  /// Requires tx, rx > idle_listen > sleep >= 0 and wakeup_rx >= 0, all finite.
  void validate() const;
  double power_mw(RadioState s) const;
};

using StateDurations = std::array<SimTime, kRadioStateCount>;

/// Integrates time spent per radio state; totals always sum to elapsed time.
class RadioStateTracker {
 public:
  explicit RadioStateTracker(RadioState initial = RadioState::Sleep, SimTime start = 0)
      : state_(initial), since_(start) {}

  RadioState state() const { return state_; }
  void set(SimTime now, RadioState s);
  /// Closes the open interval at `end`.
  void finish(SimTime end);
  const StateDurations& totals() const { return totals_; }

 private:
  RadioState state_;
  SimTime since_;
  StateDurations totals_{};
};

struct ClassCounters {
  std::uint64_t offered = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::vector<SimTime> latencies;
};

struct NodeMetrics {
  std::array<ClassCounters, kClassCount> classes;
  StateDurations state_us{};
  std::uint64_t spurious_wakeups = 0;
  std::uint64_t wakeup_signals = 0;
  std::uint64_t wakeup_retries = 0;
  std::uint64_t channel_access_failures = 0;
  std::uint64_t beacons_missed = 0;

  ClassCounters& at(TrafficClass c) { return classes[class_index(c)]; }
  const ClassCounters& at(TrafficClass c) const { return classes[class_index(c)]; }
};

/// Per-run (or merged) accounting. merge() is associative and commutative
/// over counters and latency multisets.
struct MetricsLedger {
  std::map<NodeId, NodeMetrics> nodes;
  std::uint64_t runs = 1;
  SimTime horizon_us = 0;
  std::uint64_t superframes = 0;
  std::uint64_t bnc_awake_superframes = 0;

  NodeMetrics& node(NodeId id) { return nodes[id]; }
  void merge(const MetricsLedger& other);
  /// Sorts latency samples so equal multisets compare equal.
  void normalize();

  std::optional<double> bnc_awake_fraction() const;
};

std::optional<double> pdr(const MetricsLedger& ledger, NodeId node);
std::optional<double> pdr(const MetricsLedger& ledger, TrafficClass c);
std::optional<double> pdr(const ClassCounters& c);

double energy_mj(const StateDurations& durations, const EnergyModel& model);
double energy_mj(const MetricsLedger& ledger, NodeId node, const EnergyModel& model);

struct LatencyStats {
  double mean_us = 0;
  SimTime p50_us = 0;
  SimTime p99_us = 0;
  SimTime max_us = 0;
};

/// Nearest-rank percentile (p in (0, 100]) of an ascending-sorted sample.
SimTime nearest_rank(std::span<const SimTime> sorted, double p);
std::optional<LatencyStats> latency_stats(std::vector<SimTime> samples);
std::optional<LatencyStats> latency_stats(const MetricsLedger& ledger, TrafficClass c);

struct RunLabel {
  std::string run_id;
  std::string seed;
  std::string mac;
};

/// One row per node x class plus a per-node "all" row carrying energy.
void write_node_csv(std::ostream& os, const RunLabel& label, const MetricsLedger& ledger, const EnergyModel& model,
                    bool header = true);
void write_summary_csv(std::ostream& os, const RunLabel& label, const MetricsLedger& ledger, bool header = true);

}  // namespace wban
