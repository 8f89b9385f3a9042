#pragma once

#include <cstdint>

#include "wban/channel.hpp"
#include "wban/core.hpp"
#include "wban/engine.hpp"

namespace wban {

/// Beacon-enabled superframe timing. Durations are exact integer microseconds.
struct SuperframeConfig {
  static constexpr std::uint32_t kBaseSlotSymbols = 60;
  static constexpr std::uint32_t kSlotsPerSuperframe = 16;
  static constexpr std::uint32_t kUnitBackoffSymbols = 20;
  static constexpr std::uint32_t kCcaSymbols = 8;
  static constexpr std::uint32_t kTurnaroundSymbols = 12;
  static constexpr std::uint32_t kAckWaitSymbols = 54;

  int beacon_order = 6;
  int superframe_order = 6;
  std::uint32_t symbol_rate_sps = 62500;
  std::uint32_t bitrate_bps = 250000;

  /// Throws InvalidParameter on SO > BO, BO > 14, or durations that are not whole microseconds.
  void validate() const;

  SimTime symbols_to_us(std::uint64_t symbols) const;
  SimTime beacon_interval() const;
  SimTime active_duration() const;
  SimTime unit_backoff() const { return symbols_to_us(kUnitBackoffSymbols); }
  SimTime cca_duration() const { return symbols_to_us(kCcaSymbols); }
  SimTime turnaround() const { return symbols_to_us(kTurnaroundSymbols); }
  SimTime ack_wait() const { return symbols_to_us(kAckWaitSymbols); }
};

struct BackoffPolicy {
  unsigned min_be_critical = 2;
  unsigned min_be_noncritical = 4;
  unsigned max_be = 5;
  unsigned max_csma_backoffs = 4;
  unsigned max_frame_retries = 3;

  /// Requires min_be_critical <= min_be_noncritical <= max_be.
  void validate() const;
  unsigned min_be(Criticality c) const { return c == Criticality::Critical ? min_be_critical : min_be_noncritical; }
};

/// Uniform number of unit backoff periods in [0, 2^be - 1].
std::uint64_t backoff_draw(Criticality criticality, unsigned be, const BackoffPolicy& policy, Rng& rng);

/// NB/BE/CW bookkeeping of slotted CSMA/CA, one attempt at a time.
class CsmaStateMachine {
 public:
  enum class Step : std::uint8_t { PerformCca, Transmit, Backoff, ChannelAccessFailure };

  explicit CsmaStateMachine(BackoffPolicy policy = {}) : policy_(policy) {}

  void start(Criticality c);
  Step on_cca(CcaResult result);

  unsigned nb() const { return nb_; }
  unsigned be() const { return be_; }
  unsigned cw() const { return cw_; }
  Criticality criticality() const { return criticality_; }

 private:
  BackoffPolicy policy_;
  Criticality criticality_ = Criticality::NonCritical;
  unsigned nb_ = 0;
  unsigned be_ = 0;
  unsigned cw_ = 2;
};

std::string_view to_string(CsmaStateMachine::Step s);

/// First unit-backoff boundary at or after t, counted from the superframe start.
SimTime next_backoff_boundary(SimTime t, SimTime superframe_start, SimTime unit_backoff);

struct Beacon {
  Frame frame;
  std::uint64_t superframe_index = 0;
  SimTime beacon_interval = 0;
  SimTime active_duration = 0;
  std::uint64_t table_version = 0;
};

/// Broadcast beacon carrying superframe timing and the wakeup-table version.
Beacon emit_beacon(const SuperframeConfig& cfg, std::uint64_t superframe_index, std::uint64_t table_version,
                   std::uint32_t beacon_bits, SimTime now, std::uint64_t sequence);

}  // namespace wban
