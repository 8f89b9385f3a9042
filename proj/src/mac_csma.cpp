#include "wban/mac_csma.hpp"

#include <algorithm>
#include <string>

namespace wban {

void SuperframeConfig::validate() const {
  if (superframe_order < 0 || beacon_order < superframe_order || beacon_order > 14)
    throw InvalidParameter("superframe orders must satisfy 0 <= SO <= BO <= 14 (BO=" + std::to_string(beacon_order) +
                           ", SO=" + std::to_string(superframe_order) + ")");
  if (symbol_rate_sps == 0) throw InvalidParameter("symbol rate must be positive");
  if (bitrate_bps == 0) throw InvalidParameter("bitrate must be positive");
  const std::uint64_t checks[] = {kUnitBackoffSymbols, kCcaSymbols, kTurnaroundSymbols, kAckWaitSymbols,
                                  std::uint64_t{kBaseSlotSymbols} * kSlotsPerSuperframe};
  for (auto symbols : checks)
    if ((symbols * kUsPerSecond) % symbol_rate_sps != 0)
      throw InvalidParameter("symbol rate " + std::to_string(symbol_rate_sps) +
                             " does not give whole-microsecond superframe timing");
}

SimTime SuperframeConfig::symbols_to_us(std::uint64_t symbols) const {
  return static_cast<SimTime>(symbols * kUsPerSecond / symbol_rate_sps);
}

SimTime SuperframeConfig::beacon_interval() const {
  return symbols_to_us(std::uint64_t{kBaseSlotSymbols} * kSlotsPerSuperframe << beacon_order);
}

SimTime SuperframeConfig::active_duration() const {
  return symbols_to_us(std::uint64_t{kBaseSlotSymbols} * kSlotsPerSuperframe << superframe_order);
}

void BackoffPolicy::validate() const {
  if (min_be_critical > min_be_noncritical)
    throw InvalidParameter("critical initial backoff window must not exceed the non-critical one (min_be_critical=" +
                           std::to_string(min_be_critical) + " > min_be_noncritical=" +
                           std::to_string(min_be_noncritical) + ")");
  if (max_be < min_be_noncritical) throw InvalidParameter("max_be must be >= both minimum backoff exponents");
  if (max_be > 20) throw InvalidParameter("max_be must be <= 20");
}

std::uint64_t backoff_draw(Criticality criticality, unsigned be, const BackoffPolicy& policy, Rng& rng) {
  if (be < policy.min_be(criticality) || be > policy.max_be)
    throw InvalidParameter("backoff exponent " + std::to_string(be) + " outside [min_be, max_be]");
  return rng.uniform_int(0, (std::uint64_t{1} << be) - 1);
}

void CsmaStateMachine::start(Criticality c) {
  criticality_ = c;
  nb_ = 0;
  cw_ = 2;
  be_ = policy_.min_be(c);
}

CsmaStateMachine::Step CsmaStateMachine::on_cca(CcaResult result) {
  if (result == CcaResult::Idle) {
    --cw_;
    return cw_ == 0 ? Step::Transmit : Step::PerformCca;
  }
  cw_ = 2;
  ++nb_;
  be_ = std::min(be_ + 1, policy_.max_be);
  return nb_ > policy_.max_csma_backoffs ? Step::ChannelAccessFailure : Step::Backoff;
}

std::string_view to_string(CsmaStateMachine::Step s) {
  switch (s) {
    case CsmaStateMachine::Step::PerformCca: return "cca";
    case CsmaStateMachine::Step::Transmit: return "transmit";
    case CsmaStateMachine::Step::Backoff: return "backoff";
    case CsmaStateMachine::Step::ChannelAccessFailure: return "failure";
  }
  return "unknown";
}

SimTime next_backoff_boundary(SimTime t, SimTime superframe_start, SimTime unit_backoff) {
  const SimTime offset = t - superframe_start;
  if (offset <= 0) return superframe_start;
  return superframe_start + (offset + unit_backoff - 1) / unit_backoff * unit_backoff;
}

Beacon emit_beacon(const SuperframeConfig& cfg, std::uint64_t superframe_index, std::uint64_t table_version,
                   std::uint32_t beacon_bits, SimTime now, std::uint64_t sequence) {
  Beacon b;
  b.frame.kind = FrameKind::Beacon;
  b.frame.src = kBnc;
  b.frame.dst = kBroadcast;
  b.frame.size_bits = beacon_bits;
  b.frame.created_at = now;
  b.frame.sequence = sequence;
  b.superframe_index = superframe_index;
  b.beacon_interval = cfg.beacon_interval();
  b.active_duration = cfg.active_duration();
  b.table_version = table_version;
  return b;
}

}  // namespace wban
