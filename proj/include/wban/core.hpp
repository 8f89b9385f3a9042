#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wban {

/// Simulation time in integer microseconds since the start of a run.
using SimTime = std::int64_t;

constexpr SimTime kUsPerMs = 1000;
constexpr SimTime kUsPerSecond = 1000000;

constexpr SimTime from_ms(double ms) { return static_cast<SimTime>(ms * 1000.0 + (ms >= 0 ? 0.5 : -0.5)); }
constexpr SimTime from_seconds(double s) { return static_cast<SimTime>(s * 1e6 + (s >= 0 ? 0.5 : -0.5)); }
constexpr double to_seconds(SimTime t) { return static_cast<double>(t) / 1e6; }

using NodeId = std::uint16_t;

/// Reserved address of the BAN network coordinator. BNs use ids >= 1.
constexpr NodeId kBnc = 0;
constexpr NodeId kBroadcast = 0xFFFF;

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Normal traffic carries its level, on-demand traffic its mode.
enum class TrafficClass : std::uint8_t {
  Emergency,
  OnDemandContinuous,
  OnDemandNonContinuous,
  NormalHigh,
  NormalMedium,
  NormalLow,
};

constexpr std::array<TrafficClass, 6> kAllClasses = {
    TrafficClass::Emergency,     TrafficClass::OnDemandContinuous, TrafficClass::OnDemandNonContinuous,
    TrafficClass::NormalHigh,    TrafficClass::NormalMedium,       TrafficClass::NormalLow,
};
constexpr std::size_t kClassCount = kAllClasses.size();

constexpr bool is_normal(TrafficClass c) {
  return c == TrafficClass::NormalHigh || c == TrafficClass::NormalMedium || c == TrafficClass::NormalLow;
}
constexpr bool is_on_demand(TrafficClass c) {
  return c == TrafficClass::OnDemandContinuous || c == TrafficClass::OnDemandNonContinuous;
}

/// Queue priority rank; lower drains first. Emergency > OnDemand > High > Medium > Low.
constexpr int priority_rank(TrafficClass c) {
  switch (c) {
    case TrafficClass::Emergency: return 0;
    case TrafficClass::OnDemandContinuous:
    case TrafficClass::OnDemandNonContinuous: return 1;
    case TrafficClass::NormalHigh: return 2;
    case TrafficClass::NormalMedium: return 3;
    case TrafficClass::NormalLow: return 4;
  }
  return 5;
}

constexpr std::size_t class_index(TrafficClass c) { return static_cast<std::size_t>(c); }

std::string_view to_string(TrafficClass c);
std::optional<TrafficClass> parse_traffic_class(std::string_view text);

enum class Criticality : std::uint8_t { Critical, NonCritical };

std::string_view to_string(Criticality c);
std::optional<Criticality> parse_criticality(std::string_view text);

struct Vec3 {
  double x = 0, y = 0, z = 0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double distance(const Vec3& a, const Vec3& b);

enum class BodySide : std::uint8_t { OnBody, InBody };

std::string_view to_string(BodySide s);
std::optional<BodySide> parse_body_side(std::string_view text);

/// Where a device sits. depth_m is set exactly for implants.
class Placement {
 public:
  static Placement on_body(Vec3 position);
  /// Throws InvalidParameter unless depth_m is in (0, 0.2].
  static Placement in_body(Vec3 position, double depth_m);

  BodySide kind() const { return kind_; }
  const Vec3& position() const { return position_; }
  std::optional<double> depth_m() const { return depth_m_; }

 private:
  Placement(BodySide kind, Vec3 position, std::optional<double> depth) : kind_(kind), position_(position), depth_m_(depth) {}

  BodySide kind_ = BodySide::OnBody;
  Vec3 position_;
  std::optional<double> depth_m_;
};

struct NodeProfile {
  NodeId id = 1;
  Placement placement = Placement::on_body({});
  TrafficClass traffic_class = TrafficClass::NormalHigh;
  Criticality criticality = Criticality::NonCritical;
  /// The node wakes every `wakeup_multiplier` superframes.
  std::uint32_t wakeup_multiplier = 1;
  std::uint32_t payload_bits = 256;
};

enum class FrameKind : std::uint8_t { Beacon, Data, Ack, WakeupSignal, Command };

std::string_view to_string(FrameKind k);

enum class Radio : std::uint8_t { Data, Wakeup };

struct Frame {
  FrameKind kind = FrameKind::Data;
  NodeId src = kBnc;
  NodeId dst = kBnc;
  std::uint32_t size_bits = 1;
  TrafficClass traffic_class = TrafficClass::NormalHigh;
  SimTime created_at = 0;
  std::optional<SimTime> tx_start;
  std::optional<SimTime> rx_end;
  std::uint64_t sequence = 0;

  Radio radio() const { return kind == FrameKind::WakeupSignal ? Radio::Wakeup : Radio::Data; }
};

/// ceil(size_bits / bitrate_bps * 1e6) microseconds.
SimTime airtime(std::uint64_t size_bits, std::uint64_t bitrate_bps);

}  // namespace wban
