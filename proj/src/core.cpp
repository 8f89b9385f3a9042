#include "wban/core.hpp"

#include <cmath>
#include <utility>

namespace wban {

namespace {

constexpr std::array<std::pair<TrafficClass, std::string_view>, kClassCount> kClassNames = {{
    {TrafficClass::Emergency, "emergency"},
    {TrafficClass::OnDemandContinuous, "on_demand_continuous"},
    {TrafficClass::OnDemandNonContinuous, "on_demand_noncontinuous"},
    {TrafficClass::NormalHigh, "normal_high"},
    {TrafficClass::NormalMedium, "normal_medium"},
    {TrafficClass::NormalLow, "normal_low"},
}};

}  // namespace

std::string_view to_string(TrafficClass c) {
  for (const auto& [cls, name] : kClassNames)
    if (cls == c) return name;
  return "unknown";
}

std::optional<TrafficClass> parse_traffic_class(std::string_view text) {
  for (const auto& [cls, name] : kClassNames)
    if (name == text) return cls;
  return std::nullopt;
}

std::string_view to_string(Criticality c) { return c == Criticality::Critical ? "critical" : "noncritical"; }

std::optional<Criticality> parse_criticality(std::string_view text) {
  if (text == "critical") return Criticality::Critical;
  if (text == "noncritical") return Criticality::NonCritical;
  return std::nullopt;
}

std::string_view to_string(BodySide s) { return s == BodySide::InBody ? "in_body" : "on_body"; }

std::optional<BodySide> parse_body_side(std::string_view text) {
  if (text == "on_body") return BodySide::OnBody;
  if (text == "in_body") return BodySide::InBody;
  return std::nullopt;
}

std::string_view to_string(FrameKind k) {
  switch (k) {
    case FrameKind::Beacon: return "beacon";
    case FrameKind::Data: return "data";
    case FrameKind::Ack: return "ack";
    case FrameKind::WakeupSignal: return "wakeup";
    case FrameKind::Command: return "command";
  }
  return "unknown";
}

double distance(const Vec3& a, const Vec3& b) { return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z); }

Placement Placement::on_body(Vec3 position) { return Placement(BodySide::OnBody, position, std::nullopt); }

Placement Placement::in_body(Vec3 position, double depth_m) {
  if (!(depth_m > 0.0 && depth_m <= 0.2))
    throw InvalidParameter("in-body depth must lie in (0, 0.2] m, got " + std::to_string(depth_m));
  return Placement(BodySide::InBody, position, depth_m);
}

SimTime airtime(std::uint64_t size_bits, std::uint64_t bitrate_bps) {
  if (size_bits == 0) throw InvalidParameter("airtime: frame size must be positive");
  if (bitrate_bps == 0) throw InvalidParameter("airtime: bitrate must be positive");
  const auto num = static_cast<unsigned __int128>(size_bits) * kUsPerSecond;
  return static_cast<SimTime>((num + bitrate_bps - 1) / bitrate_bps);
}

}  // namespace wban
