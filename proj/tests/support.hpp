#pragma once

#include <cmath>
#include <numbers>

#include "wban/scenario.hpp"

namespace wban::testing {

inline NodeConfig on_body_node(NodeId id, Vec3 pos, TrafficClass cls, ArrivalProcess process, double rate_per_hour) {
  NodeConfig n;
  n.profile.id = id;
  n.profile.placement = Placement::on_body(pos);
  n.profile.traffic_class = cls;
  n.profile.criticality = cls == TrafficClass::Emergency ? Criticality::Critical : Criticality::NonCritical;
  n.traffic.traffic_class = cls;
  n.traffic.process = process;
  n.traffic.rate_per_hour = rate_per_hour;
  n.traffic.phase = static_cast<SimTime>(id) * kUsPerSecond;
  return n;
}

/// Point on a circle of `radius` around the coordinator, spread by index.
inline Vec3 ring(std::size_t index, std::size_t count, double radius) {
  const double a = 2.0 * std::numbers::pi * static_cast<double>(index) / static_cast<double>(count);
  return {radius * std::cos(a), radius * std::sin(a), 0.0};
}

}  // namespace wban::testing
