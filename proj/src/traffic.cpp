#include "wban/traffic.hpp"

#include <cmath>

namespace wban {

std::string_view to_string(ArrivalProcess p) {
  switch (p) {
    case ArrivalProcess::Periodic: return "periodic";
    case ArrivalProcess::Poisson: return "poisson";
    case ArrivalProcess::Script: return "script";
    case ArrivalProcess::Saturated: return "saturated";
    case ArrivalProcess::None: return "none";
  }
  return "unknown";
}

std::optional<ArrivalProcess> parse_arrival_process(std::string_view text) {
  for (auto p : {ArrivalProcess::Periodic, ArrivalProcess::Poisson, ArrivalProcess::Script, ArrivalProcess::Saturated,
                 ArrivalProcess::None})
    if (to_string(p) == text) return p;
  return std::nullopt;
}

double default_rate_per_hour(TrafficClass c) {
  switch (c) {
    case TrafficClass::NormalHigh: return 4.0;
    case TrafficClass::NormalMedium: return 1.0;
    case TrafficClass::NormalLow: return 4.0 / 24.0;
    case TrafficClass::Emergency: return 1.0;
    case TrafficClass::OnDemandContinuous:
    case TrafficClass::OnDemandNonContinuous: return 0.0;
  }
  return 0.0;
}

ArrivalProcess default_process(TrafficClass c) {
  if (c == TrafficClass::Emergency) return ArrivalProcess::Poisson;
  if (is_on_demand(c)) return ArrivalProcess::None;
  return ArrivalProcess::Periodic;
}

SimTime period_us(double rate_per_hour) {
  if (!(rate_per_hour > 0.0)) throw InvalidParameter("arrival rate must be positive");
  return static_cast<SimTime>(std::llround(3600.0e6 / rate_per_hour));
}

std::optional<SimTime> next_arrival(const GeneratorSpec& spec, SimTime now, Rng& rng) {
  switch (spec.process) {
    case ArrivalProcess::Periodic: return now + period_us(spec.rate_per_hour);
    case ArrivalProcess::Poisson: {
      const double mean_us = 3600.0e6 / spec.rate_per_hour;
      return now + static_cast<SimTime>(std::llround(rng.exponential(mean_us)));
    }
    default: return std::nullopt;
  }
}

std::optional<SimTime> TrafficGenerator::first(Rng& rng) {
  switch (spec_.process) {
    case ArrivalProcess::Periodic:
    case ArrivalProcess::Saturated: return spec_.phase;
    case ArrivalProcess::Poisson: return next_arrival(spec_, spec_.phase, rng);
    case ArrivalProcess::Script:
      cursor_ = 0;
      return next(0, rng);
    case ArrivalProcess::None: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<SimTime> TrafficGenerator::next(SimTime now, Rng& rng) {
  if (spec_.process == ArrivalProcess::Script) {
    while (cursor_ < spec_.script.size()) {
      const SimTime t = spec_.script[cursor_++];
      if (t >= now) return t;
    }
    return std::nullopt;
  }
  return next_arrival(spec_, now, rng);
}

}  // namespace wban
