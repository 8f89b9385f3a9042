#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "wban/core.hpp"
#include "wban/engine.hpp"

namespace wban {

enum class ArrivalProcess : std::uint8_t {
  Periodic,   // deterministic period of 3600 / rate seconds
  Poisson,    // exponential inter-arrivals with mean 3600 / rate seconds
  Script,     // explicit arrival times
  Saturated,  // next frame appears as soon as the previous one completes
  None,       // no spontaneous traffic (on-demand responders)
};

std::string_view to_string(ArrivalProcess p);
std::optional<ArrivalProcess> parse_arrival_process(std::string_view text);

struct GeneratorSpec {
  TrafficClass traffic_class = TrafficClass::NormalHigh;
  ArrivalProcess process = ArrivalProcess::Periodic;
  double rate_per_hour = 4.0;
  SimTime phase = 0;
  std::vector<SimTime> script;
  std::uint32_t payload_bits = 256;
};

/// Default rates: High 4/hour, Medium 1/hour (interpolated), Low 4/day, Emergency 1/hour.
double default_rate_per_hour(TrafficClass c);
ArrivalProcess default_process(TrafficClass c);

/// 3600 / rate seconds, rounded to the nearest microsecond.
SimTime period_us(double rate_per_hour);

/// Stateless next-arrival rule for Periodic and Poisson processes.
std::optional<SimTime> next_arrival(const GeneratorSpec& spec, SimTime now, Rng& rng);

/// Arrival stream of one node; keeps the script cursor.
class TrafficGenerator {
 public:
  explicit TrafficGenerator(GeneratorSpec spec) : spec_(std::move(spec)) {}

  const GeneratorSpec& spec() const { return spec_; }
  std::optional<SimTime> first(Rng& rng);
  /// nullopt once a script is exhausted or for None/Saturated processes.
  std::optional<SimTime> next(SimTime now, Rng& rng);

 private:
  GeneratorSpec spec_;
  std::size_t cursor_ = 0;
};

}  // namespace wban
