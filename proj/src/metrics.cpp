#include "wban/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace wban {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

template <class T>
std::string cell(const std::optional<T>& v, int digits) {
  return v ? fixed(static_cast<double>(*v), digits) : std::string{};
}

ClassCounters sum_counters(const ClassCounters& a, const ClassCounters& b) {
  ClassCounters out = a;
  out.offered += b.offered;
  out.delivered += b.delivered;
  out.dropped += b.dropped;
  out.latencies.insert(out.latencies.end(), b.latencies.begin(), b.latencies.end());
  return out;
}

const char* kNodeHeader =
    "run_id,seed,mac,node_id,class,offered,delivered,dropped,pdr,mean_latency_us,p50_us,p99_us,max_us,energy_mj,"
    "spurious_wakeups\n";

void write_counter_row(std::ostream& os, const RunLabel& label, NodeId node, std::string_view cls,
                       const ClassCounters& c, std::optional<double> energy, std::optional<std::uint64_t> spurious) {
  const auto stats = latency_stats(c.latencies);
  os << label.run_id << ',' << label.seed << ',' << label.mac << ',' << node << ',' << cls << ',' << c.offered << ','
     << c.delivered << ',' << c.dropped << ',' << cell(pdr(c), 6) << ','
     << (stats ? fixed(stats->mean_us, 3) : "") << ',' << (stats ? std::to_string(stats->p50_us) : "") << ','
     << (stats ? std::to_string(stats->p99_us) : "") << ',' << (stats ? std::to_string(stats->max_us) : "") << ','
     << cell(energy, 6) << ',' << (spurious ? std::to_string(*spurious) : "") << '\n';
}

}  // namespace

std::string_view to_string(RadioState s) {
  switch (s) {
    case RadioState::Tx: return "tx";
    case RadioState::Rx: return "rx";
    case RadioState::IdleListen: return "idle_listen";
    case RadioState::Sleep: return "sleep";
    case RadioState::WakeupRx: return "wakeup_rx";
  }
  return "unknown";
}

void EnergyModel::validate() const {
  for (double p : {tx_mw, rx_mw, idle_listen_mw, sleep_mw, wakeup_rx_mw})
    if (!std::isfinite(p)) throw InvalidParameter("energy model powers must be finite");
  if (!(tx_mw > idle_listen_mw && rx_mw > idle_listen_mw && idle_listen_mw > sleep_mw && sleep_mw >= 0.0 &&
        wakeup_rx_mw >= 0.0))
    throw InvalidParameter("energy model must satisfy tx, rx > idle_listen > sleep >= 0");
}

double EnergyModel::power_mw(RadioState s) const {
  switch (s) {
    case RadioState::Tx: return tx_mw;
    case RadioState::Rx: return rx_mw;
    case RadioState::IdleListen: return idle_listen_mw;
    case RadioState::Sleep: return sleep_mw;
    case RadioState::WakeupRx: return wakeup_rx_mw;
  }
  return 0.0;
}

void RadioStateTracker::set(SimTime now, RadioState s) {
  if (now < since_) throw std::logic_error("radio state change in the past");
  totals_[static_cast<std::size_t>(state_)] += now - since_;
  since_ = now;
  state_ = s;
}

void RadioStateTracker::finish(SimTime end) { set(end, state_); }

void MetricsLedger::merge(const MetricsLedger& other) {
  for (const auto& [id, theirs] : other.nodes) {
    NodeMetrics& mine = nodes[id];
    for (std::size_t c = 0; c < kClassCount; ++c) mine.classes[c] = sum_counters(mine.classes[c], theirs.classes[c]);
    for (std::size_t s = 0; s < kRadioStateCount; ++s) mine.state_us[s] += theirs.state_us[s];
    mine.spurious_wakeups += theirs.spurious_wakeups;
    mine.wakeup_signals += theirs.wakeup_signals;
    mine.wakeup_retries += theirs.wakeup_retries;
    mine.channel_access_failures += theirs.channel_access_failures;
    mine.beacons_missed += theirs.beacons_missed;
  }
  runs += other.runs;
  horizon_us += other.horizon_us;
  superframes += other.superframes;
  bnc_awake_superframes += other.bnc_awake_superframes;
}

void MetricsLedger::normalize() {
  for (auto& [id, n] : nodes)
    for (auto& c : n.classes) std::sort(c.latencies.begin(), c.latencies.end());
}

std::optional<double> MetricsLedger::bnc_awake_fraction() const {
  if (superframes == 0) return std::nullopt;
  return static_cast<double>(bnc_awake_superframes) / static_cast<double>(superframes);
}

std::optional<double> pdr(const ClassCounters& c) {
  if (c.offered == 0) return std::nullopt;
  return static_cast<double>(c.delivered) / static_cast<double>(c.offered);
}

std::optional<double> pdr(const MetricsLedger& ledger, NodeId node) {
  auto it = ledger.nodes.find(node);
  if (it == ledger.nodes.end()) return std::nullopt;
  ClassCounters total;
  for (const auto& c : it->second.classes) {
    total.offered += c.offered;
    total.delivered += c.delivered;
  }
  return pdr(total);
}

std::optional<double> pdr(const MetricsLedger& ledger, TrafficClass cls) {
  ClassCounters total;
  for (const auto& [id, n] : ledger.nodes) {
    total.offered += n.at(cls).offered;
    total.delivered += n.at(cls).delivered;
  }
  return pdr(total);
}

double energy_mj(const StateDurations& durations, const EnergyModel& model) {
  double mj = 0.0;
  for (std::size_t s = 0; s < kRadioStateCount; ++s)
    mj += static_cast<double>(durations[s]) / 1e6 * model.power_mw(static_cast<RadioState>(s));
  return mj;
}

double energy_mj(const MetricsLedger& ledger, NodeId node, const EnergyModel& model) {
  auto it = ledger.nodes.find(node);
  return it == ledger.nodes.end() ? 0.0 : energy_mj(it->second.state_us, model);
}

SimTime nearest_rank(std::span<const SimTime> sorted, double p) {
  if (sorted.empty()) throw InvalidParameter("nearest_rank of an empty sample");
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

std::optional<LatencyStats> latency_stats(std::vector<SimTime> samples) {
  if (samples.empty()) return std::nullopt;
  std::sort(samples.begin(), samples.end());
  LatencyStats s;
  long double sum = 0;
  for (SimTime v : samples) sum += v;
  s.mean_us = static_cast<double>(sum / samples.size());
  s.p50_us = nearest_rank(samples, 50);
  s.p99_us = nearest_rank(samples, 99);
  s.max_us = samples.back();
  return s;
}

std::optional<LatencyStats> latency_stats(const MetricsLedger& ledger, TrafficClass c) {
  std::vector<SimTime> all;
  for (const auto& [id, n] : ledger.nodes) all.insert(all.end(), n.at(c).latencies.begin(), n.at(c).latencies.end());
  return latency_stats(std::move(all));
}

void write_node_csv(std::ostream& os, const RunLabel& label, const MetricsLedger& ledger, const EnergyModel& model,
                    bool header) {
  if (header) os << kNodeHeader;
  for (const auto& [id, n] : ledger.nodes) {
    ClassCounters total;
    for (const auto& c : n.classes) total = sum_counters(total, c);
    write_counter_row(os, label, id, "all", total, energy_mj(n.state_us, model), n.spurious_wakeups);
    for (auto cls : kAllClasses) {
      const auto& c = n.at(cls);
      if (c.offered == 0 && c.delivered == 0 && c.dropped == 0) continue;
      write_counter_row(os, label, id, to_string(cls), c, std::nullopt, std::nullopt);
    }
  }
}

void write_summary_csv(std::ostream& os, const RunLabel& label, const MetricsLedger& ledger, bool header) {
  if (header)
    os << "run_id,seed,mac,runs,horizon_us,superframes,bnc_awake_superframes,bnc_awake_fraction,offered,delivered,"
          "dropped,pdr,wakeup_signals,wakeup_retries,spurious_wakeups\n";
  ClassCounters total;
  std::uint64_t signals = 0, retries = 0, spurious = 0;
  for (const auto& [id, n] : ledger.nodes) {
    for (const auto& c : n.classes) {
      total.offered += c.offered;
      total.delivered += c.delivered;
      total.dropped += c.dropped;
    }
    signals += n.wakeup_signals;
    retries += n.wakeup_retries;
    spurious += n.spurious_wakeups;
  }
  os << label.run_id << ',' << label.seed << ',' << label.mac << ',' << ledger.runs << ',' << ledger.horizon_us << ','
     << ledger.superframes << ',' << ledger.bnc_awake_superframes << ',' << cell(ledger.bnc_awake_fraction(), 6) << ','
     << total.offered << ',' << total.delivered << ',' << total.dropped << ',' << cell(pdr(total), 6) << ',' << signals
     << ',' << retries << ',' << spurious << '\n';
}

}  // namespace wban
