#include "wban/engine.hpp"

#include <cmath>
#include <sstream>

namespace wban {

namespace {

constexpr std::size_t kTraceTail = 16;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::BeaconDue: return "BeaconDue";
    case EventKind::ActiveEnd: return "ActiveEnd";
    case EventKind::BackoffExpired: return "BackoffExpired";
    case EventKind::CcaDue: return "CcaDue";
    case EventKind::TxStart: return "TxStart";
    case EventKind::TxEnd: return "TxEnd";
    case EventKind::AckTimeout: return "AckTimeout";
    case EventKind::TrafficArrival: return "TrafficArrival";
    case EventKind::WakeupDue: return "WakeupDue";
    case EventKind::WakeupTimeout: return "WakeupTimeout";
    case EventKind::SlotBoundary: return "SlotBoundary";
    case EventKind::SessionEnd: return "SessionEnd";
    case EventKind::TableUpdate: return "TableUpdate";
    case EventKind::OnDemandQuery: return "OnDemandQuery";
  }
  return "Unknown";
}

std::string format_event(const Event& ev) {
  std::ostringstream os;
  os << ev.fire_at << ' ' << to_string(ev.kind) << ' ' << ev.node;
  return os.str();
}

EventHandle EventQueue::schedule(SimTime fire_at, EventKind kind, NodeId node, std::uint64_t arg) {
  if (fire_at < now_)
    throw std::logic_error("event " + std::string(to_string(kind)) + " scheduled at " + std::to_string(fire_at) +
                           " before current time " + std::to_string(now_));
  const Event ev{fire_at, next_seq_++, kind, node, arg};
  events_.emplace(Key{ev.fire_at, ev.seq}, ev);
  return {ev.fire_at, ev.seq};
}

bool EventQueue::cancel(EventHandle& handle) {
  if (!handle.valid()) return false;
  const bool erased = events_.erase(Key{handle.fire_at, handle.seq}) > 0;
  handle = {};
  return erased;
}

SimTime EventQueue::run_until(SimTime t_end, const Dispatcher& dispatch) {
  if (t_end < now_) throw std::logic_error("run_until: end time lies in the past");
  while (!events_.empty()) {
    auto it = events_.begin();
    if (it->first.first > t_end) break;
    const Event ev = it->second;
    events_.erase(it);
    now_ = ev.fire_at;
    recent_.push_back(ev);
    if (recent_.size() > kTraceTail) recent_.pop_front();
    try {
      dispatch(ev);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "dispatch failed at t=" << ev.fire_at << " us: " << e.what() << "\nlast events:";
      for (const auto& r : recent_) os << "\n  " << format_event(r);
      throw SimulationError(os.str());
    }
    if (observer_) observer_(ev);
  }
  now_ = t_end;
  return now_;
}

Rng Rng::substream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return Rng(splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id + 0x5EED)));
}

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (hi < lo) throw InvalidParameter("uniform_int: empty range");
  const std::uint64_t span = hi - lo;
  if (span == UINT64_MAX) return next();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + x % range;
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::exponential(double mean) { return -mean * std::log1p(-uniform01()); }

bool Rng::bernoulli(double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return uniform01() < p;
}

}  // namespace wban
