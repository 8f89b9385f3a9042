#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wban/core.hpp"

namespace wban {

enum class EventKind : std::uint8_t {
  BeaconDue,
  ActiveEnd,
  BackoffExpired,
  CcaDue,
  TxStart,
  TxEnd,
  AckTimeout,
  TrafficArrival,
  WakeupDue,
  WakeupTimeout,
  SlotBoundary,
  SessionEnd,
  TableUpdate,
  OnDemandQuery,
};

std::string_view to_string(EventKind k);

struct Event {
  SimTime fire_at = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::BeaconDue;
  NodeId node = kBnc;
  std::uint64_t arg = 0;
};

struct EventHandle {
  SimTime fire_at = -1;
  std::uint64_t seq = 0;
  bool valid() const { return fire_at >= 0; }
};

/// Thrown when a dispatcher fails; carries the tail of the dispatch trace.
struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic event queue ordered by (fire_at, insertion counter).
class EventQueue {
 public:
  using Dispatcher = std::function<void(const Event&)>;

  SimTime now() const { return now_; }
  std::size_t pending() const { return events_.size(); }

  /// Throws std::logic_error when fire_at lies in the past.
  EventHandle schedule(SimTime fire_at, EventKind kind, NodeId node = kBnc, std::uint64_t arg = 0);
  /// Returns false if the event already fired or was cancelled.
  bool cancel(EventHandle& handle);

  /// Dispatches every event with fire_at <= t_end, then advances the clock to t_end.
  SimTime run_until(SimTime t_end, const Dispatcher& dispatch);

  /// Called after every dispatch; used for the optional event trace.
  void set_observer(Dispatcher observer) { observer_ = std::move(observer); }

 private:
  using Key = std::pair<SimTime, std::uint64_t>;

  std::map<Key, Event> events_;
  std::deque<Event> recent_;
  Dispatcher observer_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
};

std::string format_event(const Event& ev);

/// Seeded stream. Substreams are derived from (master seed, stream id) so that
/// adding a node never perturbs another node's draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  /// Uniform double in [0, 1).
  double uniform01();
  double exponential(double mean);
  bool bernoulli(double p);

 private:
  std::mt19937_64 engine_;
};

// Stream ids. Node n uses 2n (MAC) and 2n+1 (traffic); the channel has its own.
constexpr std::uint64_t mac_stream(NodeId n) { return 2ull * n; }
constexpr std::uint64_t traffic_stream(NodeId n) { return 2ull * n + 1; }
constexpr std::uint64_t kChannelStream = 0xC4A77E1ull;

}  // namespace wban
