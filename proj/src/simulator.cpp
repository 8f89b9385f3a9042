#include "wban/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "wban/engine.hpp"
#include "wban/mac_csma.hpp"
#include "wban/mac_tdma.hpp"
#include "wban/traffic.hpp"
#include "wban/wakeup.hpp"

namespace wban {

namespace {

enum class MacPhase : std::uint8_t { Idle, Backoff, Cca, Transmitting, WaitAck };

// WakeupDue reasons; the query index rides in the upper bits.
enum WakeReason : std::uint64_t { kWindowEnd = 0, kEmergencyGrant = 1, kOnDemandGrant = 2, kSpurious = 3 };
// SessionEnd reasons.
enum SessionReason : std::uint64_t { kSpuriousExpiry = 0, kStopStream = 1 };
// TrafficArrival sources.
enum ArrivalSource : std::uint64_t { kGenerator = 0, kStream = 1 };
// SlotBoundary edges.
enum SlotEdge : std::uint64_t { kSlotStart = 0, kSlotEnd = 1 };

constexpr std::uint64_t encode(std::uint64_t reason, std::uint64_t index) { return reason | (index << 8); }
constexpr std::uint64_t reason_of(std::uint64_t arg) { return arg & 0xFF; }
constexpr std::uint64_t index_of(std::uint64_t arg) { return arg >> 8; }

bool is_session_class(TrafficClass c) { return c == TrafficClass::Emergency || is_on_demand(c); }

struct QueuedFrame {
  Frame frame;
  unsigned retries = 0;
  bool delivered = false;
};

struct Device {
  NodeId id = kBnc;
  Placement placement = Placement::on_body({});
  double tx_dbm = 0.0;
  RadioStateTracker tracker;
  bool tx_on = false;
  int rx_count = 0;
  SimTime wakeup_until = 0;
};

struct Node : Device {
  const NodeConfig* cfg = nullptr;
  Rng mac_rng{0};
  Rng traffic_rng{0};
  TrafficGenerator generator{GeneratorSpec{}};
  std::vector<QueuedFrame> queue;
  CsmaStateMachine csma;
  MacPhase phase = MacPhase::Idle;
  EventHandle mac_event;
  EventHandle ack_timeout;
  SimTime cca_start = 0;
  std::optional<std::uint64_t> inflight;

  std::uint32_t multiplier = 1;
  std::optional<std::uint32_t> pending_multiplier;
  std::uint64_t known_version = 0;
  std::uint64_t synced_superframe = UINT64_MAX;
  bool listening_beacon = false;

  bool session = false;
  bool session_pending = false;
  bool wakeup_pending = false;
  SimTime spurious_until = 0;
  bool stream_active = false;
  SimTime stream_period = 0;

  bool in_slot = false;
  SimTime slot_end = 0;
};

class Simulation {
 public:
  Simulation(const Scenario& s, std::uint64_t seed, const RunOptions& opts)
      : s_(s),
        opts_(opts),
        channel_(s.channel, s.links),
        channel_rng_(Rng::substream(seed, kChannelStream)),
        table_(WakeupTable::build(s.profiles())),
        bi_(s.superframe.beacon_interval()),
        sd_(s.mac == MacKind::Tdma ? bi_ : s.superframe.active_duration()),
        ubp_(s.superframe.unit_backoff()) {
    result_.seed = seed;
    bnc_.id = kBnc;
    bnc_.placement = s.bnc_placement;
    bnc_.tx_dbm = s.bnc_tx_dbm();
    if (s.mac == MacKind::Tdma) tdma_ = s.tdma_schedule();

    std::vector<const NodeConfig*> sorted;
    for (const auto& n : s.nodes) sorted.push_back(&n);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->profile.id < b->profile.id; });
    nodes_.reserve(sorted.size());
    for (const NodeConfig* cfg : sorted) {
      Node n;
      n.id = cfg->profile.id;
      n.placement = cfg->profile.placement;
      n.tx_dbm = s.tx_power_dbm(*cfg);
      n.cfg = cfg;
      n.mac_rng = Rng::substream(seed, mac_stream(n.id));
      n.traffic_rng = Rng::substream(seed, traffic_stream(n.id));
      n.generator = TrafficGenerator(cfg->traffic);
      n.csma = CsmaStateMachine(s.backoff);
      n.multiplier = cfg->profile.wakeup_multiplier;
      index_[n.id] = nodes_.size();
      nodes_.push_back(std::move(n));
      receivers_.push_back({cfg->profile.id, cfg->wakeup_receiver, cfg->wakeup_frequency});
    }
    result_.ledger.node(kBnc);
    for (const auto& n : nodes_) result_.ledger.node(n.id);
  }

  RunResult run() {
    queue_.schedule(0, EventKind::BeaconDue);
    for (auto& n : nodes_) {
      if (auto t = n.generator.first(n.traffic_rng); t && *t <= s_.horizon)
        queue_.schedule(*t, EventKind::TrafficArrival, n.id, kGenerator);
    }
    for (std::size_t i = 0; i < s_.on_demand.size(); ++i)
      queue_.schedule(s_.on_demand[i].at, EventKind::OnDemandQuery, kBnc, i);
    for (std::size_t i = 0; i < s_.wakeup.updates.size(); ++i)
      if (s_.wakeup.updates[i].at <= s_.horizon)
        queue_.schedule(s_.wakeup.updates[i].at, EventKind::TableUpdate, kBnc, i);

    queue_.run_until(s_.horizon, [this](const Event& ev) {
      if (opts_.trace) result_.trace.push_back(format_event(ev));
      dispatch(ev);
      refresh_radios();
    });

    auto& ledger = result_.ledger;
    ledger.horizon_us = s_.horizon;
    bnc_.tracker.finish(s_.horizon);
    ledger.node(kBnc).state_us = bnc_.tracker.totals();
    for (auto& n : nodes_) {
      n.tracker.finish(s_.horizon);
      ledger.node(n.id).state_us = n.tracker.totals();
    }
    return std::move(result_);
  }

 private:
  // ---- helpers -------------------------------------------------------------

  SimTime now() const { return queue_.now(); }
  Node& node(NodeId id) { return nodes_[index_.at(id)]; }
  Device& device(NodeId id) { return id == kBnc ? static_cast<Device&>(bnc_) : node(id); }
  NodeMetrics& metrics(NodeId id) { return result_.ledger.node(id); }

  bool csma() const { return s_.mac == MacKind::Csma; }
  bool in_active() const { return now() < superframe_start_ + sd_; }
  bool scheduled(const Node& n) const { return superframe_ % n.multiplier == 0; }

  bool any_session() const {
    return std::any_of(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.session || n.session_pending; });
  }

  bool bnc_radio_on() const { return in_active() && (bnc_scheduled_ || any_session()); }

  bool node_radio_on(const Node& n) const {
    return n.listening_beacon || n.phase != MacPhase::Idle || (n.session && in_active()) ||
           now() < n.spurious_until || n.in_slot;
  }

  RadioState desired(const Device& d, bool radio_on) const {
    if (d.tx_on) return RadioState::Tx;
    if (radio_on) return d.rx_count > 0 ? RadioState::Rx : RadioState::IdleListen;
    if (now() < d.wakeup_until) return RadioState::WakeupRx;
    return RadioState::Sleep;
  }

  void refresh_radios() {
    const bool bnc_on = bnc_radio_on();
    if (const auto st = desired(bnc_, bnc_on); st != bnc_.tracker.state()) bnc_.tracker.set(now(), st);
    if ((bnc_on || bnc_.tx_on) && counted_superframe_ != superframe_) {
      counted_superframe_ = superframe_;
      ++result_.ledger.bnc_awake_superframes;
    }
    for (auto& n : nodes_)
      if (const auto st = desired(n, node_radio_on(n)); st != n.tracker.state()) n.tracker.set(now(), st);
  }

  void open_wakeup_window(Device& d, SimTime until) {
    if (until <= d.wakeup_until) return;
    d.wakeup_until = until;
    queue_.schedule(until, EventKind::WakeupDue, d.id, encode(kWindowEnd, 0));
  }

  QueuedFrame* find_frame(Node& n, std::uint64_t seq) {
    for (auto& q : n.queue)
      if (q.frame.sequence == seq) return &q;
    return nullptr;
  }

  SimTime airtime_of(std::uint32_t bits) const { return airtime(bits, s_.superframe.bitrate_bps); }

  // ---- transmissions -------------------------------------------------------

  std::uint64_t begin_tx(Device& src, Frame f) {
    const std::uint64_t id = next_tx_id_++;
    f.tx_start = now();
    const SimTime end = now() + airtime_of(f.size_bits);
    ActiveTx tx{id, f, src.tx_dbm, src.placement, now(), end, Radio::Data};
    channel_.register_tx(tx);
    src.tx_on = true;

    std::vector<NodeId>& rx = receivers_of_[id];
    if (f.dst == kBroadcast) {
      for (auto& n : nodes_)
        if (n.listening_beacon) rx.push_back(n.id);
    } else if (f.dst == kBnc ? bnc_radio_on() : node_radio_on(node(f.dst))) {
      rx.push_back(f.dst);
    }
    for (NodeId r : rx) ++device(r).rx_count;

    if (opts_.record_transmissions) {
      tx_record_[id] = result_.transmissions.size();
      result_.transmissions.push_back({f.kind, f.src, f.dst, f.traffic_class, now(), end, false});
    }
    queue_.schedule(end, EventKind::TxEnd, src.id, id);
    return id;
  }

  void on_tx_end(std::uint64_t id) {
    const ActiveTx* found = channel_.find(id);
    assert(found != nullptr);
    const ActiveTx tx = *found;
    device(tx.frame.src).tx_on = false;
    std::vector<NodeId> rx = std::move(receivers_of_[id]);
    receivers_of_.erase(id);
    for (NodeId r : rx) --device(r).rx_count;

    bool delivered = false;
    switch (tx.frame.kind) {
      case FrameKind::Beacon: delivered = on_beacon_end(tx); break;
      case FrameKind::Data: delivered = on_data_end(tx, rx); break;
      case FrameKind::Ack: delivered = on_ack_end(tx, rx); break;
      case FrameKind::Command: delivered = on_command_end(tx, rx); break;
      case FrameKind::WakeupSignal: break;
    }
    if (opts_.record_transmissions) {
      result_.transmissions[tx_record_.at(id)].delivered = delivered;
      tx_record_.erase(id);
    }
    if (opts_.trace) {
      std::ostringstream os;
      os << "  " << to_string(tx.frame.kind) << ' ' << tx.frame.src << "->" << tx.frame.dst << " [" << tx.start << ','
         << tx.end << ") " << (delivered ? "ok" : "lost");
      result_.trace.push_back(os.str());
    }
    channel_.prune(now());
  }

  bool received(const ActiveTx& tx, const std::vector<NodeId>& rx, NodeId dst) {
    if (std::find(rx.begin(), rx.end(), dst) == rx.end()) return false;
    return channel_.deliver(tx, dst, device(dst).placement, channel_rng_).delivered;
  }

  // ---- beacons and superframes -----------------------------------------------

  void on_beacon_due() {
    superframe_ = beacon_count_++;
    superframe_start_ = now();
    ++result_.ledger.superframes;
    for (auto& n : nodes_) {
      if (n.pending_multiplier) {
        n.multiplier = *n.pending_multiplier;
        n.pending_multiplier.reset();
      }
    }
    bnc_scheduled_ = std::any_of(nodes_.begin(), nodes_.end(), [&](const Node& n) { return scheduled(n); });

    if (csma()) queue_.schedule(superframe_start_ + sd_, EventKind::ActiveEnd);
    if (superframe_start_ + bi_ < s_.horizon) queue_.schedule(superframe_start_ + bi_, EventKind::BeaconDue);

    if (!(bnc_scheduled_ || any_session())) return;
    for (auto& n : nodes_) n.listening_beacon = scheduled(n) || n.session || now() < n.spurious_until;
    const Beacon b = emit_beacon(s_.superframe, superframe_, table_.version(), s_.frames.beacon_bits, now(),
                                 next_sequence_++);
    beacon_version_ = b.table_version;
    beacon_superframe_ = b.superframe_index;
    begin_tx(bnc_, b.frame);

    if (!csma()) {
      for (auto& n : nodes_)
        if (scheduled(n))
          queue_.schedule(tdma_.slot_start(n.id, superframe_start_), EventKind::SlotBoundary, n.id, kSlotStart);
    }
  }

  bool on_beacon_end(const ActiveTx& tx) {
    bool any = false;
    for (auto& n : nodes_) {
      if (!n.listening_beacon) continue;
      n.listening_beacon = false;
      if (channel_.deliver(tx, n.id, n.placement, channel_rng_).delivered) {
        any = true;
        n.synced_superframe = beacon_superframe_;
        if (beacon_version_ > n.known_version) {
          n.known_version = beacon_version_;
          const std::uint32_t k = table_.multiplier(n.id);
          if (k != n.multiplier) n.pending_multiplier = k;
        }
      } else {
        ++metrics(n.id).beacons_missed;
      }
      try_start_mac(n);
    }
    return any;
  }

  void on_active_end() {
    for (auto& n : nodes_) {
      n.listening_beacon = false;
      if (n.phase == MacPhase::Backoff || n.phase == MacPhase::Cca) {
        queue_.cancel(n.mac_event);
        n.phase = MacPhase::Idle;
      }
    }
  }

  // ---- traffic -------------------------------------------------------------

  void enqueue(Node& n, TrafficClass cls) {
    Frame f;
    f.kind = FrameKind::Data;
    f.src = n.id;
    f.dst = kBnc;
    f.size_bits = s_.data_frame_bits(*n.cfg);
    f.traffic_class = cls;
    f.created_at = now();
    f.sequence = next_sequence_++;
    ++metrics(n.id).at(cls).offered;

    const auto key = [](const Frame& fr) { return std::tuple(priority_rank(fr.traffic_class), fr.created_at, fr.sequence); };
    auto pos = std::upper_bound(n.queue.begin(), n.queue.end(), key(f),
                                [&](const auto& k, const QueuedFrame& q) { return k < key(q.frame); });
    n.queue.insert(pos, QueuedFrame{f});

    if (cls == TrafficClass::Emergency && !n.session && !n.wakeup_pending) send_emergency_signal(n);
    try_start_mac(n);
  }

  void on_traffic_arrival(Node& n, std::uint64_t source) {
    if (source == kStream) {
      if (!n.stream_active) return;
      enqueue(n, TrafficClass::OnDemandContinuous);
      queue_.schedule(now() + n.stream_period, EventKind::TrafficArrival, n.id, kStream);
      return;
    }
    enqueue(n, n.cfg->traffic.traffic_class);
    if (auto t = n.generator.next(now(), n.traffic_rng); t && *t <= s_.horizon)
      queue_.schedule(*t, EventKind::TrafficArrival, n.id, kGenerator);
  }

  // ---- MAC -----------------------------------------------------------------

  bool can_contend(const Node& n) const {
    return in_active() && bnc_radio_on() && (n.session || (scheduled(n) && n.synced_superframe == superframe_));
  }

  void try_start_mac(Node& n) {
    if (n.phase != MacPhase::Idle || n.queue.empty()) {
      if (!csma() && n.phase == MacPhase::Idle && n.queue.empty()) n.in_slot = false;
      return;
    }
    if (csma()) {
      if (!can_contend(n)) return;
      n.csma.start(n.cfg->profile.criticality);
      schedule_backoff(n);
      return;
    }
    // TDMA: session traffic uses the dedicated response window right away.
    const QueuedFrame& head = n.queue.front();
    if (n.session && is_session_class(head.frame.traffic_class) && bnc_radio_on()) {
      start_data_tx(n);
      return;
    }
    if (!n.in_slot) return;
    if (now() + airtime_of(head.frame.size_bits) + s_.superframe.ack_wait() <= n.slot_end)
      start_data_tx(n);
    else
      n.in_slot = false;
  }

  void schedule_backoff(Node& n) {
    const std::uint64_t periods = backoff_draw(n.csma.criticality(), n.csma.be(), s_.backoff, n.mac_rng);
    const SimTime boundary = next_backoff_boundary(now(), superframe_start_, ubp_);
    n.phase = MacPhase::Backoff;
    n.mac_event = queue_.schedule(boundary + static_cast<SimTime>(periods) * ubp_, EventKind::BackoffExpired, n.id);
  }

  void on_backoff_expired(Node& n) {
    n.mac_event = {};
    if (n.queue.empty() || !can_contend(n)) {
      n.phase = MacPhase::Idle;
      return;
    }
    const SimTime tx_at = now() + static_cast<SimTime>(n.csma.cw()) * ubp_;
    const SimTime done = tx_at + airtime_of(n.queue.front().frame.size_bits) + s_.superframe.ack_wait();
    if (done > superframe_start_ + sd_) {
      n.phase = MacPhase::Idle;  // resumes in the next superframe the node may use
      return;
    }
    n.phase = MacPhase::Cca;
    n.cca_start = now();
    n.mac_event = queue_.schedule(now() + s_.superframe.cca_duration(), EventKind::CcaDue, n.id);
  }

  void on_cca_due(Node& n) {
    n.mac_event = {};
    const CcaResult r =
        channel_.cca_energy_detect(n.placement, s_.channel.cca_threshold_dbm, n.cca_start, now(), n.id);
    switch (n.csma.on_cca(r)) {
      case CsmaStateMachine::Step::PerformCca:
        n.phase = MacPhase::Backoff;
        n.mac_event = queue_.schedule(n.cca_start + ubp_, EventKind::BackoffExpired, n.id);
        break;
      case CsmaStateMachine::Step::Transmit:
        n.phase = MacPhase::Transmitting;
        n.mac_event = queue_.schedule(n.cca_start + ubp_, EventKind::TxStart, n.id);
        break;
      case CsmaStateMachine::Step::Backoff: schedule_backoff(n); break;
      case CsmaStateMachine::Step::ChannelAccessFailure:
        ++metrics(n.id).channel_access_failures;
        n.inflight = n.queue.front().frame.sequence;
        complete_frame(n, false);
        break;
    }
  }

  void start_data_tx(Node& n) {
    n.mac_event = {};
    QueuedFrame& head = n.queue.front();
    n.inflight = head.frame.sequence;
    n.phase = MacPhase::Transmitting;
    begin_tx(n, head.frame);
  }

  bool on_data_end(const ActiveTx& tx, const std::vector<NodeId>& rx) {
    Node& n = node(tx.frame.src);
    const bool ok = received(tx, rx, kBnc);
    if (ok) {
      if (QueuedFrame* q = find_frame(n, tx.frame.sequence); q && !q->delivered) {
        q->delivered = true;
        auto& c = metrics(n.id).at(tx.frame.traffic_class);
        ++c.delivered;
        c.latencies.push_back(now() - tx.frame.created_at);
        result_.deliveries.push_back(
            {n.id, tx.frame.traffic_class, tx.frame.sequence, tx.frame.created_at, tx.start, now()});
      }
      Frame ack;
      ack.kind = FrameKind::Ack;
      ack.src = kBnc;
      ack.dst = n.id;
      ack.size_bits = s_.frames.ack_bits;
      ack.traffic_class = tx.frame.traffic_class;
      ack.created_at = now();
      ack.sequence = tx.frame.sequence;
      pending_bnc_[next_pending_] = ack;
      queue_.schedule(now() + s_.superframe.turnaround(), EventKind::TxStart, kBnc, next_pending_++);
    }
    n.phase = MacPhase::WaitAck;
    n.ack_timeout = queue_.schedule(now() + s_.superframe.ack_wait(), EventKind::AckTimeout, n.id);
    return ok;
  }

  bool on_ack_end(const ActiveTx& tx, const std::vector<NodeId>& rx) {
    Node& n = node(tx.frame.dst);
    const bool ok = received(tx, rx, n.id);
    if (ok && n.phase == MacPhase::WaitAck && n.inflight == tx.frame.sequence) {
      queue_.cancel(n.ack_timeout);
      complete_frame(n, true);
    }
    return ok;
  }

  void on_ack_timeout(Node& n) {
    n.ack_timeout = {};
    if (n.phase != MacPhase::WaitAck) return;
    QueuedFrame* q = find_frame(n, *n.inflight);
    if (++q->retries > s_.backoff.max_frame_retries) {
      complete_frame(n, false);
      return;
    }
    n.phase = MacPhase::Idle;
    n.inflight.reset();
    try_start_mac(n);
  }

  void complete_frame(Node& n, bool acked) {
    auto it = std::find_if(n.queue.begin(), n.queue.end(),
                           [&](const QueuedFrame& q) { return q.frame.sequence == *n.inflight; });
    const TrafficClass cls = it->frame.traffic_class;
    if (!acked && !it->delivered) ++metrics(n.id).at(cls).dropped;
    n.queue.erase(it);
    n.inflight.reset();
    n.phase = MacPhase::Idle;
    if (n.cfg->traffic.process == ArrivalProcess::Saturated && cls == n.cfg->traffic.traffic_class)
      enqueue(n, cls);
    maybe_end_session(n);
    try_start_mac(n);
  }

  void on_bnc_tx_start(std::uint64_t key) {
    auto it = pending_bnc_.find(key);
    const Frame f = it->second;
    pending_bnc_.erase(it);
    begin_tx(bnc_, f);
  }

  // ---- TDMA ----------------------------------------------------------------

  void on_slot_boundary(Node& n, std::uint64_t edge) {
    if (edge == kSlotEnd) {
      n.in_slot = false;
      return;
    }
    n.in_slot = true;
    n.slot_end = now() + tdma_.slot_duration();
    queue_.schedule(n.slot_end, EventKind::SlotBoundary, n.id, kSlotEnd);
    try_start_mac(n);
  }

  // ---- wakeup radio --------------------------------------------------------

  void send_emergency_signal(Node& n) {
    n.wakeup_pending = true;
    ++metrics(n.id).wakeup_signals;
    open_wakeup_window(n, now() + s_.wakeup.timing.signal_airtime);
    if (!channel_.wakeup_delivered(channel_rng_)) {
      queue_.schedule(now() + s_.wakeup.retry_timeout, EventKind::WakeupTimeout, n.id);
      return;
    }
    const bool bnc_awake = bnc_radio_on();
    const SimTime active = activation_time(now(), s_.wakeup.timing, bnc_awake);
    if (!bnc_awake) open_wakeup_window(bnc_, active);
    queue_.schedule(active, EventKind::WakeupDue, n.id, encode(kEmergencyGrant, 0));
  }

  void send_on_demand_signal(std::size_t query) {
    const OnDemandQuery& q = s_.on_demand[query];
    const WakeupResult woken = send_wakeup(WakeupSignal::on_demand(q.target, s_.wakeup.mode), receivers_);
    ++metrics(kBnc).wakeup_signals;
    open_wakeup_window(bnc_, now() + s_.wakeup.timing.signal_airtime);
    node(q.target).session_pending = true;
    if (!channel_.wakeup_delivered(channel_rng_)) {
      queue_.schedule(now() + s_.wakeup.retry_timeout, EventKind::WakeupTimeout, kBnc, query);
      return;
    }
    for (NodeId id : woken.woken) {
      Node& n = node(id);
      const bool awake = node_radio_on(n);
      const SimTime active = activation_time(now(), s_.wakeup.timing, awake);
      if (!awake) open_wakeup_window(n, active);
      if (id == q.target) {
        queue_.schedule(active, EventKind::WakeupDue, id, encode(kOnDemandGrant, query));
      } else {
        ++metrics(id).spurious_wakeups;
        queue_.schedule(active, EventKind::WakeupDue, id, encode(kSpurious, 0));
      }
    }
  }

  void on_wakeup_due(NodeId id, std::uint64_t arg) {
    if (id == kBnc) return;  // BNC window end; radio state follows sessions
    Node& n = node(id);
    switch (reason_of(arg)) {
      case kWindowEnd: break;
      case kEmergencyGrant:
        n.wakeup_pending = false;
        n.session = true;
        try_start_mac(n);
        maybe_end_session(n);
        break;
      case kOnDemandGrant: {
        const OnDemandQuery& q = s_.on_demand[index_of(arg)];
        n.session_pending = false;
        n.session = true;
        if (q.mode == TrafficClass::OnDemandNonContinuous) {
          enqueue(n, TrafficClass::OnDemandNonContinuous);
        } else {
          n.stream_active = true;
          n.stream_period = std::max<SimTime>(1, static_cast<SimTime>(std::llround(1e6 / q.rate_hz)));
          queue_.schedule(now() + n.stream_period, EventKind::TrafficArrival, n.id, kStream);
          queue_.schedule(now() + q.duration, EventKind::SessionEnd, n.id, kStopStream);
        }
        break;
      }
      case kSpurious: {
        const SimTime until = now() + sd_;
        if (until > n.spurious_until) {
          n.spurious_until = until;
          queue_.schedule(until, EventKind::SessionEnd, n.id, kSpuriousExpiry);
        }
        break;
      }
    }
  }

  void on_wakeup_timeout(NodeId id, std::uint64_t arg) {
    ++metrics(id).wakeup_retries;
    if (id == kBnc)
      send_on_demand_signal(arg);
    else
      send_emergency_signal(node(id));
  }

  void on_session_end(Node& n, std::uint64_t reason) {
    if (reason == kSpuriousExpiry) return;
    if (!n.stream_active) return;
    if (bnc_.tx_on) {
      queue_.schedule(now() + s_.superframe.turnaround(), EventKind::SessionEnd, n.id, kStopStream);
      return;
    }
    Frame cmd;
    cmd.kind = FrameKind::Command;
    cmd.src = kBnc;
    cmd.dst = n.id;
    cmd.size_bits = s_.frames.command_bits;
    cmd.traffic_class = TrafficClass::OnDemandContinuous;
    cmd.created_at = now();
    cmd.sequence = next_sequence_++;
    begin_tx(bnc_, cmd);
  }

  bool on_command_end(const ActiveTx& tx, const std::vector<NodeId>& rx) {
    Node& n = node(tx.frame.dst);
    const bool ok = received(tx, rx, n.id);
    if (ok) {
      n.stream_active = false;
      maybe_end_session(n);
    } else {
      queue_.schedule(now() + s_.wakeup.retry_timeout, EventKind::SessionEnd, n.id, kStopStream);
    }
    return ok;
  }

  void maybe_end_session(Node& n) {
    if (!n.session || n.stream_active || n.phase != MacPhase::Idle) return;
    const bool pending = std::any_of(n.queue.begin(), n.queue.end(),
                                     [](const QueuedFrame& q) { return is_session_class(q.frame.traffic_class); });
    if (!pending) n.session = false;
  }

  void on_table_update(std::size_t i) {
    const TableUpdate& u = s_.wakeup.updates[i];
    table_.set_multiplier(u.node, u.multiplier);
  }

  // ---- dispatch ------------------------------------------------------------

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::BeaconDue: on_beacon_due(); break;
      case EventKind::ActiveEnd: on_active_end(); break;
      case EventKind::BackoffExpired: on_backoff_expired(node(ev.node)); break;
      case EventKind::CcaDue: on_cca_due(node(ev.node)); break;
      case EventKind::TxStart:
        if (ev.node == kBnc)
          on_bnc_tx_start(ev.arg);
        else
          start_data_tx(node(ev.node));
        break;
      case EventKind::TxEnd: on_tx_end(ev.arg); break;
      case EventKind::AckTimeout: on_ack_timeout(node(ev.node)); break;
      case EventKind::TrafficArrival: on_traffic_arrival(node(ev.node), ev.arg); break;
      case EventKind::WakeupDue: on_wakeup_due(ev.node, ev.arg); break;
      case EventKind::WakeupTimeout: on_wakeup_timeout(ev.node, ev.arg); break;
      case EventKind::SlotBoundary: on_slot_boundary(node(ev.node), ev.arg); break;
      case EventKind::SessionEnd: on_session_end(node(ev.node), ev.arg); break;
      case EventKind::TableUpdate: on_table_update(ev.arg); break;
      case EventKind::OnDemandQuery: send_on_demand_signal(ev.arg); break;
    }
  }

  const Scenario& s_;
  RunOptions opts_;
  RunResult result_;
  EventQueue queue_;
  Channel channel_;
  Rng channel_rng_;
  WakeupTable table_;
  TdmaSchedule tdma_;
  const SimTime bi_;
  const SimTime sd_;
  const SimTime ubp_;

  Device bnc_;
  std::vector<Node> nodes_;
  std::map<NodeId, std::size_t> index_;
  std::vector<WakeupReceiver> receivers_;

  std::uint64_t superframe_ = 0;
  std::uint64_t beacon_count_ = 0;
  SimTime superframe_start_ = 0;
  bool bnc_scheduled_ = false;
  std::uint64_t counted_superframe_ = UINT64_MAX;
  std::uint64_t beacon_version_ = 0;
  std::uint64_t beacon_superframe_ = 0;

  std::uint64_t next_tx_id_ = 1;
  std::uint64_t next_sequence_ = 1;
  std::uint64_t next_pending_ = 1;
  std::map<std::uint64_t, Frame> pending_bnc_;
  std::map<std::uint64_t, std::vector<NodeId>> receivers_of_;
  std::map<std::uint64_t, std::size_t> tx_record_;
};

}  // namespace

RunResult run(const Scenario& scenario, std::uint64_t seed, const RunOptions& options) {
  return Simulation(scenario, seed, options).run();
}

}  // namespace wban
