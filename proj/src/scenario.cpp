#include "wban/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace wban {

std::string_view to_string(MacKind m) { return m == MacKind::Tdma ? "tdma" : "csma"; }

const NodeConfig* Scenario::find(NodeId id) const {
  for (const auto& n : nodes)
    if (n.profile.id == id) return &n;
  return nullptr;
}

std::vector<NodeProfile> Scenario::profiles() const {
  std::vector<NodeProfile> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.profile);
  return out;
}

double Scenario::tx_power_dbm(const NodeConfig& n) const {
  if (n.tx_power_dbm) return *n.tx_power_dbm;
  return n.profile.placement.kind() == BodySide::InBody ? channel.in_body_tx_dbm : channel.on_body_tx_dbm;
}

double Scenario::bnc_tx_dbm() const {
  if (bnc_tx_power_dbm) return *bnc_tx_power_dbm;
  return bnc_placement.kind() == BodySide::InBody ? channel.in_body_tx_dbm : channel.on_body_tx_dbm;
}

TdmaSchedule Scenario::tdma_schedule() const {
  std::uint32_t slots = tdma.slots;
  if (slots == 0) {
    slots = static_cast<std::uint32_t>(nodes.size());
    for (const auto& n : nodes)
      if (n.slot) slots = std::max(slots, *n.slot + 1);
  }
  const SimTime offset = airtime(frames.beacon_bits, superframe.bitrate_bps);
  SimTime slot_duration = tdma.slot_duration;
  if (slot_duration == 0 && slots > 0) slot_duration = (superframe.beacon_interval() - offset) / slots;
  TdmaSchedule schedule(slot_duration, slots, offset);
  for (const auto& n : nodes)
    if (n.slot) schedule.assign(n.profile.id, *n.slot);
  return schedule;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  os << issues.size() << " scenario error(s):";
  for (const auto& i : issues) os << "\n  " << i.location << ": " << i.message;
  return os.str();
}

std::optional<std::vector<std::uint64_t>> parse_seed_range(std::string_view text) {
  auto parse_u64 = [](std::string_view s) -> std::optional<std::uint64_t> {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    auto v = parse_u64(text);
    if (!v) return std::nullopt;
    return std::vector<std::uint64_t>{*v};
  }
  auto a = parse_u64(text.substr(0, dots));
  auto b = parse_u64(text.substr(dots + 2));
  if (!a || !b || *b < *a || *b - *a > 1000000) return std::nullopt;
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = *a; s <= *b; ++s) out.push_back(s);
  return out;
}

namespace {

void add(ValidationReport& r, std::string loc, std::string msg) { r.issues.push_back({std::move(loc), std::move(msg)}); }

std::string node_loc(const NodeConfig& n) { return "nodes[id=" + std::to_string(n.profile.id) + "]"; }

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  ValidationReport& report() { return report_; }

  std::string where(const YAML::Node& n) const {
    const auto m = n.Mark();
    if (m.line < 0) return source_;
    return source_ + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
  }

  void issue(const YAML::Node& at, std::string msg) { add(report_, where(at), std::move(msg)); }

  bool expect_map(const YAML::Node& n, std::string_view what) {
    if (n.IsMap()) return true;
    issue(n, std::string(what) + " must be a mapping");
    return false;
  }

  bool expect_seq(const YAML::Node& n, std::string_view what) {
    if (n.IsSequence()) return true;
    issue(n, std::string(what) + " must be a list");
    return false;
  }

  void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed, std::string_view ctx) {
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        issue(kv.first, "unknown key '" + key + "' in " + std::string(ctx));
    }
  }

  template <class T>
  bool number(const YAML::Node& map, const char* key, T& out, double lo = -std::numeric_limits<double>::infinity(),
              double hi = std::numeric_limits<double>::infinity()) {
    const YAML::Node n = map[key];
    if (!n) return false;
    double v = 0;
    try {
      v = n.as<double>();
    } catch (const YAML::Exception&) {
      issue(n, std::string("'") + key + "' must be a number");
      return false;
    }
    if (!std::isfinite(v) || v < lo || v > hi) {
      issue(n, std::string("'") + key + "' = " + n.as<std::string>() + " is out of range");
      return false;
    }
    if constexpr (std::is_integral_v<T>) {
      if (v != std::floor(v)) {
        issue(n, std::string("'") + key + "' must be an integer");
        return false;
      }
    }
    out = static_cast<T>(v);
    return true;
  }

  bool boolean(const YAML::Node& map, const char* key, bool& out) {
    const YAML::Node n = map[key];
    if (!n) return false;
    try {
      out = n.as<bool>();
      return true;
    } catch (const YAML::Exception&) {
      issue(n, std::string("'") + key + "' must be true or false");
      return false;
    }
  }

  std::optional<std::string> text(const YAML::Node& map, const char* key) {
    const YAML::Node n = map[key];
    if (!n) return std::nullopt;
    if (!n.IsScalar()) {
      issue(n, std::string("'") + key + "' must be a scalar");
      return std::nullopt;
    }
    return n.as<std::string>();
  }

  std::optional<Vec3> vec3(const YAML::Node& map, const char* key) {
    const YAML::Node n = map[key];
    if (!n) return std::nullopt;
    if (!n.IsSequence() || n.size() != 3) {
      issue(n, std::string("'") + key + "' must be a list of 3 numbers [x, y, z] in meters");
      return std::nullopt;
    }
    try {
      return Vec3{n[0].as<double>(), n[1].as<double>(), n[2].as<double>()};
    } catch (const YAML::Exception&) {
      issue(n, std::string("'") + key + "' must contain numbers");
      return std::nullopt;
    }
  }

 private:
  std::string source_;
  ValidationReport report_;
};

void read_path_loss(Reader& rd, const YAML::Node& n, PathLossParams& p, std::string_view ctx) {
  if (!rd.expect_map(n, ctx)) return;
  rd.check_keys(n, {"ref_loss_db", "ref_dist_m", "exponent"}, ctx);
  rd.number(n, "ref_loss_db", p.ref_loss_db);
  rd.number(n, "ref_dist_m", p.ref_dist_m);
  rd.number(n, "exponent", p.exponent);
}

void read_channel(Reader& rd, const YAML::Node& n, Scenario& s) {
  if (!rd.expect_map(n, "channel")) return;
  rd.check_keys(n,
                {"sensitivity_dbm", "capture_margin_db", "cca_threshold_dbm", "on_body_tx_dbm", "in_body_tx_dbm",
                 "wakeup_success", "path_loss", "links"},
                "channel");
  ChannelParams& c = s.channel;
  rd.number(n, "sensitivity_dbm", c.sensitivity_dbm);
  rd.number(n, "capture_margin_db", c.capture_margin_db, 0.0);
  rd.number(n, "cca_threshold_dbm", c.cca_threshold_dbm);
  rd.number(n, "on_body_tx_dbm", c.on_body_tx_dbm);
  rd.number(n, "in_body_tx_dbm", c.in_body_tx_dbm);
  rd.number(n, "wakeup_success", c.wakeup_success, 0.0, 1.0);
  if (const auto pl = n["path_loss"]; pl && rd.expect_map(pl, "channel.path_loss")) {
    rd.check_keys(pl, {"on_body", "in_on_body", "in_body"}, "channel.path_loss");
    if (pl["on_body"]) read_path_loss(rd, pl["on_body"], c.path_loss[LinkClass::OnBody], "path_loss.on_body");
    if (pl["in_on_body"]) read_path_loss(rd, pl["in_on_body"], c.path_loss[LinkClass::InOnBody], "path_loss.in_on_body");
    if (pl["in_body"]) read_path_loss(rd, pl["in_body"], c.path_loss[LinkClass::InBody], "path_loss.in_body");
  }
  if (const auto links = n["links"]; links && rd.expect_seq(links, "channel.links")) {
    for (const auto& l : links) {
      if (!rd.expect_map(l, "link")) continue;
      rd.check_keys(l, {"src", "dst", "success"}, "channel.links entry");
      NodeId src = 0, dst = 0;
      double p = 1.0;
      const bool ok = rd.number(l, "src", src, 0, 65534) & rd.number(l, "dst", dst, 0, 65534) &
                      rd.number(l, "success", p, 0.0, 1.0);
      if (!ok) {
        rd.issue(l, "link entries need src, dst and success in [0, 1]");
        continue;
      }
      s.links.set(src, dst, p);
    }
  }
}

void read_traffic(Reader& rd, const YAML::Node& n, GeneratorSpec& g, bool& phase_set) {
  if (!rd.expect_map(n, "traffic")) return;
  rd.check_keys(n, {"process", "rate_per_hour", "phase_s", "at_s"}, "traffic");
  if (auto p = rd.text(n, "process")) {
    if (auto proc = parse_arrival_process(*p))
      g.process = *proc;
    else
      rd.issue(n["process"], "unknown arrival process '" + *p + "' (periodic|poisson|script|saturated|none)");
  }
  rd.number(n, "rate_per_hour", g.rate_per_hour);
  double phase = 0;
  if (rd.number(n, "phase_s", phase, 0.0)) {
    g.phase = from_seconds(phase);
    phase_set = true;
  }
  if (const auto at = n["at_s"]; at && rd.expect_seq(at, "traffic.at_s")) {
    g.script.clear();
    for (const auto& t : at) {
      try {
        g.script.push_back(from_seconds(t.as<double>()));
      } catch (const YAML::Exception&) {
        rd.issue(t, "arrival times must be numbers (seconds)");
      }
    }
    std::sort(g.script.begin(), g.script.end());
    if (!n["process"]) g.process = ArrivalProcess::Script;
  }
}

std::optional<NodeConfig> read_node(Reader& rd, const YAML::Node& n) {
  if (!rd.expect_map(n, "node")) return std::nullopt;
  rd.check_keys(n,
                {"id", "placement", "class", "criticality", "multiplier", "payload_bits", "tx_power_dbm",
                 "wakeup_receiver", "wakeup_frequency", "slot", "traffic"},
                "node");
  NodeConfig cfg;
  NodeProfile& p = cfg.profile;
  if (!n["id"]) {
    rd.issue(n, "node is missing 'id'");
    return std::nullopt;
  }
  if (!rd.number(n, "id", p.id, 1, 65534)) return std::nullopt;

  if (const auto pl = n["placement"]; pl && rd.expect_map(pl, "placement")) {
    rd.check_keys(pl, {"kind", "position", "depth_m"}, "placement");
    BodySide side = BodySide::OnBody;
    if (auto k = rd.text(pl, "kind")) {
      if (auto parsed = parse_body_side(*k))
        side = *parsed;
      else
        rd.issue(pl["kind"], "placement kind must be on_body or in_body");
    }
    const Vec3 pos = rd.vec3(pl, "position").value_or(Vec3{});
    double depth = 0;
    const bool has_depth = rd.number(pl, "depth_m", depth);
    if (side == BodySide::InBody) {
      if (!has_depth) {
        rd.issue(pl, "in_body placement requires depth_m");
      } else {
        try {
          p.placement = Placement::in_body(pos, depth);
        } catch (const InvalidParameter& e) {
          rd.issue(pl["depth_m"], e.what());
        }
      }
    } else {
      if (has_depth) rd.issue(pl["depth_m"], "depth_m is only allowed for in_body placements");
      p.placement = Placement::on_body(pos);
    }
  }

  if (auto c = rd.text(n, "class")) {
    if (auto parsed = parse_traffic_class(*c))
      p.traffic_class = *parsed;
    else
      rd.issue(n["class"], "unknown traffic class '" + *c + "'");
  }
  p.criticality = p.traffic_class == TrafficClass::Emergency ? Criticality::Critical : Criticality::NonCritical;
  if (auto c = rd.text(n, "criticality")) {
    if (auto parsed = parse_criticality(*c))
      p.criticality = *parsed;
    else
      rd.issue(n["criticality"], "criticality must be critical or noncritical");
  }
  rd.number(n, "multiplier", p.wakeup_multiplier, 1, 1e9);
  rd.number(n, "payload_bits", p.payload_bits, 1, 1e7);
  if (double v = 0; rd.number(n, "tx_power_dbm", v)) cfg.tx_power_dbm = v;
  rd.boolean(n, "wakeup_receiver", cfg.wakeup_receiver);
  if (std::uint32_t f = 0; rd.number(n, "wakeup_frequency", f, 0, 1e9)) cfg.wakeup_frequency = f;
  if (std::uint32_t sl = 0; rd.number(n, "slot", sl, 0, 1e6)) cfg.slot = sl;

  GeneratorSpec& g = cfg.traffic;
  g.traffic_class = p.traffic_class;
  g.process = default_process(p.traffic_class);
  g.rate_per_hour = default_rate_per_hour(p.traffic_class);
  bool phase_set = false;
  if (const auto t = n["traffic"]) read_traffic(rd, t, g, phase_set);
  if (!phase_set && is_normal(p.traffic_class)) g.phase = static_cast<SimTime>(p.id) * kUsPerSecond;
  g.payload_bits = p.payload_bits;
  return cfg;
}

void read_wakeup(Reader& rd, const YAML::Node& n, Scenario& s) {
  if (!rd.expect_map(n, "wakeup")) return;
  rd.check_keys(n, {"mode", "latency_ms", "signal_airtime_ms", "retry_timeout_ms", "updates"}, "wakeup");
  if (auto m = rd.text(n, "mode")) {
    if (*m == "broadcast")
      s.wakeup.mode = WakeupMode::Broadcast;
    else if (*m == "frequency_addressed")
      s.wakeup.mode = WakeupMode::FrequencyAddressed;
    else
      rd.issue(n["mode"], "wakeup mode must be broadcast or frequency_addressed");
  }
  double ms = 0;
  if (rd.number(n, "latency_ms", ms, 0.0)) s.wakeup.timing.wakeup_latency = from_ms(ms);
  if (rd.number(n, "signal_airtime_ms", ms, 0.001)) s.wakeup.timing.signal_airtime = from_ms(ms);
  if (rd.number(n, "retry_timeout_ms", ms, 0.001)) s.wakeup.retry_timeout = from_ms(ms);
  if (const auto ups = n["updates"]; ups && rd.expect_seq(ups, "wakeup.updates")) {
    for (const auto& u : ups) {
      if (!rd.expect_map(u, "table update")) continue;
      rd.check_keys(u, {"at_s", "node", "multiplier"}, "wakeup.updates entry");
      TableUpdate up;
      double at = 0;
      if (!(rd.number(u, "at_s", at, 0.0) & rd.number(u, "node", up.node, 1, 65534) &
            rd.number(u, "multiplier", up.multiplier, 1, 1e9))) {
        rd.issue(u, "table updates need at_s, node and multiplier >= 1");
        continue;
      }
      up.at = from_seconds(at);
      s.wakeup.updates.push_back(up);
    }
  }
}

void read_on_demand(Reader& rd, const YAML::Node& n, Scenario& s) {
  if (!rd.expect_seq(n, "on_demand")) return;
  for (const auto& q : n) {
    if (!rd.expect_map(q, "on_demand entry")) continue;
    rd.check_keys(q, {"at_s", "target", "mode", "duration_s", "rate_hz"}, "on_demand entry");
    OnDemandQuery query;
    double at = 0;
    if (!(rd.number(q, "at_s", at, 0.0) & rd.number(q, "target", query.target, 1, 65534))) {
      rd.issue(q, "on_demand entries need at_s and target");
      continue;
    }
    query.at = from_seconds(at);
    const auto mode = rd.text(q, "mode").value_or("noncontinuous");
    if (mode == "continuous")
      query.mode = TrafficClass::OnDemandContinuous;
    else if (mode == "noncontinuous")
      query.mode = TrafficClass::OnDemandNonContinuous;
    else
      rd.issue(q["mode"], "on_demand mode must be continuous or noncontinuous");
    double d = 0;
    if (rd.number(q, "duration_s", d, 0.0)) query.duration = from_seconds(d);
    rd.number(q, "rate_hz", query.rate_hz, 0.0);
    s.on_demand.push_back(query);
  }
}

void read_document(Reader& rd, const YAML::Node& root, Scenario& s) {
  if (!rd.expect_map(root, "scenario")) return;
  rd.check_keys(root,
                {"mac", "horizon_s", "seed", "seeds", "superframe", "backoff", "channel", "energy", "bnc", "wakeup",
                 "tdma", "frames", "on_demand", "nodes"},
                "scenario");
  if (auto m = rd.text(root, "mac")) {
    if (*m == "csma")
      s.mac = MacKind::Csma;
    else if (*m == "tdma")
      s.mac = MacKind::Tdma;
    else
      rd.issue(root["mac"], "mac must be csma or tdma");
  }
  double horizon = 0;
  if (rd.number(root, "horizon_s", horizon, 0.0)) s.horizon = from_seconds(horizon);
  if (root["seed"] && root["seeds"]) rd.issue(root["seeds"], "give either seed or seeds, not both");
  for (const char* key : {"seed", "seeds"}) {
    if (auto t = rd.text(root, key)) {
      if (auto seeds = parse_seed_range(*t))
        s.seeds = *seeds;
      else
        rd.issue(root[key], std::string("'") + key + "' must be N or A..B");
    }
  }
  if (const auto sf = root["superframe"]; sf && rd.expect_map(sf, "superframe")) {
    rd.check_keys(sf, {"beacon_order", "superframe_order", "symbol_rate_sps", "bitrate_bps"}, "superframe");
    rd.number(sf, "beacon_order", s.superframe.beacon_order, 0, 14);
    rd.number(sf, "superframe_order", s.superframe.superframe_order, 0, 14);
    rd.number(sf, "symbol_rate_sps", s.superframe.symbol_rate_sps, 1, 1e9);
    rd.number(sf, "bitrate_bps", s.superframe.bitrate_bps, 1, 1e10);
  }
  if (const auto b = root["backoff"]; b && rd.expect_map(b, "backoff")) {
    rd.check_keys(b, {"min_be_critical", "min_be_noncritical", "max_be", "max_csma_backoffs", "max_frame_retries"},
                  "backoff");
    rd.number(b, "min_be_critical", s.backoff.min_be_critical, 0, 20);
    rd.number(b, "min_be_noncritical", s.backoff.min_be_noncritical, 0, 20);
    rd.number(b, "max_be", s.backoff.max_be, 0, 20);
    rd.number(b, "max_csma_backoffs", s.backoff.max_csma_backoffs, 0, 64);
    rd.number(b, "max_frame_retries", s.backoff.max_frame_retries, 0, 64);
  }
  if (const auto c = root["channel"]) read_channel(rd, c, s);
  if (const auto e = root["energy"]; e && rd.expect_map(e, "energy")) {
    rd.check_keys(e, {"tx_mw", "rx_mw", "idle_listen_mw", "sleep_mw", "wakeup_rx_mw"}, "energy");
    rd.number(e, "tx_mw", s.energy.tx_mw);
    rd.number(e, "rx_mw", s.energy.rx_mw);
    rd.number(e, "idle_listen_mw", s.energy.idle_listen_mw);
    rd.number(e, "sleep_mw", s.energy.sleep_mw);
    rd.number(e, "wakeup_rx_mw", s.energy.wakeup_rx_mw);
  }
  if (const auto b = root["bnc"]; b && rd.expect_map(b, "bnc")) {
    rd.check_keys(b, {"position", "tx_power_dbm"}, "bnc");
    if (auto pos = rd.vec3(b, "position")) s.bnc_placement = Placement::on_body(*pos);
    if (double v = 0; rd.number(b, "tx_power_dbm", v)) s.bnc_tx_power_dbm = v;
  }
  if (const auto w = root["wakeup"]) read_wakeup(rd, w, s);
  if (const auto t = root["tdma"]; t && rd.expect_map(t, "tdma")) {
    rd.check_keys(t, {"slot_duration_us", "slots"}, "tdma");
    rd.number(t, "slot_duration_us", s.tdma.slot_duration, 1, 1e12);
    rd.number(t, "slots", s.tdma.slots, 1, 1e6);
  }
  if (const auto f = root["frames"]; f && rd.expect_map(f, "frames")) {
    rd.check_keys(f, {"beacon_bits", "mac_overhead_bits", "ack_bits", "command_bits"}, "frames");
    rd.number(f, "beacon_bits", s.frames.beacon_bits, 1, 1e6);
    rd.number(f, "mac_overhead_bits", s.frames.mac_overhead_bits, 0, 1e6);
    rd.number(f, "ack_bits", s.frames.ack_bits, 1, 1e6);
    rd.number(f, "command_bits", s.frames.command_bits, 1, 1e6);
  }
  if (const auto q = root["on_demand"]) read_on_demand(rd, q, s);
  const auto nodes = root["nodes"];
  if (!nodes) {
    rd.issue(root, "scenario has no 'nodes' list");
  } else if (rd.expect_seq(nodes, "nodes")) {
    for (const auto& n : nodes)
      if (auto cfg = read_node(rd, n)) s.nodes.push_back(std::move(*cfg));
  }
}

}  // namespace

ValidationReport validate(const Scenario& s) {
  ValidationReport r;
  auto guard = [&](std::string loc, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(r, std::move(loc), e.what());
    }
  };
  if (s.horizon <= 0) add(r, "horizon_s", "horizon must be positive");
  if (s.seeds.empty()) add(r, "seeds", "at least one seed is required");
  guard("superframe", [&] { s.superframe.validate(); });
  guard("backoff", [&] { s.backoff.validate(); });
  guard("energy", [&] { s.energy.validate(); });

  static constexpr const char* kLinkNames[] = {"on_body", "in_on_body", "in_body"};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = s.channel.path_loss.by_class[i];
    const std::string loc = std::string("channel.path_loss.") + kLinkNames[i];
    if (!(p.ref_loss_db > 0)) add(r, loc, "ref_loss_db must be > 0");
    if (!(p.ref_dist_m > 0)) add(r, loc, "ref_dist_m must be > 0");
    if (!(p.exponent >= 1.5)) add(r, loc, "exponent must be >= 1.5");
  }

  if (s.nodes.empty()) add(r, "nodes", "at least one node is required");
  std::set<NodeId> ids;
  for (const auto& n : s.nodes)
    if (!ids.insert(n.profile.id).second) add(r, node_loc(n), "duplicate node id " + std::to_string(n.profile.id));

  const bool superframe_ok = [&] {
    try {
      s.superframe.validate();
      return true;
    } catch (...) {
      return false;
    }
  }();

  for (const auto& n : s.nodes) {
    const std::string loc = node_loc(n);
    const auto& g = n.traffic;
    if (n.profile.wakeup_multiplier == 0) add(r, loc, "wakeup multiplier must be >= 1");
    if (n.profile.payload_bits == 0) add(r, loc, "payload_bits must be positive");
    if ((g.process == ArrivalProcess::Periodic || g.process == ArrivalProcess::Poisson) && !(g.rate_per_hour > 0))
      add(r, loc, "traffic rate_per_hour must be positive for " + std::string(to_string(g.process)) + " arrivals");
    if (is_on_demand(n.profile.traffic_class) && g.process != ArrivalProcess::None)
      add(r, loc, "on-demand nodes only transmit in response to queries (process must be none)");
    for (SimTime t : g.script)
      if (t < 0 || t > s.horizon) add(r, loc, "scripted arrival at " + std::to_string(to_seconds(t)) + " s lies outside the horizon");
    if (superframe_ok && s.mac == MacKind::Csma) {
      const SimTime need = airtime(s.frames.beacon_bits, s.superframe.bitrate_bps) + 3 * s.superframe.unit_backoff() +
                           airtime(s.data_frame_bits(n), s.superframe.bitrate_bps) + s.superframe.ack_wait();
      if (need > s.superframe.active_duration())
        add(r, loc, "data frame exchange needs " + std::to_string(need) + " us but the active period is " +
                        std::to_string(s.superframe.active_duration()) + " us");
    }
  }

  std::set<std::uint32_t> freqs;
  for (const auto& n : s.nodes)
    if (n.wakeup_frequency && !freqs.insert(*n.wakeup_frequency).second)
      add(r, node_loc(n), "wakeup frequency " + std::to_string(*n.wakeup_frequency) + " is assigned twice");

  for (std::size_t i = 0; i < s.on_demand.size(); ++i) {
    const auto& q = s.on_demand[i];
    const std::string loc = "on_demand[" + std::to_string(i) + "]";
    const NodeConfig* target = s.find(q.target);
    if (target == nullptr) {
      add(r, loc, "target node " + std::to_string(q.target) + " does not exist");
      continue;
    }
    if (!target->wakeup_receiver) add(r, loc, "target node " + std::to_string(q.target) + " has no wakeup receiver");
    if (s.wakeup.mode == WakeupMode::FrequencyAddressed && !target->wakeup_frequency)
      add(r, loc, "frequency-addressed wakeup needs a wakeup_frequency on node " + std::to_string(q.target));
    if (q.at > s.horizon) add(r, loc, "query time lies outside the horizon");
    if (q.mode == TrafficClass::OnDemandContinuous && (q.duration <= 0 || !(q.rate_hz > 0)))
      add(r, loc, "continuous queries need duration_s > 0 and rate_hz > 0");
  }

  for (std::size_t i = 0; i < s.wakeup.updates.size(); ++i) {
    const auto& u = s.wakeup.updates[i];
    const std::string loc = "wakeup.updates[" + std::to_string(i) + "]";
    if (!ids.contains(u.node)) add(r, loc, "node " + std::to_string(u.node) + " does not exist");
    if (u.multiplier == 0) add(r, loc, "multiplier must be >= 1");
  }
  for (const auto& [link, p] : s.links.entries()) {
    for (NodeId end : {link.first, link.second})
      if (end != kBnc && !ids.contains(end))
        add(r, "channel.links", "link endpoint " + std::to_string(end) + " does not exist");
  }
  if (!(s.channel.wakeup_success >= 0 && s.channel.wakeup_success <= 1))
    add(r, "channel.wakeup_success", "must lie in [0, 1]");

  if (s.mac == MacKind::Tdma && superframe_ok) {
    try {
      const TdmaSchedule schedule = s.tdma_schedule();
      schedule.validate(s.superframe.beacon_interval());
      for (const auto& n : s.nodes) {
        if (!n.slot) {
          add(r, node_loc(n), "mac is tdma but the node has no slot assignment");
          continue;
        }
        const SimTime frame = airtime(s.data_frame_bits(n), s.superframe.bitrate_bps);
        const SimTime exchange = frame + s.superframe.ack_wait();
        if (exchange > schedule.slot_duration())
          add(r, node_loc(n), "frame airtime " + std::to_string(frame) + " us (+" +
                                  std::to_string(s.superframe.ack_wait()) + " us ack wait) exceeds slot duration " +
                                  std::to_string(schedule.slot_duration()) + " us");
      }
    } catch (const std::exception& e) {
      add(r, "tdma", e.what());
    }
  }
  return r;
}

Scenario parse_scenario(const std::string& text, const std::string& source_name) {
  Reader rd(source_name);
  Scenario s;
  try {
    const YAML::Node root = YAML::Load(text);
    read_document(rd, root, s);
  } catch (const YAML::Exception& e) {
    add(rd.report(), source_name + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1),
        e.msg);
  }
  ValidationReport report = std::move(rd.report());
  if (report.ok()) {
    ValidationReport semantic = validate(s);
    report.issues.insert(report.issues.end(), semantic.issues.begin(), semantic.issues.end());
  }
  if (!report.ok()) throw ScenarioError(std::move(report));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(ValidationReport{{{path.string(), "cannot read scenario file"}}});
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

}  // namespace wban
