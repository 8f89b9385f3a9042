#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "wban/core.hpp"
#include "wban/engine.hpp"

namespace wban {

enum class LinkClass : std::uint8_t { OnBody, InOnBody, InBody };

LinkClass link_class(const Placement& a, const Placement& b);

struct PathLossParams {
  double ref_loss_db = 40.0;
  double ref_dist_m = 1.0;
  double exponent = 2.0;
};

/// Log-distance parameters, one set per link class.
struct PathLossTable {
  std::array<PathLossParams, 3> by_class = {{
      {40.0, 1.0, 2.0},  // on-body <-> on-body
      {60.0, 1.0, 4.5},  // in-body <-> on-body
      {60.0, 1.0, 6.0},  // in-body <-> in-body
  }};

  const PathLossParams& operator[](LinkClass c) const { return by_class[static_cast<std::size_t>(c)]; }
  PathLossParams& operator[](LinkClass c) { return by_class[static_cast<std::size_t>(c)]; }
};

constexpr double kMinDistanceM = 1e-3;

/// ref_loss_db + 10 n log10(d / ref_dist_m), with d clamped to 1 mm.
double path_loss_db(const Placement& src, const Placement& dst, const PathLossTable& params);
double rx_power_dbm(double tx_power_dbm, const Placement& src, const Placement& dst, const PathLossTable& params);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Per-link packet success probabilities; absent links succeed with p = 1.
class LinkErrorTable {
 public:
  /// Throws InvalidParameter unless p is in [0, 1].
  void set(NodeId src, NodeId dst, double p);
  double success(NodeId src, NodeId dst) const;
  const std::map<std::pair<NodeId, NodeId>, double>& entries() const { return links_; }

 private:
  std::map<std::pair<NodeId, NodeId>, double> links_;
};

struct ChannelParams {
  PathLossTable path_loss;
  double sensitivity_dbm = -95.0;
  double capture_margin_db = 10.0;
  double cca_threshold_dbm = -85.0;
  double on_body_tx_dbm = 0.0;
  double in_body_tx_dbm = -16.0;
  /// Success probability of one wakeup-radio signal; the wakeup channel is ideal by default.
  double wakeup_success = 1.0;
};

struct ActiveTx {
  std::uint64_t id = 0;
  Frame frame;
  double tx_power_dbm = 0.0;
  Placement src_placement = Placement::on_body({});
  SimTime start = 0;
  SimTime end = 0;
  Radio radio = Radio::Data;
};

enum class CcaResult : std::uint8_t { Idle, Busy };
enum class LossReason : std::uint8_t { Collision, BelowSensitivity, RandomError };

struct DeliveryOutcome {
  bool delivered = true;
  LossReason reason = LossReason::Collision;

  static DeliveryOutcome ok() { return {}; }
  static DeliveryOutcome lost(LossReason r) { return {false, r}; }
};

std::string_view to_string(LossReason r);

/// Registry of on-air transmissions for one run, backing CCA and reception.
class Channel {
 public:
  Channel(ChannelParams params, LinkErrorTable links) : params_(std::move(params)), links_(std::move(links)) {}

  const ChannelParams& params() const { return params_; }
  const LinkErrorTable& links() const { return links_; }

  /// Requires end > start.
  void register_tx(ActiveTx tx);
  const ActiveTx* find(std::uint64_t id) const;
  /// Drops entries that can no longer overlap any in-flight transmission.
  void prune(SimTime now);
  const std::vector<ActiveTx>& active() const { return active_; }

  /// Linear-sum power (dBm) at the listener from data-radio transmissions
  /// overlapping [from, to). Transmissions by `self` are ignored.
  double received_power_dbm(const Placement& listener, SimTime from, SimTime to,
                            std::optional<NodeId> self = std::nullopt) const;

  CcaResult cca_energy_detect(const Placement& listener, double threshold_dbm, SimTime now,
                              std::optional<NodeId> self = std::nullopt) const;
  CcaResult cca_energy_detect(const Placement& listener, double threshold_dbm, SimTime from, SimTime to,
                              std::optional<NodeId> self) const;

  /// Reception of a registered transmission at `dst`. Checks collision, then
  /// sensitivity, then draws the link error.
  DeliveryOutcome deliver(const ActiveTx& tx, NodeId dst, const Placement& dst_placement, Rng& rng) const;

  bool wakeup_delivered(Rng& rng) const { return rng.bernoulli(params_.wakeup_success); }

 private:
  ChannelParams params_;
  LinkErrorTable links_;
  std::vector<ActiveTx> active_;
};

}  // namespace wban
