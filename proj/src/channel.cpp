#include "wban/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wban {

LinkClass link_class(const Placement& a, const Placement& b) {
  const bool a_in = a.kind() == BodySide::InBody;
  const bool b_in = b.kind() == BodySide::InBody;
  if (a_in && b_in) return LinkClass::InBody;
  if (a_in || b_in) return LinkClass::InOnBody;
  return LinkClass::OnBody;
}

double path_loss_db(const Placement& src, const Placement& dst, const PathLossTable& params) {
  const PathLossParams& p = params[link_class(src, dst)];
  const double d = std::max(distance(src.position(), dst.position()), kMinDistanceM);
  return p.ref_loss_db + 10.0 * p.exponent * std::log10(d / p.ref_dist_m);
}

double rx_power_dbm(double tx_power_dbm, const Placement& src, const Placement& dst, const PathLossTable& params) {
  return tx_power_dbm - path_loss_db(src, dst, params);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) {
  if (mw <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mw);
}

void LinkErrorTable::set(NodeId src, NodeId dst, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidParameter("link success probability must lie in [0, 1], got " + std::to_string(p));
  links_[{src, dst}] = p;
}

double LinkErrorTable::success(NodeId src, NodeId dst) const {
  auto it = links_.find({src, dst});
  return it == links_.end() ? 1.0 : it->second;
}

std::string_view to_string(LossReason r) {
  switch (r) {
    case LossReason::Collision: return "collision";
    case LossReason::BelowSensitivity: return "below_sensitivity";
    case LossReason::RandomError: return "random_error";
  }
  return "unknown";
}

void Channel::register_tx(ActiveTx tx) {
  if (tx.end <= tx.start) throw InvalidParameter("transmission must have positive duration");
  active_.push_back(std::move(tx));
}

const ActiveTx* Channel::find(std::uint64_t id) const {
  for (const auto& tx : active_)
    if (tx.id == id) return &tx;
  return nullptr;
}

void Channel::prune(SimTime now) {
  // Anything that ended at or before the earliest start among still-relevant
  // transmissions cannot overlap them.
  SimTime horizon = now;
  for (const auto& tx : active_)
    if (tx.end >= now) horizon = std::min(horizon, tx.start);
  std::erase_if(active_, [&](const ActiveTx& tx) { return tx.end < now && tx.end <= horizon; });
}

double Channel::received_power_dbm(const Placement& listener, SimTime from, SimTime to,
                                   std::optional<NodeId> self) const {
  double total_mw = 0.0;
  for (const auto& tx : active_) {
    if (tx.radio != Radio::Data) continue;
    if (self && tx.frame.src == *self) continue;
    if (tx.start >= to || tx.end <= from) continue;
    total_mw += dbm_to_mw(rx_power_dbm(tx.tx_power_dbm, tx.src_placement, listener, params_.path_loss));
  }
  return mw_to_dbm(total_mw);
}

CcaResult Channel::cca_energy_detect(const Placement& listener, double threshold_dbm, SimTime now,
                                     std::optional<NodeId> self) const {
  return cca_energy_detect(listener, threshold_dbm, now, now + 1, self);
}

CcaResult Channel::cca_energy_detect(const Placement& listener, double threshold_dbm, SimTime from, SimTime to,
                                     std::optional<NodeId> self) const {
  return received_power_dbm(listener, from, to, self) >= threshold_dbm ? CcaResult::Busy : CcaResult::Idle;
}

DeliveryOutcome Channel::deliver(const ActiveTx& tx, NodeId dst, const Placement& dst_placement, Rng& rng) const {
  const double signal = rx_power_dbm(tx.tx_power_dbm, tx.src_placement, dst_placement, params_.path_loss);
  for (const auto& other : active_) {
    if (other.id == tx.id || other.radio != tx.radio) continue;
    if (other.start >= tx.end || other.end <= tx.start) continue;
    // Half duplex: a receiver that transmits during the frame loses it.
    if (other.frame.src == dst) return DeliveryOutcome::lost(LossReason::Collision);
    const double interference = rx_power_dbm(other.tx_power_dbm, other.src_placement, dst_placement, params_.path_loss);
    if (interference >= signal - params_.capture_margin_db) return DeliveryOutcome::lost(LossReason::Collision);
  }
  if (signal < params_.sensitivity_dbm) return DeliveryOutcome::lost(LossReason::BelowSensitivity);
  if (!rng.bernoulli(links_.success(tx.frame.src, dst))) return DeliveryOutcome::lost(LossReason::RandomError);
  return DeliveryOutcome::ok();
}

}  // namespace wban
