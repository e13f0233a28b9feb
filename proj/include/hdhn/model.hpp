#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace hdhn {

enum class DuplexMode { HD, FD };
enum class Direction { Downlink, Uplink };

inline const char* to_string(DuplexMode m) { return m == DuplexMode::HD ? "hd" : "fd"; }
inline const char* to_string(Direction d) { return d == Direction::Downlink ? "downlink" : "uplink"; }

/// Perfect self-interference cancellation.
inline constexpr double kPerfectIc = -std::numeric_limits<double>::infinity();

/// One tier of access points.
struct TierParams {
  double density = 0.0;        // APs per m^2
  double pathloss_exp = 4.0;   // > 2
  double bias = 1.0;           // association weight, > 0
  double ap_power = 1.0;       // W
  double user_power = 1.0;     // W
  double fd_portion = 0.0;     // share of FD-mode APs, in [0, 1]
  double self_ic_db = kPerfectIc;  // residual self-interference ratio in dB, -inf for perfect

  double hd_density() const { return density * (1.0 - fd_portion); }
  double fd_density() const { return density * fd_portion; }

  /// Residual self-interference power when the receiver itself transmits with p_rx.
  double self_interference(double p_rx) const {
    if (std::isinf(self_ic_db) && self_ic_db < 0) return 0.0;
    return p_rx * std::pow(10.0, self_ic_db / 10.0);
  }
  bool perfect_ic() const { return std::isinf(self_ic_db) && self_ic_db < 0; }
};

/// A K-tier hybrid-duplex network plus link rates.
struct HdhnConfig {
  std::vector<TierParams> tiers;
  double rate_ap = 1e4;      // bits/s, AP -> user
  double rate_user = 1e4;    // bits/s, user -> AP
  double bandwidth = 1e4;    // Hz
  double symbol_time = 1e-4; // s; stored only

  std::size_t size() const { return tiers.size(); }
  double total_density() const {
    double s = 0.0;
    for (const auto& t : tiers) s += t.density;
    return s;
  }
  /// Association bias ratio B_i / B_k.
  double bias_ratio(std::size_t i, std::size_t k) const { return tiers[i].bias / tiers[k].bias; }
  bool equal_pathloss() const {
    for (const auto& t : tiers)
      if (t.pathloss_exp != tiers.front().pathloss_exp) return false;
    return true;
  }
  bool all_pathloss(double alpha) const {
    for (const auto& t : tiers)
      if (t.pathloss_exp != alpha) return false;
    return true;
  }
};

/// One coverage query: which link of which tier, against which SIR target.
struct LinkQuery {
  std::size_t tier_index = 0;
  DuplexMode mode = DuplexMode::HD;
  Direction direction = Direction::Downlink;
  double target_sir = 1.0;
};

/// Transmit and receive-side powers of a link (P_t, P_r).
struct LinkPowers {
  double tx = 0.0;
  double rx = 0.0;
};

inline LinkPowers link_powers(const TierParams& tier, Direction d) {
  return d == Direction::Downlink ? LinkPowers{tier.ap_power, tier.user_power}
                                  : LinkPowers{tier.user_power, tier.ap_power};
}

struct TargetSirs {
  double theta_a = 0.0;
  double theta_u = 0.0;
};

inline double rate_to_sir(double rate, double bandwidth) { return std::exp2(rate / bandwidth) - 1.0; }

inline TargetSirs target_sirs(const HdhnConfig& c) {
  return {rate_to_sir(c.rate_ap, c.bandwidth), rate_to_sir(c.rate_user, c.bandwidth)};
}

/// Checks every invariant of the configuration. An empty result means valid.
inline std::vector<std::string> validate(const HdhnConfig& c) {
  std::vector<std::string> out;
  auto add = [&](const std::string& where, const std::string& rule) { out.push_back(where + ": " + rule); };
  if (c.tiers.empty()) add("tiers", "at least one tier is required");
  for (std::size_t k = 0; k < c.tiers.size(); ++k) {
    const TierParams& t = c.tiers[k];
    const std::string p = "tier[" + std::to_string(k) + "].";
    if (!(t.density >= 0.0) || !std::isfinite(t.density)) add(p + "density", "must be finite and >= 0");
    if (!(t.pathloss_exp > 2.0) || !std::isfinite(t.pathloss_exp))
      add(p + "alpha", "pathloss exponent must exceed 2 for the interference integrals to converge");
    if (!(t.bias > 0.0) || !std::isfinite(t.bias)) add(p + "bias", "must be finite and > 0");
    if (!(t.ap_power > 0.0) || !std::isfinite(t.ap_power)) add(p + "p_ap_watts", "must be finite and > 0");
    if (!(t.user_power > 0.0) || !std::isfinite(t.user_power)) add(p + "p_user_watts", "must be finite and > 0");
    if (!(t.fd_portion >= 0.0 && t.fd_portion <= 1.0)) add(p + "fd_portion", "must lie in [0, 1]");
    if (std::isnan(t.self_ic_db) || t.self_ic_db == std::numeric_limits<double>::infinity())
      add(p + "self_ic_db", "must be a finite dB value or -inf");
  }
  if (!(c.rate_ap >= 0.0) || !std::isfinite(c.rate_ap)) add("rate_ap", "must be finite and >= 0");
  if (!(c.rate_user >= 0.0) || !std::isfinite(c.rate_user)) add("rate_user", "must be finite and >= 0");
  if (!(c.bandwidth > 0.0) || !std::isfinite(c.bandwidth)) add("bandwidth_hz", "must be finite and > 0");
  if (!(c.symbol_time > 0.0) || !std::isfinite(c.symbol_time)) add("symbol_time_s", "must be finite and > 0");
  return out;
}

/// Checks a query against a configuration; empty means valid.
inline std::vector<std::string> validate(const HdhnConfig& c, const LinkQuery& q) {
  std::vector<std::string> out;
  if (q.tier_index >= c.size()) out.push_back("query.tier: index out of range");
  if (q.direction == Direction::Uplink && q.mode == DuplexMode::HD)
    out.push_back("query.direction: HD cells carry downlink only");
  if (!(q.target_sir > 0.0) || !std::isfinite(q.target_sir)) out.push_back("query.theta: must be finite and > 0");
  return out;
}

/// Two-tier network with the default evaluation parameters. Tier 0 starts in
/// FD mode; tier 1 is HD.
inline HdhnConfig table2_config() {
  HdhnConfig c;
  TierParams t1;
  t1.density = 1e-3;
  t1.pathloss_exp = 4.0;
  t1.bias = 1.0;
  t1.ap_power = 30.0;
  t1.user_power = 3.0;
  t1.fd_portion = 1.0;
  t1.self_ic_db = -40.0;
  TierParams t2 = t1;
  t2.user_power = 6.0;
  t2.fd_portion = 0.0;
  t2.self_ic_db = -30.0;
  c.tiers = {t1, t2};
  c.rate_ap = 1e4;
  c.rate_user = 1e4;
  c.bandwidth = 1e4;
  c.symbol_time = 1e-4;
  return c;
}

inline std::string describe(const std::vector<std::string>& violations) {
  std::ostringstream os;
  for (const auto& v : violations) os << v << '\n';
  return os.str();
}

}  // namespace hdhn
