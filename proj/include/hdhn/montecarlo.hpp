#pragma once

// Point-process simulator for the hybrid-duplex network. The typical user
// sits at the origin of a disk window; every tier is an independent PPP whose
// points are generated in order of increasing distance (cumulative unit
// exponential "areas"), so enlarging the window only appends far points and
// leaves the inner realization untouched.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "hdhn/error.hpp"
#include "hdhn/model.hpp"

namespace hdhn::mc {

enum class Approximation {
  Exact,        // FD users displaced from their AP; uplink measured at the serving AP
  CoLocatedUser // FD users placed on their AP; every SIR measured at the origin
};

inline const char* to_string(Approximation a) { return a == Approximation::Exact ? "exact" : "colocated"; }

struct SimSettings {
  double window_radius = 0.0;  // m; 0 picks the default from the densities
  long realizations = 10000;
  std::uint64_t seed = 1;
  double user_density = 0.0;   // reserved for full user-field realizations
  Approximation approximation = Approximation::CoLocatedUser;
  unsigned workers = 1;
  long max_attempts = 100000;  // rejection cap when conditioning on the serving tier
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Random streams

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** seeded through splitmix64.
class Rng {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  explicit Rng(std::uint64_t key) {
    for (auto& s : s_) {
      key += 0x9e3779b97f4a7c15ULL;
      s = mix64(key);
    }
  }

  result_type operator()() {
    const std::uint64_t out = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return out;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Independent stream for (seed, realization, entity).
inline Rng stream(std::uint64_t seed, std::uint64_t realization, std::uint64_t entity) {
  std::uint64_t k = mix64(seed + 0x632be59bd9b4e019ULL);
  k = mix64(k ^ (realization + 0x9e3779b97f4a7c15ULL));
  k = mix64(k ^ (entity * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  return Rng(k);
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Homogeneous PPP on the disk of the given radius, sorted by distance.
inline std::vector<Point> sample_ppp(double density, double radius, Rng& g) {
  if (!(density >= 0.0) || !(radius > 0.0)) fail(ErrorKind::Precondition, "sample_ppp: bad density or radius");
  std::vector<Point> pts;
  if (density == 0.0) return pts;
  std::exponential_distribution<double> exp1(1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  double area = 0.0;
  for (;;) {
    area += exp1(g);
    const double r = std::sqrt(area / (std::numbers::pi * density));
    if (r > radius) break;
    const double phi = angle(g);
    pts.push_back({r * std::cos(phi), r * std::sin(phi)});
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Serving-distance sampler, tabulated from the association kernel

/// Inverse CDF of the serving distance of a user associated with tier k.
class LinkDistanceSampler {
 public:
  LinkDistanceSampler() = default;
  LinkDistanceSampler(const HdhnConfig& c, std::size_t k) {
    const double ak = c.tiers[k].pathloss_exp;
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double ai = c.tiers[i].pathloss_exp;
      const double ci = std::numbers::pi * c.tiers[i].density * std::pow(c.tiers[i].bias / c.tiers[k].bias, 2.0 / ai);
      if (ci == 0.0) continue;
      coef_.push_back(ci);
      expo_.push_back(ak / ai);
      total += ci;
    }
    if (!(total > 0.0)) fail(ErrorKind::Degenerate, "link distance sampler: all densities are zero");
    double vmax = 1e-6 / total;
    while (kernel(vmax) < 40.0) vmax *= 2.0;
    // Squared distance v has density proportional to exp(-kernel(v)); cumulate by trapezoids.
    constexpr int n = 8192;
    v_.resize(n + 1);
    cdf_.resize(n + 1);
    double prev = 1.0;
    cdf_[0] = 0.0;
    v_[0] = 0.0;
    for (int j = 1; j <= n; ++j) {
      v_[j] = vmax * j / n;
      const double cur = std::exp(-kernel(v_[j]));
      cdf_[j] = cdf_[j - 1] + 0.5 * (prev + cur) * (v_[j] - v_[j - 1]);
      prev = cur;
    }
    for (double& f : cdf_) f /= cdf_.back();
    // Resample the inverse on a uniform probability grid for O(1) lookups.
    inv_.resize(n + 1);
    for (int j = 0; j <= n; ++j) inv_[j] = invert(static_cast<double>(j) / n);
  }

  double operator()(double u) const {
    const double pos = std::clamp(u, 0.0, 1.0) * static_cast<double>(inv_.size() - 1);
    const auto j = std::min(static_cast<std::size_t>(pos), inv_.size() - 2);
    const double t = pos - static_cast<double>(j);
    return std::sqrt(inv_[j] + t * (inv_[j + 1] - inv_[j]));
  }

 private:
  double kernel(double v) const {
    double s = 0.0;
    for (std::size_t j = 0; j < coef_.size(); ++j) s += coef_[j] * std::pow(v, expo_[j]);
    return s;
  }
  // Squared distance at probability u, by bisection on the cumulative table.
  double invert(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) return v_.back();
    const auto j = static_cast<std::size_t>(it - cdf_.begin());
    const double t = (u - cdf_[j - 1]) / (cdf_[j] - cdf_[j - 1]);
    return v_[j - 1] + t * (v_[j] - v_[j - 1]);
  }
  std::vector<double> coef_, expo_, v_, cdf_, inv_;
};

// ---------------------------------------------------------------------------
// Network realizations

struct Node {
  double r2 = 0.0;      // squared distance from the origin
  double x = 0.0, y = 0.0;  // filled only when positions are tracked
  bool fd = false;
  double h_ap = 1.0;    // fading of the AP transmission towards the receiver
  double h_user = 1.0;  // fading of the cell user's transmission
  double ux = 0.0, uy = 0.0;  // uplink user of an FD cell
};

/// Per-tier nodes, each tier sorted by distance from the origin.
using Realization = std::vector<std::vector<Node>>;

namespace detail {

// Lazily generated tier: the nearest node is enough to decide association,
// the rest is drawn only for accepted realizations.
class TierStream {
 public:
  // Positions (and displaced users) are only computed when `displace` is set;
  // otherwise only squared distances are kept.
  TierStream(Rng g, double density, double fd_portion, double radius, const LinkDistanceSampler* displace)
      : g_(g), density_(density), fd_portion_(fd_portion), radius_(radius), displace_(displace) {}

  bool next(Node& n) {
    if (done_ || density_ == 0.0) return false;
    area_ += exp1_(g_);
    const double r = std::sqrt(area_ / (std::numbers::pi * density_));
    // Seven draws per node, always, so streams stay aligned across windows and modes.
    const double phi = 2.0 * std::numbers::pi * unit_(g_);
    const double tag = unit_(g_);
    const double h1 = exp1_(g_);
    const double h2 = exp1_(g_);
    const double ud = unit_(g_);
    const double ua = 2.0 * std::numbers::pi * unit_(g_);
    if (r > radius_) {
      done_ = true;
      return false;
    }
    n.r2 = r * r;
    n.fd = tag < fd_portion_;
    n.h_ap = h1;
    n.h_user = h2;
    if (displace_) {
      n.x = r * std::cos(phi);
      n.y = r * std::sin(phi);
      n.ux = n.x;
      n.uy = n.y;
      const double d = (*displace_)(ud);
      n.ux += d * std::cos(ua);
      n.uy += d * std::sin(ua);
    }
    return true;
  }

 private:
  Rng g_;
  double density_, fd_portion_, radius_;
  const LinkDistanceSampler* displace_;
  double area_ = 0.0;
  bool done_ = false;
  std::exponential_distribution<double> exp1_{1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

inline double min_pathloss(const HdhnConfig& c) {
  double a = std::numeric_limits<double>::infinity();
  for (const auto& t : c.tiers)
    if (t.density > 0.0) a = std::min(a, t.pathloss_exp);
  return a;
}

// Radius beyond which the mean interference is below 0.1% of the in-window part,
// capped so the expected node count stays tractable.
inline double default_radius(double density, double alpha, double inner = 0.0) {
  const double d_ref = std::max(inner, 1.0 / std::sqrt(std::numbers::pi * density));
  double r = d_ref * std::pow(1001.0, 1.0 / (alpha - 2.0));
  const double r_cap = std::sqrt(2e5 / (std::numbers::pi * density));
  return std::min(r, std::max(r_cap, 2.0 * d_ref));
}

}  // namespace detail

inline double window_radius(const HdhnConfig& c, const SimSettings& s) {
  if (s.window_radius > 0.0) return s.window_radius;
  const double lam = c.total_density();
  if (!(lam > 0.0)) return 1.0;
  return detail::default_radius(lam, detail::min_pathloss(c));
}

struct Association {
  std::size_t tier = 0;
  std::size_t index = 0;
  DuplexMode mode = DuplexMode::HD;
  double distance = 0.0;
};

/// Serving AP of the typical user: largest B_i D^-alpha_i, ties to the lower
/// tier and then to the nearer AP.
inline Association associate(const HdhnConfig& c, const Realization& net) {
  bool found = false;
  Association best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& nodes = net[i];
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double d = std::sqrt(nodes[j].r2);
      const double score = std::log(c.tiers[i].bias) - c.tiers[i].pathloss_exp * std::log(d);
      if (!found || score > best_score ||
          (score == best_score && i == best.tier && d < best.distance)) {
        found = true;
        best_score = score;
        best = {i, j, nodes[j].fd ? DuplexMode::FD : DuplexMode::HD, d};
      }
    }
  }
  if (!found) fail(ErrorKind::Degenerate, "associate: no access point in the window");
  return best;
}

/// Full realization for one (seed, key) pair.
inline Realization realize(const HdhnConfig& c, double radius, std::uint64_t seed, std::uint64_t key,
                           const std::vector<LinkDistanceSampler>* displace = nullptr) {
  Realization net(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto& t = c.tiers[i];
    detail::TierStream ts(stream(seed, key, i), t.density, t.fd_portion, radius,
                          displace ? &(*displace)[i] : nullptr);
    Node n;
    while (ts.next(n)) net[i].push_back(n);
  }
  return net;
}

namespace detail {

struct Conditioned {
  Realization net;
  Association assoc;
};

// Rejection-samples realizations until the typical user is served by `tier`.
inline Conditioned realize_associated(const HdhnConfig& c, std::size_t tier, double radius, std::uint64_t seed,
                                      std::uint64_t key, long max_attempts,
                                      const std::vector<LinkDistanceSampler>* displace) {
  for (long attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<TierStream> streams;
    streams.reserve(c.size());
    Realization net(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto& t = c.tiers[i];
      streams.emplace_back(stream(seed, key, static_cast<std::uint64_t>(attempt) * 64 + i), t.density,
                           t.fd_portion, radius, displace ? &(*displace)[i] : nullptr);
      Node n;
      if (streams.back().next(n)) net[i].push_back(n);
    }
    bool any = false;
    for (const auto& v : net) any = any || !v.empty();
    if (!any) continue;
    const Association a = associate(c, net);
    if (a.tier != tier) continue;
    for (std::size_t i = 0; i < c.size(); ++i) {
      Node n;
      while (streams[i].next(n)) net[i].push_back(n);
    }
    return {std::move(net), a};
  }
  fail(ErrorKind::Degenerate, "monte carlo: tier " + std::to_string(tier) +
                                  " never served the typical user within the attempt cap");
}

inline double path_gain(double d2, double half_alpha) {
  return half_alpha == 2.0 ? 1.0 / (d2 * d2) : std::pow(d2, -half_alpha);
}

// Aggregate interference at the origin from every cell except the serving one.
// Without tracked positions FD users sit on their AP.
inline double interference_at_origin(const HdhnConfig& c, const Realization& net, const Association& serving,
                                     bool displaced) {
  double total = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const TierParams& t = c.tiers[i];
    const double ha = 0.5 * t.pathloss_exp;
    for (std::size_t j = 0; j < net[i].size(); ++j) {
      if (i == serving.tier && j == serving.index) continue;
      const Node& n = net[i][j];
      total += t.ap_power * n.h_ap * path_gain(n.r2, ha);
      if (n.fd) {
        const double u2 = displaced ? n.ux * n.ux + n.uy * n.uy : n.r2;
        total += t.user_power * n.h_user * path_gain(u2, ha);
      }
    }
  }
  return total;
}

// Same, at an arbitrary point; requires tracked positions.
inline double interference_at(const HdhnConfig& c, const Realization& net, const Association& serving, double rx,
                              double ry) {
  double total = 0.0;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const TierParams& t = c.tiers[i];
    const double ha = 0.5 * t.pathloss_exp;
    for (std::size_t j = 0; j < net[i].size(); ++j) {
      if (i == serving.tier && j == serving.index) continue;
      const Node& n = net[i][j];
      const double d2 = (n.x - rx) * (n.x - rx) + (n.y - ry) * (n.y - ry);
      total += t.ap_power * n.h_ap * path_gain(d2, ha);
      if (n.fd) {
        const double u2 = (n.ux - rx) * (n.ux - rx) + (n.uy - ry) * (n.uy - ry);
        total += t.user_power * n.h_user * path_gain(u2, ha);
      }
    }
  }
  return total;
}

struct LinkOutcome {
  bool hd_downlink = false;
  bool fd_downlink = false;
  bool fd_uplink = false;
};

// Success indicators of the three link types of the serving cell, with the
// serving AP taken as HD for the first and FD for the other two.
inline LinkOutcome evaluate_links(const HdhnConfig& c, const Conditioned& cond, double theta_a, double theta_u,
                                  Approximation approx) {
  const Association& a = cond.assoc;
  const TierParams& t = c.tiers[a.tier];
  const Node& s = cond.net[a.tier][a.index];
  const double loss = std::pow(a.distance, -t.pathloss_exp);
  const bool exact = approx == Approximation::Exact;
  const double i_origin = interference_at_origin(c, cond.net, a, exact);
  const double i_uplink = exact ? interference_at(c, cond.net, a, s.x, s.y) : i_origin;
  const double dl_signal = t.ap_power * s.h_ap * loss;
  const double ul_signal = t.user_power * s.h_user * loss;
  LinkOutcome o;
  o.hd_downlink = dl_signal >= theta_a * i_origin;
  o.fd_downlink = dl_signal >= theta_a * (i_origin + t.self_interference(t.user_power));
  o.fd_uplink = ul_signal >= theta_u * (i_uplink + t.self_interference(t.ap_power));
  return o;
}

template <class F>
std::vector<double> run_indexed(long n, unsigned workers, F&& f) {
  std::vector<double> out(static_cast<std::size_t>(n));
  auto body = [&](long b, long e) {
    for (long i = b; i < e; ++i) out[static_cast<std::size_t>(i)] = f(i);
  };
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    body(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  const long chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const long b = w * chunk;
    const long e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back(body, b, e);
  }
  for (auto& th : pool) th.join();
  return out;
}

inline Estimate summarize(const std::vector<double>& v, std::uint64_t seed) {
  Estimate e;
  e.n = static_cast<long>(v.size());
  e.seed = seed;
  if (v.empty()) return e;
  double sum = 0.0;
  for (double x : v) sum += x;
  e.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - e.mean) * (x - e.mean);
    e.std_error = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return e;
}

inline void check(const HdhnConfig& c, const SimSettings& s) {
  if (auto v = validate(c); !v.empty()) fail(ErrorKind::Precondition, "invalid configuration:\n" + describe(v));
  if (s.realizations <= 0) fail(ErrorKind::Precondition, "monte carlo: realizations must be positive");
  if (s.window_radius < 0.0) fail(ErrorKind::Precondition, "monte carlo: window radius must be >= 0");
}

inline std::vector<LinkDistanceSampler> samplers(const HdhnConfig& c) {
  std::vector<LinkDistanceSampler> out;
  for (std::size_t k = 0; k < c.size(); ++k) out.emplace_back(c, k);
  return out;
}

}  // namespace detail

/// Empirical STP of one link type: the serving AP is forced into the query
/// mode and success means SIR >= theta with the serving cell excluded.
inline Estimate estimate_stp(const HdhnConfig& c, const LinkQuery& q, const SimSettings& s) {
  detail::check(c, s);
  if (auto v = validate(c, q); !v.empty()) fail(ErrorKind::Precondition, "invalid query:\n" + describe(v));
  if (c.tiers[q.tier_index].density == 0.0)
    fail(ErrorKind::Degenerate, "estimate_stp: queried tier has zero density");
  const double radius = window_radius(c, s);
  std::vector<LinkDistanceSampler> disp;
  if (s.approximation == Approximation::Exact) disp = detail::samplers(c);
  const auto* dp = disp.empty() ? nullptr : &disp;
  auto values = detail::run_indexed(s.realizations, s.workers, [&](long i) {
    const auto cond = detail::realize_associated(c, q.tier_index, radius, s.seed, static_cast<std::uint64_t>(i),
                                                 s.max_attempts, dp);
    const auto o = detail::evaluate_links(c, cond, q.target_sir, q.target_sir, s.approximation);
    bool ok = q.mode == DuplexMode::HD ? o.hd_downlink
                                       : (q.direction == Direction::Downlink ? o.fd_downlink : o.fd_uplink);
    return ok ? 1.0 : 0.0;
  });
  return detail::summarize(values, s.seed);
}

/// Throughput of one tier by the typical-link form of the area average: given
/// association with tier k, each realization contributes
/// (lambda_k / W) [(1 - delta_k) R_a 1{HD dl} + delta_k (R_a 1{FD dl} + R_u 1{FD ul})].
inline Estimate estimate_tier_throughput(const HdhnConfig& c, std::size_t tier, const SimSettings& s) {
  detail::check(c, s);
  if (tier >= c.size()) fail(ErrorKind::Precondition, "estimate_tier_throughput: tier index out of range");
  const TierParams& t = c.tiers[tier];
  if (t.density == 0.0) return {0.0, 0.0, s.realizations, s.seed};
  const double radius = window_radius(c, s);
  const TargetSirs th = target_sirs(c);
  std::vector<LinkDistanceSampler> disp;
  if (s.approximation == Approximation::Exact) disp = detail::samplers(c);
  const auto* dp = disp.empty() ? nullptr : &disp;
  const double scale = t.density / c.bandwidth;
  const std::uint64_t key_base = static_cast<std::uint64_t>(tier) << 40;
  auto values = detail::run_indexed(s.realizations, s.workers, [&](long i) {
    const auto cond = detail::realize_associated(c, tier, radius, s.seed, key_base + static_cast<std::uint64_t>(i),
                                                 s.max_attempts, dp);
    const auto o = detail::evaluate_links(c, cond, th.theta_a, th.theta_u, s.approximation);
    double v = 0.0;
    if (o.hd_downlink) v += (1.0 - t.fd_portion) * c.rate_ap;
    if (o.fd_downlink) v += t.fd_portion * c.rate_ap;
    if (o.fd_uplink) v += t.fd_portion * c.rate_user;
    return scale * v;
  });
  return detail::summarize(values, s.seed);
}

struct ThroughputEstimate {
  std::vector<Estimate> per_tier;
  Estimate total;
};

/// Per-tier throughput estimates plus their sum (standard errors in quadrature).
inline ThroughputEstimate estimate_throughput(const HdhnConfig& c, const SimSettings& s) {
  detail::check(c, s);
  ThroughputEstimate out;
  double var = 0.0;
  out.total.seed = s.seed;
  out.total.n = s.realizations;
  for (std::size_t k = 0; k < c.size(); ++k) {
    out.per_tier.push_back(estimate_tier_throughput(c, k, s));
    out.total.mean += out.per_tier.back().mean;
    var += out.per_tier.back().std_error * out.per_tier.back().std_error;
  }
  out.total.std_error = std::sqrt(var);
  return out;
}

/// Empirical E[exp(-s I)] for the FD-cell interference of one tier, with
/// every FD AP inside d_min removed. One realization set serves all s values.
inline std::vector<Estimate> estimate_laplace_curve(const TierParams& tier, const std::vector<double>& s_values,
                                                    double d_min, const SimSettings& sim) {
  if (!(d_min > 0.0)) fail(ErrorKind::Precondition, "estimate_laplace: requires d_min > 0");
  if (sim.realizations <= 0) fail(ErrorKind::Precondition, "monte carlo: realizations must be positive");
  for (double s : s_values)
    if (!(s >= 0.0)) fail(ErrorKind::Precondition, "estimate_laplace: requires s >= 0");
  const double lam = tier.fd_density();
  std::vector<Estimate> out;
  if (lam == 0.0) {
    for (std::size_t j = 0; j < s_values.size(); ++j) out.push_back({1.0, 0.0, sim.realizations, sim.seed});
    return out;
  }
  const double radius =
      sim.window_radius > 0.0 ? sim.window_radius : detail::default_radius(lam, tier.pathloss_exp, d_min);
  // FD cells only; their users are displaced by the serving distance of a
  // network made of this tier alone.
  TierParams fd_only = tier;
  fd_only.density = lam;
  fd_only.fd_portion = 1.0;
  HdhnConfig single;
  single.tiers = {fd_only};
  const LinkDistanceSampler disp(single, 0);
  const bool exact = sim.approximation == Approximation::Exact;
  const double half_alpha = 0.5 * tier.pathloss_exp;

  auto interference = detail::run_indexed(sim.realizations, sim.workers, [&](long i) {
    detail::TierStream ts(stream(sim.seed, static_cast<std::uint64_t>(i), 0), lam, 1.0, radius,
                          exact ? &disp : nullptr);
    double total = 0.0;
    Node n;
    while (ts.next(n)) {
      if (n.r2 < d_min * d_min) continue;
      const double u2 = exact ? n.ux * n.ux + n.uy * n.uy : n.r2;
      total += tier.ap_power * n.h_ap * detail::path_gain(n.r2, half_alpha) +
               tier.user_power * n.h_user * detail::path_gain(u2, half_alpha);
    }
    return total;
  });

  for (double s : s_values) {
    if (s == 0.0) {
      out.push_back({1.0, 0.0, sim.realizations, sim.seed});
      continue;
    }
    std::vector<double> v(interference.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::exp(-s * interference[j]);
    out.push_back(detail::summarize(v, sim.seed));
  }
  return out;
}

inline Estimate estimate_laplace(const TierParams& tier, double s, double d_min, const SimSettings& sim) {
  return estimate_laplace_curve(tier, {s}, d_min, sim).front();
}

}  // namespace hdhn::mc
