#pragma once

// Analytic engine: association statistics, interference Laplace transforms,
// successful transmission probability (STP) and network throughput of a
// K-tier hybrid full-/half-duplex network, plus the FD-portion optimizer.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "hdhn/error.hpp"
#include "hdhn/model.hpp"
#include "hdhn/quadrature.hpp"
#include "hdhn/specfun.hpp"

namespace hdhn::analytic {

enum class StpMethod { GeneralIntegral, Alpha4ClosedForm, PerfectIcClosedForm };

inline const char* to_string(StpMethod m) {
  switch (m) {
    case StpMethod::GeneralIntegral: return "general_integral";
    case StpMethod::Alpha4ClosedForm: return "alpha4_closed_form";
    case StpMethod::PerfectIcClosedForm: return "perfect_ic_closed_form";
  }
  return "?";
}

struct StpBreakdown {
  double value = 0.0;
  StpMethod method = StpMethod::GeneralIntegral;
  double quadrature_error = 0.0;
};

/// Throughput in bits/s/Hz/m^2 per tier and in total; per_cell in bits/s/Hz/cell.
struct ThroughputReport {
  std::vector<double> per_tier;
  double total = 0.0;
  double per_cell = 0.0;
};

/// Relative power gap below which the combined FD-cell gain is treated as Erlang.
inline constexpr double kEqualPowerTol = 1e-9;

namespace detail {

inline void require_valid(const HdhnConfig& c) {
  if (auto v = validate(c); !v.empty()) fail(ErrorKind::Precondition, "invalid configuration:\n" + describe(v));
}

inline void require_valid(const HdhnConfig& c, const LinkQuery& q) {
  require_valid(c);
  if (auto v = validate(c, q); !v.empty()) fail(ErrorKind::Precondition, "invalid query:\n" + describe(v));
}

inline bool equal_powers(double a, double b) { return std::abs(a - b) / std::max(a, b) < kEqualPowerTol; }

inline double csc(double x) { return 1.0 / std::sin(x); }

// sum_i c_i u^{p_i}: the exponent of the association kernel and of the
// outer coverage integrand after the substitution u = r^2.
struct PowerSum {
  std::vector<double> coef;
  std::vector<double> expo;

  void add(double c, double p) {
    if (c == 0.0) return;
    coef.push_back(c);
    expo.push_back(p);
  }
  double operator()(double u) const {
    double s = 0.0;
    for (std::size_t j = 0; j < coef.size(); ++j) s += coef[j] * (expo[j] == 1.0 ? u : std::pow(u, expo[j]));
    return s;
  }
  double coef_sum() const {
    double s = 0.0;
    for (double c : coef) s += c;
    return s;
  }
};

// pi sum_i lambda_i tau_ik^{2/alpha_i} u^{alpha_k/alpha_i}
inline PowerSum association_kernel(const HdhnConfig& c, std::size_t k) {
  PowerSum ps;
  const double ak = c.tiers[k].pathloss_exp;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double ai = c.tiers[i].pathloss_exp;
    ps.add(std::numbers::pi * c.tiers[i].density * std::pow(c.bias_ratio(i, k), 2.0 / ai), ak / ai);
  }
  return ps;
}

// 0.5 * int_0^inf exp(-ps(u)) du, adaptively after truncation.
inline quad::Result half_laplace_integral(const PowerSum& ps, double abs_tol) {
  const double scale = ps.coef_sum();
  if (!(scale > 0.0)) fail(ErrorKind::Degenerate, "no access points: every tier density is zero");
  bool linear = true;
  for (double p : ps.expo) linear = linear && p == 1.0;
  if (linear) return {0.5 / scale, 0.0, 0};
  constexpr double kLogCut = -32.236191301916641;  // ln(1e-14)
  const double upper = quad::truncation_point([&](double u) { return -ps(u); }, 1e-3 / scale, kLogCut);
  auto f = [&](double u) { return 0.5 * std::exp(-ps(u)); };
  return quad::integrate(f, 0.0, upper, abs_tol, 1e-11, 4000);
}

/// Association normalizer int_0^inf x exp(-pi sum_i lambda_i tau^{2/a_i} x^{2 a_k/a_i}) dx.
inline quad::Result association_integral(const HdhnConfig& c, std::size_t k) {
  const PowerSum ps = association_kernel(c, k);
  const double scale = ps.coef_sum();
  return half_laplace_integral(ps, scale > 0 ? 1e-14 / scale : 0.0);
}

}  // namespace detail

/// Probability that the typical user associates with a mode-m AP of tier k.
inline double association_probability(const HdhnConfig& c, std::size_t tier, DuplexMode mode) {
  detail::require_valid(c);
  if (tier >= c.size()) fail(ErrorKind::Precondition, "association_probability: tier index out of range");
  const TierParams& t = c.tiers[tier];
  const double dens = mode == DuplexMode::HD ? t.hd_density() : t.fd_density();
  if (c.total_density() <= 0.0) fail(ErrorKind::Degenerate, "association_probability: all densities are zero");
  if (dens == 0.0) return 0.0;
  return 2.0 * std::numbers::pi * dens * detail::association_integral(c, tier).value;
}

/// PDF of the distance from the typical user to its serving AP in tier k (either mode).
inline double link_distance_pdf(const HdhnConfig& c, std::size_t tier, double x) {
  detail::require_valid(c);
  if (tier >= c.size()) fail(ErrorKind::Precondition, "link_distance_pdf: tier index out of range");
  if (x < 0.0) fail(ErrorKind::Domain, "link_distance_pdf: requires x >= 0");
  const auto ps = detail::association_kernel(c, tier);
  const double norm = detail::association_integral(c, tier).value;
  return x * std::exp(-ps(x * x)) / norm;
}

/// E[G^delta] for G = P_a h1 + P_u h2 with h1, h2 i.i.d. unit-mean exponential.
inline double gi_moment(double p_ap, double p_user, double delta) {
  if (!(delta > -1.0)) fail(ErrorKind::Domain, "gi_moment: requires delta > -1");
  if (!(p_ap > 0.0) || !(p_user > 0.0)) fail(ErrorKind::Domain, "gi_moment: powers must be positive");
  if (detail::equal_powers(p_ap, p_user)) return std::pow(p_ap, delta) * std::tgamma(2.0 + delta);
  return std::tgamma(1.0 + delta) * (std::pow(p_user, delta + 1.0) - std::pow(p_ap, delta + 1.0)) /
         (p_user - p_ap);
}

namespace detail {

// FD-cell kernel K(nu) with
//   E[G^d Gamma(-d, G nu)] / alpha + Gamma(1-d) E[G^d] / 2,  d = 2/alpha,
// written through I1 and csc(2 pi / alpha). Both the Laplace transform of the
// FD interference and the FD aggregation term are affine in it.
inline double fd_kernel(const TierParams& t, double nu) {
  const double a = t.pathloss_exp;
  const double d = 2.0 / a;
  const double pa = t.ap_power;
  const double pu = t.user_power;
  const double pc = std::numbers::pi * csc(2.0 * std::numbers::pi / a);
  if (equal_powers(pa, pu)) {
    const double i1 = specfun::integral_i1(d + 2.0, 1.0 / pa, -d, nu).value;
    return (std::pow(pa, d + 2.0) * (1.0 + d) * pc + i1) / (a * pa * pa);
  }
  const double i1u = specfun::integral_i1(d + 1.0, 1.0 / pu, -d, nu).value;
  const double i1a = specfun::integral_i1(d + 1.0, 1.0 / pa, -d, nu).value;
  return (pc * (std::pow(pu, d + 1.0) - std::pow(pa, d + 1.0)) + i1u - i1a) / (a * (pu - pa));
}

}  // namespace detail

/// Laplace transform of the interference from the FD cells of one tier, with
/// each FD user co-located with its AP and interferers beyond d_min.
inline double laplace_fd(const TierParams& t, double s, double d_min) {
  if (!(s >= 0.0) || !(d_min > 0.0)) fail(ErrorKind::Domain, "laplace_fd: requires s >= 0 and d_min > 0");
  if (!(t.pathloss_exp > 2.0)) fail(ErrorKind::Domain, "laplace_fd: requires alpha > 2");
  const double lam = t.fd_density();
  if (s == 0.0 || lam == 0.0) return 1.0;
  const double a = t.pathloss_exp;
  const double nu = s / std::pow(d_min, a);
  if (nu * std::max(t.ap_power, t.user_power) < 0.1) {
    // Weak interference: the kernel form cancels catastrophically, so sum the
    // power series of the tail integral in nu instead. With h_n the complete
    // homogeneous polynomial of degree n in (P_a, P_u), the bracket is
    // d^2 sum_n (-1)^(n+1) h_n nu^n 2 / (n alpha - 2).
    double h = 1.0, bpow = 1.0, nun = 1.0, sum = 0.0;
    for (int n = 1; n < 200; ++n) {
      bpow *= t.user_power;
      h = t.ap_power * h + bpow;
      nun *= nu;
      const double term = (n % 2 ? 2.0 : -2.0) * h * nun / (n * a - 2.0);
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return std::exp(-std::numbers::pi * lam * d_min * d_min * sum);
  }
  const double bracket = -d_min * d_min + 2.0 * std::pow(s, 2.0 / a) * detail::fd_kernel(t, nu);
  return std::exp(-std::numbers::pi * lam * bracket);
}

/// Laplace transform of the interference from the HD APs of one tier beyond d_min.
inline double laplace_hd(const TierParams& t, double s, double d_min) {
  if (!(s >= 0.0) || !(d_min > 0.0)) fail(ErrorKind::Domain, "laplace_hd: requires s >= 0 and d_min > 0");
  if (!(t.pathloss_exp > 2.0)) fail(ErrorKind::Domain, "laplace_hd: requires alpha > 2");
  const double lam = t.hd_density();
  if (s == 0.0 || lam == 0.0) return 1.0;
  // x = d_min * t maps the tail integral onto I0 with z = 1.
  const double y = std::pow(d_min, t.pathloss_exp) / (s * t.ap_power);
  const double tail = d_min * d_min * specfun::integral_i0(y, 1.0, t.pathloss_exp).value;
  return std::exp(-2.0 * std::numbers::pi * lam * tail);
}

namespace detail {

// HD aggregation term: I0 with y = P_t / (P_a,i theta) and z = tau_ik.
inline double m_hd(const TierParams& ti, double tau, double p_tx, double theta) {
  return specfun::integral_i0(p_tx / (ti.ap_power * theta), tau, ti.pathloss_exp).value;
}

// FD aggregation term.
inline double m_fd(const TierParams& ti, double tau, double p_tx, double theta) {
  const double a = ti.pathloss_exp;
  const double d = 2.0 / a;
  return -0.5 * std::pow(tau, d) + std::pow(theta / p_tx, d) * fd_kernel(ti, theta / (p_tx * tau));
}

}  // namespace detail

/// Aggregation term M_ik for interfering tier i seen from a tier-k link with
/// transmit power p_tx and SIR target theta.
inline double aggregation_term(const HdhnConfig& c, std::size_t i, std::size_t k, double p_tx, double theta) {
  const TierParams& ti = c.tiers[i];
  const double tau = c.bias_ratio(i, k);
  double m = 0.5 * std::pow(tau, 2.0 / ti.pathloss_exp);
  if (ti.fd_portion < 1.0) m += (1.0 - ti.fd_portion) * detail::m_hd(ti, tau, p_tx, theta);
  if (ti.fd_portion > 0.0) m += ti.fd_portion * detail::m_fd(ti, tau, p_tx, theta);
  return m;
}

namespace detail {

struct LinkSetup {
  std::size_t k;
  double alpha_k;
  double p_tx;
  double residual;  // self-interference power C
  double theta;
};

inline LinkSetup setup(const HdhnConfig& c, const LinkQuery& q) {
  const TierParams& tk = c.tiers[q.tier_index];
  const LinkPowers p = link_powers(tk, q.direction);
  const double residual = q.mode == DuplexMode::FD ? tk.self_interference(p.rx) : 0.0;
  return {q.tier_index, tk.pathloss_exp, p.tx, residual, q.target_sir};
}

// sum_i lambda_i M_ik
inline double weighted_m_sum(const HdhnConfig& c, const LinkSetup& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.tiers[i].density > 0.0) acc += c.tiers[i].density * aggregation_term(c, i, s.k, s.p_tx, s.theta);
  return acc;
}

// sum_t lambda_t tau_tk^{2/alpha}
inline double weighted_tau_sum(const HdhnConfig& c, std::size_t k, double exponent) {
  double acc = 0.0;
  for (std::size_t t = 0; t < c.size(); ++t) acc += c.tiers[t].density * std::pow(c.bias_ratio(t, k), exponent);
  return acc;
}

}  // namespace detail

/// STP by direct quadrature of the coverage integral over the serving distance.
/// Valid for any pathloss mix and any self-interference level.
inline StpBreakdown stp_general(const HdhnConfig& c, const LinkQuery& q) {
  detail::require_valid(c, q);
  if (c.total_density() <= 0.0) fail(ErrorKind::Degenerate, "stp_general: all densities are zero");
  const detail::LinkSetup s = detail::setup(c, q);

  detail::PowerSum ps;
  ps.add(s.residual * s.theta / s.p_tx, s.alpha_k / 2.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const TierParams& ti = c.tiers[i];
    if (ti.density == 0.0) continue;
    const double m = aggregation_term(c, i, s.k, s.p_tx, s.theta);
    ps.add(2.0 * std::numbers::pi * ti.density * m, s.alpha_k / ti.pathloss_exp);
  }

  const quad::Result norm = detail::association_integral(c, s.k);
  const double scale = ps.coef_sum();
  constexpr double kLogCut = -32.236191301916641;  // ln(1e-14)
  double num = 0.0;
  double num_err = 0.0;
  bool linear = true;
  for (double p : ps.expo) linear = linear && p == 1.0;
  if (linear) {
    num = 0.5 / scale;
  } else {
    const double upper = quad::truncation_point([&](double u) { return -ps(u); }, 1e-3 / scale, kLogCut, 1e200);
    auto f = [&](double u) { return 0.5 * std::exp(-ps(u)); };
    const quad::Result r = quad::integrate(f, 0.0, upper, 1e-12 * norm.value, 1e-11, 4000);
    num = r.value;
    num_err = r.abs_error;
  }
  const double value = num / norm.value;
  const double err = num_err / norm.value + value * norm.abs_error / norm.value;
  return {std::clamp(value, 0.0, 1.0), StpMethod::GeneralIntegral, err};
}

/// STP closed form for equal pathloss exponents and no residual self-interference
/// (every HD link, and FD links with perfect cancellation).
inline StpBreakdown stp_perfect_ic(const HdhnConfig& c, const LinkQuery& q) {
  detail::require_valid(c, q);
  if (!c.equal_pathloss()) fail(ErrorKind::Domain, "stp_perfect_ic: requires equal pathloss exponents");
  const detail::LinkSetup s = detail::setup(c, q);
  if (s.residual != 0.0)
    fail(ErrorKind::Domain, "stp_perfect_ic: the queried link has residual self-interference");
  const double alpha = c.tiers.front().pathloss_exp;
  const double num = detail::weighted_tau_sum(c, s.k, 2.0 / alpha);
  if (!(num > 0.0)) fail(ErrorKind::Degenerate, "stp_perfect_ic: all densities are zero");
  const double value = num / (2.0 * detail::weighted_m_sum(c, s));
  return {std::clamp(value, 0.0, 1.0), StpMethod::PerfectIcClosedForm, 0.0};
}

/// STP closed form for alpha = 4 in every tier, through the scaled erfc.
/// Links without residual self-interference reduce to stp_perfect_ic.
inline StpBreakdown stp_alpha4(const HdhnConfig& c, const LinkQuery& q) {
  detail::require_valid(c, q);
  if (!c.all_pathloss(4.0)) fail(ErrorKind::Domain, "stp_alpha4: requires alpha = 4 in every tier");
  const detail::LinkSetup s = detail::setup(c, q);
  if (s.residual == 0.0) return stp_perfect_ic(c, q);
  const double tau_sum = detail::weighted_tau_sum(c, s.k, 0.5);
  if (!(tau_sum > 0.0)) fail(ErrorKind::Degenerate, "stp_alpha4: all densities are zero");
  const double root_ct = std::sqrt(s.residual * s.theta);
  const double root_pt = std::sqrt(s.p_tx);
  const double arg = std::numbers::pi * root_pt * detail::weighted_m_sum(c, s) / root_ct;
  const double value = std::pow(std::numbers::pi, 1.5) * root_pt * tau_sum / (2.0 * root_ct) *
                       specfun::erfcx(arg).value;
  return {std::clamp(value, 0.0, 1.0), StpMethod::Alpha4ClosedForm, 0.0};
}

/// Fastest applicable route: perfect-IC closed form, then alpha = 4, then quadrature.
inline StpBreakdown stp(const HdhnConfig& c, const LinkQuery& q) {
  detail::require_valid(c, q);
  const detail::LinkSetup s = detail::setup(c, q);
  if (s.residual == 0.0 && c.equal_pathloss()) return stp_perfect_ic(c, q);
  if (c.all_pathloss(4.0)) return stp_alpha4(c, q);
  return stp_general(c, q);
}

namespace detail {

inline ThroughputReport finish(std::vector<double> per_tier, const HdhnConfig& c) {
  ThroughputReport r;
  r.per_tier = std::move(per_tier);
  for (double v : r.per_tier) r.total += v;
  const double lam = c.total_density();
  r.per_cell = lam > 0.0 ? r.total / lam : 0.0;
  return r;
}

template <class StpFn>
ThroughputReport throughput_with(const HdhnConfig& c, StpFn&& stp_fn) {
  require_valid(c);
  const TargetSirs th = target_sirs(c);
  std::vector<double> per_tier(c.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const TierParams& t = c.tiers[k];
    if (t.density == 0.0) continue;
    double rate_sum = 0.0;
    if (t.fd_portion < 1.0 && c.rate_ap > 0.0)
      rate_sum += (1.0 - t.fd_portion) * c.rate_ap *
                  stp_fn(c, LinkQuery{k, DuplexMode::HD, Direction::Downlink, th.theta_a}).value;
    if (t.fd_portion > 0.0) {
      double fd = 0.0;
      if (c.rate_ap > 0.0)
        fd += c.rate_ap * stp_fn(c, LinkQuery{k, DuplexMode::FD, Direction::Downlink, th.theta_a}).value;
      if (c.rate_user > 0.0)
        fd += c.rate_user * stp_fn(c, LinkQuery{k, DuplexMode::FD, Direction::Uplink, th.theta_u}).value;
      rate_sum += t.fd_portion * fd;
    }
    per_tier[k] = t.density * rate_sum / c.bandwidth;
  }
  return finish(std::move(per_tier), c);
}

}  // namespace detail

/// Network throughput summed over HD downlinks, FD downlinks and FD uplinks,
/// each STP evaluated through the fastest applicable route.
inline ThroughputReport throughput(const HdhnConfig& c) {
  return detail::throughput_with(c, [](const HdhnConfig& cc, const LinkQuery& q) { return stp(cc, q); });
}

/// Same as throughput() but every STP through the quadrature route.
inline ThroughputReport throughput_quadrature(const HdhnConfig& c) {
  return detail::throughput_with(c, [](const HdhnConfig& cc, const LinkQuery& q) { return stp_general(cc, q); });
}

enum class ClosedForm { PerfectIc, Alpha4 };

/// Closed-form throughput. Uses the perfect-cancellation form when every FD
/// tier cancels perfectly under equal pathloss, otherwise the alpha = 4 form.
/// Throws a Precondition error when neither applies.
inline ThroughputReport throughput_closed(const HdhnConfig& c, ClosedForm* used = nullptr) {
  detail::require_valid(c);
  bool perfect = c.equal_pathloss();
  for (const auto& t : c.tiers) perfect = perfect && (t.fd_portion == 0.0 || t.perfect_ic());
  if (!perfect && !c.all_pathloss(4.0))
    fail(ErrorKind::Precondition,
         "throughput_closed: needs equal pathloss with perfect cancellation, or alpha = 4 in every tier");
  if (used) *used = perfect ? ClosedForm::PerfectIc : ClosedForm::Alpha4;

  const TargetSirs th = target_sirs(c);
  const double alpha = c.tiers.front().pathloss_exp;
  std::vector<double> per_tier(c.size(), 0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const TierParams& t = c.tiers[k];
    if (t.density == 0.0) continue;
    const detail::LinkSetup ap_link{k, alpha, t.ap_power, 0.0, th.theta_a};
    const detail::LinkSetup user_link{k, alpha, t.user_power, 0.0, th.theta_u};
    const double tau_sum = detail::weighted_tau_sum(c, k, 2.0 / alpha);
    double bracket = 0.0;
    if (perfect) {
      if (c.rate_ap > 0.0) bracket += c.rate_ap / detail::weighted_m_sum(c, ap_link);
      if (c.rate_user > 0.0 && t.fd_portion > 0.0)
        bracket += c.rate_user * t.fd_portion / detail::weighted_m_sum(c, user_link);
      per_tier[k] = t.density * tau_sum * bracket / (2.0 * c.bandwidth);
      continue;
    }
    // alpha = 4: the FD terms carry exp(x^2) erfc(x); zero residual takes the x -> inf limit.
    auto fd_term = [&](double rate, double p_tx, double p_rx, double theta, const detail::LinkSetup& link) {
      if (rate == 0.0) return 0.0;
      const double residual = t.self_interference(p_rx);
      const double msum = detail::weighted_m_sum(c, link);
      if (residual == 0.0) return rate / (std::pow(std::numbers::pi, 1.5) * msum);
      const double root = std::sqrt(residual * theta);
      const double x = std::sqrt(p_tx) * std::numbers::pi * msum / root;
      return rate * std::sqrt(p_tx) / root * specfun::erfcx(x).value;
    };
    if (c.rate_ap > 0.0 && t.fd_portion < 1.0)
      bracket += c.rate_ap * (1.0 - t.fd_portion) / (2.0 * detail::weighted_m_sum(c, ap_link));
    if (t.fd_portion > 0.0)
      bracket += std::pow(std::numbers::pi, 1.5) * t.fd_portion / 2.0 *
                 (fd_term(c.rate_ap, t.ap_power, t.user_power, th.theta_a, ap_link) +
                  fd_term(c.rate_user, t.user_power, t.ap_power, th.theta_u, user_link));
    per_tier[k] = t.density * tau_sum * bracket / c.bandwidth;
  }
  return detail::finish(std::move(per_tier), c);
}

// ---------------------------------------------------------------------------
// FD-portion grid search

struct GridPoint {
  std::vector<double> portions;
  double total = 0.0;
  std::vector<double> per_tier;
};

struct Optimum {
  std::vector<double> portions;
  double value = 0.0;
};

/// Grid {0, step, 2 step, ..., 1}; 1 is appended when step does not divide it.
inline std::vector<double> portion_axis(double step) {
  if (!(step > 0.0 && step <= 0.5)) fail(ErrorKind::Precondition, "grid step must lie in (0, 0.5]");
  std::vector<double> axis;
  const auto n = static_cast<long>(std::floor(1.0 / step + 1e-9));
  for (long i = 0; i <= n; ++i) axis.push_back(std::min(1.0, static_cast<double>(i) * step));
  if (axis.back() < 1.0 - 1e-12) axis.push_back(1.0);
  return axis;
}

/// Throughput on the full portion grid, in lexicographic order of the
/// portion vector (tier 0 slowest). Points are split over `workers` threads
/// and stored by index, so the result does not depend on the worker count.
inline std::vector<GridPoint> portion_grid(const HdhnConfig& c, const std::vector<std::vector<double>>& axes,
                                           unsigned workers = 1) {
  detail::require_valid(c);
  if (axes.size() != c.size()) fail(ErrorKind::Precondition, "portion_grid: one axis per tier required");
  std::size_t total = 1;
  for (const auto& a : axes) {
    if (a.empty()) fail(ErrorKind::Precondition, "portion_grid: empty axis");
    total *= a.size();
  }
  std::vector<GridPoint> out(total);
  auto eval = [&](std::size_t begin, std::size_t end) {
    HdhnConfig local = c;
    for (std::size_t idx = begin; idx < end; ++idx) {
      std::size_t rem = idx;
      std::vector<double> portions(c.size());
      for (std::size_t d = c.size(); d-- > 0;) {
        portions[d] = axes[d][rem % axes[d].size()];
        rem /= axes[d].size();
      }
      for (std::size_t d = 0; d < c.size(); ++d) local.tiers[d].fd_portion = portions[d];
      const ThroughputReport r = throughput(local);
      out[idx] = {std::move(portions), r.total, r.per_tier};
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(total)));
  if (workers == 1) {
    eval(0, total);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(total, b + chunk);
      if (b < e) pool.emplace_back(eval, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

/// Exhaustive search for the FD portions maximizing total throughput. Ties go
/// to the lexicographically smallest portion vector.
inline Optimum optimal_fd_portions(const HdhnConfig& c, double grid_step, unsigned workers = 1) {
  const std::vector<double> axis = portion_axis(grid_step);
  const auto grid = portion_grid(c, std::vector<std::vector<double>>(c.size(), axis), workers);
  const GridPoint* best = &grid.front();
  for (const auto& g : grid)
    if (g.total > best->total) best = &g;
  return {best->portions, best->total};
}

}  // namespace hdhn::analytic
