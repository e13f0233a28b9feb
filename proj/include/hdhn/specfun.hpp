#pragma once

// Special functions needed by the interference and coverage closed forms:
// the Gauss hypergeometric function with first parameter fixed to one,
// the upper incomplete gamma function (including negative order), the
// scaled complementary error function and the two auxiliary integrals
// built on top of them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hdhn/error.hpp"
#include "hdhn/quadrature.hpp"

namespace hdhn::specfun {

struct EvalResult {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

inline constexpr int kMaxTerms = 100000;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

namespace detail {

inline bool near_integer(double v, double tol) { return std::abs(v - std::round(v)) < tol; }

// Direct series for 2F1(1, b; c; z) = sum_n (b)_n / (c)_n z^n.
inline EvalResult series_1b(double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  double abs_sum = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= (b + n) / (c + n) * z;
    sum += term;
    abs_sum += std::abs(term);
    if (term == 0.0 || std::abs(term) <= 1e-17 * std::abs(sum)) {
      // Remaining tail is bounded by a geometric series in |z| once the
      // coefficient ratio settles near one.
      const double tail = std::abs(term) * std::abs(z) / std::max(1e-300, 1.0 - std::abs(z));
      return {sum, tail + 4.0 * kEps * abs_sum};
    }
  }
  fail(ErrorKind::NonConvergence, "hyp2f1_one: series did not converge within the term cap (b=" +
                                      std::to_string(b) + ", c=" + std::to_string(c) +
                                      ", z=" + std::to_string(z) + ")");
}

// 2F1(1, b; c; z) for 0.5 < z < 1 via the z -> 1 - z connection formula.
inline EvalResult connect_1b(double b, double c, double z) {
  const double e = c - 1.0 - b;
  if (near_integer(e, 1e-6)) {
    // Logarithmic case of the connection formula. For c > 1 use the Euler
    // integral with v = (1 - t)^(c-1), which leaves a bounded integrand;
    // otherwise the direct series, whose term cap reports slow convergence.
    if (c <= 1.0 || z < 0.9) return series_1b(b, c, z);
    const double p = 1.0 / (c - 1.0);
    const auto r = quad::integrate(
        [&](double v) { return std::pow(1.0 - z + z * std::pow(v, p), -b); }, 0.0, 1.0, 0.0, 1e-14, 4000);
    return {r.value, r.abs_error + 8.0 * kEps * std::abs(r.value)};
  }
  const double w = 1.0 - z;
  const EvalResult f1 = series_1b(b, b - c + 2.0, w);
  const double a1 = (c - 1.0) / e;
  const double a2 = std::tgamma(c) * std::tgamma(-e) / std::tgamma(b);
  const double t2 = a2 * std::pow(w, e) * std::pow(z, 1.0 - c);
  const double value = a1 * f1.value + t2;
  const double err = std::abs(a1) * f1.abs_error_bound +
                     8.0 * kEps * (std::abs(a1 * f1.value) + std::abs(t2));
  return {value, err};
}

}  // namespace detail

/// Gauss hypergeometric function 2F1(1, b; c; z) for real z < 1.
///
/// |z| <= 0.5 sums the series directly, z < -0.5 goes through the Pfaff
/// transformation and 0.5 < z < 1 through the connection formula around
/// z = 1. Only the a = 1 family is supported.
inline EvalResult hyp2f1_one(double b, double c, double z) {
  if (!(z < 1.0)) fail(ErrorKind::Domain, "hyp2f1_one: requires z < 1");
  if (!(c > 0.0)) fail(ErrorKind::Domain, "hyp2f1_one: requires c > 0");
  if (!std::isfinite(b) || !std::isfinite(z)) fail(ErrorKind::Domain, "hyp2f1_one: non-finite input");
  if (z == 0.0 || b == 0.0) return {1.0, 0.0};
  // A non-positive integer b terminates the series.
  if (b < 0.0 && detail::near_integer(b, 1e-14)) return detail::series_1b(std::round(b), c, z);
  if (std::abs(z) <= 0.5) return detail::series_1b(b, c, z);
  if (z > 0.5) return detail::connect_1b(b, c, z);

  // Pfaff: 2F1(1, b; c; z) = (1 - z)^-1 2F1(1, c - b; c; z / (z - 1)).
  const double w = z / (z - 1.0);
  const double scale = 1.0 / (1.0 - z);
  const double bp = c - b;
  if (bp == 0.0) return {scale, 2.0 * kEps * scale};
  EvalResult inner;
  if (bp < 0.0 && detail::near_integer(bp, 1e-14)) {
    inner = detail::series_1b(std::round(bp), c, w);
  } else if (w <= 0.5) {
    inner = detail::series_1b(bp, c, w);
  } else {
    inner = detail::connect_1b(bp, c, w);
  }
  return {scale * inner.value, scale * inner.abs_error_bound + 2.0 * kEps * std::abs(scale * inner.value)};
}

namespace detail {

// Legendre continued fraction for Gamma(s, x), evaluated by modified Lentz.
// Valid for any real s; converges quickly once x exceeds about s + 1.
inline EvalResult upper_gamma_cf(double s, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      const double value = std::exp(s * std::log(x) - x) * h;
      return {value, 16.0 * kEps * std::abs(value)};
    }
  }
  fail(ErrorKind::NonConvergence, "upper_inc_gamma: continued fraction did not converge");
}

// Gamma(s, x) for s > 0, x > 0.
inline EvalResult upper_gamma_positive(double s, double x) {
  if (x >= s + 1.0) return upper_gamma_cf(s, x);
  // Lower gamma by its power series, then subtract.
  const double gs = std::tgamma(s);
  double term = 1.0 / s;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (s + n);
    sum += term;
    if (term <= 1e-17 * sum) {
      const double lower = std::exp(s * std::log(x) - x) * sum;
      return {gs - lower, 8.0 * kEps * (gs + lower)};
    }
  }
  fail(ErrorKind::NonConvergence, "upper_inc_gamma: lower series did not converge");
}

// Exponential integral E1(x) = Gamma(0, x).
inline EvalResult exp_integral_e1(double x) {
  if (x >= 1.0) return upper_gamma_cf(0.0, x);
  double term = 1.0;
  double sum = 0.0;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= -x / n;
    sum += term / n;
    if (std::abs(term / n) <= 1e-17 * std::abs(sum)) break;
  }
  const double value = -std::numbers::egamma - std::log(x) - sum;
  return {value, 8.0 * kEps * (std::abs(std::log(x)) + 1.0)};
}

}  // namespace detail

/// Upper incomplete gamma Gamma(s, x) = int_x^inf t^(s-1) e^-t dt.
///
/// Negative orders are reached by the downward recurrence
/// Gamma(s, x) = (Gamma(s + 1, x) - x^s e^-x) / s from a positive seed.
inline EvalResult upper_inc_gamma(double s, double x) {
  if (!std::isfinite(s) || !std::isfinite(x) || x < 0.0)
    fail(ErrorKind::Domain, "upper_inc_gamma: requires finite s and x >= 0");
  if (s <= 0.0 && x == 0.0) fail(ErrorKind::Domain, "upper_inc_gamma: integral diverges for s <= 0 at x = 0");
  if (s > 0.0) {
    if (x == 0.0) {
      const double g = std::tgamma(s);
      return {g, 2.0 * kEps * g};
    }
    return detail::upper_gamma_positive(s, x);
  }
  if (s == 0.0) return detail::exp_integral_e1(x);

  const EvalResult seed = upper_inc_gamma(s + 1.0, x);
  const double power = std::exp(s * std::log(x) - x);
  const double value = (seed.value - power) / s;
  const double err = (seed.abs_error_bound + 4.0 * kEps * (std::abs(seed.value) + power)) / std::abs(s);
  return {value, err};
}

/// Scaled complementary error function e^(x^2) erfc(x).
inline EvalResult erfcx(double x) {
  if (std::isnan(x)) fail(ErrorKind::Domain, "erfcx: NaN input");
  if (x < 0.0) {
    // Reflection; only reached outside the coverage formulas.
    const EvalResult r = erfcx(-x);
    const double v = 2.0 * std::exp(x * x) - r.value;
    return {v, r.abs_error_bound + 4.0 * kEps * std::abs(v)};
  }
  if (x < 2.0) {
    const double v = std::exp(x * x) * std::erfc(x);
    return {v, 8.0 * kEps * v};
  }
  if (std::isinf(x)) return {0.0, 0.0};
  // Laplace continued fraction:
  // erfcx(x) = 1/sqrt(pi) * 1 / (x + (1/2) / (x + 1 / (x + (3/2) / (x + ...)))).
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int n = 1; n < kMaxTerms; ++n) {
    const double an = 0.5 * n;
    d = x + an * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      const double v = 1.0 / (std::sqrt(std::numbers::pi) * f);
      return {v, 8.0 * kEps * v};
    }
  }
  fail(ErrorKind::NonConvergence, "erfcx: continued fraction did not converge");
}

/// I1(x, y, z, nu) = int_0^inf t^(x-1) e^(-y t) Gamma(z, nu t) dt in closed form:
/// nu^z Gamma(x+z) / (x (y+nu)^(x+z)) * 2F1(1, x+z; x+1; y/(y+nu)).
inline EvalResult integral_i1(double x, double y, double z, double nu) {
  if (!(nu > 0.0) || !(y > 0.0) || !(x + z > 0.0) || !(x > 0.0))
    fail(ErrorKind::Domain, "integral_i1: requires nu > 0, y > 0, x > 0 and x + z > 0");
  const double w = y / (y + nu);
  const EvalResult f = hyp2f1_one(x + z, x + 1.0, w);
  const double log_pref = z * std::log(nu) + std::lgamma(x + z) - std::log(x) - (x + z) * std::log(y + nu);
  const double pref = std::exp(log_pref);
  const double value = pref * f.value;
  const double err = pref * f.abs_error_bound + 16.0 * kEps * (1.0 + std::abs(log_pref)) * std::abs(value);
  return {value, err};
}

/// I0(y, z, nu) = int_{z^(1/nu)}^inf t / (1 + y t^nu) dt in closed form:
/// z^(2/nu - 1) / ((nu - 2) y) * 2F1(1, 1 - 2/nu; 2 - 2/nu; -1/(z y)).
inline EvalResult integral_i0(double y, double z, double nu) {
  if (!(nu > 2.0)) fail(ErrorKind::Domain, "integral_i0: requires nu > 2 (divergent tail)");
  if (!(y > 0.0) || !(z > 0.0)) fail(ErrorKind::Domain, "integral_i0: requires y > 0 and z > 0");
  const double delta = 2.0 / nu;
  const EvalResult f = hyp2f1_one(1.0 - delta, 2.0 - delta, -1.0 / (z * y));
  const double pref = std::pow(z, delta - 1.0) / ((nu - 2.0) * y);
  const double value = pref * f.value;
  return {value, pref * f.abs_error_bound + 8.0 * kEps * std::abs(value)};
}

}  // namespace hdhn::specfun
