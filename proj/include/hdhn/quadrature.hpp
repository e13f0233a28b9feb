#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "hdhn/error.hpp"

namespace hdhn::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half).
inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = fc * kWk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kronrod += kWk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = kronrod * h;
  const double err = std::abs((kronrod - gauss) * h);
  return {a, b, value, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Stops when the summed error estimate drops below max(abs_tol, rel_tol * |I|).
template <class F>
Result integrate(F&& f, double a, double b, double abs_tol = 1e-13, double rel_tol = 1e-12,
                 int max_intervals = 2000) {
  if (a == b) return {};
  std::priority_queue<detail::Segment> heap;
  detail::Segment first = detail::gk15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  heap.push(first);
  int n = 1;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (n >= max_intervals) {
      fail(ErrorKind::NonConvergence, "quadrature: subdivision limit reached before tolerance");
    }
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const detail::Segment left = detail::gk15(f, worst.a, mid);
    const detail::Segment right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  // Re-sum to shed accumulated rounding from the running updates.
  double value = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {value, err, n};
}

/// Smallest u = u0 * 2^j with log_integrand(u) below the cut level. The
/// log-integrand must be non-increasing beyond u0.
template <class LogF>
double truncation_point(LogF&& log_integrand, double u0, double log_cut, double u_max = 1e300) {
  double u = u0;
  while (log_integrand(u) > log_cut) {
    u *= 2.0;
    if (u > u_max) fail(ErrorKind::NonConvergence, "quadrature: integrand does not decay within bound");
  }
  return u;
}

}  // namespace hdhn::quad
