#pragma once

// Command implementations behind the hdhn executable: compute, figure and
// validate. Kept out of main() so the test suites can drive them directly.

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hdhn/analytic.hpp"
#include "hdhn/config_io.hpp"
#include "hdhn/error.hpp"
#include "hdhn/model.hpp"
#include "hdhn/montecarlo.hpp"
#include "hdhn/quadrature.hpp"

namespace hdhn::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kBadInput = 2, kNumericFailure = 3 };

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonConvergence:
    case ErrorKind::Degenerate: return kNumericFailure;
    default: return kBadInput;
  }
}

struct Options {
  std::string config_path;  // empty: built-in defaults
  std::string metric = "throughput";
  std::optional<std::size_t> tier;
  std::string mode = "hd";
  std::string direction = "downlink";
  std::optional<double> theta;
  bool simulate = false;
  long realizations = 0;  // 0: command default
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double grid_step = 0.05;
  double tol = 1e-6;
  std::string out = ".";
  bool svg = false;
  bool quick = false;
  std::string approximation = "colocated";
};

// ---------------------------------------------------------------------------
// Formatting

/// Shortest round-trip representation.
inline std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) fail(ErrorKind::BadInput, "cannot write '" + p.string() + "'");
  f << text;
}

// ---------------------------------------------------------------------------
// Parsing helpers

inline DuplexMode parse_mode(const std::string& s) {
  if (s == "hd") return DuplexMode::HD;
  if (s == "fd") return DuplexMode::FD;
  fail(ErrorKind::BadInput, "--mode must be hd or fd");
}

inline Direction parse_direction(const std::string& s) {
  if (s == "downlink") return Direction::Downlink;
  if (s == "uplink") return Direction::Uplink;
  fail(ErrorKind::BadInput, "--direction must be downlink or uplink");
}

inline mc::Approximation parse_approximation(const std::string& s) {
  if (s == "colocated") return mc::Approximation::CoLocatedUser;
  if (s == "exact") return mc::Approximation::Exact;
  fail(ErrorKind::BadInput, "--approximation must be colocated or exact");
}

inline HdhnConfig load_config(const Options& o) {
  HdhnConfig c = o.config_path.empty() ? table2_config() : config_io::load(o.config_path);
  if (auto v = validate(c); !v.empty()) fail(ErrorKind::BadInput, "invalid configuration:\n" + describe(v));
  return c;
}

inline mc::SimSettings sim_settings(const Options& o, long default_realizations) {
  mc::SimSettings s;
  s.realizations = o.realizations > 0 ? o.realizations : default_realizations;
  s.seed = o.seed;
  s.workers = o.workers;
  s.approximation = parse_approximation(o.approximation);
  return s;
}

// ---------------------------------------------------------------------------
// compute

inline int cmd_compute(const Options& o, std::ostream& out) {
  const HdhnConfig c = load_config(o);
  Table t;
  if (o.metric == "throughput" || o.metric == "cell_throughput") {
    const auto r = analytic::throughput(c);
    t.header = {"metric", "tier", "value"};
    std::optional<mc::ThroughputEstimate> sim;
    if (o.simulate) {
      t.header.insert(t.header.end(), {"mc_mean", "mc_stderr"});
      sim = mc::estimate_throughput(c, sim_settings(o, 20000));
    }
    auto row = [&](const std::string& m, const std::string& k, double v, const mc::Estimate* e) {
      std::vector<std::string> cells{m, k, num(v)};
      if (sim) {
        cells.push_back(e ? num(e->mean) : "");
        cells.push_back(e ? num(e->std_error) : "");
      }
      t.rows.push_back(cells);
    };
    if (o.metric == "throughput") {
      for (std::size_t k = 0; k < c.size(); ++k)
        row("throughput", std::to_string(k), r.per_tier[k], sim ? &sim->per_tier[k] : nullptr);
      row("throughput", "all", r.total, sim ? &sim->total : nullptr);
    }
    mc::Estimate cell;
    if (sim) cell = {sim->total.mean / c.total_density(), sim->total.std_error / c.total_density(), sim->total.n, o.seed};
    row("cell_throughput", "all", r.per_cell, sim ? &cell : nullptr);
  } else if (o.metric == "stp") {
    const std::size_t k = o.tier.value_or(0);
    const DuplexMode m = parse_mode(o.mode);
    const Direction d = parse_direction(o.direction);
    const TargetSirs th = target_sirs(c);
    const double theta = o.theta.value_or(d == Direction::Downlink ? th.theta_a : th.theta_u);
    const LinkQuery q{k, m, d, theta};
    if (auto v = validate(c, q); !v.empty()) fail(ErrorKind::BadInput, "invalid query:\n" + describe(v));
    const auto b = analytic::stp(c, q);
    t.header = {"metric", "tier", "mode", "direction", "theta", "method", "value"};
    std::vector<std::string> cells{"stp", std::to_string(k), to_string(m), to_string(d), num(theta),
                                   analytic::to_string(b.method), num(b.value)};
    if (o.simulate) {
      t.header.insert(t.header.end(), {"mc_mean", "mc_stderr"});
      const auto e = mc::estimate_stp(c, q, sim_settings(o, 20000));
      cells.push_back(num(e.mean));
      cells.push_back(num(e.std_error));
    }
    t.rows.push_back(cells);
  } else if (o.metric == "association") {
    t.header = {"metric", "tier", "mode", "value"};
    for (std::size_t k = 0; k < c.size(); ++k)
      for (DuplexMode m : {DuplexMode::HD, DuplexMode::FD})
        t.rows.push_back({"association", std::to_string(k), to_string(m),
                          num(analytic::association_probability(c, k, m))});
  } else if (o.metric == "optimum") {
    const auto best = analytic::optimal_fd_portions(c, o.grid_step, o.workers);
    t.header = {"metric", "tier", "value"};
    for (std::size_t k = 0; k < c.size(); ++k) t.rows.push_back({"fd_portion", std::to_string(k), num(best.portions[k])});
    t.rows.push_back({"throughput", "all", num(best.value)});
  } else {
    fail(ErrorKind::BadInput, "--metric must be one of throughput, cell_throughput, stp, association, optimum");
  }
  out << t.csv();
  return kOk;
}

// ---------------------------------------------------------------------------
// figures

struct Curve {
  std::string label;
  std::string x_name;
  std::string y_name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::pair<std::string, std::vector<double>>> extra;
};

struct PortionGrid {
  std::vector<std::string> axes;
  std::vector<analytic::GridPoint> points;
  std::size_t argmax = 0;
  std::size_t argmin = 0;
};

struct FigureData {
  std::string id;
  std::vector<Curve> curves;
  std::optional<PortionGrid> grid;
};

inline std::vector<double> log_space(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return v;
}

/// s values for the interference Laplace curves: 10^(k/4), k = 0..20.
inline std::vector<double> laplace_s_values() {
  std::vector<double> s;
  for (int k = 0; k <= 20; ++k) s.push_back(std::pow(10.0, 0.25 * k));
  return s;
}

struct LaplaceCase {
  double density;
  double d_min;
};

inline std::vector<LaplaceCase> fig2_cases() { return {{1e-3, 50.0}, {1e-3, 30.0}, {1e-3, 10.0}, {2e-3, 30.0}}; }

inline Curve laplace_curve(const TierParams& base, LaplaceCase lc, bool simulate, const mc::SimSettings& sim) {
  TierParams t = base;
  t.density = lc.density;
  t.fd_portion = 1.0;
  Curve cv;
  cv.label = "lambda" + num(lc.density) + "_dmin" + num(lc.d_min);
  cv.x_name = "s";
  cv.y_name = "laplace";
  cv.x = laplace_s_values();
  for (double s : cv.x) cv.y.push_back(analytic::laplace_fd(t, s, lc.d_min));
  if (simulate) {
    for (mc::Approximation a : {mc::Approximation::CoLocatedUser, mc::Approximation::Exact}) {
      mc::SimSettings ss = sim;
      ss.approximation = a;
      const auto est = mc::estimate_laplace_curve(t, cv.x, lc.d_min, ss);
      std::vector<double> mean, se;
      for (const auto& e : est) {
        mean.push_back(e.mean);
        se.push_back(e.std_error);
      }
      const std::string tag = std::string("mc_") + mc::to_string(a);
      cv.extra.push_back({tag, mean});
      cv.extra.push_back({tag + "_stderr", se});
    }
  }
  return cv;
}

inline std::vector<double> beta_axis() {
  std::vector<double> b;
  for (int v = -50; v <= 0; v += 5) b.push_back(v);
  return b;
}

// Tier-0 throughput against the self-IC level for several tier-1 densities.
inline FigureData self_ic_figure(const std::string& id, const HdhnConfig& base, double p_ap0, bool simulate,
                                 const mc::SimSettings& sim) {
  FigureData f{id, {}, {}};
  for (double l2 : {0.0, 5e-4, 1e-3, 2e-3, 5e-3, 1e-2}) {
    for (DuplexMode m : {DuplexMode::FD, DuplexMode::HD}) {
      Curve cv;
      cv.label = std::string(to_string(m)) + "_lambda2_" + num(l2);
      cv.x_name = "beta1_db";
      cv.y_name = "S1";
      std::vector<double> mc_mean, mc_se;
      for (double b : beta_axis()) {
        HdhnConfig c = base;
        c.tiers[0].ap_power = p_ap0;
        c.tiers[0].self_ic_db = b;
        c.tiers[0].fd_portion = m == DuplexMode::FD ? 1.0 : 0.0;
        c.tiers[1].density = l2;
        cv.x.push_back(b);
        cv.y.push_back(analytic::throughput(c).per_tier[0]);
        if (simulate) {
          const auto e = mc::estimate_tier_throughput(c, 0, sim);
          mc_mean.push_back(e.mean);
          mc_se.push_back(e.std_error);
        }
      }
      if (simulate) {
        cv.extra.push_back({"mc", mc_mean});
        cv.extra.push_back({"mc_stderr", mc_se});
      }
      f.curves.push_back(std::move(cv));
    }
  }
  return f;
}

inline PortionGrid make_grid(const HdhnConfig& c, const std::vector<std::vector<double>>& axes, unsigned workers) {
  PortionGrid g;
  for (std::size_t k = 0; k < c.size(); ++k) g.axes.push_back("delta" + std::to_string(k + 1));
  g.points = analytic::portion_grid(c, axes, workers);
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    if (g.points[i].total > g.points[g.argmax].total) g.argmax = i;
    if (g.points[i].total < g.points[g.argmin].total) g.argmin = i;
  }
  return g;
}

/// Tier added for the three-tier contour figure.
inline TierParams third_tier() {
  TierParams t;
  t.density = 5e-4;
  t.pathloss_exp = 4.0;
  t.bias = 1.0;
  t.ap_power = 15.0;
  t.user_power = 3.0;
  t.fd_portion = 0.0;
  t.self_ic_db = -20.0;
  return t;
}

inline const std::vector<std::pair<DuplexMode, DuplexMode>>& mode_sets() {
  static const std::vector<std::pair<DuplexMode, DuplexMode>> sets = {
      {DuplexMode::HD, DuplexMode::HD}, {DuplexMode::HD, DuplexMode::FD},
      {DuplexMode::FD, DuplexMode::HD}, {DuplexMode::FD, DuplexMode::FD}};
  return sets;
}

inline std::string mode_set_label(std::pair<DuplexMode, DuplexMode> m) {
  return std::string(to_string(m.first)) + "_" + to_string(m.second);
}

inline FigureData build_figure(const std::string& id, const HdhnConfig& base, const Options& o) {
  if (base.size() < 2 && id != "fig2")
    fail(ErrorKind::BadInput, id + " needs a configuration with at least two tiers");
  const mc::SimSettings sim = sim_settings(o, o.quick ? 2000 : 10000);
  FigureData f{id, {}, {}};
  if (id == "fig2") {
    for (const auto& lc : fig2_cases()) f.curves.push_back(laplace_curve(base.tiers[0], lc, o.simulate, sim));
  } else if (id == "fig3") {
    f = self_ic_figure(id, base, base.tiers[0].ap_power, o.simulate, sim);
  } else if (id == "fig4") {
    f = self_ic_figure(id, base, 9.0, o.simulate, sim);
  } else if (id == "fig5") {
    const auto axis = analytic::portion_axis(o.grid_step);
    struct Case { std::string label; double l1, l2; };
    std::vector<Case> cases;
    for (double r : {4.0, 2.0, 1.0, 0.5, 0.1}) cases.push_back({"rho21_" + num(r), 1e-3, r * 1e-3});
    for (double r : {4.0, 2.0, 0.5, 0.1}) cases.push_back({"rho12_" + num(r), r * 1e-3, 1e-3});
    for (const auto& cs : cases) {
      HdhnConfig c = base;
      c.tiers[0].density = cs.l1;
      c.tiers[1].density = cs.l2;
      c.tiers[0].fd_portion = 0.0;
      const double s_hd = analytic::throughput(c).per_tier[0];
      Curve cv{cs.label, "delta1", "S1_over_S1_hd", {}, {}, {}};
      for (double d : axis) {
        c.tiers[0].fd_portion = d;
        cv.x.push_back(d);
        cv.y.push_back(analytic::throughput(c).per_tier[0] / s_hd);
      }
      f.curves.push_back(std::move(cv));
    }
  } else if (id == "fig6") {
    const auto ratios = log_space(0.1, 10.0, 21);
    auto curve = [&](const std::string& label, DuplexMode m, double pu, double beta) {
      Curve cv{label, "lambda1_over_lambda2", "S1", {}, {}, {}};
      for (double r : ratios) {
        HdhnConfig c = base;
        c.tiers[1].density = 1e-3;
        c.tiers[0].density = r * 1e-3;
        c.tiers[0].user_power = pu;
        c.tiers[0].self_ic_db = beta;
        c.tiers[0].fd_portion = m == DuplexMode::FD ? 1.0 : 0.0;
        cv.x.push_back(r);
        cv.y.push_back(analytic::throughput(c).per_tier[0]);
      }
      f.curves.push_back(std::move(cv));
    };
    for (double beta : {-30.0, kPerfectIc})
      for (double pu : {3.0, 15.0, 30.0})
        curve("fd_pu" + num(pu) + "_beta" + num(beta), DuplexMode::FD, pu, beta);
    curve("hd", DuplexMode::HD, base.tiers[0].user_power, base.tiers[0].self_ic_db);
  } else if (id == "fig7" || id == "fig10") {
    const auto ratios = log_space(0.1, 10.0, 21);
    const std::vector<double> totals = id == "fig7" ? std::vector<double>{0.0} : std::vector<double>{2e-3, 1e-2};
    for (double lt : totals) {
      for (const auto& ms : mode_sets()) {
        Curve cv;
        cv.label = mode_set_label(ms) + (id == "fig10" ? "_lambdat" + num(lt) : "");
        cv.x_name = id == "fig7" ? "lambda2_over_lambda1" : "lambda1_over_lambda2";
        cv.y_name = "S_cell";
        for (double r : ratios) {
          HdhnConfig c = base;
          if (id == "fig7") {
            c.tiers[0].density = 1e-3;
            c.tiers[1].density = r * 1e-3;
          } else {
            c.tiers[0].density = lt * r / (1.0 + r);
            c.tiers[1].density = lt / (1.0 + r);
          }
          c.tiers[0].fd_portion = ms.first == DuplexMode::FD ? 1.0 : 0.0;
          c.tiers[1].fd_portion = ms.second == DuplexMode::FD ? 1.0 : 0.0;
          cv.x.push_back(r);
          cv.y.push_back(analytic::throughput(c).per_cell);
        }
        f.curves.push_back(std::move(cv));
      }
    }
  } else if (id == "fig8") {
    HdhnConfig c = base;
    c.tiers.resize(2);
    const auto axis = analytic::portion_axis(o.grid_step);
    f.grid = make_grid(c, {axis, axis}, o.workers);
  } else if (id == "fig9") {
    HdhnConfig c = base;
    c.tiers.resize(2);
    c.tiers.push_back(third_tier());
    const auto axis = analytic::portion_axis(o.grid_step);
    f.grid = make_grid(c, {axis, axis, {0.0, 0.25, 0.5, 0.75, 1.0}}, o.workers);
  } else {
    fail(ErrorKind::BadInput, "unknown figure id '" + id + "' (expected fig2 ... fig10)");
  }
  return f;
}

inline std::string sanitize(const std::string& s) {
  std::string out;
  for (char ch : s) out.push_back(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' ? ch : '_');
  return out;
}

inline Table curve_table(const Curve& cv) {
  Table t;
  t.header = {cv.x_name, cv.y_name};
  for (const auto& e : cv.extra) t.header.push_back(e.first);
  t.header.push_back("curve");
  for (std::size_t i = 0; i < cv.x.size(); ++i) {
    std::vector<std::string> r{num(cv.x[i]), num(cv.y[i])};
    for (const auto& e : cv.extra) r.push_back(num(e.second[i]));
    r.push_back(cv.label);
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline Table grid_table(const PortionGrid& g) {
  Table t;
  t.header = g.axes;
  t.header.push_back("S");
  for (const auto& p : g.points) {
    std::vector<std::string> r;
    for (double d : p.portions) r.push_back(num(d));
    r.push_back(num(p.total));
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline Table extrema_table(const PortionGrid& g) {
  Table t;
  t.header = {"kind"};
  t.header.insert(t.header.end(), g.axes.begin(), g.axes.end());
  t.header.push_back("S");
  for (auto [kind, idx] : {std::pair<const char*, std::size_t>{"argmax", g.argmax}, {"argmin", g.argmin}}) {
    std::vector<std::string> r{kind};
    for (double d : g.points[idx].portions) r.push_back(num(d));
    r.push_back(num(g.points[idx].total));
    t.rows.push_back(std::move(r));
  }
  return t;
}

// Minimal SVG: line chart with log x axis when the data spans decades.
inline std::string svg_lines(const FigureData& f) {
  constexpr double W = 640, H = 420, L = 70, R = 200, T = 20, B = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& c : f.curves)
    for (std::size_t i = 0; i < c.x.size(); ++i) {
      xmin = std::min(xmin, c.x[i]);
      xmax = std::max(xmax, c.x[i]);
      ymin = std::min(ymin, c.y[i]);
      ymax = std::max(ymax, c.y[i]);
    }
  const bool logx = xmin > 0 && xmax / xmin > 50;
  auto fx = [&](double x) {
    const double u = logx ? std::log(x / xmin) / std::log(xmax / xmin) : (x - xmin) / std::max(1e-300, xmax - xmin);
    return L + u * (W - L - R);
  };
  auto fy = [&](double y) { return T + (1.0 - (y - ymin) / std::max(1e-300, ymax - ymin)) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!f.curves.empty())
    os << "<text x=\"" << (W - R + L) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
       << f.curves.front().x_name << (logx ? " (log)" : "") << "</text>\n"
       << "<text x=\"14\" y=\"" << T + 10 << "\" font-size=\"12\">" << f.curves.front().y_name << " ["
       << num(ymin) << ", " << num(ymax) << "]</text>\n";
  for (std::size_t k = 0; k < f.curves.size(); ++k) {
    const auto& c = f.curves[k];
    const char* col = colors[k % 10];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i) os << fx(c.x[i]) << ',' << fy(c.y[i]) << ' ';
    os << "\"/>\n<text x=\"" << W - R + 8 << "\" y=\"" << T + 14 * (k + 1) << "\" font-size=\"10\" fill=\"" << col
       << "\">" << c.label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// Heat map of the first two portion axes, one panel per value of any third axis.
inline std::string svg_grid(const PortionGrid& g) {
  double lo = 1e300, hi = -1e300;
  for (const auto& p : g.points) {
    lo = std::min(lo, p.total);
    hi = std::max(hi, p.total);
  }
  std::vector<double> a1, a3;
  for (const auto& p : g.points) {
    if (std::find(a1.begin(), a1.end(), p.portions[0]) == a1.end()) a1.push_back(p.portions[0]);
    const double z = p.portions.size() > 2 ? p.portions[2] : 0.0;
    if (std::find(a3.begin(), a3.end(), z) == a3.end()) a3.push_back(z);
  }
  const double cell = 10.0;
  const double panel = cell * a1.size() + 30.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << panel * a3.size() + 20 << "\" height=\""
     << panel + 30 << "\">\n";
  for (const auto& p : g.points) {
    const std::size_t i = std::find(a1.begin(), a1.end(), p.portions[0]) - a1.begin();
    const std::size_t j = std::find(a1.begin(), a1.end(), p.portions[1]) - a1.begin();
    const double z = p.portions.size() > 2 ? p.portions[2] : 0.0;
    const std::size_t q = std::find(a3.begin(), a3.end(), z) - a3.begin();
    const double u = (p.total - lo) / std::max(1e-300, hi - lo);
    const int red = static_cast<int>(255 * u), blue = 255 - red;
    os << "<rect x=\"" << 10 + q * panel + i * cell << "\" y=\"" << 10 + (a1.size() - 1 - j) * cell
       << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << red << ",0," << blue << ")\"/>\n";
  }
  for (std::size_t q = 0; q < a3.size(); ++q)
    os << "<text x=\"" << 10 + q * panel << "\" y=\"" << panel + 20 << "\" font-size=\"11\">"
       << (g.axes.size() > 2 ? g.axes[2] + "=" + num(a3[q]) : g.axes[0] + " right, " + g.axes[1] + " up")
       << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

inline int cmd_figure(const std::string& id, const Options& o, std::ostream& out) {
  const HdhnConfig base = load_config(o);
  const FigureData f = build_figure(id, base, o);
  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const auto& cv : f.curves) {
    const auto p = dir / (id + "_" + sanitize(cv.label) + ".csv");
    write_file(p, curve_table(cv).csv());
    written.push_back(p.string());
  }
  if (f.grid) {
    const auto p = dir / (id + "_grid.csv");
    write_file(p, grid_table(*f.grid).csv());
    written.push_back(p.string());
    const auto e = dir / (id + "_extrema.csv");
    write_file(e, extrema_table(*f.grid).csv());
    written.push_back(e.string());
    out << extrema_table(*f.grid).csv();
  }
  if (o.svg) {
    const auto p = dir / (id + ".svg");
    write_file(p, f.grid ? svg_grid(*f.grid) : svg_lines(f));
    written.push_back(p.string());
  }
  for (const auto& w : written) out << "wrote " << w << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// validate

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline std::vector<LinkQuery> link_queries(const HdhnConfig& c) {
  const TargetSirs th = target_sirs(c);
  std::vector<LinkQuery> q;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c.tiers[k].density == 0.0) continue;
    q.push_back({k, DuplexMode::HD, Direction::Downlink, th.theta_a});
    q.push_back({k, DuplexMode::FD, Direction::Downlink, th.theta_a});
    q.push_back({k, DuplexMode::FD, Direction::Uplink, th.theta_u});
  }
  return q;
}

inline std::string query_name(const LinkQuery& q) {
  return "tier" + std::to_string(q.tier_index) + "/" + to_string(q.mode) + "/" + to_string(q.direction);
}

/// Cross-check suite on one configuration. Deterministic checks use `tol`
/// (relative); statistical checks require agreement within 3 standard errors.
inline std::vector<Check> validation_suite(const HdhnConfig& c, const Options& o) {
  std::vector<Check> out;
  auto add = [&](std::string name, bool pass, std::string detail) {
    out.push_back({std::move(name), pass, std::move(detail)});
  };
  const double tol = o.tol;

  // Closed forms against quadrature.
  for (const auto& q : link_queries(c)) {
    if (q.target_sir <= 0.0) continue;
    const auto fast = analytic::stp(c, q);
    if (fast.method == analytic::StpMethod::GeneralIntegral) continue;
    const auto slow = analytic::stp_general(c, q);
    const double r = rel_diff(fast.value, slow.value);
    add("closed_form_vs_quadrature " + query_name(q), r <= tol,
        std::string(analytic::to_string(fast.method)) + " rel diff " + num(r));
  }
  {
    const auto a = analytic::throughput(c);
    const auto b = analytic::throughput_quadrature(c);
    const double r = rel_diff(a.total, b.total);
    add("throughput_fast_vs_quadrature", r <= tol, "rel diff " + num(r));
    try {
      const auto cf = analytic::throughput_closed(c);
      const double rc = rel_diff(cf.total, b.total);
      add("throughput_closed_vs_quadrature", rc <= tol, "rel diff " + num(rc));
    } catch (const Error&) {
      // no closed form for this configuration
    }
  }

  // Association statistics.
  {
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k)
      for (DuplexMode m : {DuplexMode::HD, DuplexMode::FD}) sum += analytic::association_probability(c, k, m);
    add("association_sums_to_one", std::abs(sum - 1.0) <= tol, "sum " + num(sum));
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c.tiers[k].density == 0.0) continue;
    const double scale = 1.0 / std::sqrt(std::numbers::pi * c.total_density());
    const auto r = quad::integrate([&](double x) { return analytic::link_distance_pdf(c, k, x); }, 0.0,
                                   200.0 * scale, 1e-13, 1e-12, 4000);
    add("link_distance_pdf_normalized tier" + std::to_string(k), std::abs(r.value - 1.0) <= tol,
        "integral " + num(r.value));
  }

  // Laplace transforms in (0, 1] and non-increasing in s.
  for (std::size_t k = 0; k < c.size(); ++k) {
    bool ok = true;
    double prev_fd = 1.0, prev_hd = 1.0;
    for (double s : laplace_s_values()) {
      const double lf = analytic::laplace_fd(c.tiers[k], s, 20.0);
      const double lh = analytic::laplace_hd(c.tiers[k], s, 20.0);
      ok = ok && lf > 0.0 && lf <= 1.0 && lh > 0.0 && lh <= 1.0 && lf <= prev_fd && lh <= prev_hd;
      prev_fd = lf;
      prev_hd = lh;
    }
    add("laplace_bounded_and_decreasing tier" + std::to_string(k), ok, ok ? "ok" : "violated");
  }

  // STP monotone in theta and in the self-interference level; STP -> 1 as theta -> 0.
  for (const auto& q : link_queries(c)) {
    bool mono = true;
    double prev = 1.0;
    for (double th : {1e-12, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
      LinkQuery qq = q;
      qq.target_sir = th;
      const double v = analytic::stp(c, qq).value;
      mono = mono && v <= prev + 1e-12;
      if (th == 1e-12) {
        add("stp_tends_to_one " + query_name(q), v >= 1.0 - 1e-6, "stp(1e-12) " + num(v));
      }
      prev = v;
    }
    add("stp_monotone_in_theta " + query_name(q), mono, mono ? "ok" : "violated");
    if (q.mode == DuplexMode::FD) {
      bool mono_c = true;
      double pv = 1.0;
      for (double beta : {kPerfectIc, -60.0, -40.0, -20.0, 0.0}) {
        HdhnConfig cc = c;
        cc.tiers[q.tier_index].self_ic_db = beta;
        const double v = analytic::stp(cc, q).value;
        mono_c = mono_c && v <= pv + 1e-12;
        pv = v;
      }
      add("stp_monotone_in_self_interference " + query_name(q), mono_c, mono_c ? "ok" : "violated");
    }
  }

  // Invariances: common bias factor and common power factor.
  {
    const double base = analytic::throughput(c).total;
    HdhnConfig b = c;
    for (auto& t : b.tiers) t.bias *= 3.7;
    HdhnConfig p = c;
    for (auto& t : p.tiers) {
      t.ap_power *= 5.3;
      t.user_power *= 5.3;
    }
    const double rb = rel_diff(base, analytic::throughput(b).total);
    const double rp = rel_diff(base, analytic::throughput(p).total);
    add("bias_scaling_invariance", rb <= std::max(tol, 1e-12) && tol > 0.0, "rel diff " + num(rb));
    add("power_scaling_invariance", rp <= std::max(tol, 1e-12) && tol > 0.0, "rel diff " + num(rp));
  }

  // Analytic against Monte Carlo.
  const mc::SimSettings sim = sim_settings(o, o.quick ? 3000 : 20000);
  {
    const auto a = analytic::throughput(c);
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c.tiers[k].density == 0.0) continue;
      const auto e = mc::estimate_tier_throughput(c, k, sim);
      const double z = e.std_error > 0 ? std::abs(e.mean - a.per_tier[k]) / e.std_error : 0.0;
      add("throughput_vs_monte_carlo tier" + std::to_string(k), z <= 3.0,
          "analytic " + num(a.per_tier[k]) + " mc " + num(e.mean) + " +- " + num(e.std_error));
    }
  }
  if (!o.quick) {
    for (const auto& q : link_queries(c)) {
      const double v = analytic::stp(c, q).value;
      const auto e = mc::estimate_stp(c, q, sim);
      const double z = e.std_error > 0 ? std::abs(e.mean - v) / e.std_error : (e.mean == v ? 0.0 : 1e9);
      add("stp_vs_monte_carlo " + query_name(q), z <= 3.0,
          "analytic " + num(v) + " mc " + num(e.mean) + " +- " + num(e.std_error));
    }
  }
  return out;
}

inline int cmd_validate(const Options& o, std::ostream& out) {
  const HdhnConfig c = load_config(o);
  const auto t0 = std::chrono::steady_clock::now();
  const auto checks = validation_suite(c, o);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::size_t failed = 0;
  std::size_t width = 0;
  for (const auto& ch : checks) width = std::max(width, ch.name.size());
  for (const auto& ch : checks) {
    out << (ch.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << ch.name << "  "
        << ch.detail << '\n';
    if (!ch.pass) ++failed;
  }
  out << checks.size() - failed << "/" << checks.size() << " checks passed in " << std::fixed << std::setprecision(1)
      << secs << " s\n";
  return failed == 0 ? kOk : kValidationFailed;
}

}  // namespace hdhn::cli
