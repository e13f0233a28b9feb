#pragma once

// Reader and writer for the network description file, a TOML subset:
//
//   rate_ap = 1e4
//   rate_user = 1e4
//   bandwidth_hz = 1e4
//   symbol_time_s = 1e-4
//
//   [[tier]]
//   density = 1e-3
//   alpha = 4
//   bias = 1
//   p_ap_watts = 30
//   p_user_watts = 3
//   fd_portion = 1
//   self_ic_db = -40     # or -inf
//
// Only numeric values, '#' comments and [[tier]] array tables are accepted.

#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "hdhn/error.hpp"
#include "hdhn/model.hpp"

namespace hdhn::config_io {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_number(std::string_view text, int line) {
  std::string_view v = text;
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  std::string cleaned;
  for (char ch : v)
    if (ch != '_') cleaned.push_back(ch);
  double out = 0.0;
  const auto res = std::from_chars(cleaned.data(), cleaned.data() + cleaned.size(), out);
  if (res.ec != std::errc() || res.ptr != cleaned.data() + cleaned.size() || cleaned.empty())
    fail(ErrorKind::BadInput, "config line " + std::to_string(line) + ": not a number: '" + std::string(text) + "'");
  return out;
}

inline const std::set<std::string>& tier_keys() {
  static const std::set<std::string> keys = {"density",      "alpha",      "bias",      "p_ap_watts",
                                             "p_user_watts", "fd_portion", "self_ic_db"};
  return keys;
}

inline const std::set<std::string>& global_keys() {
  static const std::set<std::string> keys = {"rate_ap", "rate_user", "bandwidth_hz", "symbol_time_s"};
  return keys;
}

}  // namespace detail

/// Parses a configuration. Every tier table must define all seven tier keys;
/// global keys default to the standard evaluation values when absent.
inline HdhnConfig parse(std::string_view text) {
  HdhnConfig cfg;
  cfg.tiers.clear();
  std::map<std::string, double> globals;
  std::vector<std::map<std::string, double>> tiers;
  std::vector<int> tier_lines;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line != "[[tier]]")
        fail(ErrorKind::BadInput, "config line " + std::to_string(line_no) + ": unknown table " + std::string(line));
      tiers.emplace_back();
      tier_lines.push_back(line_no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorKind::BadInput, "config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(detail::trim(line.substr(0, eq)));
    const double value = detail::parse_number(detail::trim(line.substr(eq + 1)), line_no);
    auto& table = tiers.empty() ? globals : tiers.back();
    const auto& allowed = tiers.empty() ? detail::global_keys() : detail::tier_keys();
    if (!allowed.count(key))
      fail(ErrorKind::BadInput, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (table.count(key))
      fail(ErrorKind::BadInput, "config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    table[key] = value;
  }

  if (globals.count("rate_ap")) cfg.rate_ap = globals["rate_ap"];
  if (globals.count("rate_user")) cfg.rate_user = globals["rate_user"];
  if (globals.count("bandwidth_hz")) cfg.bandwidth = globals["bandwidth_hz"];
  if (globals.count("symbol_time_s")) cfg.symbol_time = globals["symbol_time_s"];

  for (std::size_t k = 0; k < tiers.size(); ++k) {
    auto& t = tiers[k];
    for (const auto& key : detail::tier_keys())
      if (!t.count(key))
        fail(ErrorKind::BadInput, "config tier starting at line " + std::to_string(tier_lines[k]) +
                                      ": missing key '" + key + "'");
    TierParams p;
    p.density = t["density"];
    p.pathloss_exp = t["alpha"];
    p.bias = t["bias"];
    p.ap_power = t["p_ap_watts"];
    p.user_power = t["p_user_watts"];
    p.fd_portion = t["fd_portion"];
    p.self_ic_db = t["self_ic_db"];
    cfg.tiers.push_back(p);
  }
  return cfg;
}

inline HdhnConfig load(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::BadInput, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

namespace detail {
inline std::string fmt(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
}  // namespace detail

inline std::string serialize(const HdhnConfig& c) {
  std::ostringstream os;
  os << "rate_ap = " << detail::fmt(c.rate_ap) << '\n'
     << "rate_user = " << detail::fmt(c.rate_user) << '\n'
     << "bandwidth_hz = " << detail::fmt(c.bandwidth) << '\n'
     << "symbol_time_s = " << detail::fmt(c.symbol_time) << '\n';
  for (const auto& t : c.tiers) {
    os << "\n[[tier]]\n"
       << "density = " << detail::fmt(t.density) << '\n'
       << "alpha = " << detail::fmt(t.pathloss_exp) << '\n'
       << "bias = " << detail::fmt(t.bias) << '\n'
       << "p_ap_watts = " << detail::fmt(t.ap_power) << '\n'
       << "p_user_watts = " << detail::fmt(t.user_power) << '\n'
       << "fd_portion = " << detail::fmt(t.fd_portion) << '\n'
       << "self_ic_db = " << detail::fmt(t.self_ic_db) << '\n';
  }
  return os.str();
}

}  // namespace hdhn::config_io
