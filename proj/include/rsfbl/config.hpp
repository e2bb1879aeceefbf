// Copyright 2026 The rsfbl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file config.hpp
/// Scenario configuration: a sectioned key = value text format.
///
///     # comment
///     [channel]
///     gain1 = 1
///
/// Lists are comma separated. Keys that are left out keep their defaults,
/// which describe the reference experiment (unit gains and noise, 10 dB
/// budget, N in {250, 500, 1500, 2500}). The budget is given in dB and
/// converted once, here.

#ifndef RSFBL_CONFIG_HPP
#define RSFBL_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rsfbl/error.hpp"
#include "rsfbl/explorer.hpp"
#include "rsfbl/lp.hpp"
#include "rsfbl/mac.hpp"
#include "rsfbl/oracle.hpp"
#include "rsfbl/sca.hpp"

namespace rsfbl {

struct ScenarioConfig {
  ChannelState channel{1.0, 1.0, 1.0};
  double budget_db = 10.0;
  double budget_linear = 10.0;
  std::vector<int> blocklengths{250, 500, 1500, 2500};
  std::vector<Scheme> schemes{Scheme::rsma1, Scheme::rsma2, Scheme::noma1, Scheme::noma2};
  DecodingOrder order = DecodingOrder::i;
  CirclePolicy circle;
  std::vector<Scheme> region_schemes{Scheme::rsma1, Scheme::noma1};
  RegionSpec region;
  TimeSharingSpec time_sharing;
  ScaConfig sca;
  GridSpec oracle;
  std::string output_dir = "out";
  std::uint64_t seed = 20240607;
  int instances = 20;

  void validate() const {
    channel.validate();
    if (!std::isfinite(budget_db)) throw invalid_input("budget_db must be finite");
    if (blocklengths.empty()) throw invalid_input("blocklengths must not be empty");
    for (int n : blocklengths)
      if (n < 1) throw invalid_input("blocklengths must be >= 1");
    if (schemes.empty()) throw invalid_input("schemes must not be empty");
    if (region_schemes.empty()) throw invalid_input("region schemes must not be empty");
    circle.validate();
    region.validate();
    time_sharing.validate();
    sca.validate();
    oracle.validate();
    if (output_dir.empty()) throw invalid_input("output dir must not be empty");
    if (instances < 1) throw invalid_input("random instances must be >= 1");
  }

  ExplorerConfig explorer(int jobs = 1) const {
    ExplorerConfig e;
    e.channel = channel;
    e.budget = budget_linear;
    e.order = order;
    e.sca = sca;
    e.fallback = oracle;
    e.jobs = jobs;
    return e;
  }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, int line) {
  T v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw config_error("invalid number '" + std::string(s) + "'", line);
  return v;
}

template <class T>
std::string format_list(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + f(v[i]);
  return out;
}

inline Scheme parse_scheme_or_throw(std::string_view s, int line) {
  const auto v = parse_scheme(s);
  if (!v) throw config_error("unknown scheme '" + std::string(s) + "'", line);
  return *v;
}

}  // namespace detail

/// Parses configuration text; errors carry the offending line number.
inline ScenarioConfig parse_config(const std::string& text) {
  using detail::parse_number;
  ScenarioConfig c;
  bool linear_given = false;
  int linear_line = 0;
  std::string section;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;

  auto dbl = [&](std::string_view v) { return parse_number<double>(v, line); };
  auto integer = [&](std::string_view v) { return parse_number<int>(v, line); };

  using Handler = std::function<void(std::string_view)>;
  const std::map<std::string, Handler> handlers{
      {"channel.gain1", [&](auto v) { c.channel.gain1 = dbl(v); }},
      {"channel.gain2", [&](auto v) { c.channel.gain2 = dbl(v); }},
      {"channel.noise_var", [&](auto v) { c.channel.noise_var = dbl(v); }},
      {"power.budget_db", [&](auto v) { c.budget_db = dbl(v); }},
      {"power.budget_linear",
       [&](auto v) {
         c.budget_linear = dbl(v);
         linear_given = true;
         linear_line = line;
       }},
      {"experiment.blocklengths",
       [&](auto v) {
         c.blocklengths.clear();
         for (auto x : detail::split_list(v)) c.blocklengths.push_back(integer(x));
       }},
      {"experiment.schemes",
       [&](auto v) {
         c.schemes.clear();
         for (auto x : detail::split_list(v))
           if (!x.empty()) c.schemes.push_back(detail::parse_scheme_or_throw(x, line));
       }},
      {"experiment.order",
       [&](auto v) {
         const auto o = parse_order(v);
         if (!o) throw config_error("unknown decoding order '" + std::string(v) + "'", line);
         c.order = *o;
       }},
      {"circle.radii",
       [&](auto v) {
         c.circle.radii.clear();
         for (auto x : detail::split_list(v)) c.circle.radii.push_back(dbl(x));
       }},
      {"circle.angles_deg",
       [&](auto v) {
         c.circle.angles_deg.clear();
         for (auto x : detail::split_list(v)) c.circle.angles_deg.push_back(dbl(x));
       }},
      {"region.schemes",
       [&](auto v) {
         c.region_schemes.clear();
         for (auto x : detail::split_list(v))
           if (!x.empty()) c.region_schemes.push_back(detail::parse_scheme_or_throw(x, line));
       }},
      {"region.eps_threshold", [&](auto v) { c.region.eps_threshold = dbl(v); }},
      {"region.angle_count", [&](auto v) { c.region.angle_count = integer(v); }},
      {"region.radius_tolerance", [&](auto v) { c.region.radius_tolerance = dbl(v); }},
      {"time_sharing.alpha_points", [&](auto v) { c.time_sharing.alpha_points = integer(v); }},
      {"time_sharing.direction_points", [&](auto v) { c.time_sharing.direction_points = integer(v); }},
      {"time_sharing.distance_points", [&](auto v) { c.time_sharing.distance_points = integer(v); }},
      {"sca.tol", [&](auto v) { c.sca.tol = dbl(v); }},
      {"sca.max_iters", [&](auto v) { c.sca.max_iters = integer(v); }},
      {"sca.beta_step", [&](auto v) { c.sca.beta_step = dbl(v); }},
      {"oracle.power_points", [&](auto v) { c.oracle.power_points = integer(v); }},
      {"oracle.beta_points", [&](auto v) { c.oracle.beta_points = integer(v); }},
      {"oracle.refine_levels", [&](auto v) { c.oracle.refine_levels = integer(v); }},
      {"oracle.max_evaluations", [&](auto v) { c.oracle.max_evaluations = parse_number<std::size_t>(v, line); }},
      {"output.dir", [&](auto v) { c.output_dir = std::string(v); }},
      {"random.seed", [&](auto v) { c.seed = parse_number<std::uint64_t>(v, line); }},
      {"random.instances", [&](auto v) { c.instances = integer(v); }},
  };

  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = detail::trim(raw);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw config_error("malformed section header", line);
      section = std::string(detail::trim(s.substr(1, s.size() - 2)));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw config_error("expected 'key = value'", line);
    if (section.empty()) throw config_error("key outside of any section", line);
    const std::string key = section + "." + std::string(detail::trim(s.substr(0, eq)));
    const auto h = handlers.find(key);
    if (h == handlers.end()) throw config_error("unknown key '" + key + "'", line);
    if (seen.contains(key)) throw config_error("duplicate key '" + key + "'", line);
    seen[key] = line;
    h->second(detail::trim(s.substr(eq + 1)));
    // Defaults are valid, so a failure here is caused by this key.
    try {
      c.validate();
    } catch (const invalid_input& e) {
      throw config_error(e.what(), line);
    }
  }

  const double expected = db_to_linear(c.budget_db);
  if (linear_given && std::abs(c.budget_linear - expected) > 1e-9 * expected)
    throw config_error("budget_linear disagrees with 10^(budget_db/10)", linear_line);
  c.budget_linear = expected;
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot read config file " + path, 0);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

/// Canonical text form; parse_config(to_text(c)) reproduces c.
inline std::string to_text(const ScenarioConfig& c) {
  using detail::exact_decimal;
  auto num = [](const double& v) { return exact_decimal(v); };
  auto integer = [](const int& v) { return std::to_string(v); };
  auto scheme = [](const Scheme& s) { return std::string(to_string(s)); };
  std::ostringstream o;
  o << "[channel]\n"
    << "gain1 = " << num(c.channel.gain1) << "\n"
    << "gain2 = " << num(c.channel.gain2) << "\n"
    << "noise_var = " << num(c.channel.noise_var) << "\n\n"
    << "[power]\n"
    << "budget_db = " << num(c.budget_db) << "\n"
    << "budget_linear = " << num(c.budget_linear) << "\n\n"
    << "[experiment]\n"
    << "blocklengths = " << detail::format_list<int>(c.blocklengths, integer) << "\n"
    << "schemes = " << detail::format_list<Scheme>(c.schemes, scheme) << "\n"
    << "order = " << to_string(c.order) << "\n\n"
    << "[circle]\n"
    << "radii = " << detail::format_list<double>(c.circle.radii, num) << "\n"
    << "angles_deg = " << detail::format_list<double>(c.circle.angles_deg, num) << "\n\n"
    << "[region]\n"
    << "schemes = " << detail::format_list<Scheme>(c.region_schemes, scheme) << "\n"
    << "eps_threshold = " << num(c.region.eps_threshold) << "\n"
    << "angle_count = " << c.region.angle_count << "\n"
    << "radius_tolerance = " << num(c.region.radius_tolerance) << "\n\n"
    << "[time_sharing]\n"
    << "alpha_points = " << c.time_sharing.alpha_points << "\n"
    << "direction_points = " << c.time_sharing.direction_points << "\n"
    << "distance_points = " << c.time_sharing.distance_points << "\n\n"
    << "[sca]\n"
    << "tol = " << num(c.sca.tol) << "\n"
    << "max_iters = " << c.sca.max_iters << "\n"
    << "beta_step = " << num(c.sca.beta_step) << "\n\n"
    << "[oracle]\n"
    << "power_points = " << c.oracle.power_points << "\n"
    << "beta_points = " << c.oracle.beta_points << "\n"
    << "refine_levels = " << c.oracle.refine_levels << "\n"
    << "max_evaluations = " << c.oracle.max_evaluations << "\n\n"
    << "[output]\n"
    << "dir = " << c.output_dir << "\n\n"
    << "[random]\n"
    << "seed = " << c.seed << "\n"
    << "instances = " << c.instances << "\n";
  return o.str();
}

}  // namespace rsfbl

#endif  // RSFBL_CONFIG_HPP
