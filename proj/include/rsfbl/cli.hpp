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

/// \file cli.hpp
/// The `rsfbl` command line: throughput, region, optimize and oracle.
/// Kept in a header so tests can drive it in-process.

#ifndef RSFBL_CLI_HPP
#define RSFBL_CLI_HPP

#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsfbl/config.hpp"
#include "rsfbl/csv.hpp"
#include "rsfbl/error.hpp"
#include "rsfbl/explorer.hpp"
#include "rsfbl/oracle.hpp"
#include "rsfbl/parallel.hpp"
#include "rsfbl/sca.hpp"

namespace rsfbl::cli {

enum ExitCode : int { ok = 0, config_failure = 2, infeasible = 3, numerical = 4 };

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string trace_path;
  std::vector<std::string> schemes;
  std::vector<int> blocklengths;
  int jobs = 1;
  std::vector<double> rates;
};

namespace detail {

inline ScenarioConfig load(const Options& o) {
  ScenarioConfig c = o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
  if (!o.out_dir.empty()) c.output_dir = o.out_dir;
  if (!o.blocklengths.empty()) c.blocklengths = o.blocklengths;
  if (o.jobs < 1) throw config_error("--jobs must be >= 1");
  c.validate();
  return c;
}

inline std::vector<Scheme> schemes_or(const Options& o, const std::vector<Scheme>& fallback) {
  if (o.schemes.empty()) return fallback;
  std::vector<Scheme> out;
  for (const auto& s : o.schemes) {
    const auto v = parse_scheme(s);
    if (!v) throw config_error("unknown scheme '" + s + "'");
    out.push_back(*v);
  }
  return out;
}

inline std::pair<double, double> target(const Options& o) {
  if (o.rates.size() != 2) throw config_error("expected two target rates r1 r2");
  const double r1 = o.rates[0];
  const double r2 = o.rates[1];
  if (!(r1 >= 0.0 && r2 >= 0.0) || !std::isfinite(r1) || !std::isfinite(r2))
    throw config_error("target rates must be finite and >= 0");
  return {r1, r2};
}

inline std::string output_path(const ScenarioConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.output_dir);
  return (std::filesystem::path(c.output_dir) / name).string();
}

inline void print_candidate(std::ostream& out, Scheme s, DecodingOrder order, int n, const Candidate& c) {
  out << "scheme " << to_string(s);
  if (is_rsma(s)) out << "  order " << to_string(order);
  out << "  N " << n << "\n"
      << "  beta        " << csv::num(c.beta) << "\n"
      << "  powers      P11 " << csv::num(c.powers.p_split_1) << "  P12 " << csv::num(c.powers.p_split_2)
      << "  P2 " << csv::num(c.powers.p_other) << "\n"
      << "  eps         user1 " << csv::num(c.eval.errors.user1) << "  user2 " << csv::num(c.eval.errors.user2)
      << "\n"
      << "  throughput  T1 " << csv::num(c.eval.t1) << "  T2 " << csv::num(c.eval.t2) << "  Tsum "
      << csv::num(c.eval.sum) << "\n"
      << "  iterations  " << c.iterations << "\n"
      << "  status      " << to_string(c.status) << "\n";
}

/// Best SCA point for one scheme, as cmd_optimize reports it.
inline Candidate solve(Scheme s, const ScenarioConfig& c, double r1, double r2, int n) {
  FblParams fbl;
  fbl.blocklength = n;
  if (is_rsma(s)) return optimize_beta(s, c.order, c.channel, c.budget_linear, r1, r2, fbl, c.sca).best;
  return optimize_noma(s, c.channel, c.budget_linear, r1, r2, fbl, c.sca);
}

}  // namespace detail

inline int cmd_throughput(const Options& o, std::ostream& out) {
  const ScenarioConfig c = detail::load(o);
  const auto schemes = detail::schemes_or(o, c.schemes);
  const auto rows = throughput_sweep(schemes, c.circle, c.blocklengths, c.explorer(o.jobs));
  for (Scheme s : schemes) {
    for (int n : c.blocklengths) {
      std::string body = csv::join({std::string(csv::throughput_header)});
      for (const SweepResult& r : rows)
        if (r.scheme == s && r.blocklength == n) body += csv::throughput_row(r);
      const std::string path =
          detail::output_path(c, "throughput_" + std::string(to_string(s)) + "_" + std::to_string(n) + ".csv");
      csv::write_file(path, body);
      out << "wrote " << path << "\n";
    }
  }
  return ok;
}

inline int cmd_region(const Options& o, std::ostream& out) {
  const ScenarioConfig c = detail::load(o);
  const auto schemes = detail::schemes_or(o, c.region_schemes);
  const ExplorerConfig ec = c.explorer(o.jobs);
  for (Scheme s : schemes) {
    for (int n : c.blocklengths) {
      std::string body = csv::join({std::string(csv::region_header)});
      for (const FrontierPoint& p : rate_region(s, c.order, c.region, n, ec))
        body += csv::region_row(s, c.order, n, p);
      const std::string path =
          detail::output_path(c, "region_" + std::string(to_string(s)) + "_" + std::to_string(n) + ".csv");
      csv::write_file(path, body);
      out << "wrote " << path << "\n";
    }
  }
  return ok;
}

inline int cmd_optimize(const Options& o, std::ostream& out) {
  const ScenarioConfig c = detail::load(o);
  const auto [r1, r2] = detail::target(o);
  const auto schemes = detail::schemes_or(o, c.schemes);
  std::string trace = csv::join({std::string(csv::trace_header)});
  bool any_infeasible = false;
  out << "target r1 " << csv::num(r1) << "  r2 " << csv::num(r2) << "\n";
  for (int n : c.blocklengths) {
    for (Scheme s : schemes) {
      try {
        const Candidate best = detail::solve(s, c, r1, r2, n);
        detail::print_candidate(out, s, c.order, n, best);
        trace += csv::trace_rows(s, n, best.trace);
      } catch (const infeasible_target& e) {
        any_infeasible = true;
        out << "scheme " << to_string(s) << "  N " << n << "\n  status      infeasible (" << e.what() << ")\n";
      }
    }
  }
  if (!o.trace_path.empty()) {
    csv::write_file(o.trace_path, trace);
    out << "wrote " << o.trace_path << "\n";
  }
  return any_infeasible ? infeasible : ok;
}

inline std::size_t grid_size(Scheme s, const GridSpec& g) {
  const auto n = static_cast<std::size_t>(g.power_points);
  return is_rsma(s) ? g.beta_values().size() * n * (n + 1) / 2 * n : n * n;
}

inline int cmd_oracle(const Options& o, std::ostream& out) {
  const ScenarioConfig c = detail::load(o);
  out << "grid " << c.oracle.power_points << " power points, " << c.oracle.beta_points << " beta points, "
      << c.oracle.refine_levels << " refinement level(s)\n";

  if (o.rates.empty()) {
    const auto instances = random_instances(c.seed, c.instances, c.budget_linear);
    struct Row {
      double sca = 0.0;
      double oracle = 0.0;
      ScaStatus status = ScaStatus::converged;
    };
    std::vector<Row> rows(instances.size());
    parallel_for(instances.size(), o.jobs, [&](std::size_t i) {
      const RandomInstance& in = instances[i];
      FblParams fbl;
      fbl.blocklength = in.blocklength;
      const Candidate s =
          optimize_beta(Scheme::rsma1, c.order, in.channel, in.budget, in.r1, in.r2, fbl, c.sca).best;
      const OracleResult g =
          grid_optimize(Scheme::rsma1, c.order, in.channel, in.budget, in.r1, in.r2, fbl, c.oracle);
      rows[i] = {s.eval.sum, g.eval.sum, s.status};
    });
    out << "instance,gain1,gain2,N,r1,r2,Tsum_sca,Tsum_oracle,gap,gap_rel,status\n";
    double worst = 0.0;
    int converged = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const RandomInstance& in = instances[i];
      const double gap = std::abs(rows[i].sca - rows[i].oracle);
      const double rel = gap / (in.r1 + in.r2);
      worst = std::max(worst, rel);
      if (rows[i].status == ScaStatus::converged) ++converged;
      out << csv::join({std::to_string(i), csv::num(in.channel.gain1), csv::num(in.channel.gain2),
                        std::to_string(in.blocklength), csv::num(in.r1), csv::num(in.r2), csv::num(rows[i].sca),
                        csv::num(rows[i].oracle), csv::num(gap), csv::num(rel),
                        std::string(to_string(rows[i].status))});
    }
    out << "max gap / (r1 + r2) " << csv::num(worst) << "\n"
        << "converged " << converged << " of " << rows.size() << "\n";
    return ok;
  }

  const auto [r1, r2] = detail::target(o);
  const auto schemes = detail::schemes_or(o, c.schemes);
  bool any_infeasible = false;
  for (int n : c.blocklengths) {
    FblParams fbl;
    fbl.blocklength = n;
    for (Scheme s : schemes) {
      const OracleResult g = grid_optimize(s, c.order, c.channel, c.budget_linear, r1, r2, fbl, c.oracle);
      out << "scheme " << to_string(s) << "  N " << n << "  grid evaluations " << g.evaluations << " (lattice "
          << grid_size(s, c.oracle) << ")\n"
          << "  oracle  Tsum " << csv::num(g.eval.sum) << "  beta " << csv::num(g.point.beta) << "  P11 "
          << csv::num(g.point.powers.p_split_1) << "  P12 " << csv::num(g.point.powers.p_split_2) << "  P2 "
          << csv::num(g.point.powers.p_other) << "\n";
      try {
        const Candidate sc = detail::solve(s, c, r1, r2, n);
        out << "  sca     Tsum " << csv::num(sc.eval.sum) << "  beta " << csv::num(sc.beta) << "  P11 "
            << csv::num(sc.powers.p_split_1) << "  P12 " << csv::num(sc.powers.p_split_2) << "  P2 "
            << csv::num(sc.powers.p_other) << "  status " << to_string(sc.status) << "\n"
            << "  gap     " << csv::num(sc.eval.sum - g.eval.sum) << "\n";
      } catch (const infeasible_target& e) {
        any_infeasible = true;
        out << "  sca     infeasible (" << e.what() << ")\n";
      }
    }
  }
  return any_infeasible ? infeasible : ok;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-blocklength RSMA/NOMA uplink throughput and rate regions", "rsfbl"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "scenario configuration file");
    sub->add_option("--out", o.out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--scheme", o.schemes, "scheme(s): rsma1, rsma2, noma1, noma2")->delimiter(',');
    sub->add_option("--jobs", o.jobs, "worker threads");
  };
  CLI::App* thr = app.add_subcommand("throughput", "optimized throughput over the target-rate circles");
  common(thr);
  CLI::App* reg = app.add_subcommand("region", "error-constrained rate regions");
  common(reg);
  CLI::App* opt = app.add_subcommand("optimize", "optimize one target pair and report");
  common(opt);
  opt->add_option("rates", o.rates, "target rates r1 r2")->expected(2)->required();
  opt->add_option("-N,--blocklength", o.blocklengths, "blocklength(s) (overrides the config list)")->delimiter(',');
  opt->add_option("--trace", o.trace_path, "write per-iteration CSV of the reported runs");
  CLI::App* orc = app.add_subcommand("oracle", "grid oracle vs SCA; random suite without rates");
  common(orc);
  orc->add_option("rates", o.rates, "target rates r1 r2")->expected(2);
  orc->add_option("-N,--blocklength", o.blocklengths, "blocklength(s) (overrides the config list)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_failure;
  }

  try {
    if (thr->parsed()) return cmd_throughput(o, out);
    if (reg->parsed()) return cmd_region(o, out);
    if (opt->parsed()) return cmd_optimize(o, out);
    return cmd_oracle(o, out);
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return config_failure;
  } catch (const invalid_input& e) {
    err << "invalid input: " << e.what() << "\n";
    return config_failure;
  } catch (const infeasible_target& e) {
    err << "infeasible target: " << e.what() << "\n";
    return infeasible;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return numerical;
  }
}

}  // namespace rsfbl::cli

#endif  // RSFBL_CLI_HPP
