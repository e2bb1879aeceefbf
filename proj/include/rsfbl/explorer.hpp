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

/// \file explorer.hpp
/// Experiment drivers: optimized throughput over circles of target-rate
/// pairs, two-point NOMA time sharing, and error-constrained rate regions.

#ifndef RSFBL_EXPLORER_HPP
#define RSFBL_EXPLORER_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "rsfbl/error.hpp"
#include "rsfbl/mac.hpp"
#include "rsfbl/oracle.hpp"
#include "rsfbl/parallel.hpp"
#include "rsfbl/sca.hpp"

namespace rsfbl {

struct CirclePolicy {
  std::vector<double> radii{0.8, 1.2, 1.4};
  std::vector<double> angles_deg{0, 10, 20, 30, 40, 50, 60, 70, 80, 90};

  void validate() const {
    if (radii.empty() || angles_deg.empty()) throw invalid_input("circle needs radii and angles");
    for (double r : radii)
      if (!(r > 0.0) || !std::isfinite(r)) throw invalid_input("circle radii must be > 0");
    for (double a : angles_deg)
      if (!(a >= 0.0 && a <= 90.0)) throw invalid_input("circle angles must lie in [0, 90] degrees");
  }
};

struct RegionSpec {
  double eps_threshold = 1e-3;
  int angle_count = 19;
  double radius_tolerance = 1e-3;

  void validate() const {
    if (!(eps_threshold > 0.0 && eps_threshold < 1.0)) throw invalid_input("eps_threshold must lie in (0, 1)");
    if (angle_count < 2) throw invalid_input("angle_count must be >= 2");
    if (!(radius_tolerance > 0.0)) throw invalid_input("radius_tolerance must be > 0");
  }

  /// angle_count angles spread evenly over [0, 90] degrees.
  std::vector<double> angles() const {
    std::vector<double> out;
    for (int i = 0; i < angle_count; ++i) out.push_back(90.0 * i / (angle_count - 1));
    return out;
  }
};

struct TimeSharingSpec {
  int alpha_points = 51;
  int direction_points = 19;
  int distance_points = 21;
  /// Explicit time fractions; overrides alpha_points when non-empty.
  std::vector<double> alphas;

  void validate() const {
    if (alpha_points < 2) throw invalid_input("time_sharing alpha_points must be >= 2");
    if (direction_points < 2) throw invalid_input("time_sharing direction_points must be >= 2");
    if (distance_points < 2) throw invalid_input("time_sharing distance_points must be >= 2");
    for (double a : alphas)
      if (!(a >= 0.0 && a <= 1.0)) throw invalid_input("time_sharing alphas must lie in [0, 1]");
  }

  std::vector<double> alpha_values() const {
    if (!alphas.empty()) return alphas;
    std::vector<double> out;
    for (int i = 0; i < alpha_points; ++i) out.push_back(static_cast<double>(i) / (alpha_points - 1));
    return out;
  }
};

/// Scenario shared by all explorer operations.
struct ExplorerConfig {
  ChannelState channel{1.0, 1.0, 1.0};
  double budget = 10.0;
  DecodingOrder order = DecodingOrder::i;
  ScaConfig sca;
  /// Grid used for NOMA when no power allocation meets the target rates.
  GridSpec fallback;
  int jobs = 1;

  void validate() const {
    channel.validate();
    if (!(budget > 0.0) || !std::isfinite(budget)) throw invalid_input("power budget must be > 0");
    sca.validate();
    fallback.validate();
    if (jobs < 1) throw invalid_input("jobs must be >= 1");
  }
};

/// (r1, r2) at `radius` along `angle_deg`, computed so that angles a and
/// 90 - a give exactly mirrored pairs and 0, 45 and 90 degrees are exact.
inline std::pair<double, double> polar_rates(double radius, double angle_deg) {
  if (angle_deg == 0.0) return {radius, 0.0};
  if (angle_deg == 90.0) return {0.0, radius};
  if (angle_deg == 45.0) {
    const double v = radius * (0.5 * std::numbers::sqrt2);
    return {v, v};
  }
  const double deg = std::numbers::pi / 180.0;
  if (angle_deg < 45.0) return {radius * std::cos(angle_deg * deg), radius * std::sin(angle_deg * deg)};
  const double m = (90.0 - angle_deg) * deg;
  return {radius * std::sin(m), radius * std::cos(m)};
}

struct SchemeOutcome {
  Scheme scheme = Scheme::rsma1;
  Candidate best;
  /// Every operating point considered (for NOMA just the optimum).
  std::vector<Candidate> candidates;
};

namespace detail {

inline FblParams fbl_at(int blocklength) {
  FblParams f;
  f.blocklength = blocklength;
  f.validate();
  return f;
}

inline SchemeOutcome noma_outcome(Scheme scheme, double r1, double r2, int n, const ExplorerConfig& cfg) {
  const FblParams fbl = fbl_at(n);
  SchemeOutcome out;
  out.scheme = scheme;
  try {
    out.best = optimize_noma(scheme, cfg.channel, cfg.budget, r1, r2, fbl, cfg.sca);
  } catch (const infeasible_target&) {
    const OracleResult g = grid_optimize(scheme, DecodingOrder::i, cfg.channel, cfg.budget, r1, r2, fbl, cfg.fallback);
    out.best = {scheme == Scheme::noma1 ? 1.0 : 0.0, {}, g.eval, ScaStatus::infeasible, 0, false, {}};
    // Same split-user parameterization as the SCA path.
    const double p1 = g.point.powers.p_split_1;
    out.best.powers = scheme == Scheme::noma1 ? PowerAllocation{p1, 0.0, g.point.powers.p_other, cfg.budget}
                                              : PowerAllocation{0.0, p1, g.point.powers.p_other, cfg.budget};
  }
  out.candidates = {out.best};
  return out;
}

}  // namespace detail

/// Optimizes one scheme at one target. NOMA runs the power-only SCA and
/// falls back to the grid oracle (status infeasible) when the target is
/// out of reach. RSMA runs the beta search seeded with the NOMA optima, or
/// with `noma` when the caller already has them.
inline SchemeOutcome optimize_scheme(Scheme scheme, double r1, double r2, int blocklength, const ExplorerConfig& cfg,
                                     const std::vector<SchemeOutcome>* noma = nullptr) {
  if (!is_rsma(scheme)) return detail::noma_outcome(scheme, r1, r2, blocklength, cfg);
  std::vector<SchemeOutcome> own;
  if (!noma) {
    own = {detail::noma_outcome(Scheme::noma1, r1, r2, blocklength, cfg),
           detail::noma_outcome(Scheme::noma2, r1, r2, blocklength, cfg)};
    noma = &own;
  }
  std::vector<Seed> seeds;
  for (const SchemeOutcome& o : *noma)
    if (auto s = embed_noma(o.scheme, o.best.powers, scheme, cfg.order, o.best.status)) seeds.push_back(*s);
  BetaSearchResult r =
      optimize_beta(scheme, cfg.order, cfg.channel, cfg.budget, r1, r2, detail::fbl_at(blocklength), cfg.sca, seeds);
  return {scheme, r.best, std::move(r.candidates)};
}

/// One row of a throughput sweep.
struct SweepResult {
  Scheme scheme = Scheme::rsma1;
  DecodingOrder order = DecodingOrder::i;
  int blocklength = 0;
  double radius = 0.0;
  double angle_deg = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double beta = 1.0;
  PowerAllocation powers;
  double eps1 = 0.0;
  double eps2 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double t_sum = 0.0;
  ScaStatus status = ScaStatus::converged;
};

inline SweepResult make_row(const SchemeOutcome& o, DecodingOrder order, int n, double radius, double angle,
                            double r1, double r2) {
  const Candidate& c = o.best;
  return {o.scheme, order, n, radius, angle, r1, r2, c.beta, c.powers, c.eval.errors.user1, c.eval.errors.user2,
          c.eval.t1, c.eval.t2, c.eval.sum, c.status};
}

/// Optimized throughput of every scheme at every (N, radius, angle).
/// Rows are ordered by (scheme as listed, N as listed, radius, angle).
inline std::vector<SweepResult> throughput_sweep(const std::vector<Scheme>& schemes, const CirclePolicy& circle,
                                                 const std::vector<int>& blocklengths, const ExplorerConfig& cfg) {
  if (schemes.empty()) throw invalid_input("scheme list is empty");
  if (blocklengths.empty()) throw invalid_input("blocklength list is empty");
  circle.validate();
  cfg.validate();
  struct Cell {
    int n;
    double radius;
    double angle;
  };
  std::vector<Cell> cells;
  for (int n : blocklengths)
    for (double r : circle.radii)
      for (double a : circle.angles_deg) cells.push_back({n, r, a});

  const bool want_rsma = std::any_of(schemes.begin(), schemes.end(), [](Scheme s) { return is_rsma(s); });
  std::vector<std::map<Scheme, SweepResult>> per_cell(cells.size());
  parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
    const Cell& c = cells[i];
    const auto [r1, r2] = polar_rates(c.radius, c.angle);
    std::vector<SchemeOutcome> noma;
    for (Scheme s : {Scheme::noma1, Scheme::noma2})
      if (want_rsma || std::find(schemes.begin(), schemes.end(), s) != schemes.end())
        noma.push_back(detail::noma_outcome(s, r1, r2, c.n, cfg));
    for (Scheme s : schemes) {
      SchemeOutcome o;
      if (is_rsma(s)) {
        o = optimize_scheme(s, r1, r2, c.n, cfg, &noma);
      } else {
        o = *std::find_if(noma.begin(), noma.end(), [s](const SchemeOutcome& x) { return x.scheme == s; });
      }
      per_cell[i].emplace(s, make_row(o, cfg.order, c.n, c.radius, c.angle, r1, r2));
    }
  });

  std::vector<SweepResult> rows;
  for (Scheme s : schemes)
    for (int n : blocklengths)
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].n == n) rows.push_back(per_cell[i].at(s));
  return rows;
}

struct TimeSharingResult {
  double alpha = 1.0;
  std::pair<double, double> point_a;
  std::pair<double, double> point_b;
  double t_a = 0.0;
  double t_b = 0.0;
  double t_sum = 0.0;
  /// Best time-shared throughput for each alpha value (-1 if none).
  std::vector<double> alpha_profile;
};

/// Best two-point time sharing between NOMA-1 at A and NOMA-2 at B with
/// alpha*A + (1 - alpha)*B = target. A moves away from the target along
/// directions in the second quadrant (less r1, more r2), B follows from
/// the constraint. Both endpoints must meet their rates.
/// Throws infeasible_target when no configuration does.
inline TimeSharingResult time_sharing_throughput(double r1, double r2, int blocklength, const ExplorerConfig& cfg,
                                                 const TimeSharingSpec& spec = {}) {
  if (!(r1 >= 0.0 && r2 >= 0.0)) throw invalid_input("time-sharing target must lie in the positive quadrant");
  spec.validate();
  cfg.validate();
  const FblParams fbl = detail::fbl_at(blocklength);
  const CapacityPentagon pent = capacity_pentagon(cfg.channel, cfg.budget);
  auto noma_t = [&](Scheme s, double a, double b) -> std::optional<double> {
    try {
      return optimize_noma(s, cfg.channel, cfg.budget, a, b, fbl, cfg.sca).eval.sum;
    } catch (const infeasible_target&) {
      return std::nullopt;
    }
  };

  struct Endpoint {
    double a1, a2, t;
  };
  std::vector<Endpoint> as;
  const double deg = std::numbers::pi / 180.0;
  if (auto t = noma_t(Scheme::noma1, r1, r2)) as.push_back({r1, r2, *t});
  for (int i = 0; i < spec.direction_points; ++i) {
    const double phi = (90.0 + 90.0 * i / (spec.direction_points - 1)) * deg;
    const double u1 = i == 0 ? 0.0 : (i + 1 == spec.direction_points ? -1.0 : std::cos(phi));
    const double u2 = i == 0 ? 1.0 : (i + 1 == spec.direction_points ? 0.0 : std::sin(phi));
    auto inside = [&](double d) { return r1 + d * u1 >= 0.0 && pent.contains(r1 + d * u1, r2 + d * u2); };
    double lo = 0.0;
    double hi = 2.0 * (pent.user1 + pent.user2);
    if (!inside(lo)) break;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(mid) ? lo : hi) = mid;
    }
    for (int l = 1; l < spec.distance_points; ++l) {
      const double d = lo * l / (spec.distance_points - 1);
      const double a1 = std::max(0.0, r1 + d * u1);
      const double a2 = r2 + d * u2;
      if (auto t = noma_t(Scheme::noma1, a1, a2)) as.push_back({a1, a2, *t});
    }
  }

  const auto alphas = spec.alpha_values();
  struct Best {
    double t = -1.0;
    std::size_t a = 0;
    double b1 = 0.0, b2 = 0.0, tb = 0.0;
  };
  std::vector<Best> best(alphas.size());
  parallel_for(alphas.size(), cfg.jobs, [&](std::size_t k) {
    const double alpha = alphas[k];
    if (alpha == 0.0) {
      if (auto t = noma_t(Scheme::noma2, r1, r2)) best[k] = {*t, 0, r1, r2, *t};
      return;
    }
    for (std::size_t ai = 0; ai < as.size(); ++ai) {
      const Endpoint& A = as[ai];
      double b1 = r1;
      double b2 = r2;
      double tb = 0.0;
      if (alpha == 1.0) {
        if (A.a1 != r1 || A.a2 != r2) continue;
      } else {
        b1 = (r1 - alpha * A.a1) / (1.0 - alpha);
        b2 = (r2 - alpha * A.a2) / (1.0 - alpha);
        if (b1 < -1e-12 || b2 < -1e-12 || !pent.contains(b1, b2)) continue;
        b1 = std::max(0.0, b1);
        b2 = std::max(0.0, b2);
        const auto t = noma_t(Scheme::noma2, b1, b2);
        if (!t) continue;
        tb = *t;
      }
      const double total = alpha * A.t + (1.0 - alpha) * tb;
      if (total > best[k].t) best[k] = {total, ai, b1, b2, tb};
    }
  });

  TimeSharingResult res;
  std::optional<std::size_t> arg;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    res.alpha_profile.push_back(best[k].t);
    if (best[k].t >= 0.0 && (!arg || best[k].t > best[*arg].t)) arg = k;
  }
  if (!arg) throw infeasible_target("no time-sharing configuration meets the target");
  const Best& b = best[*arg];
  res.alpha = alphas[*arg];
  res.point_a = res.alpha == 0.0 ? std::pair{r1, r2} : std::pair{as[b.a].a1, as[b.a].a2};
  res.point_b = {b.b1, b.b2};
  res.t_a = res.alpha == 0.0 ? 0.0 : as[b.a].t;
  res.t_b = b.tb;
  res.t_sum = b.t;
  return res;
}

struct FrontierPoint {
  double angle_deg = 0.0;
  double radius = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
};

/// True when some operating point of the scheme keeps both users' error
/// probabilities within the threshold.
inline bool meets_threshold(Scheme scheme, double r1, double r2, int blocklength, double threshold,
                            const ExplorerConfig& cfg) {
  const SchemeOutcome o = optimize_scheme(scheme, r1, r2, blocklength, cfg);
  return std::any_of(o.candidates.begin(), o.candidates.end(),
                     [&](const Candidate& c) { return c.eval.errors.max_user() <= threshold; });
}

/// Error-constrained rate region: per angle, bisection on the radius of
/// the largest target pair that meets the threshold, within [0, capacity
/// pentagon radius].
inline std::vector<FrontierPoint> rate_region(Scheme scheme, DecodingOrder order, const RegionSpec& region,
                                              int blocklength, const ExplorerConfig& base) {
  region.validate();
  ExplorerConfig cfg = base;
  cfg.order = order;
  cfg.validate();
  const auto angles = region.angles();
  const CapacityPentagon pent = capacity_pentagon(cfg.channel, cfg.budget);
  std::vector<FrontierPoint> out(angles.size());
  parallel_for(angles.size(), cfg.jobs, [&](std::size_t i) {
    const double angle = angles[i];
    const auto [c, s] = polar_rates(1.0, angle);
    double lo = 0.0;
    double hi = pent.radius_along(c, s);
    while (hi - lo > region.radius_tolerance) {
      const double mid = 0.5 * (lo + hi);
      const auto [r1, r2] = polar_rates(mid, angle);
      (meets_threshold(scheme, r1, r2, blocklength, region.eps_threshold, cfg) ? lo : hi) = mid;
    }
    const auto [r1, r2] = polar_rates(lo, angle);
    out[i] = {angle, lo, r1, r2};
  });
  return out;
}

}  // namespace rsfbl

#endif  // RSFBL_EXPLORER_HPP
