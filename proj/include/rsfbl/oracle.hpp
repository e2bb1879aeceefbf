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

/// \file oracle.hpp
/// Brute-force reference optimizer: exhaustive grid over (beta, powers)
/// with local refinement, plus the seeded random instance generator used to
/// benchmark the SCA solver against it.

#ifndef RSFBL_ORACLE_HPP
#define RSFBL_ORACLE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "rsfbl/error.hpp"
#include "rsfbl/mac.hpp"
#include "rsfbl/sca.hpp"

namespace rsfbl {

enum class GridScale { linear };

struct GridSpec {
  GridScale scale = GridScale::linear;
  int power_points = 41;
  int beta_points = 21;
  int refine_levels = 1;
  std::size_t max_evaluations = 2'000'000;
  /// Explicit beta values; overrides beta_points when non-empty.
  std::vector<double> betas;

  void validate() const {
    if (power_points < 2) throw invalid_input("oracle power_points must be >= 2");
    if (beta_points < 2) throw invalid_input("oracle beta_points must be >= 2");
    if (refine_levels < 0) throw invalid_input("oracle refine_levels must be >= 0");
    for (double b : betas)
      if (!(b >= 0.0 && b <= 1.0)) throw invalid_input("oracle betas must lie in [0, 1]");
  }

  std::vector<double> beta_values() const {
    if (!betas.empty()) return betas;
    std::vector<double> out;
    for (int b = 0; b < beta_points; ++b) out.push_back(static_cast<double>(b) / (beta_points - 1));
    return out;
  }
};

struct OraclePoint {
  double beta = 1.0;
  PowerAllocation powers;

  auto key() const { return std::tuple(beta, powers.p_split_1, powers.p_split_2, powers.p_other); }
};

struct OracleResult {
  OraclePoint point;
  Evaluation eval;
  std::size_t evaluations = 0;
};

namespace detail {

/// Keeps the best point seen; ties on the sum throughput go to the
/// lexicographically smallest (beta, P_{k,1}, P_{k,2}, P_j), so the result
/// does not depend on the visiting order.
class OracleIncumbent {
 public:
  OracleIncumbent(Scheme scheme, DecodingOrder order, const ChannelState& ch, const RateTarget& base,
                  const FblParams& fbl)
      : scheme_(scheme), order_(order), ch_(ch), base_(base), fbl_(fbl) {}

  void offer(const OraclePoint& pt) {
    RateTarget rt = base_;
    rt.beta = is_rsma(scheme_) ? pt.beta : 1.0;
    Evaluation e = evaluate(scheme_, order_, ch_, pt.powers, rt, fbl_);
    ++count_;
    if (!have_ || e.sum > best_.eval.sum || (e.sum == best_.eval.sum && pt.key() < best_.point.key())) {
      best_ = {pt, std::move(e), 0};
      have_ = true;
    }
  }

  OracleResult result() const {
    if (!have_) throw infeasible_target("oracle grid is empty");
    OracleResult r = best_;
    r.evaluations = count_;
    return r;
  }

 private:
  Scheme scheme_;
  DecodingOrder order_;
  ChannelState ch_;
  RateTarget base_;
  FblParams fbl_;
  OracleResult best_;
  bool have_ = false;
  std::size_t count_ = 0;
};

}  // namespace detail

/// Exhaustive search on a uniform grid. RSMA visits
/// P_{k,1} + P_{k,2} <= P_t (both on the power lattice), every P_j and
/// every beta; NOMA visits (P_1, P_2) only. Then refine_levels rounds of
/// local refinement around the best point.
/// Throws invalid_input when the grid exceeds max_evaluations.
inline OracleResult grid_optimize(Scheme scheme, DecodingOrder order, const ChannelState& ch, double budget,
                                  double r1, double r2, const FblParams& fbl, const GridSpec& grid = {});

/// Local grid of 5 points per coordinate within +-radius of `start`
/// (beta moves by +-radius/budget), repeated `levels` times with the
/// radius halved each time. Never returns a worse point than `start`.
inline OracleResult refine(Scheme scheme, DecodingOrder order, const ChannelState& ch, double budget, double r1,
                           double r2, const FblParams& fbl, const OracleResult& start, double radius, int levels) {
  const RateTarget base{r1, r2, 1.0};
  detail::OracleIncumbent inc(scheme, order, ch, base, fbl);
  inc.offer(start.point);
  OracleResult cur = inc.result();
  const bool rsma = is_rsma(scheme);
  constexpr int half = 2;
  for (int level = 0; level < levels; ++level, radius *= 0.5) {
    const OraclePoint c = cur.point;
    const double h = radius / half;
    const double hb = h / budget;
    for (int db = rsma ? -half : 0; db <= (rsma ? half : 0); ++db) {
      const double beta = std::clamp(c.beta + db * hb, 0.0, 1.0);
      for (int d1 = -half; d1 <= half; ++d1) {
        const double p1 = std::clamp(c.powers.p_split_1 + d1 * h, 0.0, budget);
        for (int d2 = rsma ? -half : 0; d2 <= (rsma ? half : 0); ++d2) {
          const double p2 = rsma ? std::clamp(c.powers.p_split_2 + d2 * h, 0.0, budget) : 0.0;
          if (p1 + p2 > budget * (1.0 + 1e-12)) continue;
          for (int dj = -half; dj <= half; ++dj) {
            const double pj = std::clamp(c.powers.p_other + dj * h, 0.0, budget);
            inc.offer({beta, project_to_budget({p1, p2, pj, budget})});
          }
        }
      }
    }
    cur = inc.result();
  }
  cur.evaluations += start.evaluations;
  return cur;
}

inline OracleResult grid_optimize(Scheme scheme, DecodingOrder order, const ChannelState& ch, double budget,
                                  double r1, double r2, const FblParams& fbl, const GridSpec& grid) {
  grid.validate();
  const bool rsma = is_rsma(scheme);
  const auto betas = rsma ? grid.beta_values() : std::vector<double>{1.0};
  const auto n = static_cast<std::size_t>(grid.power_points);
  const std::size_t split_pairs = rsma ? n * (n + 1) / 2 : n;
  const std::size_t total = betas.size() * split_pairs * n;
  if (total > grid.max_evaluations) throw invalid_input("oracle grid too large for max_evaluations");

  const double h = budget / static_cast<double>(n - 1);
  std::vector<double> levels(n);
  for (std::size_t i = 0; i < n; ++i) levels[i] = i + 1 == n ? budget : static_cast<double>(i) * h;

  const RateTarget base{r1, r2, 1.0};
  detail::OracleIncumbent inc(scheme, order, ch, base, fbl);
  for (double beta : betas)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < (rsma ? n - a : 1); ++b)
        for (std::size_t c = 0; c < n; ++c)
          inc.offer({beta, project_to_budget({levels[a], levels[b], levels[c], budget})});
  OracleResult res = inc.result();
  if (grid.refine_levels > 0) res = refine(scheme, order, ch, budget, r1, r2, fbl, res, h, grid.refine_levels);
  return res;
}

/// Test instance for solver-vs-oracle comparisons.
struct RandomInstance {
  ChannelState channel;
  double budget = 10.0;
  double r1 = 0.0;
  double r2 = 0.0;
  int blocklength = 500;
};

/// Draws `count` instances with gains in [0.5, 2], blocklength from
/// {250, 500, 1500, 2500} and a target at 30-85% of the capacity-region
/// radius along an angle in [10, 80] degrees. Draws are rejected until the
/// RSMA-1 problem admits the target at some beta of the default grid.
inline std::vector<RandomInstance> random_instances(std::uint64_t seed, int count, double budget = 10.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gain(0.5, 2.0);
  std::uniform_real_distribution<double> angle(10.0, 80.0);
  std::uniform_real_distribution<double> frac(0.3, 0.85);
  std::uniform_int_distribution<int> pick(0, 3);
  constexpr std::array<int, 4> lengths{250, 500, 1500, 2500};
  std::vector<RandomInstance> out;
  for (int attempts = 0; static_cast<int>(out.size()) < count; ++attempts) {
    if (attempts > 1000 * count) throw numerical_failure("random_instances: too many rejected draws");
    RandomInstance inst;
    inst.channel = {gain(rng), gain(rng), 1.0};
    inst.budget = budget;
    const double a = angle(rng) * std::numbers::pi / 180.0;
    const double r = frac(rng) * capacity_pentagon(inst.channel, budget).radius_along(std::cos(a), std::sin(a));
    inst.r1 = r * std::cos(a);
    inst.r2 = r * std::sin(a);
    inst.blocklength = lengths[pick(rng)];
    FblParams fbl;
    fbl.blocklength = inst.blocklength;
    bool ok = false;
    for (double beta : beta_grid(ScaConfig{}.beta_step)) {
      try {
        initialize(SplitProblem::for_scheme(Scheme::rsma1, DecodingOrder::i, inst.channel, budget, inst.r1,
                                            inst.r2, beta, fbl));
        ok = true;
        break;
      } catch (const infeasible_target&) {
      }
    }
    if (ok) out.push_back(inst);
  }
  return out;
}

}  // namespace rsfbl

#endif  // RSFBL_ORACLE_HPP
