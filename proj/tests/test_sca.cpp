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

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "rsfbl/sca.hpp"

namespace {

using namespace rsfbl;

const ChannelState unit{1.0, 1.0, 1.0};

FblParams at(int n) {
  FblParams p;
  p.blocklength = n;
  return p;
}

double polar(double radius, double deg, bool second) {
  const double a = deg * 3.14159265358979323846 / 180.0;
  return radius * (second ? std::sin(a) : std::cos(a));
}

TEST(Initialize, DefaultPointAndReferenceSinrs) {
  const auto p = SplitProblem::for_scheme(Scheme::rsma1, DecodingOrder::i, unit, 10, 0.1, 0.1, 0.5, at(500));
  const auto x = initialize(p);
  EXPECT_EQ(x.powers[0], 5.0);
  EXPECT_EQ(x.powers[1], 5.0);
  EXPECT_EQ(x.powers[2], 10.0);
  EXPECT_NEAR(x.rhos[slot_index(Slot::k1)], 5.0 / 16.0, 1e-15);
  EXPECT_NEAR(x.rhos[slot_index(Slot::j)], 10.0 / 6.0, 1e-15);
  EXPECT_NEAR(x.rhos[slot_index(Slot::k2)], 5.0, 1e-15);
  EXPECT_NEAR(x.t, evaluate_point(p, x.powers).tp, 1e-15);
}

TEST(Initialize, FallsBackWhenDefaultIsRateInfeasible) {
  const double r = polar(1.4, 45, false);
  const auto p = SplitProblem::for_scheme(Scheme::rsma1, DecodingOrder::i, unit, 10, r, r, 0.5, at(500));
  EXPECT_FALSE(rate_feasible(p, {5, 5, 10}));
  const auto x = initialize(p);
  EXPECT_TRUE(rate_feasible(p, x.powers));
  EXPECT_LE(x.powers[0] + x.powers[1], 10.0);
  EXPECT_LE(x.powers[2], 10.0);
}

TEST(Sca, BeyondCapacityIsInfeasible) {
  const double cap = capacity_term(10.0);
  const auto p = SplitProblem::for_scheme(Scheme::rsma1, DecodingOrder::i, unit, 10, 0.3, cap + 0.05, 0.5, at(500));
  EXPECT_THROW(initialize(p), infeasible_target);
  const auto tr = run_sca(p);
  EXPECT_EQ(tr.status, ScaStatus::infeasible);
  EXPECT_TRUE(tr.iterates.empty());
  EXPECT_THROW(optimize_beta(Scheme::rsma1, DecodingOrder::i, unit, 10, 0.3, cap + 0.05, at(500)), infeasible_target);
}

TEST(Sca, ModerateTargetConverges) {
  const double r = polar(0.8, 45, false);
  const auto p = SplitProblem::for_scheme(Scheme::rsma1, DecodingOrder::i, unit, 10, r, r, 0.5, at(500));
  const auto tr = run_sca(p);
  EXPECT_EQ(tr.status, ScaStatus::converged);
  EXPECT_LE(static_cast<int>(tr.iterates.size()), 100);
  EXPECT_LT(tr.final_tp(), tr.initial.t);
}

void expect_monotone_and_consistent(const SplitProblem& p, const ScaTrace& tr) {
  double prev = tr.initial.t;
  for (const auto& it : tr.iterates) {
    EXPECT_LE(it.t, prev + 1e-12);
    prev = it.t;
    EXPECT_NO_THROW(p.allocation(it.point.powers).validate());
    EXPECT_TRUE(rate_feasible(p, it.point.powers));
    EXPECT_NEAR(it.t, evaluate_point(p, it.point.powers).tp, 1e-12 * (1 + it.t));
    // The true point satisfies the original (unlinearized) SINR and error
    // constraints by construction of the iterate.
    const auto g = slot_sinrs(p, it.point.powers);
    for (Slot s : all_slots) {
      if (!p.slot_active(s)) continue;
      EXPECT_LE(it.point.rhos[slot_index(s)], g[slot_index(s)] * (1 + 1e-12));
      const double eps = stream_error_prob(StreamSnr(g[slot_index(s)]), p.slot_rate(s), p.fbl);
      EXPECT_GE(it.point.thetas[slot_index(s)], eps * (1 - 1e-12));
    }
  }
}

TEST(Sca, TrueObjectiveNeverIncreasesOverGrid) {
  int runs = 0, steps = 0;
  for (Scheme s : {Scheme::rsma1, Scheme::rsma2})
    for (DecodingOrder o : {DecodingOrder::i, DecodingOrder::ii, DecodingOrder::iii})
      for (double radius : {0.8, 1.2})
        for (double ang : {20.0, 45.0, 70.0})
          for (double beta : {0.0, 0.3, 0.7, 1.0}) {
            const auto p = SplitProblem::for_scheme(s, o, unit, 10, polar(radius, ang, false),
                                                    polar(radius, ang, true), beta, at(500));
            const auto tr = run_sca(p);
            if (tr.status == ScaStatus::infeasible) continue;
            expect_monotone_and_consistent(p, tr);
            ++runs;
            steps += static_cast<int>(tr.iterates.size());
          }
  EXPECT_GT(runs, 60);
  EXPECT_GT(steps, runs);
}

TEST(BetaSearch, GridSizeAndValues) {
  for (double step : {0.5, 0.25, 0.2, 0.1, 0.02}) {
    const auto g = beta_grid(step);
    EXPECT_EQ(g.size(), static_cast<std::size_t>(std::floor(1 / step + 1e-9)) + 1) << step;
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 1.0);
  }
  EXPECT_EQ(beta_grid(0.3), (std::vector<double>{0.0, 0.3, 0.6, 0.8999999999999999, 1.0}));
  ScaConfig cfg;
  cfg.beta_step = 1.0;
  EXPECT_THROW(cfg.validate(), invalid_input);
  cfg.beta_step = 0.0;
  EXPECT_THROW(cfg.validate(), invalid_input);
}

TEST(BetaSearch, ExploresConfiguredGrid) {
  ScaConfig cfg;
  cfg.beta_step = 0.5;
  const double r = polar(0.8, 45, false);
  const auto res = optimize_beta(Scheme::rsma1, DecodingOrder::i, unit, 10, r, r, at(500), cfg);
  EXPECT_EQ(res.explored_betas, (std::vector<double>{0.0, 0.5, 1.0}));
  int unseeded = 0;
  for (const auto& c : res.candidates) unseeded += !c.seeded;
  EXPECT_EQ(unseeded, 3);
}

TEST(BetaSearch, NeverWorseThanNoma) {
  for (double radius : {0.8, 1.2, 1.4})
    for (double ang : {10.0, 30.0, 45.0, 60.0, 80.0}) {
      const double r1 = polar(radius, ang, false), r2 = polar(radius, ang, true);
      double noma_best = -1;
      for (Scheme n : {Scheme::noma1, Scheme::noma2}) {
        try {
          noma_best = std::max(noma_best, optimize_noma(n, unit, 10, r1, r2, at(500)).eval.sum);
        } catch (const infeasible_target&) {
        }
      }
      for (Scheme s : {Scheme::rsma1, Scheme::rsma2}) {
        double best = -1;
        try {
          best = optimize_beta(s, DecodingOrder::i, unit, 10, r1, r2, at(500)).best.eval.sum;
        } catch (const infeasible_target&) {
        }
        EXPECT_GE(best, noma_best - 1e-12) << radius << " " << ang;
      }
    }
}

TEST(BetaSearch, TiesGoToSmallerBeta) {
  Candidate a, b;
  a.eval.sum = b.eval.sum = 1.0;
  a.beta = 0.2;
  b.beta = 0.6;
  EXPECT_TRUE(detail::better(a, b));
  EXPECT_FALSE(detail::better(b, a));
  b.eval.sum = 1.0 + 1e-15;
  EXPECT_TRUE(detail::better(b, a));
}

TEST(BetaSearch, DeterministicAcrossRuns) {
  const double r1 = polar(1.2, 30, false), r2 = polar(1.2, 30, true);
  const auto a = optimize_beta(Scheme::rsma1, DecodingOrder::i, unit, 10, r1, r2, at(500));
  const auto b = optimize_beta(Scheme::rsma1, DecodingOrder::i, unit, 10, r1, r2, at(500));
  EXPECT_EQ(a.best.eval.sum, b.best.eval.sum);
  EXPECT_EQ(a.best.beta, b.best.beta);
  EXPECT_EQ(a.best.powers.p_split_1, b.best.powers.p_split_1);
  EXPECT_EQ(a.best.powers.p_other, b.best.powers.p_other);
}

TEST(EmbedNoma, ReproducesNomaEvaluation) {
  const double r1 = polar(0.8, 30, false), r2 = polar(0.8, 30, true);
  for (Scheme n : {Scheme::noma1, Scheme::noma2}) {
    const Candidate c = optimize_noma(n, unit, 10, r1, r2, at(500));
    for (Scheme s : {Scheme::rsma1, Scheme::rsma2}) {
      const auto seed = embed_noma(n, c.powers, s, DecodingOrder::i);
      ASSERT_TRUE(seed.has_value());
      const auto eval = evaluate(s, DecodingOrder::i, unit, seed->powers, {r1, r2, seed->beta}, at(500));
      EXPECT_NEAR(eval.sum, c.eval.sum, 1e-12);
      EXPECT_NEAR(eval.errors.user1, c.eval.errors.user1, 1e-15);
      EXPECT_NEAR(eval.errors.user2, c.eval.errors.user2, 1e-15);
    }
  }
  // Order iii decodes j first, so only the NOMA order with the other user
  // first is reachable.
  const Candidate c = optimize_noma(Scheme::noma1, unit, 10, r1, r2, at(500));
  EXPECT_FALSE(embed_noma(Scheme::noma1, c.powers, Scheme::rsma1, DecodingOrder::iii).has_value());
  EXPECT_TRUE(embed_noma(Scheme::noma1, c.powers, Scheme::rsma2, DecodingOrder::iii).has_value());
}

TEST(BetaSearch, CostGrowsWithGridSize) {
  const double r1 = polar(1.2, 45, false), r2 = polar(1.2, 45, true);
  auto time = [&](double step) {
    ScaConfig cfg;
    cfg.beta_step = step;
    double best = 1e300;
    for (int rep = 0; rep < 7; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      optimize_beta(Scheme::rsma1, DecodingOrder::i, unit, 10, r1, r2, at(500), cfg, std::vector<Seed>{});
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
  };
  time(0.1);
  const double coarse = time(0.05);
  const double fine = time(0.01);
  // 21 versus 101 SCA runs.
  EXPECT_GT(fine / coarse, 1.5);
  EXPECT_LT(fine / coarse, 20.0);
}

}  // namespace
