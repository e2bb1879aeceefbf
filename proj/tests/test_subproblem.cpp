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

#include <random>

#include "oracles.hpp"
#include "rsfbl/sca.hpp"
#include "rsfbl/subproblem.hpp"

namespace {

using namespace rsfbl;

const ChannelState unit{1.0, 1.0, 1.0};

FblParams at(int n) {
  FblParams p;
  p.blocklength = n;
  return p;
}

TEST(Bilinear, Anchors) {
  const auto zero = linearize_bilinear(0.0, 0.0);
  EXPECT_EQ(zero.coeffs[0], 0.0);
  EXPECT_EQ(zero.coeffs[1], 0.0);
  EXPECT_EQ(zero.constant, 0.0);
  const auto f = linearize_bilinear(0.1, 0.2);
  EXPECT_NEAR(f({0.1, 0.2}), 0.02, 1e-15);
  EXPECT_NEAR(f({0.3, 0.4}), 0.08, 1e-15);
  EXPECT_LE(f({0.3, 0.4}), 0.3 * 0.4);
}

TEST(Bilinear, GapIsProductOfDeviations) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a0 = u(rng), b0 = u(rng), a = u(rng), b = u(rng);
    const auto f = linearize_bilinear(a0, b0);
    EXPECT_NEAR(a * b - f({a, b}), (a - a0) * (b - b0), 1e-14);
    EXPECT_NEAR(f({a0, b0}), a0 * b0, 1e-15);
  }
}

// Under-estimation holds where both deviations share a sign; the sampled
// box is each orthant cell above and below the reference.
TEST(Bilinear, LowerBoundOnAgreeingOrthants) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a0 = u(rng), b0 = u(rng);
    const auto f = linearize_bilinear(a0, b0);
    const double up_a = a0 + (1 - a0) * u(rng), up_b = b0 + (1 - b0) * u(rng);
    EXPECT_LE(f({up_a, up_b}), up_a * up_b + 1e-15);
    const double lo_a = a0 * u(rng), lo_b = b0 * u(rng);
    EXPECT_LE(f({lo_a, lo_b}), lo_a * lo_b + 1e-15);
  }
}

TEST(Trilinear, Anchors) {
  const auto zero = linearize_trilinear({0.0, 0.0, 0.0});
  EXPECT_EQ(zero({0.4, 0.5, 0.6}), 0.0);
  const auto f = linearize_trilinear({0.1, 0.2, 0.3});
  EXPECT_NEAR(f({0.1, 0.2, 0.3}), 0.006, 1e-15);
  EXPECT_NEAR(f({0.2, 0.2, 0.3}), 0.012, 1e-15);
}

TEST(Trilinear, TangencyAndUpperOrthantLowerBound) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const std::array<double, 3> r{u(rng), u(rng), u(rng)};
    const auto f = linearize_trilinear(r);
    EXPECT_NEAR(f(r), r[0] * r[1] * r[2], 1e-15);
    std::array<double, 3> x;
    for (int k = 0; k < 3; ++k) x[k] = r[k] + (1 - r[k]) * u(rng);
    EXPECT_LE(f(x), x[0] * x[1] * x[2] + 1e-15);
  }
}

TEST(QTangent, AnchorAndSlope) {
  const auto t = linearize_q(3.0, 0.5, at(500));
  EXPECT_EQ(t(3.0), q_function(q_argument(3.0, 0.5, at(500))));
  EXPECT_NEAR(t.value, 6.0331268874065052e-16, 1e-27);
  EXPECT_LT(t.slope, 0.0);
  const auto eps = [](double x) { return q_function(q_argument(x, 0.5, at(500))); };
  const double fd = oracle::derivative(eps, 3.0, 1e-5);
  EXPECT_LT(std::abs(t.slope - fd) / std::abs(fd), 1e-6);
}

TEST(QTangent, SlopeGridAgainstCentralDifferences) {
  for (int n : {250, 500, 1500, 2500})
    for (double r : {0.1, 0.45, 0.9, 1.3})
      for (double f : {1.0, 1.05, 1.3, 2.0, 3.0}) {
        const double rho = min_sinr_for_rate(r) * f;
        const auto t = linearize_q(rho, r, at(n));
        EXPECT_LE(t.slope, 0.0);
        const auto eps = [&](double x) { return q_function(q_argument(x, r, at(n))); };
        const double fd = oracle::derivative(eps, rho, 1e-6 * rho);
        if (std::abs(fd) < 1e-250) continue;
        EXPECT_LT(std::abs(t.slope - fd) / std::abs(fd), 1e-6) << n << " " << r << " " << f;
      }
}

TEST(QTangent, Preconditions) {
  EXPECT_THROW(linearize_q(0.0, 0.5, at(500)), rsfbl::domain_error);
  EXPECT_THROW(linearize_q(0.5, 0.5, at(500)), rsfbl::domain_error);  // below threshold 1
  EXPECT_NO_THROW(linearize_q(min_sinr_for_rate(0.5), 0.5, at(500)));
}

// Independent first-order expansion of the exact TP polynomial by central
// differences (exact up to rounding, since TP is multilinear).
double tp_exact(const SplitProblem& p, const std::array<double, 3>& th) {
  const auto order = chain_slots(p.order);
  std::vector<oracle::real> eps;
  std::vector<int> owner;
  for (Slot s : order) {
    eps.push_back(th[slot_index(s)]);
    owner.push_back(index_of(p.slot_owner(s)));
  }
  const auto e = oracle::user_errors_ref(eps, owner);
  return static_cast<double>(p.r1 * e[0] + p.r2 * e[1]);
}

TEST(TpSurrogate, MatchesIndependentTaylorExpansion) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (Scheme s : {Scheme::rsma1, Scheme::rsma2})
    for (DecodingOrder o : {DecodingOrder::i, DecodingOrder::ii, DecodingOrder::iii})
      for (int i = 0; i < 100; ++i) {
        const auto p = SplitProblem::for_scheme(s, o, unit, 10, 1.5 * u(rng), 1.5 * u(rng), u(rng), at(500));
        const std::array<double, 3> ref{u(rng), u(rng), u(rng)};
        const std::array<double, 3> x{u(rng), u(rng), u(rng)};
        const auto f = tp_surrogate(p, ref);
        double lin = tp_exact(p, ref);
        for (int k = 0; k < 3; ++k) {
          auto g = [&](double v) {
            auto y = ref;
            y[k] = v;
            return tp_exact(p, y);
          };
          lin += oracle::derivative(g, ref[k], 1e-3) * (x[k] - ref[k]);
        }
        EXPECT_NEAR(f(x), lin, 1e-9);
        EXPECT_NEAR(f(ref), tp_exact(p, ref), 1e-12);
      }
}

TEST(BuildSubproblem, BoundsForFullSplitAndCapacity) {
  const auto p = SplitProblem::for_scheme(Scheme::rsma1, DecodingOrder::i, unit, 10, 0.4, 0.4, 1.0, at(500));
  const auto ref = initialize(p);
  const auto lp = build_subproblem(p, ref);
  EXPECT_EQ(lp.lower[var::rho(Slot::k2)], 0.0);
  EXPECT_EQ(lp.upper[var::theta(Slot::k2)], 0.0);
  EXPECT_NEAR(lp.lower[var::rho(Slot::k1)], min_sinr_for_rate(0.4), 1e-15);
  EXPECT_EQ(lp.upper[var::power(Slot::j)], 10.0);

  const double cap = capacity_term(10.0);
  const auto bad = SplitProblem::for_scheme(Scheme::rsma1, DecodingOrder::i, unit, 10, 0.4, cap + 0.01, 0.5, at(500));
  EXPECT_THROW(build_subproblem(bad, ref), infeasible_target);
}

TEST(BuildSubproblem, ModerateTargetStepImproves) {
  const double r = 0.8 * std::sqrt(0.5);
  const auto p = SplitProblem::for_scheme(Scheme::rsma1, DecodingOrder::i, unit, 10, r, r, 0.5, at(500));
  const auto ref = initialize(p);
  const auto lp = build_subproblem(p, ref);
  const auto sol = solve_lp(lp);
  ASSERT_EQ(sol.status, LpStatus::optimal);
  EXPECT_LT(sol.objective, ref.t);
  const auto tr = run_sca(p, ref);
  ASSERT_FALSE(tr.iterates.empty());
  EXPECT_LT(tr.iterates.front().t, ref.t);

  // The text dump reproduces the same optimum.
  const auto again = solve_lp(parse_lp_text(to_text(lp)));
  EXPECT_EQ(again.objective, sol.objective);
}

TEST(BuildSubproblem, ReferenceIsFeasibleForItsOwnLp) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const double r1 = 0.9 * u(rng), r2 = 0.9 * u(rng), beta = u(rng);
    const auto p = SplitProblem::for_scheme(Scheme::rsma1, DecodingOrder::i, unit, 10, r1, r2, beta, at(500));
    SubproblemPoint ref;
    try {
      ref = initialize(p);
    } catch (const infeasible_target&) {
      continue;
    }
    const auto lp = build_subproblem(p, ref);
    std::vector<double> x(var::count, 0.0);
    for (Slot s : all_slots) {
      x[var::power(s)] = ref.powers[power_index(s)];
      x[var::rho(s)] = ref.rhos[slot_index(s)];
      x[var::theta(s)] = ref.thetas[slot_index(s)];
    }
    x[var::t] = ref.t;
    for (const auto& c : lp.constraints) {
      double lhs = 0.0;
      for (std::size_t k = 0; k < x.size(); ++k) lhs += c.coeffs[k] * x[k];
      // The exact rate rows are tightened by a relative 1e-7.
      EXPECT_LE(lhs, c.bound + 1e-6 * (1.0 + std::abs(c.bound))) << i;
    }
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

}  // namespace
