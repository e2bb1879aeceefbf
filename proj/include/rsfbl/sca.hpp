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

/// \file sca.hpp
/// Successive convex approximation over the powers at fixed beta, and the
/// outer one-dimensional search over beta.

#ifndef RSFBL_SCA_HPP
#define RSFBL_SCA_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "rsfbl/error.hpp"
#include "rsfbl/lp.hpp"
#include "rsfbl/mac.hpp"
#include "rsfbl/subproblem.hpp"

namespace rsfbl {

struct ScaConfig {
  double tol = 1e-5;
  int max_iters = 100;
  double beta_step = 0.02;
  /// Halvings tried by the line search before a step is rejected.
  int max_backtracks = 20;
  LpOptions lp;

  void validate() const {
    if (!(tol > 0.0)) throw invalid_input("sca tol must be > 0");
    if (max_iters < 1) throw invalid_input("sca max_iters must be >= 1");
    if (!(beta_step > 0.0 && beta_step < 1.0)) throw invalid_input("beta_step must lie in (0, 1)");
    if (max_backtracks < 0) throw invalid_input("max_backtracks must be >= 0");
  }
};

enum class ScaStatus { converged, max_iters, infeasible };

inline std::string_view to_string(ScaStatus s) {
  switch (s) {
    case ScaStatus::converged: return "converged";
    case ScaStatus::max_iters: return "max_iters";
    case ScaStatus::infeasible: return "infeasible";
  }
  return "?";
}

struct ScaIterate {
  int iteration = 0;
  /// Optimal value of the linear program solved at this iteration.
  double lp_objective = 0.0;
  /// Accepted step length along the LP direction (0 when rejected).
  double step = 0.0;
  /// True TP at the accepted point.
  double t = 0.0;
  SubproblemPoint point;
};

struct ScaTrace {
  SubproblemPoint initial;
  std::vector<ScaIterate> iterates;
  ScaStatus status = ScaStatus::converged;

  const SubproblemPoint& final_point() const {
    return iterates.empty() ? initial : iterates.back().point;
  }
  double final_tp() const { return final_point().t; }
};

namespace detail {

inline std::array<double, 3> pinned_powers(const SplitProblem& p, std::array<double, 3> pw) {
  if (p.first_off) pw[power_index(Slot::k1)] = 0.0;
  if (p.second_off) pw[power_index(Slot::k2)] = 0.0;
  return pw;
}

/// Smallest powers with every active slot at (1 + mu) times its threshold
/// SINR, filled in backwards along the chain. Empty if over budget.
inline std::optional<std::array<double, 3>> scaled_min_power(const SplitProblem& p, double mu) {
  const auto order = chain_slots(p.order);
  std::array<double, 3> pw{};
  double later = 0.0;
  for (std::size_t m = 3; m-- > 0;) {
    const Slot s = order[m];
    if (!p.slot_active(s)) continue;
    if (p.slot_pinned(s)) return std::nullopt;
    const double need = min_sinr_for_rate(p.slot_rate(s)) * (1.0 + mu);
    const double power = need * (later + p.channel.noise_var) / p.slot_gain(s);
    pw[power_index(s)] = power;
    later += power * p.slot_gain(s);
  }
  const double split_sum = pw[0] + pw[1];
  if (!(split_sum <= p.budget) || !(pw[2] <= p.budget)) return std::nullopt;
  return pw;
}

}  // namespace detail

/// Starting point: (P_t/2, P_t/2, P_t) with switched-off streams at 0 and
/// their partner at P_t. If that misses a rate threshold, the point of
/// largest uniform SINR margin over the thresholds is used instead.
/// Throws infeasible_target when no point meets every threshold.
inline SubproblemPoint initialize(const SplitProblem& p) {
  p.validate();
  std::array<double, 3> pw{0.5 * p.budget, 0.5 * p.budget, p.budget};
  if (p.first_off) pw = {0.0, p.budget, p.budget};
  if (p.second_off) pw = {p.budget, 0.0, p.budget};
  if (rate_feasible(p, pw)) return consistent_point(p, pw);

  auto base = detail::scaled_min_power(p, 0.0);
  if (!base || !rate_feasible(p, *base)) throw infeasible_target("no power allocation meets the target rates");
  double lo = 0.0;
  double hi = 1.0;
  while (hi < 1e12 && detail::scaled_min_power(p, hi)) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (detail::scaled_min_power(p, mid) ? lo : hi) = mid;
  }
  const auto best = detail::scaled_min_power(p, lo);
  return consistent_point(p, best && rate_feasible(p, *best) ? *best : *base);
}

/// SCA from `start`. Each iteration solves the LP around the current
/// point, then backtracks along the LP direction until the true TP does
/// not increase and every threshold still holds. The reference point of
/// the next iteration is re-projected onto the exact SINRs and errors.
inline ScaTrace run_sca(const SplitProblem& p, const SubproblemPoint& start, const ScaConfig& cfg = {}) {
  cfg.validate();
  ScaTrace trace;
  trace.initial = start;
  SubproblemPoint cur = start;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const LpSolution sol = solve_lp(build_subproblem(p, cur), cfg.lp);
    if (sol.status != LpStatus::optimal) {
      trace.status = ScaStatus::converged;
      return trace;
    }
    const auto target = detail::pinned_powers(p, point_from_lp(sol.x).powers);

    std::optional<SubproblemPoint> next;
    double alpha = 1.0;
    for (int b = 0; b <= cfg.max_backtracks; ++b, alpha *= 0.5) {
      std::array<double, 3> pw;
      for (std::size_t i = 0; i < 3; ++i) pw[i] = cur.powers[i] + alpha * (target[i] - cur.powers[i]);
      const PowerAllocation fit = project_to_budget(p.allocation(detail::pinned_powers(p, pw)));
      pw = {fit.p_split_1, fit.p_split_2, fit.p_other};
      if (!rate_feasible(p, pw)) continue;
      SubproblemPoint cand = consistent_point(p, pw);
      if (cand.t <= cur.t) {
        next = cand;
        break;
      }
    }
    if (!next) {
      trace.status = ScaStatus::converged;
      return trace;
    }
    const double delta = std::abs(next->t - cur.t);
    trace.iterates.push_back({it, sol.objective, alpha, next->t, *next});
    cur = *next;
    if (delta <= cfg.tol) {
      trace.status = ScaStatus::converged;
      return trace;
    }
  }
  trace.status = ScaStatus::max_iters;
  return trace;
}

/// SCA from initialize(p); status infeasible (and no iterates) when no
/// point meets the rate thresholds.
inline ScaTrace run_sca(const SplitProblem& p, const ScaConfig& cfg = {}) {
  std::optional<SubproblemPoint> start;
  try {
    start = initialize(p);
  } catch (const infeasible_target&) {
    ScaTrace tr;
    tr.status = ScaStatus::infeasible;
    return tr;
  }
  return run_sca(p, *start, cfg);
}

/// One evaluated operating point of a scheme.
struct Candidate {
  double beta = 1.0;
  PowerAllocation powers;
  Evaluation eval;
  ScaStatus status = ScaStatus::converged;
  int iterations = 0;
  /// Taken from a supplied seed rather than from a run started at the
  /// default initial point.
  bool seeded = false;
  /// Iterations of the run that produced this point (empty for points
  /// taken as is).
  ScaTrace trace;
};

/// Operating point supplied from outside (e.g. a NOMA optimum mapped
/// into the RSMA parameterization).
struct Seed {
  double beta = 1.0;
  PowerAllocation powers;
  ScaStatus status = ScaStatus::converged;
};

struct BetaSearchResult {
  Candidate best;
  std::vector<Candidate> candidates;
  /// Grid values that were attempted, feasible or not.
  std::vector<double> explored_betas;
};

/// beta values visited by the outer search: 0, delta, 2 delta, ... and 1.
inline std::vector<double> beta_grid(double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor(1.0 / step + 1e-9));
  for (int k = 0; k <= n; ++k) out.push_back(std::min(1.0, k * step));
  if (out.back() < 1.0) out.push_back(1.0);
  return out;
}

/// Runs SCA on a scheme's problem from its default starting point.
/// Throws infeasible_target when the target rates cannot be met.
inline Candidate optimize_fixed(Scheme scheme, DecodingOrder order, const ChannelState& ch, double budget,
                                double r1, double r2, double beta, const FblParams& fbl,
                                const ScaConfig& cfg = {}) {
  const SplitProblem p = SplitProblem::for_scheme(scheme, order, ch, budget, r1, r2, beta, fbl);
  ScaTrace tr = run_sca(p, cfg);
  if (tr.status == ScaStatus::infeasible) throw infeasible_target("no power allocation meets the target rates");
  const auto fp = tr.final_point();
  return {p.beta, p.allocation(fp.powers), evaluate_point(p, fp.powers), tr.status,
          static_cast<int>(tr.iterates.size()), false, std::move(tr)};
}

/// Power-only optimization of a NOMA scheme.
inline Candidate optimize_noma(Scheme scheme, const ChannelState& ch, double budget, double r1, double r2,
                               const FblParams& fbl, const ScaConfig& cfg = {}) {
  if (is_rsma(scheme)) throw invalid_input("optimize_noma expects a NOMA scheme");
  return optimize_fixed(scheme, DecodingOrder::i, ch, budget, r1, r2, 1.0, fbl, cfg);
}

/// Maps a NOMA operating point into the RSMA scheme's parameterization when
/// the RSMA decoding order can reproduce the NOMA decoding order with one
/// split stream switched off.
inline std::optional<Seed> embed_noma(Scheme noma, const PowerAllocation& pw, Scheme rsma, DecodingOrder order,
                                      ScaStatus status = ScaStatus::converged) {
  const User k = split_user(rsma);
  const User first = noma == Scheme::noma1 ? User::one : User::two;
  const double pk = k == User::one ? pw.p_split_1 + pw.p_split_2 : pw.p_other;
  const double pj = k == User::one ? pw.p_other : pw.p_split_1 + pw.p_split_2;
  // Keeping s_{k,1} (beta = 1) puts k at slot k1, keeping s_{k,2} at k2.
  for (const bool keep_first : {true, false}) {
    const Slot ks = keep_first ? Slot::k1 : Slot::k2;
    const auto slots = chain_slots(order);
    std::size_t pos_k = 0;
    std::size_t pos_j = 0;
    for (std::size_t m = 0; m < 3; ++m) {
      if (slots[m] == ks) pos_k = m;
      if (slots[m] == Slot::j) pos_j = m;
    }
    if ((pos_k < pos_j) != (first == k)) continue;
    Seed s;
    s.beta = keep_first ? 1.0 : 0.0;
    s.powers = {keep_first ? pk : 0.0, keep_first ? 0.0 : pk, pj, pw.budget};
    s.status = status;
    return s;
  }
  return std::nullopt;
}

namespace detail {

inline bool better(const Candidate& a, const Candidate& b) {
  if (a.eval.sum != b.eval.sum) return a.eval.sum > b.eval.sum;
  return a.beta < b.beta;
}

}  // namespace detail

/// NOMA optima of both decoding orders, embedded into `scheme` where its
/// decoding order can reproduce them. Infeasible NOMA targets are skipped.
inline std::vector<Seed> noma_seeds(Scheme scheme, DecodingOrder order, const ChannelState& ch, double budget,
                                    double r1, double r2, const FblParams& fbl, const ScaConfig& cfg = {}) {
  std::vector<Seed> out;
  for (Scheme noma : {Scheme::noma1, Scheme::noma2}) {
    try {
      const Candidate c = optimize_noma(noma, ch, budget, r1, r2, fbl, cfg);
      if (auto s = embed_noma(noma, c.powers, scheme, order, c.status)) out.push_back(*s);
    } catch (const infeasible_target&) {
    }
  }
  return out;
}

/// Outer search over beta for an RSMA scheme. Every grid value gets an SCA
/// run from the default start; every seed is evaluated as is and used as a
/// warm start at its own beta. Without explicit seeds the NOMA optima are
/// used. The best candidate maximizes the sum throughput, ties going to
/// the smaller beta. Throws infeasible_target when no candidate exists.
inline BetaSearchResult optimize_beta(Scheme scheme, DecodingOrder order, const ChannelState& ch, double budget,
                                      double r1, double r2, const FblParams& fbl, const ScaConfig& cfg = {},
                                      std::optional<std::vector<Seed>> seeds = std::nullopt) {
  if (!is_rsma(scheme)) throw invalid_input("optimize_beta expects an RSMA scheme");
  cfg.validate();
  if (!seeds) seeds = noma_seeds(scheme, order, ch, budget, r1, r2, fbl, cfg);
  BetaSearchResult out;
  for (const Seed& s : *seeds) {
    const SplitProblem p = SplitProblem::for_scheme(scheme, order, ch, budget, r1, r2, s.beta, fbl);
    const std::array<double, 3> pw{s.powers.p_split_1, s.powers.p_split_2, s.powers.p_other};
    out.candidates.push_back({s.beta, p.allocation(pw), evaluate_point(p, pw), s.status, 0, true, {}});
    if (!rate_feasible(p, pw)) continue;
    ScaTrace tr = run_sca(p, consistent_point(p, pw), cfg);
    const auto fp = tr.final_point();
    out.candidates.push_back({s.beta, p.allocation(fp.powers), evaluate_point(p, fp.powers), tr.status,
                              static_cast<int>(tr.iterates.size()), true, std::move(tr)});
  }
  out.explored_betas = beta_grid(cfg.beta_step);
  for (double beta : out.explored_betas) {
    try {
      out.candidates.push_back(optimize_fixed(scheme, order, ch, budget, r1, r2, beta, fbl, cfg));
    } catch (const infeasible_target&) {
    }
  }
  if (out.candidates.empty()) throw infeasible_target("no rate-allocation factor admits the target rates");
  out.best = out.candidates.front();
  for (const Candidate& c : out.candidates)
    if (detail::better(c, out.best)) out.best = c;
  return out;
}

}  // namespace rsfbl

#endif  // RSFBL_SCA_HPP
