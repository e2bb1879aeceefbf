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

/// \file subproblem.hpp
/// One convexified power-allocation step. The rate-weighted error
/// TP = r_k eps_k + r_j eps_j is bounded through slack variables
/// (t, theta, rho); its products of thetas, the stream error curves and the
/// SINR ratios are replaced by first-order Taylor forms around a reference
/// point, which leaves a linear program in
///
///   (P_{k,1}, P_{k,2}, P_j, rho_{k,1}, rho_j, rho_{k,2},
///    theta_{k,1}, theta_j, theta_{k,2}, t).
///
/// Streams are addressed by slot (k1, j, k2); the decoding order decides
/// which slot sits at which chain position.

#ifndef RSFBL_SUBPROBLEM_HPP
#define RSFBL_SUBPROBLEM_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "rsfbl/error.hpp"
#include "rsfbl/fbl.hpp"
#include "rsfbl/lp.hpp"
#include "rsfbl/mac.hpp"

namespace rsfbl {

/// c . x + constant.
template <std::size_t N>
struct AffineForm {
  std::array<double, N> coeffs{};
  double constant = 0.0;

  double operator()(const std::array<double, N>& x) const {
    double v = constant;
    for (std::size_t i = 0; i < N; ++i) v += coeffs[i] * x[i];
    return v;
  }
};

/// Tangent of a scalar function, kept in point-slope form so that the value
/// at the reference is reproduced exactly.
struct TangentLine {
  double ref = 0.0;
  double value = 0.0;
  double slope = 0.0;

  double operator()(double x) const { return value + slope * (x - ref); }
};

/// a*b ~ a*b_ref + (b - b_ref)*a_ref.
inline AffineForm<2> linearize_bilinear(double a_ref, double b_ref) {
  return {{b_ref, a_ref}, -a_ref * b_ref};
}

/// a*b*c ~ a*b_ref*c_ref + (b - b_ref)*a_ref*c_ref + (c - c_ref)*a_ref*b_ref.
inline AffineForm<3> linearize_trilinear(const std::array<double, 3>& refs) {
  const auto [a0, b0, c0] = refs;
  return {{b0 * c0, a0 * c0, a0 * b0}, -(b0 * a0 * c0) - (c0 * a0 * b0)};
}

/// Tangent of the (unclamped) stream error probability Q(s(rho)) at
/// rho_ref. Only valid on the branch s(rho_ref) >= 0, where the tail
/// function is convex in its argument.
inline TangentLine linearize_q(double rho_ref, double rate, const FblParams& params) {
  if (!(rho_ref > 0.0) || !std::isfinite(rho_ref))
    throw domain_error("linearize_q: reference SINR must be finite and > 0");
  const double s = q_argument(rho_ref, rate, params);
  if (s < -1e-12) throw domain_error("linearize_q: reference lies outside the s >= 0 branch");
  return {rho_ref, q_function(s), stream_error_slope(rho_ref, rate, params)};
}

enum class Slot : std::size_t { k1 = 0, j = 1, k2 = 2 };

inline constexpr std::array<Slot, 3> all_slots{Slot::k1, Slot::j, Slot::k2};

constexpr std::size_t slot_index(Slot s) { return static_cast<std::size_t>(s); }

/// Index of a slot's power in SubproblemPoint::powers (k1, k2, j).
constexpr std::size_t power_index(Slot s) {
  return s == Slot::k1 ? 0 : (s == Slot::k2 ? 1 : 2);
}

inline std::array<Slot, 3> chain_slots(DecodingOrder order) {
  switch (order) {
    case DecodingOrder::i: return {Slot::k1, Slot::j, Slot::k2};
    case DecodingOrder::ii: return {Slot::k1, Slot::k2, Slot::j};
    case DecodingOrder::iii: return {Slot::j, Slot::k1, Slot::k2};
  }
  return {Slot::k1, Slot::j, Slot::k2};
}

/// Values of all subproblem variables. powers are (P_{k,1}, P_{k,2}, P_j);
/// rhos and thetas are per slot (k1, j, k2).
struct SubproblemPoint {
  std::array<double, 3> powers{};
  std::array<double, 3> rhos{};
  std::array<double, 3> thetas{};
  double t = 0.0;
};

/// Power allocation for one split user with a fixed rate-allocation factor.
/// NOMA is embedded by switching one split stream off (power pinned to 0)
/// with beta at the matching end point.
struct SplitProblem {
  ChannelState channel;
  double budget = 10.0;
  User split = User::one;
  DecodingOrder order = DecodingOrder::i;
  double r1 = 0.0;
  double r2 = 0.0;
  double beta = 0.5;
  bool first_off = false;
  bool second_off = false;
  FblParams fbl;

  /// The problem `scheme` poses at (r1, r2, beta). NOMA schemes ignore
  /// beta and order: noma1 is split user 1 at beta = 1 with s_{1,2} off,
  /// noma2 is beta = 0 with s_{1,1} off, both in order (i).
  static SplitProblem for_scheme(Scheme scheme, DecodingOrder order, const ChannelState& ch,
                                 double budget, double r1, double r2, double beta,
                                 const FblParams& fbl) {
    SplitProblem p;
    p.channel = ch;
    p.budget = budget;
    p.split = split_user(scheme);
    p.order = order;
    p.r1 = r1;
    p.r2 = r2;
    p.beta = beta;
    p.fbl = fbl;
    if (scheme == Scheme::noma1) {
      p.order = DecodingOrder::i;
      p.beta = 1.0;
      p.second_off = true;
    } else if (scheme == Scheme::noma2) {
      p.order = DecodingOrder::i;
      p.beta = 0.0;
      p.first_off = true;
    }
    return p;
  }

  RateTarget rates() const { return {r1, r2, beta}; }

  /// RSMA scheme whose chain this problem evaluates.
  Scheme chain_scheme() const { return split == User::one ? Scheme::rsma1 : Scheme::rsma2; }

  double slot_rate(Slot s) const {
    const RateTarget rt = rates();
    switch (s) {
      case Slot::k1: return rt.split_first(split);
      case Slot::j: return rt.rate(other(split));
      case Slot::k2: return rt.split_second(split);
    }
    return 0.0;
  }

  double slot_gain(Slot s) const { return channel.gain(s == Slot::j ? other(split) : split); }

  User slot_owner(Slot s) const { return s == Slot::j ? other(split) : split; }

  bool slot_pinned(Slot s) const {
    return (s == Slot::k1 && first_off) || (s == Slot::k2 && second_off);
  }

  /// A slot takes part in the error model only if it carries rate.
  bool slot_active(Slot s) const { return slot_rate(s) > 0.0; }

  PowerAllocation allocation(const std::array<double, 3>& powers) const {
    return {powers[0], powers[1], powers[2], budget};
  }

  void validate() const {
    channel.validate();
    rates().validate();
    fbl.validate();
    if (!(budget > 0.0) || !std::isfinite(budget)) throw invalid_input("power budget must be > 0");
    if (first_off && second_off) throw invalid_input("at most one split stream can be switched off");
    if (first_off && beta != 0.0) throw invalid_input("switching s_{k,1} off requires beta = 0");
    if (second_off && beta != 1.0) throw invalid_input("switching s_{k,2} off requires beta = 1");
  }
};

/// Exact SINR of every slot at `powers` (0 for a slot without power).
inline std::array<double, 3> slot_sinrs(const SplitProblem& p, const std::array<double, 3>& powers) {
  const auto order = chain_slots(p.order);
  std::array<double, 3> out{};
  double later = 0.0;
  for (std::size_t m = 3; m-- > 0;) {
    const Slot s = order[m];
    const double rx = powers[power_index(s)] * p.slot_gain(s);
    out[slot_index(s)] = rx / (later + p.channel.noise_var);
    later += rx;
  }
  return out;
}

/// True when every active slot meets 0.5*log2(1 + sinr) >= rate.
inline bool rate_feasible(const SplitProblem& p, const std::array<double, 3>& powers) {
  const auto sinr = slot_sinrs(p, powers);
  for (Slot s : all_slots) {
    if (!p.slot_active(s)) continue;
    const double g = sinr[slot_index(s)];
    if (!(g > 0.0) || q_argument(g, p.slot_rate(s), p.fbl) < -1e-12) return false;
  }
  return true;
}

/// Evaluates the decoding chain of `p` at `powers`.
inline Evaluation evaluate_point(const SplitProblem& p, const std::array<double, 3>& powers) {
  return evaluate(p.chain_scheme(), p.order, p.channel, p.allocation(powers), p.rates(), p.fbl);
}

/// Reference point consistent with `powers`: rho at the exact SINRs, theta
/// at the exact stream error probabilities and t at the true TP.
inline SubproblemPoint consistent_point(const SplitProblem& p, const std::array<double, 3>& powers) {
  SubproblemPoint pt;
  pt.powers = powers;
  const auto sinr = slot_sinrs(p, powers);
  for (Slot s : all_slots) {
    const std::size_t i = slot_index(s);
    if (!p.slot_active(s)) continue;
    pt.rhos[i] = sinr[i];
    pt.thetas[i] = stream_error_prob(StreamSnr(sinr[i]), p.slot_rate(s), p.fbl);
  }
  pt.t = evaluate_point(p, powers).tp;
  return pt;
}

/// Variable layout of the subproblem LP.
namespace var {
inline constexpr std::size_t power(Slot s) { return power_index(s); }
inline constexpr std::size_t rho(Slot s) { return 3 + slot_index(s); }
inline constexpr std::size_t theta(Slot s) { return 6 + slot_index(s); }
inline constexpr std::size_t t = 9;
inline constexpr std::size_t count = 10;
}  // namespace var

/// First-order form of TP in the thetas around `ref` (per slot).
///
/// Order (i) is built term by term from the bilinear and trilinear forms:
///   (r_k + r_j)(th_a + th_b - Psi(a,b)) + r_k(th_c - Psi(b,c) - Psi(a,c) + Omega(a,b,c)).
/// The other orders use the generic union-of-failures expansion
///   TP = sum_u r_u (1 - prod_{m <= last(u)} (1 - th_m)).
inline AffineForm<3> tp_surrogate(const SplitProblem& p, const std::array<double, 3>& ref) {
  const double rk = p.rates().rate(p.split);
  const double rj = p.rates().rate(other(p.split));
  const std::size_t a = slot_index(Slot::k1);
  const std::size_t b = slot_index(Slot::j);
  const std::size_t c = slot_index(Slot::k2);
  AffineForm<3> f;
  if (p.order == DecodingOrder::i) {
    const auto psi_ab = linearize_bilinear(ref[a], ref[b]);
    const auto psi_bc = linearize_bilinear(ref[b], ref[c]);
    const auto psi_ac = linearize_bilinear(ref[a], ref[c]);
    const auto omega = linearize_trilinear({ref[a], ref[b], ref[c]});
    f.coeffs[a] = (rk + rj) * (1.0 - psi_ab.coeffs[0]) + rk * (-psi_ac.coeffs[0] + omega.coeffs[0]);
    f.coeffs[b] = (rk + rj) * (1.0 - psi_ab.coeffs[1]) + rk * (-psi_bc.coeffs[0] + omega.coeffs[1]);
    f.coeffs[c] = rk * (1.0 - psi_bc.coeffs[1] - psi_ac.coeffs[1] + omega.coeffs[2]);
    f.constant = -(rk + rj) * psi_ab.constant +
                 rk * (-psi_bc.constant - psi_ac.constant + omega.constant);
    return f;
  }
  const auto order = chain_slots(p.order);
  for (User u : {User::one, User::two}) {
    const double ru = p.rates().rate(u);
    if (ru == 0.0) continue;
    std::size_t last = 0;
    for (std::size_t m = 0; m < 3; ++m)
      if (p.slot_owner(order[m]) == u) last = m;
    double prod = 1.0;
    for (std::size_t m = 0; m <= last; ++m) prod *= 1.0 - ref[slot_index(order[m])];
    f.constant += ru * (1.0 - prod);
    for (std::size_t i = 0; i <= last; ++i) {
      double others = 1.0;
      for (std::size_t m = 0; m <= last; ++m)
        if (m != i) others *= 1.0 - ref[slot_index(order[m])];
      const std::size_t si = slot_index(order[i]);
      f.coeffs[si] += ru * others;
      f.constant -= ru * others * ref[si];
    }
  }
  return f;
}

/// Relative tightening applied to the exact rate-feasibility rows so that
/// LP solutions stay on the s >= 0 side after solver tolerances.
inline constexpr double rate_row_margin = 1e-7;

/// Builds the linear program of one step around `ref`.
///
/// Rows: linearised TP <= t; tangent of each active stream's error curve
/// <= theta; linearised SINR coupling for every active stream that has
/// later streams, exact P g / sigma^2 >= rho for the last one; exact
/// rate feasibility P_m g_m >= c_m (interference + sigma^2); the split
/// user's budget. Bounds carry rho >= 2^{2r} - 1, theta in [0, 1],
/// P_j <= P_t and switched-off streams.
inline LinearProgram build_subproblem(const SplitProblem& p, const SubproblemPoint& ref) {
  p.validate();
  const double noise = p.channel.noise_var;
  const auto order = chain_slots(p.order);
  constexpr double inf = std::numeric_limits<double>::infinity();

  for (Slot s : all_slots) {
    if (!p.slot_active(s)) continue;
    const double need = min_sinr_for_rate(p.slot_rate(s));
    if (p.slot_pinned(s) || need > p.budget * p.slot_gain(s) / noise)
      throw infeasible_target("target rate exceeds the single-stream capacity at full power");
  }

  LinearProgram lp(var::count);
  lp.objective[var::t] = 1.0;
  lp.lower[var::t] = -inf;

  for (Slot s : all_slots) {
    const std::size_t pi = var::power(s);
    lp.upper[pi] = p.slot_pinned(s) ? 0.0 : p.budget;
    if (p.slot_active(s)) {
      lp.lower[var::rho(s)] = min_sinr_for_rate(p.slot_rate(s));
      lp.upper[var::theta(s)] = 1.0;
    } else {
      lp.upper[var::rho(s)] = 0.0;
      lp.upper[var::theta(s)] = 0.0;
    }
  }

  {
    const auto f = tp_surrogate(p, ref.thetas);
    std::vector<double> row(var::count, 0.0);
    for (Slot s : all_slots) row[var::theta(s)] = f.coeffs[slot_index(s)];
    row[var::t] = -1.0;
    lp.add(std::move(row), Relation::less_equal, -f.constant);
  }

  for (std::size_t m = 0; m < 3; ++m) {
    const Slot s = order[m];
    if (!p.slot_active(s)) continue;
    const std::size_t i = slot_index(s);
    const double g = p.slot_gain(s);

    const TangentLine phi = linearize_q(ref.rhos[i], p.slot_rate(s), p.fbl);
    {
      std::vector<double> row(var::count, 0.0);
      row[var::rho(s)] = phi.slope;
      row[var::theta(s)] = -1.0;
      lp.add(std::move(row), Relation::less_equal, phi.slope * phi.ref - phi.value);
    }

    if (m + 1 == 3) {
      std::vector<double> row(var::count, 0.0);
      row[var::rho(s)] = noise;
      row[var::power(s)] = -g;
      lp.add(std::move(row), Relation::less_equal, 0.0);
    } else {
      const double rho0 = ref.rhos[i];
      const double p0 = ref.powers[power_index(s)];
      std::vector<double> row(var::count, 0.0);
      for (std::size_t l = m + 1; l < 3; ++l) row[var::power(order[l])] += p.slot_gain(order[l]);
      row[var::power(s)] = -g / rho0;
      row[var::rho(s)] = p0 * g / (rho0 * rho0);
      lp.add(std::move(row), Relation::less_equal, -noise + p0 * g / rho0);
    }

    {
      const double need = min_sinr_for_rate(p.slot_rate(s)) * (1.0 + rate_row_margin);
      std::vector<double> row(var::count, 0.0);
      row[var::power(s)] = g;
      for (std::size_t l = m + 1; l < 3; ++l) row[var::power(order[l])] -= need * p.slot_gain(order[l]);
      lp.add_greater_equal(std::move(row), need * noise);
    }
  }

  {
    std::vector<double> row(var::count, 0.0);
    row[var::power(Slot::k1)] = 1.0;
    row[var::power(Slot::k2)] = 1.0;
    lp.add(std::move(row), Relation::less_equal, p.budget);
  }
  return lp;
}

/// Reads a SubproblemPoint back out of an LP solution vector.
inline SubproblemPoint point_from_lp(const std::vector<double>& x) {
  SubproblemPoint pt;
  for (Slot s : all_slots) {
    pt.powers[power_index(s)] = x[var::power(s)];
    pt.rhos[slot_index(s)] = x[var::rho(s)];
    pt.thetas[slot_index(s)] = x[var::theta(s)];
  }
  pt.t = x[var::t];
  return pt;
}

}  // namespace rsfbl

#endif  // RSFBL_SUBPROBLEM_HPP
