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

/// \file mac.hpp
/// Two-user uplink multiple-access channel with successive interference
/// cancellation. Every scheme (rate splitting at either user, or plain NOMA
/// in either order) is expressed as a DecodingChain: the ordered list of
/// streams the receiver decodes. SINRs, user error probabilities and
/// throughput are computed generically from the chain.

#ifndef RSFBL_MAC_HPP
#define RSFBL_MAC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsfbl/error.hpp"
#include "rsfbl/fbl.hpp"

namespace rsfbl {

enum class User { one = 1, two = 2 };

constexpr User other(User u) { return u == User::one ? User::two : User::one; }
constexpr int index_of(User u) { return u == User::one ? 0 : 1; }

enum class Scheme { rsma1, rsma2, noma1, noma2 };

/// Decoding orders for a split user k and the other user j:
///   i:   s_{k,1} -> s_j -> s_{k,2}
///   ii:  s_{k,1} -> s_{k,2} -> s_j
///   iii: s_j -> s_{k,1} -> s_{k,2}
enum class DecodingOrder { i, ii, iii };

constexpr bool is_rsma(Scheme s) { return s == Scheme::rsma1 || s == Scheme::rsma2; }

/// User whose message is split. NOMA schemes are embedded with user 1 in
/// the split role (see make_chain).
constexpr User split_user(Scheme s) { return s == Scheme::rsma2 ? User::two : User::one; }

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::rsma1: return "rsma1";
    case Scheme::rsma2: return "rsma2";
    case Scheme::noma1: return "noma1";
    case Scheme::noma2: return "noma2";
  }
  return "?";
}

inline std::string_view to_string(DecodingOrder o) {
  switch (o) {
    case DecodingOrder::i: return "i";
    case DecodingOrder::ii: return "ii";
    case DecodingOrder::iii: return "iii";
  }
  return "?";
}

inline std::optional<Scheme> parse_scheme(std::string_view s) {
  for (Scheme v : {Scheme::rsma1, Scheme::rsma2, Scheme::noma1, Scheme::noma2})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

inline std::optional<DecodingOrder> parse_order(std::string_view s) {
  for (DecodingOrder v : {DecodingOrder::i, DecodingOrder::ii, DecodingOrder::iii})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

/// Channel power gains |h_u|^2 and receiver noise variance.
struct ChannelState {
  double gain1 = 1.0;
  double gain2 = 1.0;
  double noise_var = 1.0;

  double gain(User u) const { return u == User::one ? gain1 : gain2; }

  void validate() const {
    if (!(gain1 >= 0.0 && gain2 >= 0.0) || !std::isfinite(gain1) || !std::isfinite(gain2))
      throw invalid_input("channel gains must be finite and >= 0");
    if (!(noise_var > 0.0) || !std::isfinite(noise_var))
      throw invalid_input("noise variance must be finite and > 0");
  }
};

/// Stream powers. The two split fields belong to the split user of the
/// scheme; p_other is the power of the other user's single stream.
struct PowerAllocation {
  double p_split_1 = 0.0;
  double p_split_2 = 0.0;
  double p_other = 0.0;
  double budget = 10.0;

  void validate() const {
    if (!(budget > 0.0) || !std::isfinite(budget)) throw invalid_input("power budget must be > 0");
    if (!(p_split_1 >= 0.0 && p_split_2 >= 0.0 && p_other >= 0.0))
      throw invalid_input("stream powers must be >= 0");
    if (p_split_1 + p_split_2 > budget || p_other > budget)
      throw invalid_input("stream powers exceed the per-user budget");
  }
};

/// Clamps each power to [0, budget] and shrinks the split pair onto the
/// budget when rounding has pushed its sum past it.
inline PowerAllocation project_to_budget(PowerAllocation pw) {
  const double b = pw.budget;
  pw.p_split_1 = std::clamp(pw.p_split_1, 0.0, b);
  pw.p_split_2 = std::clamp(pw.p_split_2, 0.0, b);
  pw.p_other = std::clamp(pw.p_other, 0.0, b);
  if (pw.p_split_1 + pw.p_split_2 > b) {
    const double scale = b / (pw.p_split_1 + pw.p_split_2);
    pw.p_split_1 *= scale;
    pw.p_split_2 *= scale;
    while (pw.p_split_1 + pw.p_split_2 > b) pw.p_split_2 = std::nextafter(pw.p_split_2, 0.0);
  }
  return pw;
}

/// Target rates in bits per channel use plus the rate-allocation factor of
/// the split user. Split rates are derived, never stored.
struct RateTarget {
  double r1 = 0.0;
  double r2 = 0.0;
  double beta = 1.0;

  double rate(User u) const { return u == User::one ? r1 : r2; }
  double split_first(User k) const { return beta * rate(k); }
  double split_second(User k) const { return (1.0 - beta) * rate(k); }

  void validate() const {
    if (!(r1 >= 0.0 && r2 >= 0.0) || !std::isfinite(r1) || !std::isfinite(r2))
      throw invalid_input("target rates must be finite and >= 0");
    if (!(beta >= 0.0 && beta <= 1.0)) throw invalid_input("beta must lie in [0, 1]");
  }
};

enum class StreamRole { split_first, whole, split_second };

struct Stream {
  User owner = User::one;
  StreamRole role = StreamRole::whole;
  double power = 0.0;
  double gain = 0.0;
  double rate = 0.0;

  bool is_null() const { return power == 0.0 && rate == 0.0; }
};

/// Streams in decoding order.
struct DecodingChain {
  std::vector<Stream> streams;

  std::size_t size() const { return streams.size(); }

  /// Position of the last stream owned by `u`, if any.
  std::optional<std::size_t> last_position(User u) const {
    for (std::size_t m = streams.size(); m-- > 0;)
      if (streams[m].owner == u) return m;
    return std::nullopt;
  }
};

/// Per-stream conditional error probabilities (chain order) and the two
/// user-level error probabilities.
struct ErrorBreakdown {
  std::vector<double> per_stream;
  double user1 = 0.0;
  double user2 = 0.0;

  double user(User u) const { return u == User::one ? user1 : user2; }
  double max_user() const { return std::max(user1, user2); }
};

/// Builds the decoding chain of `scheme`.
///
/// RSMA splits user k (1 for rsma1, 2 for rsma2) into s_{k,1} with power
/// p_split_1 and rate beta*r_k and s_{k,2} with p_split_2 and (1-beta)*r_k.
/// NOMA ignores `order` and beta; user 1 transmits p_split_1 + p_split_2
/// and user 2 transmits p_other, decoded 1 -> 2 (noma1) or 2 -> 1 (noma2).
/// Null streams (no power and no rate) are dropped.
inline DecodingChain make_chain(Scheme scheme, std::optional<DecodingOrder> order,
                                const ChannelState& ch, const PowerAllocation& pw,
                                const RateTarget& rt) {
  ch.validate();
  pw.validate();
  rt.validate();

  std::vector<Stream> streams;
  if (is_rsma(scheme)) {
    if (!order) throw invalid_input("RSMA schemes need a decoding order");
    const User k = split_user(scheme);
    const User j = other(k);
    const Stream first{k, StreamRole::split_first, pw.p_split_1, ch.gain(k), rt.split_first(k)};
    const Stream second{k, StreamRole::split_second, pw.p_split_2, ch.gain(k), rt.split_second(k)};
    const Stream whole{j, StreamRole::whole, pw.p_other, ch.gain(j), rt.rate(j)};
    switch (*order) {
      case DecodingOrder::i: streams = {first, whole, second}; break;
      case DecodingOrder::ii: streams = {first, second, whole}; break;
      case DecodingOrder::iii: streams = {whole, first, second}; break;
    }
  } else {
    const Stream s1{User::one, StreamRole::whole, pw.p_split_1 + pw.p_split_2, ch.gain1, rt.r1};
    const Stream s2{User::two, StreamRole::whole, pw.p_other, ch.gain2, rt.r2};
    if (scheme == Scheme::noma1) {
      streams = {s1, s2};
    } else {
      streams = {s2, s1};
    }
  }
  std::erase_if(streams, [](const Stream& s) { return s.is_null(); });
  return DecodingChain{std::move(streams)};
}

/// SINR of every stream assuming all earlier streams were cancelled.
inline std::vector<StreamSnr> chain_sinrs(const DecodingChain& chain, const ChannelState& ch) {
  std::vector<StreamSnr> out(chain.size());
  double later = 0.0;
  for (std::size_t m = chain.size(); m-- > 0;) {
    const Stream& s = chain.streams[m];
    out[m] = StreamSnr(s.power * s.gain / (later + ch.noise_var));
    later += s.power * s.gain;
  }
  return out;
}

/// Composes per-stream error probabilities into user errors. A user fails
/// when any stream up to and including its last one fails, which is the
/// running union eps <- eps + (1 - eps) * eps_m. A user with no stream in
/// the chain (zero rate, zero power) has error 0.
inline ErrorBreakdown compose_user_errors(const DecodingChain& chain,
                                          const std::vector<double>& stream_eps) {
  if (stream_eps.size() != chain.size())
    throw invalid_input("compose_user_errors: one probability per stream required");
  ErrorBreakdown out;
  out.per_stream = stream_eps;
  const auto last1 = chain.last_position(User::one);
  const auto last2 = chain.last_position(User::two);
  double acc = 0.0;
  for (std::size_t m = 0; m < chain.size(); ++m) {
    acc = acc + (1.0 - acc) * stream_eps[m];
    if (last1 && *last1 == m) out.user1 = acc;
    if (last2 && *last2 == m) out.user2 = acc;
  }
  return out;
}

struct Evaluation {
  DecodingChain chain;
  ErrorBreakdown errors;
  double t1 = 0.0;
  double t2 = 0.0;
  double sum = 0.0;
  /// r1*eps1 + r2*eps2, the quantity the optimizers minimise.
  double tp = 0.0;
};

inline Evaluation evaluate_chain(DecodingChain chain, const ChannelState& ch, const RateTarget& rt,
                                 const FblParams& params) {
  const auto sinrs = chain_sinrs(chain, ch);
  std::vector<double> eps(chain.size());
  for (std::size_t m = 0; m < chain.size(); ++m)
    eps[m] = stream_error_prob(sinrs[m], chain.streams[m].rate, params);
  Evaluation ev;
  ev.errors = compose_user_errors(chain, eps);
  ev.chain = std::move(chain);
  ev.t1 = rt.r1 * (1.0 - ev.errors.user1);
  ev.t2 = rt.r2 * (1.0 - ev.errors.user2);
  ev.sum = ev.t1 + ev.t2;
  ev.tp = rt.r1 * ev.errors.user1 + rt.r2 * ev.errors.user2;
  return ev;
}

inline Evaluation evaluate(Scheme scheme, std::optional<DecodingOrder> order, const ChannelState& ch,
                           const PowerAllocation& pw, const RateTarget& rt, const FblParams& params) {
  params.validate();
  return evaluate_chain(make_chain(scheme, order, ch, pw, rt), ch, rt, params);
}

/// Two routes to the rate-weighted error TP for decoding order (i): the
/// direct r_k*eps_k + r_j*eps_j from the composed user errors, and the
/// expanded form in the three stream errors (a, b, c) = (s_{k,1}, s_j,
/// s_{k,2}). The breakdown must come from a three-stream chain.
inline std::pair<double, double> tp_identity_check(const RateTarget& rt, User split,
                                                   const ErrorBreakdown& errors) {
  if (errors.per_stream.size() != 3)
    throw invalid_input("tp_identity_check needs a three-stream breakdown");
  const double rk = rt.rate(split);
  const double rj = rt.rate(other(split));
  const double a = errors.per_stream[0];
  const double b = errors.per_stream[1];
  const double c = errors.per_stream[2];
  const double direct = rk * errors.user(split) + rj * errors.user(other(split));
  const double expanded = (rk + rj) * (a + b - a * b) + rk * c * (1.0 - b) * (1.0 - a);
  return {direct, expanded};
}

/// Infinite-blocklength capacity region of the two-user MAC at full power.
struct CapacityPentagon {
  double user1 = 0.0;
  double user2 = 0.0;
  double sum = 0.0;

  bool contains(double r1, double r2, double slack = 0.0) const {
    return r1 <= user1 + slack && r2 <= user2 + slack && r1 + r2 <= sum + slack;
  }

  /// Largest radius along the unit direction (cos_a, sin_a), measured from
  /// the r1 axis, that stays inside the region.
  double radius_along(double cos_a, double sin_a) const {
    double r = std::numeric_limits<double>::infinity();
    if (cos_a > 0.0) r = std::min(r, user1 / cos_a);
    if (sin_a > 0.0) r = std::min(r, user2 / sin_a);
    if (cos_a + sin_a > 0.0) r = std::min(r, sum / (cos_a + sin_a));
    return r;
  }
};

inline CapacityPentagon capacity_pentagon(const ChannelState& ch, double budget) {
  return {capacity_term(budget * ch.gain1 / ch.noise_var),
          capacity_term(budget * ch.gain2 / ch.noise_var),
          capacity_term(budget * (ch.gain1 + ch.gain2) / ch.noise_var)};
}

}  // namespace rsfbl

#endif  // RSFBL_MAC_HPP
