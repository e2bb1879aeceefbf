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

/// \file fbl.hpp
/// Normal-approximation kernel for finite-blocklength links: the Gaussian
/// tail function and its inverse, channel dispersion, the achievable rate at
/// a given error probability and, conversely, the error probability of a
/// stream sent at a given rate.
///
/// Capacities use the real-dimension convention 0.5*log2(1 + gamma)
/// throughout the library.

#ifndef RSFBL_FBL_HPP
#define RSFBL_FBL_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rsfbl/error.hpp"

namespace rsfbl {

/// Blocklength plus the clamping window applied to stream error
/// probabilities so that products in the error composition never see an
/// exact 0 or 1 from the tail evaluation.
struct FblParams {
  int blocklength = 500;
  double q_tail_floor = 1e-300;
  double q_tail_ceil = 1.0 - 1e-16;

  void validate() const {
    if (blocklength < 1) throw invalid_input("blocklength must be >= 1");
    if (!(q_tail_floor > 0.0 && q_tail_floor < q_tail_ceil && q_tail_ceil < 1.0))
      throw invalid_input("require 0 < q_tail_floor < q_tail_ceil < 1");
  }
};

/// Linear SINR of one stream.
struct StreamSnr {
  double gamma = 0.0;

  constexpr StreamSnr() = default;
  explicit StreamSnr(double g) : gamma(g) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw invalid_input("SINR must be finite and >= 0");
  }
};

inline constexpr double log2e_squared = std::numbers::log2e * std::numbers::log2e;

/// Standard normal density.
inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

/// Gaussian tail Q(x) = P[Z > x], evaluated through erfc so the deep tail
/// keeps full relative precision.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Inverse of q_function on (0, 1).
///
/// Upper half is mapped by symmetry (1 - p is exact for p in [0.5, 1)).
/// The lower half starts from the Abramowitz-Stegun rational guess and runs
/// Newton on log Q, safeguarded by a bracket, which stays well conditioned
/// down to p ~ 1e-300.
inline double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw domain_error("q_inverse: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -q_inverse(1.0 - p);

  const double tt = std::sqrt(-2.0 * std::log(p));
  double x = tt - (2.515517 + 0.802853 * tt + 0.010328 * tt * tt) /
                      (1.0 + 1.432788 * tt + 0.189269 * tt * tt + 0.001308 * tt * tt * tt);
  double lo = 0.0;
  double hi = 40.0;
  x = std::clamp(x, lo, hi);
  const double log_p = std::log(p);
  for (int it = 0; it < 100; ++it) {
    const double q = q_function(x);
    if (q > p) {
      lo = x;
    } else {
      hi = x;
    }
    const double pdf = normal_pdf(x);
    double next;
    if (q > 0.0 && pdf > 0.0) {
      next = x + (std::log(q) - log_p) * q / pdf;
    } else {
      next = 0.5 * (lo + hi);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = next - x;
    x = next;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

/// Shannon term 0.5*log2(1 + gamma) in bits per channel use.
inline double capacity_term(double gamma) { return 0.5 * std::log1p(gamma) * std::numbers::log2e; }

/// SINR needed for capacity_term(gamma) == rate.
inline double min_sinr_for_rate(double rate) { return std::expm1(2.0 * rate * std::numbers::ln2); }

/// Channel dispersion log2(e)^2 * (1 - (1 + gamma)^-2), written as
/// gamma(2 + gamma)/(1 + gamma)^2 to stay accurate for small gamma.
inline double dispersion(StreamSnr snr) {
  const double g = snr.gamma;
  if (std::isinf(g)) return log2e_squared;
  const double one_plus = 1.0 + g;
  return log2e_squared * (g * (2.0 + g)) / (one_plus * one_plus);
}

/// Achievable rate at blocklength N and error probability epsilon.
/// Can be negative for small SINR; callers clamp if they need to.
inline double fbl_rate(StreamSnr snr, const FblParams& params, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw domain_error("fbl_rate: epsilon must lie in (0, 1)");
  const double v = dispersion(snr);
  return capacity_term(snr.gamma) -
         std::sqrt(v / static_cast<double>(params.blocklength)) * q_inverse(epsilon);
}

/// Argument of the tail function in the error expression,
/// s = (C(gamma) - r) / sqrt(V(gamma)/N). Requires gamma > 0.
inline double q_argument(double gamma, double rate, const FblParams& params) {
  const double v = dispersion(StreamSnr(gamma));
  return (capacity_term(gamma) - rate) / std::sqrt(v / static_cast<double>(params.blocklength));
}

/// Error probability of a stream with SINR gamma sent at `rate`.
///
/// A null stream (gamma == 0 and rate == 0) returns exactly 0, a stream
/// with rate but no signal returns exactly 1; everything else is clamped
/// into [q_tail_floor, q_tail_ceil].
inline double stream_error_prob(StreamSnr snr, double rate, const FblParams& params) {
  if (!(rate >= 0.0)) throw domain_error("stream_error_prob: rate must be >= 0");
  if (snr.gamma == 0.0) return rate == 0.0 ? 0.0 : 1.0;
  const double eps = q_function(q_argument(snr.gamma, rate, params));
  return std::clamp(eps, params.q_tail_floor, params.q_tail_ceil);
}

/// d/dgamma of the unclamped error probability Q(s(gamma)), by the chain
/// rule through the capacity term and the dispersion. Requires gamma > 0.
inline double stream_error_slope(double gamma, double rate, const FblParams& params) {
  const double n = static_cast<double>(params.blocklength);
  const double one_plus = 1.0 + gamma;
  const double v = dispersion(StreamSnr(gamma));
  const double dv = 2.0 * log2e_squared / (one_plus * one_plus * one_plus);
  const double dc = 0.5 * std::numbers::log2e / one_plus;
  const double gap = capacity_term(gamma) - rate;
  const double sqrt_v = std::sqrt(v);
  const double ds = std::sqrt(n) * (dc / sqrt_v - 0.5 * gap * dv / (v * sqrt_v));
  const double s = gap * std::sqrt(n) / sqrt_v;
  return -normal_pdf(s) * ds;
}

}  // namespace rsfbl

#endif  // RSFBL_FBL_HPP
