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

// Reference implementations used only by the tests. None of them shares
// code with the library: the tail function is summed as a power series or
// a continued fraction in long double, LPs are solved by enumerating
// vertices, and error compositions are expanded term by term.

#ifndef RSFBL_TESTS_ORACLES_HPP
#define RSFBL_TESTS_ORACLES_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

using real = long double;

inline constexpr real pi_l = 3.141592653589793238462643383279502884L;

inline real phi(real x) { return std::exp(-x * x / 2) / std::sqrt(2 * pi_l); }

/// Q(x) by the Maclaurin series of the normal CDF for |x| < 3 and the
/// Laplace continued fraction beyond.
inline real q_ref(real x) {
  if (x < 0) return 1 - q_ref(-x);
  if (x < 3) {
    real term = x;
    real sum = x;
    for (int n = 1; n < 200; ++n) {
      term *= -x * x / (2 * n);
      const real add = term / (2 * n + 1);
      sum += add;
      if (std::abs(add) < 1e-30L) break;
    }
    return 0.5L - sum / std::sqrt(2 * pi_l);
  }
  real f = x;
  for (int k = 400; k >= 1; --k) f = x + k / f;
  return phi(x) / f;
}

/// Q^{-1}(p) by bisection on q_ref.
inline real q_inv_ref(real p) {
  real lo = -40;
  real hi = 40;
  for (int i = 0; i < 200; ++i) {
    const real mid = (lo + hi) / 2;
    (q_ref(mid) > p ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

inline real log2e_l() { return 1 / std::log(2.0L); }

inline real capacity_ref(real g) { return std::log(1 + g) / std::log(2.0L) / 2; }

inline real dispersion_ref(real g) {
  const real l = log2e_l();
  return l * l * (1 - 1 / ((1 + g) * (1 + g)));
}

inline real rate_ref(real g, int n, real eps) {
  return capacity_ref(g) - std::sqrt(dispersion_ref(g) / n) * q_inv_ref(eps);
}

inline real error_ref(real g, int n, real r) {
  return q_ref((capacity_ref(g) - r) / std::sqrt(dispersion_ref(g) / n));
}

/// Central difference.
template <class F>
double derivative(F f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

/// Per-user failure probabilities of a decoding chain by inclusion of every
/// success pattern: user u fails unless all streams up to its last one
/// succeed. owner[m] is 0 or 1.
inline std::vector<real> user_errors_ref(const std::vector<real>& eps, const std::vector<int>& owner) {
  std::vector<real> out(2, 0);
  for (int u = 0; u < 2; ++u) {
    std::optional<std::size_t> last;
    for (std::size_t m = 0; m < owner.size(); ++m)
      if (owner[m] == u) last = m;
    if (!last) continue;
    real ok = 1;
    for (std::size_t m = 0; m <= *last; ++m) ok *= 1 - eps[m];
    out[u] = 1 - ok;
  }
  return out;
}

/// Small dense LP: minimize c.x s.t. A x <= b, lo <= x <= hi, all finite.
struct SmallLp {
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> lo;
  std::vector<double> hi;
};

namespace detail {

inline bool solve_square(std::vector<std::vector<real>> m, std::vector<real> rhs, std::vector<real>& x) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-12L) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const real f = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  x.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return true;
}

}  // namespace detail

/// Optimal value by enumerating every basis of n active constraints taken
/// from the rows and the bounds. Empty when infeasible.
inline std::optional<double> lp_vertex_min(const SmallLp& lp) {
  const std::size_t n = lp.c.size();
  std::vector<std::vector<real>> rows;
  std::vector<real> rhs;
  for (std::size_t i = 0; i < lp.a.size(); ++i) {
    rows.emplace_back(lp.a[i].begin(), lp.a[i].end());
    rhs.push_back(lp.b[i]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<real> e(n, 0);
    e[j] = 1;
    rows.push_back(e);
    rhs.push_back(lp.hi[j]);
    e[j] = -1;
    rows.push_back(e);
    rhs.push_back(-lp.lo[j]);
  }
  const std::size_t m = rows.size();
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::vector<std::vector<real>> sq;
    std::vector<real> sr;
    for (std::size_t i : pick) {
      sq.push_back(rows[i]);
      sr.push_back(rhs[i]);
    }
    std::vector<real> x;
    if (detail::solve_square(sq, sr, x)) {
      bool feasible = true;
      for (std::size_t r = 0; r < m && feasible; ++r) {
        real lhs = 0;
        for (std::size_t j = 0; j < n; ++j) lhs += rows[r][j] * x[j];
        if (lhs > rhs[r] + 1e-9L * (1 + std::abs(rhs[r]))) feasible = false;
      }
      if (feasible) {
        real v = 0;
        for (std::size_t j = 0; j < n; ++j) v += lp.c[j] * x[j];
        if (!best || v < *best) best = static_cast<double>(v);
      }
    }
    // next combination
    std::size_t k = n;
    while (k > 0 && pick[k - 1] == m - n + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t i = k; i < n; ++i) pick[i] = pick[i - 1] + 1;
  }
  return best;
}

}  // namespace oracle

#endif  // RSFBL_TESTS_ORACLES_HPP
