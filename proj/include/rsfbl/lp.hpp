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

/// \file lp.hpp
/// Small dense linear programs: a two-phase tableau simplex with Bland's
/// pivoting rule (deterministic, cycle free) and a plain-text dump format.
/// Intended for a dozen variables; nothing here exploits sparsity.

#ifndef RSFBL_LP_HPP
#define RSFBL_LP_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "rsfbl/error.hpp"

namespace rsfbl {

enum class Relation { less_equal, equal };

struct LinearConstraint {
  std::vector<double> coeffs;
  Relation relation = Relation::less_equal;
  double bound = 0.0;
};

/// minimize objective . x  subject to constraints and lower <= x <= upper.
/// Bounds may be infinite.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  LinearProgram() = default;
  explicit LinearProgram(std::size_t n)
      : objective(n, 0.0), lower(n, 0.0), upper(n, std::numeric_limits<double>::infinity()) {}

  std::size_t num_vars() const { return objective.size(); }

  void add(std::vector<double> coeffs, Relation rel, double bound) {
    constraints.push_back({std::move(coeffs), rel, bound});
  }

  /// coeffs . x >= bound, stored as a <= row.
  void add_greater_equal(std::vector<double> coeffs, double bound) {
    for (double& c : coeffs) c = -c;
    add(std::move(coeffs), Relation::less_equal, -bound);
  }

  void validate() const {
    const std::size_t n = num_vars();
    if (lower.size() != n || upper.size() != n) throw invalid_input("LP bounds dimension mismatch");
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i])
        throw invalid_input("LP bounds must satisfy lo <= hi");
      if (!std::isfinite(objective[i])) throw invalid_input("LP objective must be finite");
    }
    for (const auto& c : constraints) {
      if (c.coeffs.size() != n) throw invalid_input("LP constraint dimension mismatch");
      if (!std::isfinite(c.bound)) throw invalid_input("LP constraint bound must be finite");
      for (double a : c.coeffs)
        if (!std::isfinite(a)) throw invalid_input("LP coefficients must be finite");
    }
  }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  int pivots = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-11;
  double pivot_tol = 1e-10;
  int max_pivots = 50000;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double rhs(std::size_t r) const { return at(r, cols_); }
  // Row `rows_` holds reduced costs; its rhs holds minus the objective value.
  double& cost(std::size_t c) { return at(rows_, c); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
};

// One simplex phase with Bland's rule. Returns false when unbounded.
inline bool run_phase(Tableau& t, std::vector<std::size_t>& basis, const std::vector<bool>& allowed,
                      const LpOptions& opt, int& pivots) {
  for (;;) {
    std::size_t enter = t.cols();
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (allowed[c] && t.cost(c) < -opt.optimality_tol) {
        enter = c;
        break;
      }
    }
    if (enter == t.cols()) return true;

    std::size_t leave = t.rows();
    double best = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= opt.pivot_tol) continue;
      const double ratio = std::max(t.rhs(r), 0.0) / a;
      if (leave == t.rows()) {
        leave = r;
        best = ratio;
        continue;
      }
      const double tie = 1e-12 * (1.0 + best);
      if (ratio < best - tie) {
        leave = r;
        best = ratio;
      } else if (ratio <= best + tie && basis[r] < basis[leave]) {
        leave = r;
        best = std::min(best, ratio);
      }
    }
    if (leave == t.rows()) return false;
    t.pivot(leave, enter);
    basis[leave] = enter;
    if (++pivots > opt.max_pivots) throw numerical_failure("simplex pivot limit reached");
  }
}

}  // namespace detail

/// Solves `lp`. Infeasible and unbounded programs are reported through the
/// status, not thrown. Rows and columns are max-abs equilibrated before the
/// tableau is built; the returned point is in the caller's units.
inline LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opt = {}) {
  lp.validate();
  const std::size_t n = lp.num_vars();
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Substitute x_i = offset_i + sum(sign * y) with y >= 0.
  struct Term {
    std::size_t col;
    double sign;
  };
  std::vector<double> offset(n, 0.0);
  std::vector<std::vector<Term>> terms(n);
  std::size_t ny = 0;
  struct Row {
    std::vector<double> a;
    Relation rel;
    double b;
  };
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (y col, bound)
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = lp.lower[i];
    const double hi = lp.upper[i];
    if (lo > -inf) {
      offset[i] = lo;
      if (hi == lo) continue;
      terms[i].push_back({ny, 1.0});
      if (hi < inf) upper_rows.emplace_back(ny, hi - lo);
      ++ny;
    } else if (hi < inf) {
      offset[i] = hi;
      terms[i].push_back({ny++, -1.0});
    } else {
      terms[i].push_back({ny++, 1.0});
      terms[i].push_back({ny++, -1.0});
    }
  }

  std::vector<double> cost(ny, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const Term& tm : terms[i]) cost[tm.col] += lp.objective[i] * tm.sign;
  }

  std::vector<Row> rows;
  for (const auto& c : lp.constraints) {
    Row r{std::vector<double>(ny, 0.0), c.relation, c.bound};
    for (std::size_t i = 0; i < n; ++i) {
      if (c.coeffs[i] == 0.0) continue;
      r.b -= c.coeffs[i] * offset[i];
      for (const Term& tm : terms[i]) r.a[tm.col] += c.coeffs[i] * tm.sign;
    }
    rows.push_back(std::move(r));
  }
  for (const auto& [col, bound] : upper_rows) {
    Row r{std::vector<double>(ny, 0.0), Relation::less_equal, bound};
    r.a[col] = 1.0;
    rows.push_back(std::move(r));
  }

  LpSolution out;

  // Row equilibration; empty rows are checked and dropped.
  std::vector<Row> kept;
  for (auto& r : rows) {
    double m = 0.0;
    for (double v : r.a) m = std::max(m, std::abs(v));
    if (m == 0.0) {
      const bool ok = r.rel == Relation::equal ? std::abs(r.b) <= opt.feasibility_tol
                                               : r.b >= -opt.feasibility_tol;
      if (!ok) return out;
      continue;
    }
    for (double& v : r.a) v /= m;
    r.b /= m;
    kept.push_back(std::move(r));
  }
  rows = std::move(kept);

  // Column equilibration.
  std::vector<double> col_scale(ny, 1.0);
  for (std::size_t j = 0; j < ny; ++j) {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, std::abs(r.a[j]));
    if (m > 0.0) col_scale[j] = 1.0 / m;
    for (auto& r : rows) r.a[j] *= col_scale[j];
    cost[j] *= col_scale[j];
  }

  const std::size_t m = rows.size();
  std::size_t n_slack = 0;
  for (const auto& r : rows)
    if (r.rel == Relation::less_equal) ++n_slack;
  std::size_t n_art = 0;
  for (const auto& r : rows)
    if (r.rel == Relation::equal || r.b < 0.0) ++n_art;

  const std::size_t total = ny + n_slack + n_art;
  detail::Tableau t(m, total);
  std::vector<std::size_t> basis(m);
  std::vector<bool> is_art(total, false);
  std::size_t next_slack = ny;
  std::size_t next_art = ny + n_slack;
  for (std::size_t r = 0; r < m; ++r) {
    const Row& row = rows[r];
    const double sgn = row.b < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < ny; ++j) t.at(r, j) = sgn * row.a[j];
    t.rhs(r) = sgn * row.b;
    if (row.rel == Relation::less_equal) {
      t.at(r, next_slack) = sgn;
      if (sgn > 0.0) basis[r] = next_slack;
      ++next_slack;
    }
    if (row.rel == Relation::equal || sgn < 0.0) {
      t.at(r, next_art) = 1.0;
      is_art[next_art] = true;
      basis[r] = next_art++;
    }
  }

  int pivots = 0;
  std::vector<bool> allowed(total, true);

  if (n_art > 0) {
    for (std::size_t c = 0; c <= total; ++c) t.at(m, c) = 0.0;
    for (std::size_t c = 0; c < total; ++c)
      if (is_art[c]) t.cost(c) = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      if (!is_art[basis[r]]) continue;
      for (std::size_t c = 0; c <= total; ++c) t.at(m, c) -= t.at(r, c);
    }
    detail::run_phase(t, basis, allowed, opt, pivots);
    if (-t.rhs(m) > opt.feasibility_tol) {
      out.pivots = pivots;
      return out;
    }
    // Drive artificials out of the basis where a real column can replace them.
    for (std::size_t r = 0; r < m; ++r) {
      if (!is_art[basis[r]]) continue;
      for (std::size_t c = 0; c < total; ++c) {
        if (is_art[c] || std::abs(t.at(r, c)) <= opt.pivot_tol) continue;
        t.pivot(r, c);
        basis[r] = c;
        ++pivots;
        break;
      }
    }
    for (std::size_t c = 0; c < total; ++c)
      if (is_art[c]) allowed[c] = false;
  }

  // Phase II costs.
  for (std::size_t c = 0; c <= total; ++c) t.at(m, c) = 0.0;
  for (std::size_t c = 0; c < ny; ++c) t.cost(c) = cost[c];
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t bc = basis[r];
    const double cb = bc < ny ? cost[bc] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= total; ++c) t.at(m, c) -= cb * t.at(r, c);
  }
  const bool bounded = detail::run_phase(t, basis, allowed, opt, pivots);
  out.pivots = pivots;
  if (!bounded) {
    out.status = LpStatus::unbounded;
    return out;
  }

  std::vector<double> y(ny, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < ny) y[basis[r]] = std::max(t.rhs(r), 0.0) * col_scale[basis[r]];
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double v = offset[i];
    for (const Term& tm : terms[i]) v += tm.sign * y[tm.col];
    out.x[i] = std::clamp(v, lp.lower[i], lp.upper[i]);
  }
  out.objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) out.objective += lp.objective[i] * out.x[i];
  out.status = LpStatus::optimal;
  return out;
}

namespace detail {

inline std::string exact_decimal(double v) {
  if (v == std::numeric_limits<double>::infinity()) return "inf";
  if (v == -std::numeric_limits<double>::infinity()) return "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

inline double parse_decimal(const std::string& tok) {
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw invalid_input("bad number in LP text: " + tok);
  return v;
}

}  // namespace detail

/// Plain-text tableau dump, one line per item:
///   vars <n>
///   min <c_0> ... <c_{n-1}>
///   bound <i> <lo> <hi>
///   row <a_0> ... <a_{n-1}> <= <b>     (or '=')
/// Numbers are written in shortest round-trip decimal form.
inline std::string to_text(const LinearProgram& lp) {
  std::ostringstream os;
  const std::size_t n = lp.num_vars();
  os << "vars " << n << '\n' << "min";
  for (double c : lp.objective) os << ' ' << detail::exact_decimal(c);
  os << '\n';
  for (std::size_t i = 0; i < n; ++i)
    os << "bound " << i << ' ' << detail::exact_decimal(lp.lower[i]) << ' '
       << detail::exact_decimal(lp.upper[i]) << '\n';
  for (const auto& c : lp.constraints) {
    os << "row";
    for (double a : c.coeffs) os << ' ' << detail::exact_decimal(a);
    os << (c.relation == Relation::equal ? " = " : " <= ") << detail::exact_decimal(c.bound) << '\n';
  }
  return os.str();
}

inline LinearProgram parse_lp_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  LinearProgram lp;
  bool have_vars = false;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<std::string> toks;
    for (std::string tok; ls >> tok;) toks.push_back(tok);
    if (key == "vars") {
      if (toks.size() != 1) throw invalid_input("bad vars line");
      lp = LinearProgram(static_cast<std::size_t>(std::stoul(toks[0])));
      have_vars = true;
      continue;
    }
    if (!have_vars) throw invalid_input("LP text must start with a vars line");
    const std::size_t n = lp.num_vars();
    if (key == "min") {
      if (toks.size() != n) throw invalid_input("bad objective line");
      for (std::size_t i = 0; i < n; ++i) lp.objective[i] = detail::parse_decimal(toks[i]);
    } else if (key == "bound") {
      if (toks.size() != 3) throw invalid_input("bad bound line");
      const auto i = static_cast<std::size_t>(std::stoul(toks[0]));
      if (i >= n) throw invalid_input("bound index out of range");
      lp.lower[i] = detail::parse_decimal(toks[1]);
      lp.upper[i] = detail::parse_decimal(toks[2]);
    } else if (key == "row") {
      if (toks.size() != n + 2) throw invalid_input("bad row line");
      std::vector<double> a(n);
      for (std::size_t i = 0; i < n; ++i) a[i] = detail::parse_decimal(toks[i]);
      Relation rel;
      if (toks[n] == "<=") {
        rel = Relation::less_equal;
      } else if (toks[n] == "=") {
        rel = Relation::equal;
      } else {
        throw invalid_input("bad relation in LP text: " + toks[n]);
      }
      lp.add(std::move(a), rel, detail::parse_decimal(toks[n + 1]));
    } else {
      throw invalid_input("unknown LP text line: " + key);
    }
  }
  lp.validate();
  return lp;
}

}  // namespace rsfbl

#endif  // RSFBL_LP_HPP
