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

#ifndef RSFBL_CSV_HPP
#define RSFBL_CSV_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "rsfbl/error.hpp"
#include "rsfbl/explorer.hpp"
#include "rsfbl/sca.hpp"

namespace rsfbl::csv {

/// Locale-independent %.12g.
inline std::string num(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return {buf, res.ptr};
}

inline std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

/// Writes with LF line endings regardless of platform.
inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw invalid_input("cannot open output file " + path);
  f << content;
  if (!f) throw numerical_failure("failed writing " + path);
}

inline constexpr std::string_view throughput_header =
    "scheme,order,N,r1,r2,beta,P11,P12,P2,eps1,eps2,T1,T2,Tsum,status";

inline constexpr std::string_view region_header = "scheme,order,N,angle_deg,r1,r2";

inline constexpr std::string_view trace_header =
    "scheme,N,iteration,t,true_tp,P11,P12,P2,rho_k1,rho_j,rho_k2,theta_k1,theta_j,theta_k2";

/// NOMA rows carry no decoding-order choice.
inline std::string order_cell(Scheme s, DecodingOrder o) {
  return is_rsma(s) ? std::string(to_string(o)) : std::string("-");
}

inline std::string throughput_row(const SweepResult& r) {
  return join({std::string(to_string(r.scheme)), order_cell(r.scheme, r.order), std::to_string(r.blocklength),
               num(r.r1), num(r.r2), num(r.beta), num(r.powers.p_split_1), num(r.powers.p_split_2),
               num(r.powers.p_other), num(r.eps1), num(r.eps2), num(r.t1), num(r.t2), num(r.t_sum),
               std::string(to_string(r.status))});
}

inline std::string region_row(Scheme s, DecodingOrder o, int n, const FrontierPoint& p) {
  return join({std::string(to_string(s)), order_cell(s, o), std::to_string(n), num(p.angle_deg), num(p.r1),
               num(p.r2)});
}

/// Iteration 0 is the starting point; its t is the true TP.
inline std::string trace_rows(Scheme s, int n, const ScaTrace& tr) {
  auto row = [&](int it, double lp_t, const SubproblemPoint& p) {
    return join({std::string(to_string(s)), std::to_string(n), std::to_string(it), num(lp_t), num(p.t),
                 num(p.powers[0]), num(p.powers[1]), num(p.powers[2]), num(p.rhos[0]), num(p.rhos[1]),
                 num(p.rhos[2]), num(p.thetas[0]), num(p.thetas[1]), num(p.thetas[2])});
  };
  std::string out = row(0, tr.initial.t, tr.initial);
  for (const ScaIterate& it : tr.iterates) out += row(it.iteration, it.lp_objective, it.point);
  return out;
}

}  // namespace rsfbl::csv

#endif  // RSFBL_CSV_HPP
