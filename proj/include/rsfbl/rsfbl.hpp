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

// Umbrella header for the library (the CLI lives in rsfbl/cli.hpp).

#ifndef RSFBL_RSFBL_HPP
#define RSFBL_RSFBL_HPP

#include "rsfbl/config.hpp"
#include "rsfbl/csv.hpp"
#include "rsfbl/error.hpp"
#include "rsfbl/explorer.hpp"
#include "rsfbl/fbl.hpp"
#include "rsfbl/lp.hpp"
#include "rsfbl/mac.hpp"
#include "rsfbl/oracle.hpp"
#include "rsfbl/parallel.hpp"
#include "rsfbl/sca.hpp"
#include "rsfbl/subproblem.hpp"

#endif  // RSFBL_RSFBL_HPP
