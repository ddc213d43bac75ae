// Copyright 2026 The icosim Authors.
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


#ifndef ICOSIM_BATCH_HPP_
#define ICOSIM_BATCH_HPP_

#include <vector>

#include "icosim/cli.hpp"

namespace icosim {

// Independent runs, one engine per scenario, spread over OpenMP threads.
// Results are in input order and identical to the serial versions.
std::vector<RunOutcome> run_batch(const std::vector<Scenario>& scenarios);
std::vector<AuditReport> audit_batch(const std::vector<Trace>& traces);

// Single-threaded reference.
std::vector<RunOutcome> run_batch_serial(const std::vector<Scenario>& scenarios);
std::vector<AuditReport> audit_batch_serial(const std::vector<Trace>& traces);

int batch_threads();

}  // namespace icosim

#endif  // ICOSIM_BATCH_HPP_
