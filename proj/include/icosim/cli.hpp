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


#ifndef ICOSIM_CLI_HPP_
#define ICOSIM_CLI_HPP_

#include <optional>
#include <string>
#include <vector>

#include "icosim/agents.hpp"
#include "icosim/analysis.hpp"
#include "icosim/trace.hpp"

namespace icosim {

struct RunOutcome {
  ScenarioRun run;
  AuditReport audit;
  Trace trace;  // run.trace plus the audit line; digest covers both
};

RunOutcome run_and_audit(const Scenario& scenario);

// Final V, per-address table and, for blackout strategies, measured versus
// predicted advantage. `full` adds the per-block valuation history.
std::string summary_report(const Scenario& scenario, const RunOutcome& outcome, bool full);

struct ReplayOutcome {
  std::string recorded;
  std::string replayed;
  AuditReport audit;  // of the recorded trace
};

// Re-executes the embedded scenario. Throws DigestMismatch when the file
// is corrupt or the rerun differs, and RefusedDifferentConfig when a gas
// limit override disagrees with the recorded one.
ReplayOutcome replay_trace(const ParsedTrace& parsed, std::optional<Gas> gas_limit = std::nullopt);

enum ExitCode : int { kExitClean = 0, kExitViolation = 1, kExitUsage = 2 };

}  // namespace icosim

#endif  // ICOSIM_CLI_HPP_
