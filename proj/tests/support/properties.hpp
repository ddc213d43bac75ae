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


#ifndef ICOSIM_TESTS_PROPERTIES_HPP_
#define ICOSIM_TESTS_PROPERTIES_HPP_

#include <optional>
#include <string>

#include "corpus.hpp"
#include "icosim/agents.hpp"
#include "icosim/analysis.hpp"
#include "icosim/gas.hpp"
#include "icosim/scenario.hpp"

namespace icosim::testing {

// Each check returns a description of the first failure, or nothing.
using Finding = std::optional<std::string>;

// End-of-block V never falls once the lock has passed.
Finding check_monotone(const Scenario& scenario, const ScenarioRun& run);

// Every buyer's retained capital sits where its demand curve says.
Finding check_satisfaction(const ScenarioRun& run);

// Final V, every refund, every allocation and every block V agree with
// the per-bid reference engine.
Finding check_oracle(const Scenario& scenario, const ScenarioRun& run);

// The pointer never moves back and no block ends with Step 3 unfinished.
Finding check_pointer(const Scenario& scenario, const ScenarioRun& run);

// Conservation held at the end and the independent auditor is clean.
Finding check_audit(const ScenarioRun& run);

// A gas schedule whose pointer loop fits exactly `moves` moves in a block
// whose Step 1 actions spend `reserve`.
struct TightGas {
  GasSchedule schedule;
  Gas reserve = 0;
  std::uint64_t moves = 0;
};
TightGas tight_gas(std::uint64_t moves, Gas reserve);

// Room for `actions` submissions, withdrawals or single-target pokes under
// the tight schedule's costs.
Gas action_reserve(std::size_t actions);

// Upper bound on the capital that enters the pointer's path in a single
// block: every bid placed up to the lock, then each later block's bids.
// Explicit events only, and independent of the grid.
Amount max_block_inflow(const Scenario& scenario);

// Moves `scenario` onto grid G: caps and minimums rounded up to multiples.
Scenario regrid(Scenario scenario, Amount granularity);

// Explicit-event corpus without minimums or pokes, the setting where the
// granularity bound applies.
CorpusOptions bound_corpus_options();

// Runs `seeds` corpus scenarios under tight gas at G = min_granularity and
// reports the first block that ends with the pointer lagging.
Finding granularity_sweep(std::uint64_t base_seed, std::size_t seeds);

// Buckets holding only dormant bids cost a pointer move and no capital, so
// one block's inflow can sweep more of them than the bound allows for once
// the grid is too fine. `inflow` arrives in one post-lock block.
Scenario lagging_scenario(Amount granularity, std::uint64_t moves, Amount inflow);

}  // namespace icosim::testing

#endif  // ICOSIM_TESTS_PROPERTIES_HPP_
