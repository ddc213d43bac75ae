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


#ifndef ICOSIM_AGENTS_HPP_
#define ICOSIM_AGENTS_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "icosim/engine.hpp"
#include "icosim/scenario.hpp"
#include "icosim/trace.hpp"

namespace icosim {

// One step of a buyer's demand curve: below `threshold` the buyer wants
// `contribution` in total. An optional floor turns the step into a bid with
// a personal minimum.
struct ValuationStep {
  Amount threshold;
  Amount contribution;
  std::optional<Amount> minimum;
};

// Right-continuous step function T(V), thresholds strictly ascending.
struct ValuationTable {
  std::vector<ValuationStep> steps;

  // T(V): contribution of the first step whose threshold exceeds V.
  Amount at(Amount V) const;
};

struct TableBid {
  Amount v;
  Amount c;
  std::optional<Amount> m;

  bool operator==(const TableBid&) const = default;
};

// Throws NonMonotoneTable unless thresholds ascend and contributions do
// not increase. Zero-height steps emit nothing.
std::vector<TableBid> bids_from_table(const ValuationTable& table);

// "threshold:contribution[:minimum],..."
ValuationTable parse_table(std::string_view text);

// Uniform draw in [0, n) that does not depend on the standard library's
// distribution implementation.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n);

// Smallest multiple of G strictly above the circulating supply.
Amount passive_cap(Amount supply, Amount granularity);

struct ScenarioRun {
  Trace trace;  // body without the audit and digest lines
  std::vector<BlockSummary> blocks;
  std::optional<FinalReport> report;
  std::optional<ErrorCode> final_error;
  std::map<AddressId, Bid> bids;
  std::size_t rejections = 0;
};

// Executes explicit events first, then each strategy in declaration order,
// for every stage 0..u. Engine errors become reject records.
ScenarioRun run_scenario(const Scenario& scenario);

struct BlackoutSetup {
  Rational a{1, 5};  // early bonus
  Rational b{1, 10};  // bonus when truthful buyers enter at the lock
  Amount x;           // capital the adversary keeps in the sale
  Amount y;           // truthful capital
  Amount bulk;        // capital withdrawn before the lock
  Stage t = 10;
  Stage u = 20;
  Stage withdraw_stage = 0;
  bool penalty = true;
};

struct BlackoutMeasurement {
  Rational attack_fraction;    // adversary token share, attack run
  Rational baseline_fraction;  // same share when everyone enters at once
  Rational advantage;          // attack - baseline
  Rational predicted;          // closed form
  Rational penalty;            // bonus forfeited on the committed bulk, per unit of bulk
  Rational net_gain;           // advantage - penalty
  Amount attack_tokens;
  Amount truthful_tokens;
};

// Paired runs of the engine: attack versus simultaneous truthful entry.
BlackoutMeasurement blackout_play(const BlackoutSetup& setup);

}  // namespace icosim

#endif  // ICOSIM_AGENTS_HPP_
