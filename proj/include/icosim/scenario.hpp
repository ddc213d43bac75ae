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


#ifndef ICOSIM_SCENARIO_HPP_
#define ICOSIM_SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icosim/engine.hpp"

namespace icosim {

class ParseFailure : public Error {
 public:
  ParseFailure(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class Action { Bid, Withdraw, Poke };

// How the runner obtains insertion advice for a bid.
struct AdviceSpec {
  enum class Mode { Auto, None, Head, After };
  Mode mode = Mode::Auto;
  Amount after;

  bool operator==(const AdviceSpec&) const = default;
};

struct ScenarioEvent {
  Stage stage = 0;
  AddressId actor;
  Action action = Action::Bid;
  Amount v;
  Amount c;
  std::optional<Amount> m;
  AdviceSpec advice;
  AdviceSpec min_advice;
  Amount x;
  std::vector<AddressId> targets;

  bool operator==(const ScenarioEvent&) const = default;
};

enum class StrategyKind { Truthful, Blackout, Whale, Sniper, Passive };

std::string_view to_string(StrategyKind kind);

struct StrategySpec {
  std::string name;
  StrategyKind kind = StrategyKind::Passive;
  std::map<std::string, std::string> params;

  bool operator==(const StrategySpec&) const = default;
};

struct Scenario {
  SaleConfig config;
  Amount unit = Amount::units(1);  // minimal units per whole token, display only
  Amount supply = Amount::units(1'000'000'000);  // circulating native supply
  std::uint64_t seed = 0;
  std::vector<StrategySpec> strategies;
  std::vector<ScenarioEvent> events;  // stable-sorted by stage

  bool operator==(const Scenario&) const = default;
};

// Tab-separated, one record per line; see docs/formats.md. Throws
// ParseFailure with a 1-based line and column.
Scenario parse_scenario(std::string_view text);

// Normalized form: every parameter spelled out in a fixed order. Two
// scenarios are equal iff their normalized forms are byte-identical.
std::string format_scenario(const Scenario& scenario);

// Buyer owning an address: the part before the first '/'.
std::string buyer_of(const AddressId& address);

// Shared by the scenario and trace readers.
std::vector<std::string_view> split_tabs(std::string_view line);

}  // namespace icosim

#endif  // ICOSIM_SCENARIO_HPP_
