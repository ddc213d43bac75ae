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


#ifndef ICOSIM_TESTS_HELPERS_HPP_
#define ICOSIM_TESTS_HELPERS_HPP_

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "icosim/engine.hpp"
#include "icosim/scenario.hpp"

namespace icosim::testing {

inline Amount U(std::uint64_t n) { return Amount::units(n); }

// Submits with the advice an honest off-chain helper would compute.
inline Receipt submit(SaleState& state, const AddressId& address, std::uint64_t v, std::uint64_t c,
                      std::optional<std::uint64_t> m = std::nullopt) {
  BidRequest request{address, U(v), U(c), std::nullopt, state.book().advise_cap(U(c)), std::nullopt};
  if (m) {
    request.m = U(*m);
    request.min_advice = state.book().advise_minimum(U(*m));
  }
  return state.submit_bid(request);
}

inline void advance_to(SaleState& state, Stage s) {
  while (state.stage() < s) state.advance_block();
}

inline SaleConfig config(Stage t, Stage u, std::uint64_t granularity = 1) {
  SaleConfig c;
  c.curve = PriceCurve{Rational(6, 5), Rational(11, 10), Rational(1), t, u};
  c.granularity = U(granularity);
  return c;
}

// The error code fn() throws, or nullopt when it succeeds.
inline std::optional<ErrorCode> code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

#ifdef ICOSIM_SCENARIO_DIR
inline std::string scenario_path(const std::string& name) {
  return std::string(ICOSIM_SCENARIO_DIR) + "/" + name;
}

inline Scenario bundled(const std::string& name) { return parse_scenario(read_file(scenario_path(name))); }
#endif

}  // namespace icosim::testing

#endif  // ICOSIM_TESTS_HELPERS_HPP_
