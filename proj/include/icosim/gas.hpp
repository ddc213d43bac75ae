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


#ifndef ICOSIM_GAS_HPP_
#define ICOSIM_GAS_HPP_

#include <cstdint>

#include "icosim/ledger.hpp"

namespace icosim {

using Gas = std::uint64_t;

// Defaults are the September 2017 mainnet figures.
struct GasSchedule {
  Gas block_limit = 6'700'000;
  Gas loop_base = 40'000;        // starting the pointer loop
  Gas per_pointer_move = 19;     // one loop iteration
  Gas per_store = 5'000;         // SSTORE, one per poked bid
  Gas per_bid_submit = 60'000;
  Gas per_advice_check = 400;    // O(1) neighbour inspection

  // All costs positive. Throws InvalidSchedule.
  void validate() const;

  bool operator==(const GasSchedule&) const = default;
};

enum class GasOp { LoopBase, PointerMove, Store, BidSubmit, AdviceCheck };

Gas cost_of(const GasSchedule& schedule, GasOp op);

class GasMeter {
 public:
  explicit GasMeter(GasSchedule schedule = {}) : schedule_(schedule) {}

  // Deducts cost * multiplicity and returns the remaining budget. On
  // GasExhausted nothing is deducted.
  Gas charge(GasOp op, std::uint64_t multiplicity = 1);
  bool can_afford(GasOp op, std::uint64_t multiplicity = 1) const;

  void reset() { spent_ = 0; }
  Gas spent() const { return spent_; }
  Gas remaining() const { return schedule_.block_limit - spent_; }
  const GasSchedule& schedule() const { return schedule_; }

 private:
  GasSchedule schedule_;
  Gas spent_ = 0;
};

// floor((block_limit - loop_base - reserved) / per_pointer_move).
// Throws ReserveTooLarge unless reserved < block_limit - loop_base; a
// schedule with block_limit == loop_base and no reserve yields 0.
std::uint64_t pointer_move_capacity(const GasSchedule& schedule, Gas reserved);

// floor(block_limit / per_store): bids one poke transaction can activate.
std::uint64_t poke_capacity(const GasSchedule& schedule);

// Smallest bucket spacing strictly greater than capital / moves.
// Throws ZeroMoves.
Amount min_granularity(Amount max_capital_per_block, std::uint64_t moves_per_block);

}  // namespace icosim

#endif  // ICOSIM_GAS_HPP_
