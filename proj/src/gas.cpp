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


#include "icosim/gas.hpp"

#include <limits>

namespace icosim {

void GasSchedule::validate() const {
  if (block_limit == 0 || loop_base == 0 || per_pointer_move == 0 || per_store == 0 ||
      per_bid_submit == 0 || per_advice_check == 0) {
    raise(ErrorCode::InvalidSchedule, "gas costs must be positive");
  }
}

Gas cost_of(const GasSchedule& schedule, GasOp op) {
  switch (op) {
    case GasOp::LoopBase: return schedule.loop_base;
    case GasOp::PointerMove: return schedule.per_pointer_move;
    case GasOp::Store: return schedule.per_store;
    case GasOp::BidSubmit: return schedule.per_bid_submit;
    case GasOp::AdviceCheck: return schedule.per_advice_check;
  }
  return 0;
}

bool GasMeter::can_afford(GasOp op, std::uint64_t multiplicity) const {
  Gas unit = cost_of(schedule_, op);
  if (multiplicity != 0 && unit > std::numeric_limits<Gas>::max() / multiplicity) return false;
  return unit * multiplicity <= remaining();
}

Gas GasMeter::charge(GasOp op, std::uint64_t multiplicity) {
  if (!can_afford(op, multiplicity)) {
    raise(ErrorCode::GasExhausted, "remaining " + std::to_string(remaining()));
  }
  spent_ += cost_of(schedule_, op) * multiplicity;
  return remaining();
}

std::uint64_t pointer_move_capacity(const GasSchedule& schedule, Gas reserved) {
  if (schedule.block_limit < schedule.loop_base) {
    raise(ErrorCode::ReserveTooLarge, "loop base exceeds block limit");
  }
  Gas budget = schedule.block_limit - schedule.loop_base;
  if (reserved > 0 && reserved >= budget) {
    raise(ErrorCode::ReserveTooLarge, std::to_string(reserved) + " >= " + std::to_string(budget));
  }
  return (budget - reserved) / schedule.per_pointer_move;
}

std::uint64_t poke_capacity(const GasSchedule& schedule) {
  return schedule.block_limit / schedule.per_store;
}

Amount min_granularity(Amount max_capital_per_block, std::uint64_t moves_per_block) {
  if (moves_per_block == 0) raise(ErrorCode::ZeroMoves);
  return Amount(max_capital_per_block.raw() / moves_per_block) + Amount::units(1);
}

}  // namespace icosim
