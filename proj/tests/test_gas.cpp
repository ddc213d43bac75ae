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


#include <gtest/gtest.h>

#include "icosim/gas.hpp"

namespace icosim {
namespace {

TEST(GasCapacity, PointerMoves) {
  GasSchedule defaults;
  EXPECT_EQ(pointer_move_capacity(defaults, 0), 350'526u);
  EXPECT_EQ(pointer_move_capacity(defaults, 960'000), 300'000u);
  GasSchedule tight;
  tight.block_limit = tight.loop_base;
  EXPECT_EQ(pointer_move_capacity(tight, 0), 0u);
  try {
    pointer_move_capacity(defaults, 6'660'000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ReserveTooLarge);
  }
}

TEST(GasCapacity, Pokes) {
  GasSchedule s;
  EXPECT_EQ(poke_capacity(s), 1'340u);
  EXPECT_GE(poke_capacity(s), 1'300u);
  s.block_limit = 5'000;
  EXPECT_EQ(poke_capacity(s), 1u);
  s.block_limit = 4'999;
  EXPECT_EQ(poke_capacity(s), 0u);
}

TEST(MinGranularity, StrictlyAboveTheRatio) {
  EXPECT_EQ(min_granularity(Amount::units(1'000'000), 100'000), Amount::units(11));
  EXPECT_EQ(min_granularity(Amount{}, 100), Amount::units(1));
  EXPECT_EQ(min_granularity(Amount::units(777), 1), Amount::units(778));
  EXPECT_EQ(min_granularity(Amount::units(1'000'001), 100'000), Amount::units(11));
  try {
    min_granularity(Amount::units(5), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroMoves);
  }
}

TEST(GasMeter, ChargesAndRefusesWithoutSideEffects) {
  GasMeter meter;
  Gas before = meter.remaining();
  EXPECT_EQ(meter.charge(GasOp::PointerMove), before - 19);
  EXPECT_EQ(meter.spent(), 19u);
  Gas spent = meter.spent();
  try {
    meter.charge(GasOp::Store, 10'000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GasExhausted);
  }
  EXPECT_EQ(meter.spent(), spent);
  EXPECT_LE(meter.spent(), meter.schedule().block_limit);
  meter.reset();
  EXPECT_EQ(meter.spent(), 0u);
}

TEST(GasSchedule, RejectsNonPositiveCosts) {
  GasSchedule s;
  s.per_store = 0;
  EXPECT_THROW(s.validate(), Error);
  EXPECT_NO_THROW(GasSchedule{}.validate());
}

}  // namespace
}  // namespace icosim
