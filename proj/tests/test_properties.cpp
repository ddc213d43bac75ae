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

#include "corpus.hpp"
#include "helpers.hpp"
#include "icosim/batch.hpp"
#include "properties.hpp"

namespace icosim {
namespace {

using testing::Finding;

constexpr std::size_t kCorpusSize = 1000;
constexpr std::uint64_t kCorpusSeed = 20'170'901;

struct Corpus {
  std::vector<Scenario> scenarios;
  std::vector<RunOutcome> outcomes;
};

const Corpus& shared_corpus() {
  static const Corpus corpus = [] {
    Corpus c;
    c.scenarios = testing::corpus(kCorpusSize, kCorpusSeed);
    c.outcomes = run_batch(c.scenarios);
    return c;
  }();
  return corpus;
}

template <typename Check>
void expect_everywhere(Check check) {
  const Corpus& c = shared_corpus();
  std::size_t failures = 0;
  for (std::size_t i = 0; i < c.scenarios.size(); ++i) {
    Finding f = check(c.scenarios[i], c.outcomes[i].run);
    if (f && failures++ < 5) ADD_FAILURE() << "scenario " << i << ": " << *f;
  }
  EXPECT_EQ(failures, 0u);
}

TEST(Corpus, IsLargeAndVaried) {
  const Corpus& c = shared_corpus();
  ASSERT_EQ(c.scenarios.size(), kCorpusSize);
  std::size_t scaled = 0, kicked = 0, rejected = 0, post_lock = 0;
  for (std::size_t i = 0; i < kCorpusSize; ++i) {
    const auto& run = c.outcomes[i].run;
    EXPECT_LE(run.bids.size(), 200u);
    EXPECT_LE(run.blocks.size(), 50u);
    rejected += run.rejections;
    for (const auto& block : run.blocks) {
      for (const auto& batch : block.batches) (batch.full_kick() ? kicked : scaled)++;
    }
    for (const auto& [address, bid] : run.bids) {
      (void)address;
      if (bid.entry_stage > c.scenarios[i].config.curve.t) ++post_lock;
    }
  }
  EXPECT_GT(scaled, 100u);
  EXPECT_GT(kicked, 100u);
  EXPECT_GT(rejected, 10u);
  EXPECT_GT(post_lock, 1000u);
}

TEST(Corpus, ValuationNeverFallsAfterTheLock) {
  expect_everywhere(testing::check_monotone);
}

TEST(Corpus, EveryBuyerIsSatisfied) {
  expect_everywhere([](const Scenario&, const ScenarioRun& run) { return testing::check_satisfaction(run); });
}

TEST(Corpus, MatchesTheReferenceEngine) {
  expect_everywhere(testing::check_oracle);
}

TEST(Corpus, PointerOnlyMovesForward) {
  expect_everywhere(testing::check_pointer);
}

TEST(Corpus, AuditorAgrees) {
  const Corpus& c = shared_corpus();
  for (std::size_t i = 0; i < kCorpusSize; ++i) {
    EXPECT_TRUE(c.outcomes[i].audit.clean()) << "scenario " << i << ": " << c.outcomes[i].audit.summary();
  }
}

TEST(Corpus, ConservationAtTheEnd) {
  expect_everywhere([](const Scenario&, const ScenarioRun& run) -> Finding {
    if (!run.report) return "did not finalize";
    Amount in, out;
    for (const auto& [address, bid] : run.bids) {
      const Allocation& a = run.report->allocations.at(address);
      in += bid.v + bid.poke_fee;
      out += a.refunded + a.retained;
      (void)address;
    }
    // every deposited unit is refunded, retained (dust included) or paid to a poker
    Amount fees;
    for (const auto& [address, bid] : run.bids) {
      (void)address;
      fees += bid.poke_fee - bid.fee_refunded;
    }
    Amount accounted = out + fees;
    if (accounted != in) return "in " + in.str() + " accounted " + accounted.str();
    return std::nullopt;
  });
}

TEST(Granularity, BoundKeepsThePointerCurrent) {
  Finding f = testing::granularity_sweep(kCorpusSeed, 300);
  EXPECT_FALSE(f) << *f;
}

TEST(Granularity, OneUnitBelowTheBoundCanLag) {
  constexpr std::uint64_t kMoves = 3;
  const Amount inflow = Amount::units(10);
  const Amount bound = min_granularity(inflow, kMoves);
  ASSERT_EQ(bound, Amount::units(4));
  for (Amount g : {bound - Amount::units(1), bound}) {
    ScenarioRun run = run_scenario(testing::lagging_scenario(g, kMoves, inflow));
    ASSERT_EQ(run.rejections, 0u);
    for (std::uint64_t k = 0; k <= kMoves + 1; ++k) {
      ASSERT_EQ(run.bids.at("sleeper/" + std::to_string(k)).status, BidStatus::Used);  // dormant, refunded
    }
    bool lagged = false;
    for (const auto& b : run.blocks) lagged |= b.carryover;
    EXPECT_EQ(lagged, g < bound) << "G = " << g.str();
    EXPECT_EQ(testing::check_audit(run).has_value(), g < bound);
  }
}

}  // namespace
}  // namespace icosim
