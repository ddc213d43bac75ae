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

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "icosim/agents.hpp"
#include "icosim/analysis.hpp"

namespace icosim {
namespace {

using testing::code_of;
using testing::U;

Rational random_fraction(std::mt19937_64& rng, std::uint64_t den) {
  return Rational(static_cast<long long>(draw_below(rng, den)), static_cast<long long>(den));
}

TEST(ClosedForm, AdvantageIsTheShareDifference) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10'000; ++i) {
    Rational a = random_fraction(rng, 997) + Rational(1, 997);
    Rational b = a * random_fraction(rng, 991);
    BlackoutParams p{a, b, Rational(1 + draw_below(rng, 1'000'000)), Rational(draw_below(rng, 1'000'000))};
    ASSERT_LT(b, a);
    Rational adv = blackout_advantage(p);
    ASSERT_EQ(adv, blackout_share(p) - truthful_share(p));
    ASSERT_LE(adv, blackout_bound(a, b));
    ASSERT_GE(adv, 0);
    const Rational& A = p.A();
    const Rational& B = p.B();
    ASSERT_LE(adv, p.x <= p.y ? advantage_bound_small_x(A, B) : advantage_bound_large_x(A, B));
  }
}

TEST(ClosedForm, TwentyAndTenPercentAtEqualStakes) {
  BlackoutParams p{Rational(1, 5), Rational(1, 10), Rational(7), Rational(7)};
  EXPECT_EQ(truthful_share(p), Rational(1, 2));
  EXPECT_EQ(blackout_share(p), Rational(12, 23));
  EXPECT_EQ(blackout_advantage(p), Rational(3, 138));
  EXPECT_NEAR(blackout_advantage(p).convert_to<double>(), 0.021739, 1e-6);
  EXPECT_EQ(blackout_bound(p.a, p.b), Rational(1, 30));
}

TEST(ClosedForm, CaseBounds) {
  Rational A(6, 5), B(11, 10);
  EXPECT_EQ(advantage_bound_small_x(A, B), (A - B) / (A + 2 * B));
  EXPECT_EQ(advantage_bound_large_x(A, B), (A - B) / (2 * A + B));
  // x = y lies in both cases and stays below both bounds
  BlackoutParams p{Rational(1, 5), Rational(1, 10), Rational(1), Rational(1)};
  EXPECT_EQ(blackout_advantage(p), (A - B) / (2 * (A + B)));
  EXPECT_LT(blackout_advantage(p), advantage_bound_large_x(A, B));
  EXPECT_LT(advantage_bound_large_x(A, B), advantage_bound_small_x(A, B));
}

TEST(ClosedForm, Degenerate) {
  EXPECT_EQ(blackout_advantage({Rational(1, 5), Rational(1, 10), Rational(0), Rational(0)}), 0);
  EXPECT_EQ(blackout_advantage({Rational(1, 5), Rational(1, 10), Rational(0), Rational(9)}), 0);
  EXPECT_EQ(blackout_advantage({Rational(1, 5), Rational(1, 5), Rational(3), Rational(9)}), 0);
}

TEST(Penalty, ThirdOfTheBonus) {
  EXPECT_EQ(withdrawal_penalty(Rational(1, 5), Rational(1, 2)), Rational(1, 30));
  EXPECT_EQ(withdrawal_penalty(Rational(1, 5), Rational(0)), 0);
  EXPECT_EQ(withdrawal_penalty(Rational(1, 5), Rational(1)), Rational(1, 15));
}

Rational recursive_deadline(const Rational& a, const Rational& b, unsigned n) {
  Rational p = (a - b) / a;
  for (unsigned k = 1; k < n; ++k) {
    Rational bk = a - p * (a - b);  // bonus with a linear ramp at time p
    p = (a - bk) / a;
  }
  return p;
}

TEST(Deadline, MatchesTheRecursion) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    Rational a = random_fraction(rng, 101) + Rational(1, 101);
    Rational b = a * random_fraction(rng, 103);
    for (unsigned n = 1; n <= 20; ++n) ASSERT_EQ(rational_deadline(a, b, n), recursive_deadline(a, b, n));
  }
  Rational a(1, 5), b(1, 10);
  EXPECT_EQ(rational_deadline(a, b, 1), Rational(1, 2));
  EXPECT_EQ(rational_deadline(a, b, 2), Rational(1, 4));
  EXPECT_EQ(rational_deadline(a, b, 3), Rational(1, 8));
}

TEST(Deadline, Preconditions) {
  EXPECT_EQ(code_of([] { rational_deadline(Rational(1, 5), Rational(1, 5), 1); }), ErrorCode::InvalidFraction);
  EXPECT_EQ(code_of([] { rational_deadline(Rational(1, 5), Rational(1, 10), 0); }), ErrorCode::InvalidFraction);
  EXPECT_EQ(code_of([] { rational_deadline(Rational(1, 5), Rational(-1, 10), 2); }), ErrorCode::InvalidFraction);
  EXPECT_EQ(rational_deadline(Rational(1, 5), Rational(0), 4), 1);
}

BuyerBid bb(std::string address, std::uint64_t v, std::uint64_t c, std::uint64_t retained, bool exempt = false) {
  return BuyerBid{std::move(address), U(v), U(c), U(retained), exempt};
}

TEST(Satisfaction, InteriorPointNeedsTheExactContribution) {
  // table 100 below 1000, 40 below 5000
  std::vector<BuyerBid> bids{bb("t/0", 60, 1000, 60), bb("t/1", 40, 5000, 40)};
  EXPECT_TRUE(satisfaction_check(U(900), bids).ok);
  bids[0].retained = U(0);
  SatisfactionReport r = satisfaction_check(U(900), bids);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.buyers.at(0).lower, U(100));
  EXPECT_TRUE(satisfaction_check(U(1500), {bb("t/0", 60, 1000, 0), bb("t/1", 40, 5000, 40)}).ok);
}

TEST(Satisfaction, JumpPointAllowsTheClosedInterval) {
  for (std::uint64_t kept = 40; kept <= 100; ++kept) {
    std::vector<BuyerBid> bids{bb("t/0", 60, 1000, kept - 40), bb("t/1", 40, 5000, 40)};
    SatisfactionReport r = satisfaction_check(U(1000), bids);
    EXPECT_TRUE(r.ok) << kept;
    EXPECT_TRUE(r.buyers.at(0).jump);
  }
  EXPECT_FALSE(satisfaction_check(U(1000), {bb("t/0", 60, 1000, 0), bb("t/1", 40, 5000, 30)}).ok);
}

TEST(Satisfaction, ExemptBidsAreSetAside) {
  SatisfactionReport r = satisfaction_check(U(10), {bb("p/0", 50, 900, 25, true), bb("p/1", 5, 900, 5)});
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.exempt, 1u);
  EXPECT_EQ(r.buyers.at(0).lower, U(5));
}

TEST(Satisfaction, BuyersAreJudgedSeparately) {
  SatisfactionReport r = satisfaction_check(U(500), {bb("a/0", 10, 900, 10), bb("b/0", 10, 900, 0)});
  EXPECT_FALSE(r.ok);
  ASSERT_EQ(r.buyers.size(), 2u);
  EXPECT_TRUE(r.buyers[0].ok);
  EXPECT_FALSE(r.buyers[1].ok);
}

// Auditing forged traces: each edit must be caught under its own name.
Trace whale() { return run_scenario(testing::bundled("whale.scn")).trace; }

Trace forge(Trace t, const std::string& from, const std::string& to) {
  for (std::string& line : t.lines) {
    auto pos = line.find(from);
    if (pos != std::string::npos) {
      line.replace(pos, from.size(), to);
      return t;
    }
  }
  ADD_FAILURE() << "no line contains " << from;
  return t;
}

bool flags(const AuditReport& r, const std::string& kind) {
  return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

TEST(Audit, GenuineTraceIsClean) {
  AuditReport r = audit_trace(whale());
  EXPECT_TRUE(r.clean()) << r.summary();
  EXPECT_EQ(r.blocks, 6u);
  EXPECT_EQ(r.summary(), "clean\tblocks=6");
}

TEST(Audit, FallingValuation) {
  AuditReport r = audit_trace(forge(whale(), "block\t4\tV=79", "block\t4\tV=70"));
  EXPECT_TRUE(flags(r, "monotone")) << r.summary();
  EXPECT_EQ(r.violations.front().stage, Stage{4});
}

TEST(Audit, ActiveCapBelowValuation) {
  AuditReport r = audit_trace(forge(whale(), "whale/0\tv=50\tc=200", "whale/0\tv=50\tc=70"));
  EXPECT_TRUE(flags(r, "cap")) << r.summary();
}

TEST(Audit, GasOverTheLimit) {
  AuditReport r = audit_trace(forge(whale(), "gas=100419", "gas=6700001"));
  EXPECT_TRUE(flags(r, "gas")) << r.summary();
}

TEST(Audit, UnfinishedStepThree) {
  AuditReport r = audit_trace(forge(whale(), "carryover=0", "carryover=1"));
  EXPECT_TRUE(flags(r, "lag")) << r.summary();
}

TEST(Audit, PointerMovingBack) {
  Trace t = forge(whale(), "block\t3\tV=79\tpointer=0", "block\t3\tV=79\tpointer=79");
  AuditReport r = audit_trace(t);
  EXPECT_TRUE(flags(r, "pointer")) << r.summary();
}

TEST(Audit, RefundGoingMissing) {
  AuditReport r = audit_trace(forge(whale(), "settle\talice/0\tkind=active\tfraction=29/60\trefund=15",
                                    "settle\talice/0\tkind=active\tfraction=29/60\trefund=14"));
  EXPECT_FALSE(r.clean());
}

TEST(Audit, FinalValuationMismatch) {
  AuditReport r = audit_trace(forge(whale(), "final\tV=79", "final\tV=80"));
  EXPECT_TRUE(flags(r, "valuation")) << r.summary();
}

TEST(Audit, SaleThatNeverClosed) {
  AuditReport r = audit_trace(forge(whale(), "final\tV=79\tdust=1", "final\tV=79\terror=NotQuiescent"));
  EXPECT_TRUE(flags(r, "final")) << r.summary();
}

TEST(Audit, GarbageRecord) {
  Trace t = whale();
  t.lines.insert(t.lines.end() - 1, "rec\tteleport\t3\tx");
  EXPECT_TRUE(flags(audit_trace(t), "record"));
}

}  // namespace
}  // namespace icosim
