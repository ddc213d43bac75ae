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


#ifndef ICOSIM_ANALYSIS_HPP_
#define ICOSIM_ANALYSIS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "icosim/ledger.hpp"
#include "icosim/trace.hpp"

namespace icosim {

// a, b are bonus fractions (0.2 means 20%); x is the adversary's capital and
// y that of everyone else.
struct BlackoutParams {
  Rational a;
  Rational b;
  Rational x;
  Rational y;

  Rational A() const { return 1 + a; }
  Rational B() const { return 1 + b; }
};

// Adversary share when every buyer enters at bonus a.
Rational truthful_share(const BlackoutParams& p);
// Adversary share when the others enter later at bonus b.
Rational blackout_share(const BlackoutParams& p);
// Axy(A-B) / (A^2x^2 + A^2xy + ABxy + ABy^2); zero when x + y = 0.
Rational blackout_advantage(const BlackoutParams& p);
Rational blackout_bound(const Rational& a, const Rational& b);  // (a-b)/3
Rational advantage_bound_small_x(const Rational& A, const Rational& B);  // x <= y
Rational advantage_bound_large_x(const Rational& A, const Rational& B);  // x >= y
// a*p/3: bonus forfeited by withdrawing after a fraction p of the epoch.
Rational withdrawal_penalty(const Rational& a, const Rational& p);
// ((a-b)/a)^n. Throws InvalidFraction unless 0 <= b < a and n >= 1.
Rational rational_deadline(const Rational& a, const Rational& b, unsigned n);

// A bid as seen by the satisfaction check.
struct BuyerBid {
  AddressId address;
  Amount v;
  Amount c;
  Amount retained;
  bool exempt = false;  // voluntary exit or personal minimum
};

struct BuyerVerdict {
  std::string buyer;
  Amount retained;
  Amount lower;  // right limit of T at V
  Amount upper;  // left limit of T at V
  bool jump = false;  // V equals one of the buyer's caps
  bool ok = false;
};

struct SatisfactionReport {
  std::vector<BuyerVerdict> buyers;
  std::size_t exempt = 0;
  bool ok = true;
};

// Per buyer: interior points need retained == T(V); jump points need
// lower <= retained <= upper. Exempt bids are left out of both sides.
SatisfactionReport satisfaction_check(Amount V, const std::vector<BuyerBid>& bids);

struct Violation {
  std::optional<Stage> stage;
  std::string kind;
  std::string detail;
};

struct AuditReport {
  std::vector<Violation> violations;
  std::vector<std::string> notes;  // informational, e.g. breached minimums
  std::size_t blocks = 0;

  bool clean() const { return violations.empty(); }
  std::string summary() const;  // the trace's audit line without the tag
};

// Replays the record stream on its own bookkeeping; never touches the
// engine. Checks, at every block boundary: V matches the replayed active
// capital, post-lock V does not fall, no active cap sits below V, the
// pointer does not move back, gas stays within the limit, Step 3 finished,
// and the conservation identity holds.
AuditReport audit_trace(const Trace& trace);

}  // namespace icosim

#endif  // ICOSIM_ANALYSIS_HPP_
