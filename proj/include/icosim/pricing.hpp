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


#ifndef ICOSIM_PRICING_HPP_
#define ICOSIM_PRICING_HPP_

#include "icosim/ledger.hpp"

namespace icosim {

// Inflation ramp: piecewise linear through (0, p0), (t, pt), (u, pu).
// Multipliers convert native capital into crowdsale tokens.
struct PriceCurve {
  Rational p0{6, 5};
  Rational pt{11, 10};
  Rational pu{1};
  Stage t = 0;  // withdrawal lock
  Stage u = 1;  // sale end

  // Requires p0 >= pt >= pu > 0 and t < u. Throws InvalidCurve.
  void validate() const;

  bool operator==(const PriceCurve&) const = default;
};

// Throws StageOutOfRange for s > u.
Rational purchase_power(const PriceCurve& curve, Stage s);

// floor(v * p(s)): token balance of a fresh bid.
Amount token_balance(const PriceCurve& curve, Amount v, Stage s);

// floor(v * (t - s) / t). Throws WithdrawalLocked for s >= t.
Amount voluntary_refund(Amount v, Stage s, Stage t);

// Token balance of the part of a bid left behind by a voluntary withdrawal:
// floor(v * s/t * (p(entry) - (p(entry) - p(u)) / 3)).
Amount committed_balance(const PriceCurve& curve, Amount v, Stage s, Stage entry);

}  // namespace icosim

#endif  // ICOSIM_PRICING_HPP_
