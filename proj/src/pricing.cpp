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


#include "icosim/pricing.hpp"

namespace icosim {

void PriceCurve::validate() const {
  if (!(t < u)) raise(ErrorCode::InvalidCurve, "lock must precede sale end");
  if (!(pu > 0)) raise(ErrorCode::InvalidCurve, "p(u) must be positive");
  if (!(p0 >= pt && pt >= pu)) raise(ErrorCode::InvalidCurve, "ramp must be non-increasing");
  if (t == 0 && p0 != pt) raise(ErrorCode::InvalidCurve, "t = 0 requires p0 == pt");
}

Rational purchase_power(const PriceCurve& curve, Stage s) {
  if (s > curve.u) {
    raise(ErrorCode::StageOutOfRange, std::to_string(s) + " > " + std::to_string(curve.u));
  }
  if (s < curve.t) {
    return curve.p0 + (curve.pt - curve.p0) * Rational(s, curve.t);
  }
  return curve.pt + (curve.pu - curve.pt) * Rational(s - curve.t, curve.u - curve.t);
}

Amount token_balance(const PriceCurve& curve, Amount v, Stage s) {
  return floor_mul(v, purchase_power(curve, s));
}

Amount voluntary_refund(Amount v, Stage s, Stage t) {
  if (s >= t) raise(ErrorCode::WithdrawalLocked, "stage " + std::to_string(s));
  return floor_mul(v, Rational(t - s, t));
}

Amount committed_balance(const PriceCurve& curve, Amount v, Stage s, Stage entry) {
  if (s >= curve.t) raise(ErrorCode::WithdrawalLocked, "stage " + std::to_string(s));
  if (entry > s) raise(ErrorCode::StageOutOfRange, "entry after withdrawal");
  Rational pa = purchase_power(curve, entry);
  Rational scratched = pa - (pa - curve.pu) / 3;
  return floor_mul(v, Rational(s, curve.t) * scratched);
}

}  // namespace icosim
