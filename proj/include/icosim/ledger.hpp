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

#ifndef ICOSIM_LEDGER_HPP_
#define ICOSIM_LEDGER_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace icosim {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Block counter. The lock threshold t and the sale end u live in PriceCurve.
using Stage = std::uint64_t;

using AddressId = std::string;

enum class ErrorCode {
  AmountOverflow,
  AmountUnderflow,
  ParseAmount,
  InvalidCurve,
  StageOutOfRange,
  WithdrawalLocked,
  BadAdvice,
  AdviceRequired,
  InvalidFraction,
  UnknownBid,
  AddressReused,
  CapTooLow,
  CapNotAligned,
  InvalidBid,
  NotActive,
  InvalidTarget,
  DuplicatePoke,
  GasExhausted,
  ReserveTooLarge,
  ZeroMoves,
  InvalidSchedule,
  SaleEnded,
  NotEnded,
  NotQuiescent,
  AlreadyClaimed,
  ConservationViolation,
  NonMonotoneTable,
  ParseError,
  DigestMismatch,
  RefusedDifferentConfig,
};

std::string_view to_string(ErrorCode code);

// All protocol failures surface as this exception; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& detail = {});

// Non-negative quantity in minimal currency units. Arithmetic is checked:
// overflow and negative results throw instead of wrapping.
class Amount {
 public:
  using Raw = unsigned __int128;

  constexpr Amount() = default;
  constexpr explicit Amount(Raw raw) : raw_(raw) {}
  static constexpr Amount units(std::uint64_t n) { return Amount(Raw{n}); }

  // Decimal digits only; rejects signs, blanks and overflow.
  static Amount parse(std::string_view text);

  constexpr Raw raw() const { return raw_; }
  constexpr bool is_zero() const { return raw_ == 0; }
  std::string str() const;
  BigInt big() const;
  Rational rational() const { return Rational(big()); }

  Amount operator+(Amount other) const;
  Amount operator-(Amount other) const;
  Amount operator*(std::uint64_t k) const;
  Amount& operator+=(Amount other) { return *this = *this + other; }
  Amount& operator-=(Amount other) { return *this = *this - other; }

  constexpr auto operator<=>(const Amount&) const = default;

  static constexpr Amount max() { return Amount(~Raw{0}); }

 private:
  Raw raw_ = 0;
};

// floor(value) for a non-negative rational that must fit an Amount.
Amount floor_amount(const Rational& value);
// floor(a * r), r >= 0.
Amount floor_mul(Amount a, const Rational& r);

// Lower-level formatting shared by trace writers.
std::string rational_str(const Rational& r);  // "num/den" or "num"
Rational parse_rational(std::string_view text);  // accepts "n", "n/d", "1.25"

enum class BidStatus { Dormant, Active, Permanent, Used };

std::string_view to_string(BidStatus status);
std::optional<BidStatus> parse_status(std::string_view text);

// Dormant->Used covers the zero-penalty exit of a never-activated bid.
bool is_legal_transition(BidStatus from, BidStatus to);

struct Bid {
  AddressId address;
  Amount v;                 // capital currently committed (original deposit)
  Amount b;                 // crowdsale-token balance
  Amount c;                 // personal cap
  std::optional<Amount> m;  // personal minimum
  Stage entry_stage = 0;
  BidStatus status = BidStatus::Active;
  Amount poke_fee;
  Amount permanent_v;    // set on voluntary withdrawal
  Amount fee_refunded;   // poke fee returned to a bid that never activated

  void transition(BidStatus to);
};

class RefundLedger {
 public:
  void credit(const AddressId& address, Amount amount);
  void pay_fee(const AddressId& poker, Amount amount);

  Amount refunded(const AddressId& address) const;
  Amount fees_earned(const AddressId& poker) const;
  Amount total_refunds() const { return total_refunds_; }
  Amount total_fees_paid() const { return total_fees_; }

  const std::map<AddressId, Amount>& refunds() const { return refunds_; }
  const std::map<AddressId, Amount>& fees() const { return fees_; }

 private:
  std::map<AddressId, Amount> refunds_;
  std::map<AddressId, Amount> fees_;
  Amount total_refunds_;
  Amount total_fees_;
};

// Where every deposited unit currently sits. The identity
//   total_in == active + dormant + permanent + refunds + pending_refunds
//               + fees_escrowed + fees_paid + dust
// holds at every block boundary.
struct ConservationReport {
  Amount total_in;
  Amount active;           // V
  Amount dormant;          // capital of bids awaiting a poke
  Amount permanent;
  Amount refunds;          // credited to the refund ledger
  Amount pending_refunds;  // partial refunds owed by scaled buckets
  Amount fees_escrowed;
  Amount fees_paid;
  Amount dust;             // floor remainders kept by the sale

  Amount accounted() const;
};

class SaleState;

// Throws ConservationViolation with the delta when the identity fails.
ConservationReport conservation_audit(const SaleState& state);

}  // namespace icosim

#endif  // ICOSIM_LEDGER_HPP_
