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

#include "icosim/ledger.hpp"

#include <algorithm>

#include "icosim/engine.hpp"

namespace icosim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::AmountOverflow: return "AmountOverflow";
    case ErrorCode::AmountUnderflow: return "AmountUnderflow";
    case ErrorCode::ParseAmount: return "ParseAmount";
    case ErrorCode::InvalidCurve: return "InvalidCurve";
    case ErrorCode::StageOutOfRange: return "StageOutOfRange";
    case ErrorCode::WithdrawalLocked: return "WithdrawalLocked";
    case ErrorCode::BadAdvice: return "BadAdvice";
    case ErrorCode::AdviceRequired: return "AdviceRequired";
    case ErrorCode::InvalidFraction: return "InvalidFraction";
    case ErrorCode::UnknownBid: return "UnknownBid";
    case ErrorCode::AddressReused: return "AddressReused";
    case ErrorCode::CapTooLow: return "CapTooLow";
    case ErrorCode::CapNotAligned: return "CapNotAligned";
    case ErrorCode::InvalidBid: return "InvalidBid";
    case ErrorCode::NotActive: return "NotActive";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::DuplicatePoke: return "DuplicatePoke";
    case ErrorCode::GasExhausted: return "GasExhausted";
    case ErrorCode::ReserveTooLarge: return "ReserveTooLarge";
    case ErrorCode::ZeroMoves: return "ZeroMoves";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::SaleEnded: return "SaleEnded";
    case ErrorCode::NotEnded: return "NotEnded";
    case ErrorCode::NotQuiescent: return "NotQuiescent";
    case ErrorCode::AlreadyClaimed: return "AlreadyClaimed";
    case ErrorCode::ConservationViolation: return "ConservationViolation";
    case ErrorCode::NonMonotoneTable: return "NonMonotoneTable";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::RefusedDifferentConfig: return "RefusedDifferentConfig";
  }
  return "Unknown";
}

void raise(ErrorCode code, const std::string& detail) {
  std::string what(to_string(code));
  if (!detail.empty()) what += ": " + detail;
  throw Error(code, what);
}

Amount Amount::parse(std::string_view text) {
  if (text.empty()) raise(ErrorCode::ParseAmount, "empty amount");
  Raw value = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') {
      raise(ErrorCode::ParseAmount, "not a decimal amount: " + std::string(text));
    }
    Raw digit = static_cast<Raw>(ch - '0');
    if (value > (max().raw_ - digit) / 10) {
      raise(ErrorCode::AmountOverflow, std::string(text));
    }
    value = value * 10 + digit;
  }
  return Amount(value);
}

std::string Amount::str() const {
  if (raw_ == 0) return "0";
  std::string out;
  for (Raw v = raw_; v != 0; v /= 10) out.push_back(static_cast<char>('0' + v % 10));
  std::reverse(out.begin(), out.end());
  return out;
}

BigInt Amount::big() const { return BigInt(raw_); }

Amount Amount::operator+(Amount other) const {
  if (raw_ > max().raw_ - other.raw_) raise(ErrorCode::AmountOverflow, str() + " + " + other.str());
  return Amount(raw_ + other.raw_);
}

Amount Amount::operator-(Amount other) const {
  if (other.raw_ > raw_) raise(ErrorCode::AmountUnderflow, str() + " - " + other.str());
  return Amount(raw_ - other.raw_);
}

Amount Amount::operator*(std::uint64_t k) const {
  if (k != 0 && raw_ > max().raw_ / k) raise(ErrorCode::AmountOverflow, str() + " * " + std::to_string(k));
  return Amount(raw_ * k);
}

Amount floor_amount(const Rational& value) {
  if (value < 0) raise(ErrorCode::AmountUnderflow, rational_str(value));
  BigInt q = boost::multiprecision::numerator(value) / boost::multiprecision::denominator(value);
  if (q > BigInt(Amount::max().raw())) raise(ErrorCode::AmountOverflow, rational_str(value));
  return Amount(q.convert_to<Amount::Raw>());
}

Amount floor_mul(Amount a, const Rational& r) { return floor_amount(a.rational() * r); }

std::string rational_str(const Rational& r) {
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + den.str();
}

Rational parse_rational(std::string_view text) {
  auto digits = [&](std::string_view part) {
    if (part.empty() || !std::all_of(part.begin(), part.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      raise(ErrorCode::ParseError, "bad rational: " + std::string(text));
    }
    return BigInt(std::string(part));
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt den = digits(text.substr(slash + 1));
    if (den == 0) raise(ErrorCode::ParseError, "zero denominator: " + std::string(text));
    return Rational(digits(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    return Rational(digits(text.substr(0, dot)) * scale + digits(frac), scale);
  }
  return Rational(digits(text));
}

std::string_view to_string(BidStatus status) {
  switch (status) {
    case BidStatus::Dormant: return "dormant";
    case BidStatus::Active: return "active";
    case BidStatus::Permanent: return "permanent";
    case BidStatus::Used: return "used";
  }
  return "?";
}

std::optional<BidStatus> parse_status(std::string_view text) {
  for (auto s : {BidStatus::Dormant, BidStatus::Active, BidStatus::Permanent, BidStatus::Used}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool is_legal_transition(BidStatus from, BidStatus to) {
  switch (from) {
    case BidStatus::Dormant: return to == BidStatus::Active || to == BidStatus::Used;
    case BidStatus::Active: return to == BidStatus::Permanent || to == BidStatus::Used;
    case BidStatus::Permanent:
    case BidStatus::Used: return false;
  }
  return false;
}

void Bid::transition(BidStatus to) {
  if (!is_legal_transition(status, to)) {
    raise(ErrorCode::NotActive, address + ": " + std::string(to_string(status)) + " -> " +
                                    std::string(to_string(to)));
  }
  status = to;
}

void RefundLedger::credit(const AddressId& address, Amount amount) {
  refunds_[address] += amount;
  total_refunds_ += amount;
}

void RefundLedger::pay_fee(const AddressId& poker, Amount amount) {
  fees_[poker] += amount;
  total_fees_ += amount;
}

Amount RefundLedger::refunded(const AddressId& address) const {
  auto it = refunds_.find(address);
  return it == refunds_.end() ? Amount{} : it->second;
}

Amount RefundLedger::fees_earned(const AddressId& poker) const {
  auto it = fees_.find(poker);
  return it == fees_.end() ? Amount{} : it->second;
}

Amount ConservationReport::accounted() const {
  return active + dormant + permanent + refunds + pending_refunds + fees_escrowed + fees_paid + dust;
}

ConservationReport conservation_audit(const SaleState& state) {
  ConservationReport report;
  report.total_in = state.total_in();
  report.active = state.valuation();
  for (const auto& [address, bid] : state.bids()) {
    switch (bid.status) {
      case BidStatus::Dormant:
        report.dormant += bid.v;
        report.fees_escrowed += bid.poke_fee;
        break;
      case BidStatus::Permanent:
        report.permanent += bid.permanent_v;
        break;
      case BidStatus::Active:
      case BidStatus::Used:
        break;
    }
  }
  report.refunds = state.refunds().total_refunds();
  report.fees_paid = state.refunds().total_fees_paid();
  report.pending_refunds = state.book().pending_refunds();
  report.dust = state.dust();
  Amount accounted = report.accounted();
  if (accounted != report.total_in) {
    std::string delta = accounted > report.total_in ? "+" + (accounted - report.total_in).str()
                                                    : "-" + (report.total_in - accounted).str();
    raise(ErrorCode::ConservationViolation, "accounted - total_in = " + delta);
  }
  return report;
}

}  // namespace icosim
