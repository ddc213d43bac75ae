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


#include "icosim/engine.hpp"

#include <algorithm>

namespace icosim {

namespace {

Amount exact_amount(const Rational& value) {
  if (boost::multiprecision::denominator(value) != 1) {
    raise(ErrorCode::ConservationViolation, "non-integral bucket capital " + rational_str(value));
  }
  return floor_amount(value);
}

}  // namespace

void SaleConfig::validate() const {
  curve.validate();
  gas.validate();
  if (granularity.is_zero()) raise(ErrorCode::InvalidBid, "granularity must be positive");
}

SaleState::SaleState(SaleConfig config)
    : config_(std::move(config)), book_(config_.granularity), meter_(config_.gas) {
  config_.validate();
}

const Bid* SaleState::find(const AddressId& address) const {
  auto it = bids_.find(address);
  return it == bids_.end() ? nullptr : &it->second;
}

void SaleState::require_open() const {
  if (ended_) raise(ErrorCode::SaleEnded);
}

Receipt SaleState::submit_bid(const BidRequest& request) {
  require_open();
  if (bids_.count(request.address)) raise(ErrorCode::AddressReused, request.address);
  if (request.v.is_zero() || request.c.is_zero()) raise(ErrorCode::InvalidBid, "v and c must be positive");
  if (locked() && !(request.c > valuation_)) {
    raise(ErrorCode::CapTooLow, request.c.str() + " <= V = " + valuation_.str());
  }
  if (request.m && !(*request.m < request.c)) raise(ErrorCode::InvalidBid, "minimum must be below cap");

  std::uint64_t checks = request.m ? 2 : 1;
  Gas needed = cost_of(config_.gas, GasOp::BidSubmit) + cost_of(config_.gas, GasOp::AdviceCheck) * checks;
  if (needed > meter_.remaining()) {
    raise(ErrorCode::GasExhausted, "bid from " + request.address);
  }

  bool dormant = request.m && valuation_ + request.v < *request.m;
  if (dormant) {
    book_.insert_dormant(request.address, request.v, request.c, *request.m, request.cap_advice,
                         request.min_advice);
  } else {
    book_.insert_with_advice(request.address, request.v, request.c, request.cap_advice, request.m);
  }
  Gas before = meter_.spent();
  meter_.charge(GasOp::BidSubmit);
  meter_.charge(GasOp::AdviceCheck, checks);

  Bid bid;
  bid.address = request.address;
  bid.v = request.v;
  bid.b = token_balance(config_.curve, request.v, stage_);
  bid.c = request.c;
  bid.m = request.m;
  bid.entry_stage = stage_;
  bid.status = dormant ? BidStatus::Dormant : BidStatus::Active;
  bid.poke_fee = dormant ? config_.poke_fee : Amount{};
  total_in_ += bid.v + bid.poke_fee;
  if (!dormant) valuation_ += bid.v;
  Receipt receipt{bid.address, bid.b, bid.status, bid.poke_fee, valuation_, meter_.spent() - before};
  bids_.emplace(bid.address, std::move(bid));
  return receipt;
}

WithdrawalResult SaleState::voluntary_withdraw(const AddressId& address) {
  require_open();
  auto it = bids_.find(address);
  if (it == bids_.end()) raise(ErrorCode::UnknownBid, address);
  if (locked()) raise(ErrorCode::WithdrawalLocked, "stage " + std::to_string(stage_));
  Bid& bid = it->second;
  if (bid.status != BidStatus::Active && bid.status != BidStatus::Dormant) {
    raise(ErrorCode::NotActive, address);
  }
  if (!meter_.can_afford(GasOp::Store)) raise(ErrorCode::GasExhausted, "withdrawal by " + address);

  WithdrawalResult result;
  if (bid.status == BidStatus::Dormant) {
    book_.remove_dormant(address);
    result.refund = bid.v + bid.poke_fee;
    result.was_dormant = true;
    bid.fee_refunded = bid.poke_fee;
    bid.transition(BidStatus::Used);
  } else {
    book_.remove_active(address);
    const Stage t = config_.curve.t;
    result.refund = config_.voluntary_penalty ? voluntary_refund(bid.v, stage_, t) : bid.v;
    result.permanent_v = bid.v - result.refund;
    result.permanent_b = config_.voluntary_penalty
                             ? committed_balance(config_.curve, bid.v, stage_, bid.entry_stage)
                             : Amount{};
    valuation_ -= bid.v;
    bid.b = result.permanent_b;
    bid.permanent_v = result.permanent_v;
    bid.transition(BidStatus::Permanent);
  }
  meter_.charge(GasOp::Store);
  refunds_.credit(address, result.refund);
  return result;
}

PokeReport SaleState::poke(Amount x, std::vector<AddressId> targets, const AddressId& poker) {
  require_open();
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  auto key = std::make_pair(x.str(), targets);
  if (pokes_seen_.count(key)) raise(ErrorCode::DuplicatePoke, "x = " + x.str());

  std::set<Amount> minimums;
  for (const auto& address : targets) {
    const Bid* bid = find(address);
    if (!bid) raise(ErrorCode::UnknownBid, address);
    if (bid->status != BidStatus::Active && bid->status != BidStatus::Dormant) {
      raise(ErrorCode::InvalidTarget, address + " is " + std::string(to_string(bid->status)));
    }
    if (bid->status == BidStatus::Dormant) minimums.insert(*bid->m);
  }
  if (minimums.empty()) raise(ErrorCode::InvalidTarget, "target set has no dormant bid");
  if (!book_.verify_poke(x, targets)) raise(ErrorCode::InvalidTarget, "x = " + x.str());

  std::uint64_t stores = 0;
  for (Amount minimum : minimums) {
    stores += book_.minimums().at(*book_.minimums().find(minimum)).members.size();
  }
  if (!meter_.can_afford(GasOp::Store, stores)) raise(ErrorCode::GasExhausted, "poke by " + poker);

  PokeReport report;
  Gas before = meter_.spent();
  meter_.charge(GasOp::Store, stores);
  report.activated = book_.activate_targets(targets);
  for (const Activation& activation : report.activated) {
    Bid& bid = bids_.at(activation.address);
    bid.transition(BidStatus::Active);
    valuation_ += bid.v;
    report.fee_paid += bid.poke_fee;
  }
  if (!report.fee_paid.is_zero()) refunds_.pay_fee(poker, report.fee_paid);
  pokes_seen_.insert(std::move(key));
  report.valuation = valuation_;
  report.gas = meter_.spent() - before;
  return report;
}

bool SaleState::automatic_work_pending() const {
  if (book_.has_stale()) return true;
  auto next = book_.next_unpassed();
  return next && book_.caps().at(next->index).key < valuation_;
}

std::vector<WithdrawalBatch> SaleState::run_automatic_withdrawals(bool& carryover) {
  std::vector<WithdrawalBatch> batches;
  carryover = false;
  bool started = false;
  while (automatic_work_pending()) {
    if (!started) {
      if (!meter_.can_afford(GasOp::LoopBase)) {
        carryover = true;
        break;
      }
      meter_.charge(GasOp::LoopBase);
      started = true;
    }
    if (!meter_.can_afford(GasOp::PointerMove)) {
      carryover = true;
      break;
    }
    meter_.charge(GasOp::PointerMove);

    WithdrawalBatch batch;
    batch.valuation_before = valuation_;
    if (book_.has_stale()) {
      Activation late = book_.take_stale();
      Bid& bid = bids_.at(late.address);
      bid.transition(BidStatus::Used);
      refunds_.credit(late.address, bid.v);
      valuation_ -= bid.v;
      batch.min_cap = late.cap;
      batch.total = bid.v;
      batch.count = 1;
      batch.refund_total = bid.v;
      batch.payouts.push_back(KickPayout{late.address, bid.v, bid.v});
      batch.late_activation = true;
      batch.valuation_after = valuation_;
      batches.push_back(std::move(batch));
      continue;
    }

    BucketRef next = *book_.next_unpassed();
    const Bucket& bucket = book_.caps().at(next.index);
    if (bucket.empty()) {
      book_.pass_empty(next);
      continue;
    }
    const Amount cap = bucket.key;
    const Amount total = exact_amount(bucket.effective);
    batch.min_cap = cap;
    batch.total = total;
    batch.count = bucket.members.size();
    if (valuation_ - total >= cap) {
      batch.payouts = book_.kick_bucket(next);
      for (const KickPayout& payout : batch.payouts) {
        bids_.at(payout.address).transition(BidStatus::Used);
        refunds_.credit(payout.address, payout.refund);
        batch.refund_total += payout.refund;
      }
      valuation_ -= total;
    } else {
      Rational q = Rational((valuation_ - cap).big(), total.big());
      batch.refund_total = book_.scale_bucket(next, q);
      batch.q = q;
      valuation_ = cap;
    }
    batch.valuation_after = valuation_;
    batches.push_back(std::move(batch));
  }
  return batches;
}

BlockSummary SaleState::close_block() {
  BlockSummary summary;
  summary.stage = stage_;
  if (locked()) {
    if (!book_.locked()) book_.lock();
    summary.batches = run_automatic_withdrawals(summary.carryover);
  }
  summary.valuation = valuation_;
  summary.pointer = book_.pointer_key();
  summary.gas_spent = meter_.spent();
  return summary;
}

BlockSummary SaleState::advance_block() {
  require_open();
  if (stage_ >= config_.curve.u) raise(ErrorCode::SaleEnded, "finalize at the last stage");
  BlockSummary summary = close_block();
  meter_.reset();
  ++stage_;
  return summary;
}

FinalReport SaleState::finalize() {
  require_open();
  if (stage_ < config_.curve.u) raise(ErrorCode::NotEnded, "stage " + std::to_string(stage_));
  FinalReport report;
  report.last_block = close_block();
  final_block_ = report.last_block;
  meter_.reset();
  if (report.last_block.carryover || automatic_work_pending()) {
    raise(ErrorCode::NotQuiescent, "automatic withdrawals still pending at sale end");
  }

  std::map<AddressId, Rational> fractions;
  for (const Settlement& settlement : book_.settle(dust_)) {
    refunds_.credit(settlement.address, settlement.partial_refund);
    fractions.emplace(settlement.address, settlement.fraction);
  }
  for (auto& [address, bid] : bids_) {
    Allocation allocation;
    allocation.address = address;
    if (bid.status == BidStatus::Dormant) {
      refunds_.credit(address, bid.v + bid.poke_fee);
      bid.fee_refunded = bid.poke_fee;
      bid.transition(BidStatus::Used);
      allocation.status = BidStatus::Dormant;
    } else {
      allocation.status = bid.status;
    }
    switch (bid.status) {
      case BidStatus::Active:
        allocation.tokens = floor_mul(bid.b, fractions.at(address));
        break;
      case BidStatus::Permanent:
        allocation.tokens = bid.b;
        break;
      case BidStatus::Dormant:
      case BidStatus::Used:
        break;
    }
    allocation.refunded = refunds_.refunded(address);
    allocation.retained = bid.v + bid.fee_refunded - allocation.refunded;
    report.allocations.emplace(address, allocation);
  }
  report.dust = dust_;
  allocations_ = report.allocations;
  ended_ = true;
  return report;
}

Allocation SaleState::claim(const AddressId& address) {
  if (!ended_) raise(ErrorCode::NotEnded);
  auto it = allocations_.find(address);
  if (it == allocations_.end()) raise(ErrorCode::UnknownBid, address);
  if (!claimed_.insert(address).second) raise(ErrorCode::AlreadyClaimed, address);
  return it->second;
}

std::optional<Amount> SaleState::min_active_cap() const {
  std::optional<Amount> best;
  for (const auto& [address, bid] : bids_) {
    if (bid.status == BidStatus::Active && (!best || bid.c < *best)) best = bid.c;
  }
  return best;
}

}  // namespace icosim
