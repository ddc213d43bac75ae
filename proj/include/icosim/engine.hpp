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


#ifndef ICOSIM_ENGINE_HPP_
#define ICOSIM_ENGINE_HPP_

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "icosim/book.hpp"
#include "icosim/gas.hpp"
#include "icosim/ledger.hpp"
#include "icosim/pricing.hpp"

namespace icosim {

struct SaleConfig {
  PriceCurve curve;
  Amount granularity = Amount::units(1);
  GasSchedule gas;
  Amount poke_fee;                 // escrowed by every dormant bid
  bool voluntary_penalty = true;   // off: voluntary exits refund everything

  void validate() const;
  bool operator==(const SaleConfig&) const = default;
};

struct BidRequest {
  AddressId address;
  Amount v;
  Amount c;
  std::optional<Amount> m;
  std::optional<Advice> cap_advice;
  std::optional<Advice> min_advice;
};

struct Receipt {
  AddressId address;
  Amount b;
  BidStatus status = BidStatus::Active;
  Amount fee;  // escrowed poke fee, zero unless dormant
  Amount valuation;
  Gas gas = 0;
};

struct WithdrawalResult {
  Amount refund;
  Amount permanent_v;
  Amount permanent_b;
  bool was_dormant = false;
};

// One iteration of the automatic-withdrawal loop.
struct WithdrawalBatch {
  Amount min_cap;                  // c(B1)
  Amount total;                    // S
  std::size_t count = 0;           // k
  std::optional<Rational> q;       // set for a partial withdrawal
  Amount refund_total;
  Amount valuation_before;
  Amount valuation_after;
  std::vector<KickPayout> payouts;  // full kicks only
  bool late_activation = false;     // bid poked into an already passed bucket

  bool full_kick() const { return !q.has_value(); }
};

struct PokeReport {
  std::vector<Activation> activated;
  Amount fee_paid;
  Amount valuation;
  Gas gas = 0;
};

struct BlockSummary {
  Stage stage = 0;
  Amount valuation;
  Amount pointer;  // key of the last bucket behind the valuation pointer
  Gas gas_spent = 0;
  std::vector<WithdrawalBatch> batches;
  bool carryover = false;  // loop stopped for lack of gas
};

struct Allocation {
  AddressId address;
  BidStatus status = BidStatus::Active;
  Amount tokens;
  Amount refunded;  // native units returned over the bid's lifetime
  Amount retained;  // native units kept by the sale
};

struct FinalReport {
  BlockSummary last_block;
  std::map<AddressId, Allocation> allocations;
  Amount dust;
};

// The block-driven sale. Single-threaded and deterministic: one event
// sequence in, one outcome out.
class SaleState {
 public:
  explicit SaleState(SaleConfig config);

  // Step 1. Throws AddressReused, CapTooLow, CapNotAligned, BadAdvice,
  // AdviceRequired, InvalidBid, GasExhausted, SaleEnded.
  Receipt submit_bid(const BidRequest& request);

  // Step 2, only while stage < t.
  WithdrawalResult voluntary_withdraw(const AddressId& address);

  // Activates dormant bids whose minimums the target set jointly clears.
  PokeReport poke(Amount x, std::vector<AddressId> targets, const AddressId& poker);

  // Step 3 (post-lock) and Step 4.
  BlockSummary advance_block();

  // Closes block u and computes allocations. Throws NotEnded before u and
  // NotQuiescent if the last Step 3 ran out of gas.
  FinalReport finalize();

  // Pull-based payout; a second claim throws AlreadyClaimed.
  Allocation claim(const AddressId& address);

  Stage stage() const { return stage_; }
  bool locked() const { return stage_ >= config_.curve.t; }
  bool ended() const { return ended_; }
  Amount valuation() const { return valuation_; }
  Amount total_in() const { return total_in_; }
  Amount dust() const { return dust_; }
  const SaleConfig& config() const { return config_; }
  const std::map<AddressId, Bid>& bids() const { return bids_; }
  const Bid* find(const AddressId& address) const;
  const RefundLedger& refunds() const { return refunds_; }
  const OrderBook& book() const { return book_; }
  const GasMeter& gas() const { return meter_; }
  std::optional<Amount> min_active_cap() const;
  // Step 3 of the last block, kept even when finalize() throws NotQuiescent.
  const std::optional<BlockSummary>& final_block() const { return final_block_; }

 private:
  BlockSummary close_block();
  std::vector<WithdrawalBatch> run_automatic_withdrawals(bool& carryover);
  bool automatic_work_pending() const;
  void require_open() const;

  SaleConfig config_;
  Stage stage_ = 0;
  bool ended_ = false;
  Amount valuation_;
  Amount total_in_;
  Amount dust_;
  std::map<AddressId, Bid> bids_;
  RefundLedger refunds_;
  OrderBook book_;
  GasMeter meter_;
  std::set<std::pair<std::string, std::vector<AddressId>>> pokes_seen_;
  std::map<AddressId, Allocation> allocations_;
  std::set<AddressId> claimed_;
  std::optional<BlockSummary> final_block_;
};

}  // namespace icosim

#endif  // ICOSIM_ENGINE_HPP_
