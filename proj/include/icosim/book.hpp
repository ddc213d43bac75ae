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


#ifndef ICOSIM_BOOK_HPP_
#define ICOSIM_BOOK_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "icosim/ledger.hpp"

namespace icosim {

// Insertion advice supplied by a third party: the key of the bucket the new
// one should follow, or nullopt for "new head of the list".
struct Advice {
  std::optional<Amount> predecessor;

  static Advice head() { return Advice{std::nullopt}; }
  static Advice after(Amount key) { return Advice{key}; }
};

struct BucketRef {
  std::size_t index = 0;
  bool operator==(const BucketRef&) const = default;
};

struct Member {
  AddressId address;
  Amount v;
  Rational entry_scale{1};  // bucket scale when the member joined
};

// One node of an ascending singly linked list. Cap buckets track aggregate
// active capital; minimum buckets only use `members` (the dormant bids).
struct Bucket {
  Amount key;
  Rational effective;       // active capital after partial withdrawals
  Amount total_v;           // sum of member capital at full weight
  Rational scale{1};        // remaining active fraction, only decreases
  Rational pending_refund;  // owed to members, paid on kick or settlement
  std::vector<Member> members;
  std::vector<AddressId> dormant;  // cap list: bids waiting for a poke
  std::optional<std::size_t> next;
  bool passed = false;  // behind the valuation pointer

  bool empty() const { return members.empty(); }
};

// Ascending linked list of buckets with O(1) advice verification. The
// key index stands in for contract storage lookups and is never used for
// ordering decisions.
class BucketList {
 public:
  struct Placement {
    std::optional<std::size_t> existing;
    std::optional<std::size_t> after;  // splice position; nullopt = head
  };

  // Validates advice without mutating. Throws BadAdvice / AdviceRequired.
  Placement locate(Amount key, const std::optional<Advice>& hint) const;
  std::size_t commit(Amount key, const Placement& placement, bool behind_pointer);

  std::optional<std::size_t> find(Amount key) const;
  std::optional<std::size_t> head() const { return head_; }
  Bucket& at(std::size_t i) { return arena_[i]; }
  const Bucket& at(std::size_t i) const { return arena_[i]; }
  std::size_t size() const { return arena_.size(); }

  // Correct advice for `key`, as an off-chain advisor with a sorted index
  // would compute it.
  Advice advise(Amount key) const;
  std::vector<Amount> keys() const;

 private:
  std::vector<Bucket> arena_;
  std::optional<std::size_t> head_;
  std::map<Amount, std::size_t> index_;
};

struct KickPayout {
  AddressId address;
  Amount refund;     // everything the member gets back, equals its capital
  Amount remaining;  // part that was still active at the kick
};

struct Activation {
  AddressId address;
  Amount v;
  Amount cap;
  bool behind_pointer;  // cap bucket already passed; resolved by Step 3
};

struct Settlement {
  AddressId address;
  Rational fraction;      // remaining active fraction of the member
  Amount partial_refund;  // floor(v * (1 - fraction))
};

class OrderBook {
 public:
  explicit OrderBook(Amount granularity);

  Amount granularity() const { return granularity_; }

  // Checks alignment and both pieces of advice before anything changes.
  // Active bids join their cap bucket; dormant bids (with a minimum) sit in
  // the cap bucket's dormant list and in a minimum-keyed bucket.
  BucketRef insert_with_advice(const AddressId& address, Amount v, Amount cap,
                               const std::optional<Advice>& hint,
                               std::optional<Amount> minimum = std::nullopt);
  BucketRef insert_dormant(const AddressId& address, Amount v, Amount cap, Amount minimum,
                           const std::optional<Advice>& cap_hint,
                           const std::optional<Advice>& min_hint);

  // Pre-lock exits. Returns the member capital.
  Amount remove_active(const AddressId& address);
  Amount remove_dormant(const AddressId& address);

  // Creates the valuation pointer just before the head.
  void lock();
  bool locked() const { return locked_; }

  // Lowest cap bucket still holding active capital.
  std::optional<BucketRef> min_active_bucket() const;
  // Bucket right after the pointer, empty or not.
  std::optional<BucketRef> next_unpassed() const;
  // Moves the pointer over an empty bucket.
  void pass_empty(BucketRef bucket);

  // Removes fraction q of the bucket's active capital. Returns the floor of
  // the removed capital. Throws InvalidFraction unless 0 < q < 1.
  Amount scale_bucket(BucketRef bucket, const Rational& q);
  // Refunds every member and advances the pointer past the bucket.
  std::vector<KickPayout> kick_bucket(BucketRef bucket);

  // Dormant bids activated into a bucket that was already passed.
  bool has_stale() const { return !stale_.empty(); }
  Activation take_stale();

  // True iff x >= m for every targeted minimum and the targeted capital
  // sums to at least x. Throws UnknownBid.
  bool verify_poke(Amount x, const std::vector<AddressId>& targets) const;
  // Activates every dormant bid sharing a minimum with a dormant target.
  std::vector<Activation> activate_targets(const std::vector<AddressId>& targets);

  // Final per-member fractions; zeroes the pending refunds and returns the
  // floor remainder through `dust`.
  std::vector<Settlement> settle(Amount& dust);

  Rational valuation() const;  // sum of active capital, recomputed
  Amount pending_refunds() const;
  Amount pointer_key() const;  // key of the last passed bucket, 0 before any
  std::optional<Rational> member_fraction(const AddressId& address) const;
  bool is_dormant(const AddressId& address) const;
  bool contains(const AddressId& address) const { return members_.count(address) != 0; }

  const BucketList& caps() const { return caps_; }
  const BucketList& minimums() const { return minimums_; }

  // Off-chain helpers used by agents to produce correct advice.
  Advice advise_cap(Amount cap) const { return caps_.advise(cap); }
  Advice advise_minimum(Amount m) const { return minimums_.advise(m); }

 private:
  struct MemberInfo {
    Amount v;
    Amount cap;
    std::optional<Amount> minimum;
    bool dormant = false;
    bool stale = false;
  };

  void check_aligned(Amount key) const;
  bool lands_behind_pointer(const BucketList::Placement& placement) const;
  void add_active(std::size_t bucket, const AddressId& address, Amount v);

  Amount granularity_;
  BucketList caps_;
  BucketList minimums_;
  std::map<AddressId, MemberInfo> members_;
  std::vector<Activation> stale_;
  std::size_t stale_head_ = 0;
  std::optional<std::size_t> cursor_;  // last passed bucket
  bool locked_ = false;
  Rational pending_total_;
};

}  // namespace icosim

#endif  // ICOSIM_BOOK_HPP_
