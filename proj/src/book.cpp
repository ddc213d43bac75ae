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


#include "icosim/book.hpp"

#include <algorithm>
#include <iterator>
#include <set>

namespace icosim {

BucketList::Placement BucketList::locate(Amount key, const std::optional<Advice>& hint) const {
  if (auto existing = find(key)) return Placement{existing, std::nullopt};
  if (!hint) raise(ErrorCode::AdviceRequired, "no bucket at " + key.str());
  if (!hint->predecessor) {
    if (head_ && !(key < at(*head_).key)) {
      raise(ErrorCode::BadAdvice, key.str() + " is not below head " + at(*head_).key.str());
    }
    return Placement{std::nullopt, std::nullopt};
  }
  auto prev = find(*hint->predecessor);
  if (!prev) raise(ErrorCode::BadAdvice, "no bucket at advised predecessor " + hint->predecessor->str());
  const Bucket& before = at(*prev);
  if (!(before.key < key)) {
    raise(ErrorCode::BadAdvice, before.key.str() + " is not below " + key.str());
  }
  if (before.next && !(key < at(*before.next).key)) {
    raise(ErrorCode::BadAdvice, key.str() + " is not below successor " + at(*before.next).key.str());
  }
  return Placement{std::nullopt, prev};
}

std::size_t BucketList::commit(Amount key, const Placement& placement, bool behind_pointer) {
  if (placement.existing) return *placement.existing;
  std::size_t n = arena_.size();
  Bucket bucket;
  bucket.key = key;
  bucket.passed = behind_pointer;
  if (placement.after) {
    bucket.next = arena_[*placement.after].next;
    arena_.push_back(std::move(bucket));
    arena_[*placement.after].next = n;
  } else {
    bucket.next = head_;
    arena_.push_back(std::move(bucket));
    head_ = n;
  }
  index_.emplace(key, n);
  return n;
}

std::optional<std::size_t> BucketList::find(Amount key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Advice BucketList::advise(Amount key) const {
  auto it = index_.lower_bound(key);
  if (it == index_.begin()) return Advice::head();
  return Advice::after(std::prev(it)->first);
}

std::vector<Amount> BucketList::keys() const {
  std::vector<Amount> out;
  for (auto i = head_; i; i = at(*i).next) out.push_back(at(*i).key);
  return out;
}

OrderBook::OrderBook(Amount granularity) : granularity_(granularity) {
  if (granularity.is_zero()) raise(ErrorCode::InvalidBid, "granularity must be positive");
}

void OrderBook::check_aligned(Amount key) const {
  if (key.is_zero() || key.raw() % granularity_.raw() != 0) {
    raise(ErrorCode::CapNotAligned, key.str() + " is not a positive multiple of " + granularity_.str());
  }
}

bool OrderBook::lands_behind_pointer(const BucketList::Placement& placement) const {
  if (!locked_) return false;
  if (placement.existing) return caps_.at(*placement.existing).passed;
  if (!placement.after) return cursor_.has_value();
  return caps_.at(*placement.after).passed && placement.after != cursor_;
}

void OrderBook::add_active(std::size_t index, const AddressId& address, Amount v) {
  Bucket& bucket = caps_.at(index);
  bucket.members.push_back(Member{address, v, bucket.scale});
  bucket.effective += v.rational();
  bucket.total_v += v;
}

BucketRef OrderBook::insert_with_advice(const AddressId& address, Amount v, Amount cap,
                                        const std::optional<Advice>& hint,
                                        std::optional<Amount> minimum) {
  if (members_.count(address)) raise(ErrorCode::AddressReused, address);
  check_aligned(cap);
  if (minimum) check_aligned(*minimum);
  auto placement = caps_.locate(cap, hint);
  bool behind = lands_behind_pointer(placement);
  std::size_t index = caps_.commit(cap, placement, behind);
  MemberInfo info{v, cap, minimum, false, behind};
  members_.emplace(address, info);
  if (behind) {
    stale_.push_back(Activation{address, v, cap, true});
  } else {
    add_active(index, address, v);
  }
  return BucketRef{index};
}

BucketRef OrderBook::insert_dormant(const AddressId& address, Amount v, Amount cap, Amount minimum,
                                    const std::optional<Advice>& cap_hint,
                                    const std::optional<Advice>& min_hint) {
  if (members_.count(address)) raise(ErrorCode::AddressReused, address);
  check_aligned(cap);
  check_aligned(minimum);
  if (!(minimum < cap)) raise(ErrorCode::InvalidBid, "minimum must be below cap");
  auto cap_place = caps_.locate(cap, cap_hint);
  auto min_place = minimums_.locate(minimum, min_hint);
  bool behind = lands_behind_pointer(cap_place);
  std::size_t cap_index = caps_.commit(cap, cap_place, behind);
  std::size_t min_index = minimums_.commit(minimum, min_place, false);
  caps_.at(cap_index).dormant.push_back(address);
  minimums_.at(min_index).members.push_back(Member{address, v, Rational(1)});
  members_.emplace(address, MemberInfo{v, cap, minimum, true, false});
  return BucketRef{cap_index};
}

Amount OrderBook::remove_active(const AddressId& address) {
  auto it = members_.find(address);
  if (it == members_.end()) raise(ErrorCode::UnknownBid, address);
  if (it->second.dormant || it->second.stale) raise(ErrorCode::NotActive, address);
  if (locked_) raise(ErrorCode::WithdrawalLocked, address);
  Bucket& bucket = caps_.at(*caps_.find(it->second.cap));
  auto m = std::find_if(bucket.members.begin(), bucket.members.end(),
                        [&](const Member& x) { return x.address == address; });
  Amount v = m->v;
  bucket.members.erase(m);
  bucket.effective -= v.rational();
  bucket.total_v -= v;
  members_.erase(it);
  return v;
}

Amount OrderBook::remove_dormant(const AddressId& address) {
  auto it = members_.find(address);
  if (it == members_.end()) raise(ErrorCode::UnknownBid, address);
  if (!it->second.dormant) raise(ErrorCode::NotActive, address);
  Bucket& cap_bucket = caps_.at(*caps_.find(it->second.cap));
  std::erase(cap_bucket.dormant, address);
  Bucket& min_bucket = minimums_.at(*minimums_.find(*it->second.minimum));
  std::erase_if(min_bucket.members, [&](const Member& x) { return x.address == address; });
  Amount v = it->second.v;
  members_.erase(it);
  return v;
}

void OrderBook::lock() {
  locked_ = true;
  cursor_.reset();
}

std::optional<BucketRef> OrderBook::next_unpassed() const {
  auto i = cursor_ ? caps_.at(*cursor_).next : caps_.head();
  if (!i) return std::nullopt;
  return BucketRef{*i};
}

std::optional<BucketRef> OrderBook::min_active_bucket() const {
  auto i = cursor_ ? caps_.at(*cursor_).next : caps_.head();
  while (i && caps_.at(*i).empty()) i = caps_.at(*i).next;
  if (!i) return std::nullopt;
  return BucketRef{*i};
}

void OrderBook::pass_empty(BucketRef bucket) {
  if (next_unpassed() != bucket || !caps_.at(bucket.index).empty()) {
    raise(ErrorCode::NotActive, "bucket is not the next empty bucket");
  }
  caps_.at(bucket.index).passed = true;
  cursor_ = bucket.index;
}

Amount OrderBook::scale_bucket(BucketRef ref, const Rational& q) {
  if (!(q > 0 && q < 1)) raise(ErrorCode::InvalidFraction, rational_str(q));
  if (!locked_ || min_active_bucket() != ref) {
    raise(ErrorCode::NotActive, "only the bucket at the valuation pointer can be scaled");
  }
  Bucket& bucket = caps_.at(ref.index);
  Rational removed = bucket.effective * q;
  bucket.effective -= removed;
  bucket.pending_refund += removed;
  bucket.scale *= Rational(1) - q;
  pending_total_ += removed;
  return floor_amount(removed);
}

std::vector<KickPayout> OrderBook::kick_bucket(BucketRef ref) {
  if (!locked_ || min_active_bucket() != ref) {
    raise(ErrorCode::NotActive, "only the bucket at the valuation pointer can be kicked");
  }
  for (auto i = next_unpassed(); i && *i != ref; i = next_unpassed()) pass_empty(*i);
  Bucket& bucket = caps_.at(ref.index);
  std::vector<KickPayout> payouts;
  payouts.reserve(bucket.members.size());
  for (const Member& member : bucket.members) {
    Rational fraction = bucket.scale / member.entry_scale;
    Amount partial = floor_mul(member.v, Rational(1) - fraction);
    payouts.push_back(KickPayout{member.address, member.v, member.v - partial});
    members_.erase(member.address);
  }
  pending_total_ -= bucket.pending_refund;
  bucket.pending_refund = 0;
  bucket.effective = 0;
  bucket.total_v = Amount{};
  bucket.members.clear();
  bucket.passed = true;
  cursor_ = ref.index;
  return payouts;
}

Activation OrderBook::take_stale() {
  if (!has_stale()) raise(ErrorCode::NotActive, "no stale activations");
  Activation out = stale_[stale_head_++];
  members_.erase(out.address);
  if (stale_head_ == stale_.size()) {
    stale_.clear();
    stale_head_ = 0;
  }
  return out;
}

bool OrderBook::verify_poke(Amount x, const std::vector<AddressId>& targets) const {
  std::set<AddressId> seen;
  Amount sum;
  for (const auto& address : targets) {
    auto it = members_.find(address);
    if (it == members_.end()) raise(ErrorCode::UnknownBid, address);
    if (!seen.insert(address).second) continue;
    if (it->second.minimum && x < *it->second.minimum) return false;
    sum += it->second.v;
  }
  return sum >= x;
}

std::vector<Activation> OrderBook::activate_targets(const std::vector<AddressId>& targets) {
  std::set<Amount> minimums;
  for (const auto& address : targets) {
    auto it = members_.find(address);
    if (it != members_.end() && it->second.dormant) minimums.insert(*it->second.minimum);
  }
  std::vector<Activation> out;
  for (Amount minimum : minimums) {
    Bucket& min_bucket = minimums_.at(*minimums_.find(minimum));
    for (const Member& member : min_bucket.members) {
      MemberInfo& info = members_.at(member.address);
      std::size_t cap_index = *caps_.find(info.cap);
      std::erase(caps_.at(cap_index).dormant, member.address);
      info.dormant = false;
      bool behind = caps_.at(cap_index).passed;
      Activation activation{member.address, member.v, info.cap, behind};
      if (behind) {
        info.stale = true;
        stale_.push_back(activation);
      } else {
        add_active(cap_index, member.address, member.v);
      }
      out.push_back(activation);
    }
    min_bucket.members.clear();
  }
  return out;
}

std::vector<Settlement> OrderBook::settle(Amount& dust) {
  std::vector<Settlement> out;
  for (auto i = next_unpassed(); i; ) {
    Bucket& bucket = caps_.at(i->index);
    Rational paid = 0;
    for (const Member& member : bucket.members) {
      Rational fraction = bucket.scale / member.entry_scale;
      Amount partial = floor_mul(member.v, Rational(1) - fraction);
      paid += partial.rational();
      out.push_back(Settlement{member.address, fraction, partial});
    }
    dust += floor_amount(bucket.pending_refund - paid);
    pending_total_ -= bucket.pending_refund;
    bucket.pending_refund = 0;
    if (!bucket.next) break;
    i = BucketRef{*bucket.next};
  }
  return out;
}

Rational OrderBook::valuation() const {
  Rational total = 0;
  for (auto i = cursor_ ? caps_.at(*cursor_).next : caps_.head(); i; i = caps_.at(*i).next) {
    total += caps_.at(*i).effective;
  }
  for (std::size_t k = stale_head_; k < stale_.size(); ++k) total += stale_[k].v.rational();
  return total;
}

Amount OrderBook::pending_refunds() const { return floor_amount(pending_total_); }

Amount OrderBook::pointer_key() const { return cursor_ ? caps_.at(*cursor_).key : Amount{}; }

std::optional<Rational> OrderBook::member_fraction(const AddressId& address) const {
  auto it = members_.find(address);
  if (it == members_.end() || it->second.dormant || it->second.stale) return std::nullopt;
  const Bucket& bucket = caps_.at(*caps_.find(it->second.cap));
  for (const Member& member : bucket.members) {
    if (member.address == address) return bucket.scale / member.entry_scale;
  }
  return std::nullopt;
}

bool OrderBook::is_dormant(const AddressId& address) const {
  auto it = members_.find(address);
  return it != members_.end() && it->second.dormant;
}

}  // namespace icosim
