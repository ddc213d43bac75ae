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


#include "icosim/analysis.hpp"

#include <set>

namespace icosim {

Rational truthful_share(const BlackoutParams& p) {
  Rational den = p.A() * (p.x + p.y);
  return den == 0 ? Rational(0) : p.A() * p.x / den;
}

Rational blackout_share(const BlackoutParams& p) {
  Rational den = p.A() * p.x + p.B() * p.y;
  return den == 0 ? Rational(0) : p.A() * p.x / den;
}

Rational blackout_advantage(const BlackoutParams& p) {
  const Rational A = p.A(), B = p.B(), &x = p.x, &y = p.y;
  Rational den = A * A * x * x + A * A * x * y + A * B * x * y + A * B * y * y;
  if (den == 0) return Rational(0);
  return A * x * y * (A - B) / den;
}

Rational blackout_bound(const Rational& a, const Rational& b) { return (a - b) / 3; }

Rational advantage_bound_small_x(const Rational& A, const Rational& B) { return (A - B) / (A + 2 * B); }

Rational advantage_bound_large_x(const Rational& A, const Rational& B) { return (A - B) / (2 * A + B); }

Rational withdrawal_penalty(const Rational& a, const Rational& p) { return a * p / 3; }

Rational rational_deadline(const Rational& a, const Rational& b, unsigned n) {
  if (b < 0 || !(b < a)) raise(ErrorCode::InvalidFraction, "need 0 <= b < a");
  if (n == 0) raise(ErrorCode::InvalidFraction, "n must be at least 1");
  Rational ratio = (a - b) / a;
  Rational out(1);
  for (unsigned i = 0; i < n; ++i) out *= ratio;
  return out;
}

SatisfactionReport satisfaction_check(Amount V, const std::vector<BuyerBid>& bids) {
  std::map<std::string, BuyerVerdict> by_buyer;
  SatisfactionReport report;
  for (const BuyerBid& bid : bids) {
    if (bid.exempt) {
      ++report.exempt;
      continue;
    }
    BuyerVerdict& verdict = by_buyer[buyer_of(bid.address)];
    verdict.retained += bid.retained;
    if (bid.c > V) {
      verdict.lower += bid.v;
      verdict.upper += bid.v;
    } else if (bid.c == V) {
      verdict.upper += bid.v;
      verdict.jump = true;
    }
  }
  for (auto& [buyer, verdict] : by_buyer) {
    verdict.buyer = buyer;
    verdict.ok = verdict.jump ? verdict.lower <= verdict.retained && verdict.retained <= verdict.upper
                              : verdict.retained == verdict.lower;
    report.ok = report.ok && verdict.ok;
    report.buyers.push_back(verdict);
  }
  return report;
}

std::string AuditReport::summary() const {
  if (clean()) return "clean\tblocks=" + std::to_string(blocks);
  const Violation& first = violations.front();
  return "violations=" + std::to_string(violations.size()) + "\tblocks=" + std::to_string(blocks) +
         "\tfirst=" + (first.stage ? std::to_string(*first.stage) : std::string("-")) + ":" + first.kind;
}

namespace {

struct Holding {
  Rational v;
  Amount c;
  std::optional<Amount> m;
  BidStatus status = BidStatus::Active;
  Rational effective;  // active capital after scaling
  Rational fee;
  Rational permanent;
  bool late = false;
};

class Auditor {
 public:
  explicit Auditor(const Trace& trace) : trace_(trace) {}

  AuditReport run() {
    Scenario scenario;
    try {
      scenario = trace_.scenario();
    } catch (const Error& e) {
      flag(std::nullopt, "record", std::string("embedded scenario: ") + e.what());
      return std::move(report_);
    }
    t_ = scenario.config.curve.t;
    for (const std::string& line : trace_.lines) {
      if (line.starts_with("scenario\t") || line.starts_with(kTraceHeader)) continue;
      try {
        apply(parse_record(line));
      } catch (const std::exception& e) {
        flag(current_, "record", std::string(e.what()) + " in '" + line + "'");
      }
    }
    return std::move(report_);
  }

 private:
  static Stage stage_of(const std::string& text) { return std::stoull(text); }

  void flag(std::optional<Stage> stage, std::string kind, std::string detail) {
    report_.violations.push_back(Violation{stage, std::move(kind), std::move(detail)});
  }

  Holding& holding(const std::string& address) {
    auto it = holdings_.find(address);
    if (it == holdings_.end()) raise(ErrorCode::UnknownBid, address);
    return it->second;
  }

  // Sum of effective active capital.
  Rational active() const {
    Rational sum;
    for (const auto& [address, h] : holdings_) {
      if (h.status == BidStatus::Active) sum += h.effective;
    }
    return sum;
  }

  void apply(const Record& r) {
    if (r.tag == "rec") {
      if (r.positional.size() < 3) raise(ErrorCode::ParseError, "short rec");
      current_ = stage_of(r.positional[1]);
      apply_event(r.positional[0], r.positional[2], r);
    } else if (r.tag == "block") {
      if (r.positional.empty()) raise(ErrorCode::ParseError, "block without stage");
      current_ = stage_of(r.positional[0]);
      check_block(*current_, r);
    } else if (r.tag == "settle") {
      settle(r.positional.at(0), r);
    } else if (r.tag == "alloc") {
      check_alloc(r.positional.at(0), r);
    } else if (r.tag == "final") {
      if (r.has("error")) {
        flag(current_, "final", "sale did not finalize: " + r.get("error"));
      } else {
        if (r.amount("V").rational() != active()) flag(current_, "valuation", "final V differs from replay");
        if (r.amount("dust").rational() != dust_) {
          flag(current_, "conservation", "dust " + r.get("dust") + " vs replay " + rational_str(dust_));
        }
        check_conservation(current_);
      }
    } else if (r.tag == "audit") {
      // written after the audit itself; ignored on re-audit
    } else {
      raise(ErrorCode::ParseError, "unknown record " + r.tag);
    }
  }

  void apply_event(const std::string& kind, const std::string& actor, const Record& r) {
    if (kind == "bid") {
      Holding h;
      h.v = r.amount("v").rational();
      h.c = r.amount("c");
      if (r.get("m") != "-") h.m = r.amount("m");
      auto status = parse_status(r.get("status"));
      if (!status || (*status != BidStatus::Active && *status != BidStatus::Dormant)) {
        raise(ErrorCode::ParseError, "bid status " + r.get("status"));
      }
      h.status = *status;
      h.fee = r.amount("fee").rational();
      h.effective = h.status == BidStatus::Active ? h.v : Rational(0);
      if (locked() && !(h.c > r.amount("V") - (h.status == BidStatus::Active ? r.amount("v") : Amount{}))) {
        flag(current_, "cap", actor + " entered with c <= V");
      }
      if (!holdings_.emplace(actor, h).second) flag(current_, "record", "address reused: " + actor);
      total_in_ += h.v + h.fee;
      check_running_v(r);
    } else if (kind == "withdraw") {
      Holding& h = holding(actor);
      if (locked()) flag(current_, "record", "voluntary withdrawal after the lock");
      Rational refund = r.amount("refund").rational();
      if (r.get("dormant") == "1") {
        if (h.status != BidStatus::Dormant || refund != h.v + h.fee) flag(current_, "record", "dormant exit " + actor);
        h.status = BidStatus::Used;
      } else {
        Rational permanent = r.amount("permanent_v").rational();
        if (h.status != BidStatus::Active || refund + permanent != h.v) flag(current_, "record", "exit split " + actor);
        h.status = BidStatus::Permanent;
        h.permanent = permanent;
        h.effective = 0;
      }
      refunds_ += refund;
      check_running_v(r);
    } else if (kind == "poke") {
      fees_paid_ += r.amount("fee").rational();
    } else if (kind == "activate") {
      Holding& h = holding(actor);
      if (h.status != BidStatus::Dormant) flag(current_, "record", "activation of non-dormant " + actor);
      fees_paid_check_ += h.fee;
      h.fee = 0;
      h.status = BidStatus::Active;
      h.effective = h.v;
      h.late = r.get("late") == "1";
    } else if (kind == "step") {
      check_step_v();
      const std::string mode = r.get("mode");
      Amount cap = r.amount("cap");
      if (mode == "scale") {
        Rational q = r.rational("q");
        if (!(q > 0 && q < 1)) flag(current_, "record", "scale fraction outside (0,1)");
        Rational group;
        for (auto& [address, h] : holdings_) {
          if (h.status == BidStatus::Active && !h.late && h.c == cap) {
            pending_ += h.effective * q;
            group += h.effective;
            h.effective -= h.effective * q;
          }
        }
        if (group != r.amount("S").rational()) flag(current_, "record", "scaled group capital differs from S");
      }
      pending_step_v_ = r.amount("V").rational();
      pending_step_check_ = true;
      if (mode == "scale") check_step_v();
    } else if (kind == "kick") {
      Holding& h = holding(actor);
      if (h.status != BidStatus::Active) flag(current_, "record", "kick of inactive " + actor);
      Rational refund = r.amount("refund").rational();
      if (refund != h.v) flag(current_, "record", "kick refund differs from capital for " + actor);
      pending_ -= h.v - h.effective;
      refunds_ += refund;
      h.effective = 0;
      h.status = BidStatus::Used;
    } else if (kind == "reject") {
    } else {
      raise(ErrorCode::ParseError, "unknown event " + kind);
    }
  }

  void check_running_v(const Record& r) {
    if (r.amount("V").rational() != active()) flag(current_, "valuation", "running V differs from replay");
  }

  void check_step_v() {
    if (pending_step_check_ && pending_step_v_ != active()) {
      flag(current_, "valuation", "V after automatic withdrawal differs from replay");
    }
    pending_step_check_ = false;
  }

  bool locked() const { return current_ && *current_ >= t_; }

  void check_block(Stage stage, const Record& r) {
    check_step_v();
    ++report_.blocks;
    Amount V = r.amount("V");
    Rational replay = active();
    if (V.rational() != replay) flag(stage, "valuation", "V=" + V.str() + " but replay gives " + rational_str(replay));
    if (r.amount("gas") > r.amount("limit")) flag(stage, "gas", "spent " + r.get("gas") + " > limit " + r.get("limit"));
    if (r.get("carryover") == "1") flag(stage, "lag", "block ended with automatic withdrawals pending");
    if (stage >= t_) {
      if (last_locked_v_ && V < *last_locked_v_) {
        flag(stage, "monotone", "V fell from " + last_locked_v_->str() + " to " + V.str());
      }
      last_locked_v_ = V;
      Amount pointer = r.amount("pointer");
      if (last_pointer_ && pointer < *last_pointer_) flag(stage, "pointer", "pointer moved back");
      last_pointer_ = pointer;
      for (const auto& [address, h] : holdings_) {
        if (h.status != BidStatus::Active) continue;
        if (h.c < V) flag(stage, "cap", address + " active with c=" + h.c.str() + " < V=" + V.str());
        if (h.m && *h.m > V && breached_.insert(address).second) {
          report_.notes.push_back("minimum breached at stage " + std::to_string(stage) + ": " + address);
        }
      }
    }
    check_conservation(stage);
  }

  void settle(const std::string& address, const Record& r) {
    Holding& h = holding(address);
    Rational refund = r.amount("refund").rational();
    if (r.get("kind") == "dormant") {
      if (h.status != BidStatus::Dormant || refund != h.v + h.fee) flag(current_, "record", "dormant settle " + address);
      h.status = BidStatus::Used;
      refunds_ += refund;
      return;
    }
    if (h.status != BidStatus::Active) flag(current_, "record", "settle of inactive " + address);
    Rational fraction = r.rational("fraction");
    if (fraction * h.v != h.effective) flag(current_, "record", "fraction mismatch for " + address);
    Rational owed = h.v - h.effective;
    if (refund > owed || owed - refund >= 1) flag(current_, "record", "partial refund is not floor for " + address);
    pending_ -= owed;
    dust_ += owed - refund;
    refunds_ += refund;
    settled_[address] = refund;
  }

  void check_alloc(const std::string& address, const Record& r) {
    Holding& h = holding(address);
    Rational retained = r.amount("retained").rational();
    Rational expected;
    switch (h.status) {
      case BidStatus::Active: expected = h.v - settled_[address]; break;
      case BidStatus::Permanent: expected = h.permanent; break;
      default: expected = 0; break;
    }
    if (retained != expected) flag(current_, "record", "retained mismatch for " + address);
  }

  void check_conservation(std::optional<Stage> stage) {
    Rational held = active() + pending_ + refunds_ + fees_paid_ + dust_;
    for (const auto& [address, h] : holdings_) {
      if (h.status == BidStatus::Dormant) held += h.v + h.fee;
      if (h.status == BidStatus::Permanent) held += h.permanent;
    }
    if (held != total_in_) {
      flag(stage, "conservation", "accounted " + rational_str(held) + " != deposited " + rational_str(total_in_));
    }
    if (fees_paid_check_ != fees_paid_) flag(stage, "conservation", "poke fees paid differ from escrow released");
  }

  const Trace& trace_;
  AuditReport report_;
  Stage t_ = 0;
  std::optional<Stage> current_;
  std::map<std::string, Holding> holdings_;
  std::map<std::string, Rational> settled_;
  std::set<std::string> breached_;
  Rational total_in_, refunds_, pending_, fees_paid_, fees_paid_check_, dust_;
  std::optional<Amount> last_locked_v_;
  std::optional<Amount> last_pointer_;
  Rational pending_step_v_;
  bool pending_step_check_ = false;
};

}  // namespace

AuditReport audit_trace(const Trace& trace) { return Auditor(trace).run(); }

}  // namespace icosim
