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


#include "icosim/agents.hpp"

#include <memory>

#include "icosim/analysis.hpp"

namespace icosim {

Amount ValuationTable::at(Amount V) const {
  for (const auto& step : steps) {
    if (V < step.threshold) return step.contribution;
  }
  return Amount{};
}

std::vector<TableBid> bids_from_table(const ValuationTable& table) {
  const auto& steps = table.steps;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (!(steps[i - 1].threshold < steps[i].threshold)) {
      raise(ErrorCode::NonMonotoneTable, "thresholds must ascend at step " + std::to_string(i));
    }
    if (steps[i].contribution > steps[i - 1].contribution) {
      raise(ErrorCode::NonMonotoneTable, "contribution rises at threshold " + steps[i].threshold.str());
    }
  }
  std::vector<TableBid> bids;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    Amount next = i + 1 < steps.size() ? steps[i + 1].contribution : Amount{};
    Amount height = steps[i].contribution - next;
    if (height.is_zero()) continue;
    bids.push_back(TableBid{height, steps[i].threshold, steps[i].minimum});
  }
  return bids;
}

ValuationTable parse_table(std::string_view text) {
  ValuationTable table;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text.remove_prefix(comma == std::string_view::npos ? text.size() : comma + 1);
    std::vector<Amount> parts;
    while (true) {
      auto colon = item.find(':');
      parts.push_back(Amount::parse(item.substr(0, colon)));
      if (colon == std::string_view::npos) break;
      item.remove_prefix(colon + 1);
    }
    if (parts.size() < 2 || parts.size() > 3) {
      raise(ErrorCode::ParseError, "table step must be threshold:contribution[:minimum]");
    }
    ValuationStep step{parts[0], parts[1], std::nullopt};
    if (parts.size() == 3) step.minimum = parts[2];
    table.steps.push_back(step);
  }
  return table;
}

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

Amount passive_cap(Amount supply, Amount granularity) {
  Amount::Raw g = granularity.raw();
  return Amount((supply.raw() / g + 1) * g);
}

namespace {

class Runner {
 public:
  explicit Runner(const Scenario& scenario) : scenario_(scenario), state_(scenario.config) {
    run_.trace.lines.push_back(std::string(kTraceHeader) + "\t1");
    std::string normalized = format_scenario(scenario);
    std::string_view rest = normalized;
    while (!rest.empty()) {
      auto nl = rest.find('\n');
      run_.trace.lines.push_back("scenario\t" + std::string(rest.substr(0, nl)));
      rest.remove_prefix(nl == std::string_view::npos ? rest.size() : nl + 1);
    }
  }

  SaleState& state() { return state_; }
  const Scenario& scenario() const { return scenario_; }

  void bid(const AddressId& actor, Amount v, Amount c, std::optional<Amount> m,
           const AdviceSpec& advice = {}, const AdviceSpec& min_advice = {}) {
    BidRequest request{actor, v, c, m, resolve(advice, c, false), std::nullopt};
    if (m) request.min_advice = resolve(min_advice, *m, true);
    try {
      Receipt r = state_.submit_bid(request);
      LineBuilder line("rec");
      line.field("bid").field(stage()).field(actor).kv("v", v).kv("c", c);
      line.kv("m", m ? m->str() : std::string("-"));
      line.kv("b", r.b).kv("status", to_string(r.status)).kv("fee", r.fee).kv("V", r.valuation).kv("gas", r.gas);
      emit(line);
    } catch (const Error& e) {
      reject(actor, "bid", e.code());
    }
  }

  void withdraw(const AddressId& actor) {
    try {
      WithdrawalResult r = state_.voluntary_withdraw(actor);
      LineBuilder line("rec");
      line.field("withdraw").field(stage()).field(actor).kv("refund", r.refund);
      line.kv("permanent_v", r.permanent_v).kv("permanent_b", r.permanent_b).kv("dormant", r.was_dormant);
      line.kv("V", state_.valuation()).kv("gas", cost_of(scenario_.config.gas, GasOp::Store));
      emit(line);
    } catch (const Error& e) {
      reject(actor, "withdraw", e.code());
    }
  }

  void poke(const AddressId& actor, Amount x, const std::vector<AddressId>& targets) {
    try {
      PokeReport r = state_.poke(x, targets, actor);
      std::string joined;
      for (std::size_t i = 0; i < targets.size(); ++i) joined += (i ? "," : "") + targets[i];
      LineBuilder line("rec");
      line.field("poke").field(stage()).field(actor).kv("x", x).kv("targets", joined);
      line.kv("activated", static_cast<std::uint64_t>(r.activated.size())).kv("fee", r.fee_paid);
      line.kv("V", r.valuation).kv("gas", r.gas);
      emit(line);
      for (const Activation& a : r.activated) {
        LineBuilder act("rec");
        act.field("activate").field(stage()).field(a.address).kv("v", a.v).kv("c", a.cap).kv("late", a.behind_pointer);
        emit(act);
      }
    } catch (const Error& e) {
      reject(actor, "poke", e.code());
    }
  }

  void close_block(const BlockSummary& summary) {
    for (const WithdrawalBatch& batch : summary.batches) {
      LineBuilder step("rec");
      step.field("step").field(std::to_string(summary.stage)).field("-");
      step.kv("mode", batch.late_activation ? "late" : batch.full_kick() ? "kick" : "scale");
      step.kv("cap", batch.min_cap).kv("S", batch.total).kv("k", static_cast<std::uint64_t>(batch.count));
      if (batch.q) step.kv("q", *batch.q);
      step.kv("refund", batch.refund_total).kv("V", batch.valuation_after);
      emit(step);
      for (const KickPayout& payout : batch.payouts) {
        LineBuilder kick("rec");
        kick.field("kick").field(std::to_string(summary.stage)).field(payout.address);
        kick.kv("refund", payout.refund).kv("remaining", payout.remaining);
        emit(kick);
      }
    }
    LineBuilder block("block");
    block.field(std::to_string(summary.stage)).kv("V", summary.valuation).kv("pointer", summary.pointer);
    block.kv("gas", summary.gas_spent).kv("limit", scenario_.config.gas.block_limit).kv("carryover", summary.carryover);
    emit(block);
    run_.blocks.push_back(summary);
  }

  void finish() {
    // Settlement refunds are what finalize() adds to each ledger entry.
    std::map<AddressId, Amount> before = state_.refunds().refunds();
    try {
      FinalReport report = state_.finalize();
      note_settlements(before);
      close_block(report.last_block);
      for (const auto& [address, bid] : state_.bids()) {
        const Allocation& alloc = report.allocations.at(address);
        if (alloc.status == BidStatus::Dormant) {
          LineBuilder line("settle");
          line.field(address).kv("kind", "dormant").kv("refund", bid.v + bid.poke_fee);
          emit(line);
        } else if (alloc.status == BidStatus::Active) {
          auto fraction = state_.book().member_fraction(address);
          LineBuilder line("settle");
          line.field(address).kv("kind", "active").kv("fraction", fraction ? *fraction : Rational(1));
          line.kv("refund", settled_.count(address) ? settled_.at(address) : Amount{});
          emit(line);
        }
      }
      for (const auto& [address, alloc] : report.allocations) {
        LineBuilder line("alloc");
        line.field(address).kv("status", to_string(alloc.status)).kv("tokens", alloc.tokens);
        line.kv("refunded", alloc.refunded).kv("retained", alloc.retained);
        emit(line);
      }
      LineBuilder final_line("final");
      final_line.kv("V", state_.valuation()).kv("dust", report.dust);
      emit(final_line);
      run_.report = std::move(report);
    } catch (const Error& e) {
      if (state_.final_block()) close_block(*state_.final_block());
      LineBuilder final_line("final");
      final_line.kv("V", state_.valuation()).kv("error", to_string(e.code()));
      emit(final_line);
      run_.final_error = e.code();
    }
    run_.bids = state_.bids();
  }

  void note_settlements(const std::map<AddressId, Amount>& refunds_before) {
    for (const auto& [address, total] : state_.refunds().refunds()) {
      auto it = refunds_before.find(address);
      Amount before = it == refunds_before.end() ? Amount{} : it->second;
      if (total != before) settled_[address] = total - before;
    }
  }

  ScenarioRun take() { return std::move(run_); }
  Stage now() const { return state_.stage(); }

 private:
  std::string stage() const { return std::to_string(state_.stage()); }

  std::optional<Advice> resolve(const AdviceSpec& spec, Amount key, bool minimum) const {
    switch (spec.mode) {
      case AdviceSpec::Mode::Auto: return minimum ? state_.book().advise_minimum(key) : state_.book().advise_cap(key);
      case AdviceSpec::Mode::None: return std::nullopt;
      case AdviceSpec::Mode::Head: return Advice::head();
      case AdviceSpec::Mode::After: return Advice::after(spec.after);
    }
    return std::nullopt;
  }

  void reject(const AddressId& actor, std::string_view action, ErrorCode code) {
    LineBuilder line("rec");
    line.field("reject").field(stage()).field(actor).kv("action", action).kv("error", to_string(code));
    emit(line);
    ++run_.rejections;
  }

  void emit(const LineBuilder& line) { run_.trace.lines.push_back(line.str()); }

  const Scenario& scenario_;
  SaleState state_;
  ScenarioRun run_;
  std::map<AddressId, Amount> settled_;
};

Amount param_amount(const StrategySpec& spec, const std::string& key) {
  try {
    return Amount::parse(spec.params.at(key));
  } catch (const Error&) {
    raise(ErrorCode::ParseError, spec.name + ": bad " + key + "=" + spec.params.at(key));
  }
}

Stage param_stage(const StrategySpec& spec, const std::string& key, Stage fallback) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  Amount value = param_amount(spec, key);
  if (value > Amount::units(~std::uint64_t{0})) raise(ErrorCode::ParseError, spec.name + ": " + key + " too large");
  return static_cast<Stage>(value.raw());
}

class Agent {
 public:
  virtual ~Agent() = default;
  virtual void act(Runner& runner, Stage s) = 0;
};

class TruthfulAgent : public Agent {
 public:
  TruthfulAgent(const StrategySpec& spec, std::mt19937_64& rng) : name_(spec.name) {
    ValuationTable table = parse_table(spec.params.at("table"));
    Stage entry = param_stage(spec, "entry", 0);
    Stage jitter = param_stage(spec, "jitter", 0);
    react_ = param_stage(spec, "react", 1) != 0;
    for (const TableBid& bid : bids_from_table(table)) {
      planned_.push_back({entry + draw_below(rng, jitter + 1), bid});
    }
  }

  void act(Runner& runner, Stage s) override {
    for (std::size_t i = 0; i < planned_.size(); ++i) {
      if (planned_[i].first != s) continue;
      const TableBid& bid = planned_[i].second;
      const SaleState& state = runner.state();
      // A buyer who sees V at or above the step's cap no longer demands it.
      if (react_ && state.locked() && !(bid.c > state.valuation())) continue;
      runner.bid(name_ + "/" + std::to_string(i), bid.v, bid.c, bid.m);
    }
  }

 private:
  std::string name_;
  bool react_ = true;
  std::vector<std::pair<Stage, TableBid>> planned_;
};

class BlackoutAgent : public Agent {
 public:
  BlackoutAgent(const StrategySpec& spec, const Scenario& scenario)
      : name_(spec.name),
        x_(param_amount(spec, "x")),
        bulk_(param_amount(spec, "bulk")),
        at_(param_stage(spec, "at", 0)),
        withdraw_(param_stage(spec, "withdraw", 0)),
        cap_(spec.params.count("cap") ? param_amount(spec, "cap")
                                      : passive_cap(scenario.supply, scenario.config.granularity)) {}

  void act(Runner& runner, Stage s) override {
    if (s == at_) {
      if (!x_.is_zero()) runner.bid(name_ + "/kept", x_, cap_, std::nullopt);
      if (!bulk_.is_zero()) runner.bid(name_ + "/bulk", bulk_, cap_, std::nullopt);
    }
    if (s == withdraw_ && !bulk_.is_zero()) runner.withdraw(name_ + "/bulk");
  }

 private:
  std::string name_;
  Amount x_, bulk_;
  Stage at_, withdraw_;
  Amount cap_;
};

class SingleBidAgent : public Agent {
 public:
  SingleBidAgent(const StrategySpec& spec, const Scenario& scenario, bool snipe)
      : address_(spec.name + "/0"),
        v_(param_amount(spec, "v")),
        c_(spec.params.count("c") ? param_amount(spec, "c")
                                  : passive_cap(scenario.supply, scenario.config.granularity)),
        at_(param_stage(spec, "at", 0)),
        snipe_at_(snipe ? std::optional<Stage>(scenario.config.curve.u) : std::nullopt) {}

  void act(Runner& runner, Stage s) override {
    if (s == at_) runner.bid(address_, v_, c_, std::nullopt);
    if (snipe_at_ && s == *snipe_at_) runner.withdraw(address_);
  }

 private:
  AddressId address_;
  Amount v_, c_;
  Stage at_;
  std::optional<Stage> snipe_at_;
};

std::unique_ptr<Agent> make_agent(const StrategySpec& spec, const Scenario& scenario, std::mt19937_64& rng) {
  switch (spec.kind) {
    case StrategyKind::Truthful: return std::make_unique<TruthfulAgent>(spec, rng);
    case StrategyKind::Blackout: return std::make_unique<BlackoutAgent>(spec, scenario);
    case StrategyKind::Whale: return std::make_unique<SingleBidAgent>(spec, scenario, false);
    case StrategyKind::Sniper: return std::make_unique<SingleBidAgent>(spec, scenario, true);
    case StrategyKind::Passive: return std::make_unique<SingleBidAgent>(spec, scenario, false);
  }
  return nullptr;
}

}  // namespace

ScenarioRun run_scenario(const Scenario& scenario) {
  Runner runner(scenario);
  std::mt19937_64 rng(scenario.seed);
  std::vector<std::unique_ptr<Agent>> agents;
  for (const auto& spec : scenario.strategies) agents.push_back(make_agent(spec, scenario, rng));

  auto next_event = scenario.events.begin();
  const Stage u = scenario.config.curve.u;
  for (Stage s = 0; s <= u; ++s) {
    for (; next_event != scenario.events.end() && next_event->stage == s; ++next_event) {
      const ScenarioEvent& ev = *next_event;
      switch (ev.action) {
        case Action::Bid: runner.bid(ev.actor, ev.v, ev.c, ev.m, ev.advice, ev.min_advice); break;
        case Action::Withdraw: runner.withdraw(ev.actor); break;
        case Action::Poke: runner.poke(ev.actor, ev.x, ev.targets); break;
      }
    }
    for (auto& agent : agents) agent->act(runner, s);
    if (s < u) {
      runner.close_block(runner.state().advance_block());
    }
  }
  runner.finish();
  return runner.take();
}

BlackoutMeasurement blackout_play(const BlackoutSetup& setup) {
  auto make = [&](bool attack) {
    Scenario sc;
    sc.config.curve = PriceCurve{1 + setup.a, 1 + setup.b, Rational(1), setup.t, setup.u};
    sc.config.voluntary_penalty = setup.penalty;
    sc.supply = setup.x + setup.y + setup.bulk;
    Amount cap = passive_cap(sc.supply, sc.config.granularity);
    auto bid = [&](Stage s, const char* who, Amount v) {
      if (v.is_zero()) return;
      ScenarioEvent ev;
      ev.stage = s;
      ev.actor = who;
      ev.v = v;
      ev.c = cap;
      sc.events.push_back(ev);
    };
    bid(0, "adversary/kept", setup.x);
    if (attack) {
      bid(0, "adversary/bulk", setup.bulk);
      if (!setup.bulk.is_zero()) {
        ScenarioEvent ev;
        ev.stage = setup.withdraw_stage;
        ev.actor = "adversary/bulk";
        ev.action = Action::Withdraw;
        sc.events.push_back(ev);
      }
      bid(setup.t, "truthful/0", setup.y);
    } else {
      bid(0, "truthful/0", setup.y);
    }
    std::stable_sort(sc.events.begin(), sc.events.end(),
                     [](const ScenarioEvent& l, const ScenarioEvent& r) { return l.stage < r.stage; });
    return run_scenario(sc);
  };
  auto tokens = [](const ScenarioRun& run, const char* who) {
    if (!run.report) raise(ErrorCode::NotQuiescent, "blackout run did not finalize");
    auto it = run.report->allocations.find(who);
    return it == run.report->allocations.end() ? Amount{} : it->second.tokens;
  };
  auto share = [](Amount mine, Amount others) {
    Amount total = mine + others;
    return total.is_zero() ? Rational(0) : Rational(mine.big(), total.big());
  };

  BlackoutMeasurement m;
  ScenarioRun attack = make(true);
  ScenarioRun baseline = make(false);
  m.attack_tokens = tokens(attack, "adversary/kept");
  m.truthful_tokens = tokens(attack, "truthful/0");
  m.attack_fraction = share(m.attack_tokens, m.truthful_tokens);
  m.baseline_fraction = share(tokens(baseline, "adversary/kept"), tokens(baseline, "truthful/0"));
  m.advantage = m.attack_fraction - m.baseline_fraction;
  m.predicted = blackout_advantage(BlackoutParams{setup.a, setup.b, setup.x.rational(), setup.y.rational()});
  if (!setup.bulk.is_zero()) {
    const Bid& bulk = attack.bids.at("adversary/bulk");
    Rational full = bulk.permanent_v.rational() * (1 + setup.a);
    m.penalty = (full - tokens(attack, "adversary/bulk").rational()) / setup.bulk.rational();
  }
  m.net_gain = m.advantage - m.penalty;
  return m;
}

}  // namespace icosim
