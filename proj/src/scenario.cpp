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


#include "icosim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <set>
#include <sstream>

namespace icosim {

ParseFailure::ParseFailure(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorCode::ParseError,
            "ParseError at line " + std::to_string(line) + ", column " + std::to_string(column) +
                ": " + message),
      line_(line),
      column_(column) {}

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Truthful: return "truthful";
    case StrategyKind::Blackout: return "blackout";
    case StrategyKind::Whale: return "whale";
    case StrategyKind::Sniper: return "sniper";
    case StrategyKind::Passive: return "passive";
  }
  return "?";
}

std::string buyer_of(const AddressId& address) { return address.substr(0, address.find('/')); }

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

namespace {

constexpr std::string_view kHeader = "icosim-scenario";

struct Cursor {
  std::size_t line = 0;
  std::string_view text;
  std::vector<std::string_view> fields;

  std::size_t column_of(std::size_t field) const {
    std::size_t col = 1;
    for (std::size_t i = 0; i < field && i < fields.size(); ++i) col += fields[i].size() + 1;
    return col;
  }

  [[noreturn]] void fail(std::size_t field, const std::string& message) const {
    throw ParseFailure(line, column_of(field), message);
  }
};

std::uint64_t to_u64(const Cursor& cur, std::size_t field, std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    cur.fail(field, "expected an unsigned integer, got '" + std::string(text) + "'");
  }
  return value;
}

Amount to_amount(const Cursor& cur, std::size_t field, std::string_view text) {
  try {
    return Amount::parse(text);
  } catch (const Error&) {
    cur.fail(field, "expected an amount, got '" + std::string(text) + "'");
  }
}

Rational to_rational(const Cursor& cur, std::size_t field, std::string_view text) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    cur.fail(field, "expected a rational, got '" + std::string(text) + "'");
  }
}

AdviceSpec to_advice(const Cursor& cur, std::size_t field, std::string_view text) {
  if (text == "auto") return AdviceSpec{AdviceSpec::Mode::Auto, {}};
  if (text == "none") return AdviceSpec{AdviceSpec::Mode::None, {}};
  if (text == "head") return AdviceSpec{AdviceSpec::Mode::Head, {}};
  if (text.starts_with("after:")) {
    return AdviceSpec{AdviceSpec::Mode::After, to_amount(cur, field, text.substr(6))};
  }
  cur.fail(field, "advice must be auto, none, head or after:<cap>");
}

std::string advice_str(const AdviceSpec& advice) {
  switch (advice.mode) {
    case AdviceSpec::Mode::Auto: return "auto";
    case AdviceSpec::Mode::None: return "none";
    case AdviceSpec::Mode::Head: return "head";
    case AdviceSpec::Mode::After: return "after:" + advice.after.str();
  }
  return "auto";
}

// key=value pairs from fields[first..]; duplicate keys rejected.
std::map<std::string, std::pair<std::string, std::size_t>> key_values(const Cursor& cur,
                                                                      std::size_t first) {
  std::map<std::string, std::pair<std::string, std::size_t>> out;
  for (std::size_t i = first; i < cur.fields.size(); ++i) {
    std::string_view field = cur.fields[i];
    auto eq = field.find('=');
    if (eq == std::string_view::npos || eq == 0) cur.fail(i, "expected key=value");
    std::string key(field.substr(0, eq));
    if (!out.emplace(key, std::make_pair(std::string(field.substr(eq + 1)), i)).second) {
      cur.fail(i, "duplicate key '" + key + "'");
    }
  }
  return out;
}

struct ParamSlot {
  std::string_view name;
  std::function<void(Scenario&, const Cursor&, std::size_t, std::string_view)> set;
  std::function<std::string(const Scenario&)> get;
};

const std::vector<ParamSlot>& param_slots() {
  static const std::vector<ParamSlot> slots = [] {
    std::vector<ParamSlot> s;
    auto stage = [](Stage PriceCurve::*member) {
      return [member](Scenario& sc, const Cursor& c, std::size_t f, std::string_view v) {
        sc.config.curve.*member = to_u64(c, f, v);
      };
    };
    auto rational = [](Rational PriceCurve::*member) {
      return [member](Scenario& sc, const Cursor& c, std::size_t f, std::string_view v) {
        sc.config.curve.*member = to_rational(c, f, v);
      };
    };
    auto gas = [](Gas GasSchedule::*member) {
      return [member](Scenario& sc, const Cursor& c, std::size_t f, std::string_view v) {
        sc.config.gas.*member = to_u64(c, f, v);
      };
    };
    auto gas_get = [](Gas GasSchedule::*member) {
      return [member](const Scenario& sc) { return std::to_string(sc.config.gas.*member); };
    };
    s.push_back({"t", stage(&PriceCurve::t), [](const Scenario& sc) { return std::to_string(sc.config.curve.t); }});
    s.push_back({"u", stage(&PriceCurve::u), [](const Scenario& sc) { return std::to_string(sc.config.curve.u); }});
    s.push_back({"p0", rational(&PriceCurve::p0), [](const Scenario& sc) { return rational_str(sc.config.curve.p0); }});
    s.push_back({"pt", rational(&PriceCurve::pt), [](const Scenario& sc) { return rational_str(sc.config.curve.pt); }});
    s.push_back({"pu", rational(&PriceCurve::pu), [](const Scenario& sc) { return rational_str(sc.config.curve.pu); }});
    s.push_back({"granularity",
                 [](Scenario& sc, const Cursor& c, std::size_t f, std::string_view v) {
                   sc.config.granularity = to_amount(c, f, v);
                 },
                 [](const Scenario& sc) { return sc.config.granularity.str(); }});
    s.push_back({"unit",
                 [](Scenario& sc, const Cursor& c, std::size_t f, std::string_view v) { sc.unit = to_amount(c, f, v); },
                 [](const Scenario& sc) { return sc.unit.str(); }});
    s.push_back({"supply",
                 [](Scenario& sc, const Cursor& c, std::size_t f, std::string_view v) { sc.supply = to_amount(c, f, v); },
                 [](const Scenario& sc) { return sc.supply.str(); }});
    s.push_back({"poke_fee",
                 [](Scenario& sc, const Cursor& c, std::size_t f, std::string_view v) {
                   sc.config.poke_fee = to_amount(c, f, v);
                 },
                 [](const Scenario& sc) { return sc.config.poke_fee.str(); }});
    s.push_back({"voluntary_penalty",
                 [](Scenario& sc, const Cursor& c, std::size_t f, std::string_view v) {
                   if (v != "0" && v != "1") c.fail(f, "voluntary_penalty must be 0 or 1");
                   sc.config.voluntary_penalty = v == "1";
                 },
                 [](const Scenario& sc) { return std::string(sc.config.voluntary_penalty ? "1" : "0"); }});
    s.push_back({"gas.block_limit", gas(&GasSchedule::block_limit), gas_get(&GasSchedule::block_limit)});
    s.push_back({"gas.loop_base", gas(&GasSchedule::loop_base), gas_get(&GasSchedule::loop_base)});
    s.push_back({"gas.per_pointer_move", gas(&GasSchedule::per_pointer_move), gas_get(&GasSchedule::per_pointer_move)});
    s.push_back({"gas.per_store", gas(&GasSchedule::per_store), gas_get(&GasSchedule::per_store)});
    s.push_back({"gas.per_bid_submit", gas(&GasSchedule::per_bid_submit), gas_get(&GasSchedule::per_bid_submit)});
    s.push_back({"gas.per_advice_check", gas(&GasSchedule::per_advice_check), gas_get(&GasSchedule::per_advice_check)});
    return s;
  }();
  return slots;
}

const std::map<StrategyKind, std::pair<std::set<std::string>, std::set<std::string>>>& strategy_keys() {
  // kind -> (required, optional)
  static const std::map<StrategyKind, std::pair<std::set<std::string>, std::set<std::string>>> keys = {
      {StrategyKind::Truthful, {{"table", "entry"}, {"jitter", "react"}}},
      {StrategyKind::Blackout, {{"x", "bulk", "withdraw"}, {"at", "cap"}}},
      {StrategyKind::Whale, {{"v", "c", "at"}, {}}},
      {StrategyKind::Sniper, {{"v", "c", "at"}, {}}},
      {StrategyKind::Passive, {{"v", "at"}, {"c"}}},
  };
  return keys;
}

std::optional<StrategyKind> parse_kind(std::string_view text) {
  for (auto k : {StrategyKind::Truthful, StrategyKind::Blackout, StrategyKind::Whale,
                 StrategyKind::Sniper, StrategyKind::Passive}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

bool valid_address(std::string_view a) {
  return !a.empty() && a != "-" &&
         std::none_of(a.begin(), a.end(), [](char c) { return c == ',' || c == '=' || c == ' ' || c == '\t'; });
}

ScenarioEvent parse_event(const Cursor& cur) {
  if (cur.fields.size() < 4) cur.fail(cur.fields.size(), "event needs stage, actor and action");
  ScenarioEvent ev;
  ev.stage = to_u64(cur, 1, cur.fields[1]);
  if (!valid_address(cur.fields[2])) cur.fail(2, "bad actor address");
  ev.actor = std::string(cur.fields[2]);
  std::string_view action = cur.fields[3];
  auto kv = key_values(cur, 4);
  std::set<std::string> allowed;
  if (action == "bid") allowed = {"v", "c", "m", "advice", "min_advice"};
  if (action == "poke") allowed = {"x", "targets"};
  if (action == "bid" || action == "withdraw" || action == "poke") {
    for (const auto& [key, value] : kv) {
      if (!allowed.count(key)) cur.fail(value.second, "unknown key '" + key + "'");
    }
  }
  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto out = it->second;
    kv.erase(it);
    return out;
  };
  auto need = [&](const std::string& key) {
    auto v = take(key);
    if (!v) cur.fail(cur.fields.size(), "missing " + key + "=");
    return *v;
  };
  if (action == "bid") {
    ev.action = Action::Bid;
    auto v = need("v");
    ev.v = to_amount(cur, v.second, v.first);
    auto c = need("c");
    ev.c = to_amount(cur, c.second, c.first);
    if (auto m = take("m")) ev.m = to_amount(cur, m->second, m->first);
    if (auto a = take("advice")) ev.advice = to_advice(cur, a->second, a->first);
    if (auto a = take("min_advice")) ev.min_advice = to_advice(cur, a->second, a->first);
  } else if (action == "withdraw") {
    ev.action = Action::Withdraw;
  } else if (action == "poke") {
    ev.action = Action::Poke;
    auto x = need("x");
    ev.x = to_amount(cur, x.second, x.first);
    auto targets = need("targets");
    std::string_view list = targets.first;
    while (!list.empty()) {
      auto comma = list.find(',');
      std::string_view one = list.substr(0, comma);
      if (!valid_address(one)) cur.fail(targets.second, "bad target address");
      ev.targets.emplace_back(one);
      if (comma == std::string_view::npos) break;
      list.remove_prefix(comma + 1);
    }
    if (ev.targets.empty()) cur.fail(targets.second, "empty target set");
  } else {
    cur.fail(3, "unknown action '" + std::string(action) + "'");
  }
  return ev;
}

std::string format_event(const ScenarioEvent& ev) {
  std::ostringstream out;
  out << "event\t" << ev.stage << '\t' << ev.actor << '\t';
  switch (ev.action) {
    case Action::Bid:
      out << "bid\tv=" << ev.v.str() << "\tc=" << ev.c.str();
      if (ev.m) out << "\tm=" << ev.m->str();
      if (ev.advice.mode != AdviceSpec::Mode::Auto) out << "\tadvice=" << advice_str(ev.advice);
      if (ev.min_advice.mode != AdviceSpec::Mode::Auto) out << "\tmin_advice=" << advice_str(ev.min_advice);
      break;
    case Action::Withdraw:
      out << "withdraw";
      break;
    case Action::Poke: {
      out << "poke\tx=" << ev.x.str() << "\ttargets=";
      for (std::size_t i = 0; i < ev.targets.size(); ++i) out << (i ? "," : "") << ev.targets[i];
      break;
    }
  }
  return out.str();
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario scenario;
  std::set<std::string> params_seen;
  std::set<std::string> strategy_names;
  bool header = false;
  bool seed_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    Cursor cur{line_no, line, split_tabs(line)};
    std::string_view tag = cur.fields[0];
    if (!header) {
      if (tag != kHeader || cur.fields.size() != 2 || cur.fields[1] != "1") {
        cur.fail(0, "expected header 'icosim-scenario<TAB>1'");
      }
      header = true;
      continue;
    }
    if (tag == "param") {
      if (cur.fields.size() != 3) cur.fail(cur.fields.size() > 3 ? 3 : cur.fields.size(), "param needs a name and a value");
      std::string name(cur.fields[1]);
      auto& slots = param_slots();
      auto slot = std::find_if(slots.begin(), slots.end(), [&](const ParamSlot& s) { return s.name == name; });
      if (slot == slots.end()) cur.fail(1, "unknown param '" + name + "'");
      if (!params_seen.insert(name).second) cur.fail(1, "duplicate param '" + name + "'");
      slot->set(scenario, cur, 2, cur.fields[2]);
    } else if (tag == "seed") {
      if (cur.fields.size() != 2) cur.fail(1, "seed needs one value");
      if (seed_seen) cur.fail(0, "duplicate seed");
      scenario.seed = to_u64(cur, 1, cur.fields[1]);
      seed_seen = true;
    } else if (tag == "strategy") {
      if (cur.fields.size() < 3) cur.fail(cur.fields.size(), "strategy needs a name and a kind");
      StrategySpec spec;
      if (!valid_address(cur.fields[1]) || cur.fields[1].find('/') != std::string_view::npos) {
        cur.fail(1, "bad strategy name");
      }
      spec.name = std::string(cur.fields[1]);
      if (!strategy_names.insert(spec.name).second) cur.fail(1, "duplicate strategy '" + spec.name + "'");
      auto kind = parse_kind(cur.fields[2]);
      if (!kind) cur.fail(2, "unknown strategy kind '" + std::string(cur.fields[2]) + "'");
      spec.kind = *kind;
      const auto& [required, optional] = strategy_keys().at(spec.kind);
      for (const auto& [key, value] : key_values(cur, 3)) {
        if (!required.count(key) && !optional.count(key)) {
          cur.fail(value.second, "unknown key '" + key + "' for " + std::string(to_string(spec.kind)));
        }
        spec.params.emplace(key, value.first);
      }
      for (const auto& key : required) {
        if (!spec.params.count(key)) cur.fail(cur.fields.size(), "missing " + key + "=");
      }
      scenario.strategies.push_back(std::move(spec));
    } else if (tag == "event") {
      scenario.events.push_back(parse_event(cur));
    } else {
      cur.fail(0, "unknown record '" + std::string(tag) + "'");
    }
  }
  if (!header) throw ParseFailure(line_no + 1, 1, "missing header");
  try {
    scenario.config.validate();
  } catch (const Error& e) {
    throw ParseFailure(line_no + 1, 1, std::string("invalid sale parameters: ") + e.what());
  }
  for (const auto& ev : scenario.events) {
    if (ev.stage > scenario.config.curve.u) {
      throw ParseFailure(line_no + 1, 1, "event at stage " + std::to_string(ev.stage) + " after sale end");
    }
  }
  std::stable_sort(scenario.events.begin(), scenario.events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.stage < b.stage; });
  return scenario;
}

std::string format_scenario(const Scenario& scenario) {
  std::ostringstream out;
  out << kHeader << "\t1\n";
  for (const auto& slot : param_slots()) out << "param\t" << slot.name << '\t' << slot.get(scenario) << '\n';
  out << "seed\t" << scenario.seed << '\n';
  for (const auto& spec : scenario.strategies) {
    out << "strategy\t" << spec.name << '\t' << to_string(spec.kind);
    for (const auto& [key, value] : spec.params) out << '\t' << key << '=' << value;
    out << '\n';
  }
  auto events = scenario.events;
  std::stable_sort(events.begin(), events.end(),
                   [](const ScenarioEvent& a, const ScenarioEvent& b) { return a.stage < b.stage; });
  for (const auto& ev : events) out << format_event(ev) << '\n';
  return out.str();
}

}  // namespace icosim
