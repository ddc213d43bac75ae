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


#include "icosim/cli.hpp"

#include <iomanip>
#include <sstream>

namespace icosim {

RunOutcome run_and_audit(const Scenario& scenario) {
  RunOutcome outcome;
  outcome.run = run_scenario(scenario);
  outcome.audit = audit_trace(outcome.run.trace);
  outcome.trace = outcome.run.trace;
  outcome.trace.lines.push_back("audit\t" + outcome.audit.summary());
  return outcome;
}

namespace {

std::string decimal(const Rational& r, int digits = 6) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << r.convert_to<double>();
  return out.str();
}

void blackout_rows(std::ostringstream& out, const Scenario& scenario, const RunOutcome& outcome) {
  const PriceCurve& curve = scenario.config.curve;
  for (const StrategySpec& spec : scenario.strategies) {
    if (spec.kind != StrategyKind::Blackout || !outcome.run.report) continue;
    BlackoutSetup setup;
    setup.a = curve.p0 / curve.pu - 1;
    setup.b = curve.pt / curve.pu - 1;
    setup.x = Amount::parse(spec.params.at("x"));
    setup.bulk = Amount::parse(spec.params.at("bulk"));
    setup.t = curve.t;
    setup.u = curve.u;
    setup.withdraw_stage = std::stoull(spec.params.at("withdraw"));
    setup.penalty = scenario.config.voluntary_penalty;
    for (const auto& [address, alloc] : outcome.run.report->allocations) {
      if (buyer_of(address) != spec.name) setup.y += alloc.retained;
    }
    BlackoutMeasurement m = blackout_play(setup);
    Rational bound = blackout_bound(setup.a, setup.b);
    out << "blackout " << spec.name << ": a=" << rational_str(setup.a) << " b=" << rational_str(setup.b)
        << " x=" << setup.x.str() << " y=" << setup.y.str() << "\n"
        << "  measured advantage  " << decimal(m.advantage) << "  (" << rational_str(m.advantage) << ")\n"
        << "  predicted advantage " << decimal(m.predicted) << "  (" << rational_str(m.predicted) << ")\n"
        << "  bound (a-b)/3       " << decimal(bound) << "\n"
        << "  withdrawal penalty  " << decimal(m.penalty) << "\n"
        << "  net gain            " << decimal(m.net_gain) << "\n";
  }
}

}  // namespace

std::string summary_report(const Scenario& scenario, const RunOutcome& outcome, bool full) {
  std::ostringstream out;
  const ScenarioRun& run = outcome.run;
  if (run.report) {
    out << "final V " << outcome.run.blocks.back().valuation.str() << "  dust " << run.report->dust.str() << "\n";
  } else {
    out << "sale did not finalize: " << to_string(*run.final_error) << "\n";
  }
  out << "rejections " << run.rejections << "  audit " << outcome.audit.summary() << "\n";
  for (const auto& v : outcome.audit.violations) {
    out << "  violation " << (v.stage ? std::to_string(*v.stage) : "-") << " " << v.kind << ": " << v.detail << "\n";
  }
  for (const auto& note : outcome.audit.notes) out << "  note " << note << "\n";
  if (run.report) {
    out << std::left << std::setw(24) << "address" << std::setw(11) << "status" << std::right << std::setw(14)
        << "tokens" << std::setw(14) << "refunded" << std::setw(14) << "retained" << "\n";
    for (const auto& [address, a] : run.report->allocations) {
      out << std::left << std::setw(24) << address << std::setw(11) << to_string(a.status) << std::right
          << std::setw(14) << a.tokens.str() << std::setw(14) << a.refunded.str() << std::setw(14)
          << a.retained.str() << "\n";
    }
  }
  blackout_rows(out, scenario, outcome);
  if (full) {
    out << "blocks\n";
    for (const BlockSummary& b : run.blocks) {
      out << "  " << std::setw(6) << b.stage << "  V " << b.valuation.str() << "  pointer " << b.pointer.str()
          << "  gas " << b.gas_spent << (b.carryover ? "  carryover" : "") << "\n";
    }
  }
  out << "digest " << outcome.trace.digest() << "\n";
  return out.str();
}

ReplayOutcome replay_trace(const ParsedTrace& parsed, std::optional<Gas> gas_limit) {
  if (!parsed.digest_matches()) {
    raise(ErrorCode::DigestMismatch, "trace body does not match its digest " + parsed.digest);
  }
  Scenario scenario = parsed.trace.scenario();
  if (gas_limit && *gas_limit != scenario.config.gas.block_limit) {
    raise(ErrorCode::RefusedDifferentConfig, "trace was recorded with gas.block_limit=" +
                                                 std::to_string(scenario.config.gas.block_limit));
  }
  ReplayOutcome outcome;
  outcome.recorded = parsed.digest;
  outcome.replayed = run_and_audit(scenario).trace.digest();
  if (outcome.replayed != outcome.recorded) {
    raise(ErrorCode::DigestMismatch, "rerun " + outcome.replayed + " != recorded " + outcome.recorded);
  }
  Trace body = parsed.trace;
  if (!body.lines.empty() && body.lines.back().starts_with("audit\t")) body.lines.pop_back();
  outcome.audit = audit_trace(body);
  return outcome;
}

}  // namespace icosim
