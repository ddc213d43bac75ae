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


// icosim: run, replay and audit sale scenarios.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "icosim/batch.hpp"
#include "icosim/cli.hpp"

namespace fs = std::filesystem;
using namespace icosim;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("ICOSIM_OUT_DIR"); env && *env) return env;
  return ".";
}

int exit_for(const AuditReport& audit) { return audit.clean() ? kExitClean : kExitViolation; }

struct RunFlags {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool audit_only = false;
  std::string report = "summary";
};

int cmd_run(const RunFlags& flags) {
  Scenario scenario = parse_scenario(read_file(flags.scenario));
  if (flags.seed) scenario.seed = *flags.seed;
  RunOutcome outcome = run_and_audit(scenario);
  if (flags.audit_only) {
    std::cout << "audit\t" << outcome.audit.summary() << "\n";
    for (const auto& v : outcome.audit.violations) {
      std::cout << "violation\t" << (v.stage ? std::to_string(*v.stage) : "-") << "\t" << v.kind << "\t" << v.detail
                << "\n";
    }
    return exit_for(outcome.audit);
  }
  fs::path dir = output_dir(flags.out);
  fs::create_directories(dir);
  std::string stem = fs::path(flags.scenario).stem().string();
  std::string summary = summary_report(scenario, outcome, flags.report == "full");
  write_file(dir / (stem + ".trace"), outcome.trace.serialize());
  write_file(dir / (stem + ".summary.txt"), summary);
  std::ostringstream audit;
  audit << "audit\t" << outcome.audit.summary() << "\n";
  for (const auto& v : outcome.audit.violations) {
    audit << "violation\t" << (v.stage ? std::to_string(*v.stage) : "-") << "\t" << v.kind << "\t" << v.detail << "\n";
  }
  for (const auto& n : outcome.audit.notes) audit << "note\t" << n << "\n";
  write_file(dir / (stem + ".audit.txt"), audit.str());
  std::cout << summary;
  return exit_for(outcome.audit);
}

int cmd_replay(const std::string& path, std::optional<Gas> gas_limit) {
  ParsedTrace parsed = parse_trace(read_file(path));
  ReplayOutcome outcome = replay_trace(parsed, gas_limit);
  std::cout << "digest match " << outcome.replayed << "\n"
            << "audit\t" << outcome.audit.summary() << "\n";
  return exit_for(outcome.audit);
}

int cmd_audit(const std::string& path) {
  ParsedTrace parsed = parse_trace(read_file(path));
  if (!parsed.digest_matches()) raise(ErrorCode::DigestMismatch, "trace body does not match its digest");
  Trace body = parsed.trace;
  if (!body.lines.empty() && body.lines.back().starts_with("audit\t")) body.lines.pop_back();
  AuditReport audit = audit_trace(body);
  std::cout << "audit\t" << audit.summary() << "\n";
  for (const auto& v : audit.violations) {
    std::cout << "violation\t" << (v.stage ? std::to_string(*v.stage) : "-") << "\t" << v.kind << "\t" << v.detail
              << "\n";
  }
  return exit_for(audit);
}

int cmd_batch(const std::vector<std::string>& paths, const std::string& out, bool serial) {
  std::vector<Scenario> scenarios;
  for (const auto& p : paths) scenarios.push_back(parse_scenario(read_file(p)));
  std::vector<RunOutcome> outcomes = serial ? run_batch_serial(scenarios) : run_batch(scenarios);
  fs::path dir = output_dir(out);
  fs::create_directories(dir);
  int code = kExitClean;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    std::string stem = fs::path(paths[i]).stem().string();
    write_file(dir / (stem + ".trace"), outcomes[i].trace.serialize());
    std::cout << stem << "\t" << outcomes[i].audit.summary() << "\t" << outcomes[i].trace.digest() << "\n";
    if (!outcomes[i].audit.clean()) code = kExitViolation;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"icosim: interactive coin offering simulator"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run a scenario, write trace, audit and summary");
  run->add_option("scenario", run_flags.scenario, "scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", run_flags.seed, "override the scenario seed");
  run->add_option("--out", run_flags.out, "output directory (default: $ICOSIM_OUT_DIR or .)");
  run->add_flag("--audit-only", run_flags.audit_only, "print the audit verdict only");
  run->add_option("--report", run_flags.report, "summary or full")->check(CLI::IsMember({"summary", "full"}));

  std::string trace_path;
  std::optional<Gas> gas_limit;
  auto* replay = app.add_subcommand("replay", "re-execute a trace and compare digests");
  replay->add_option("trace", trace_path, "trace file")->required()->check(CLI::ExistingFile);
  replay->add_option("--gas-limit", gas_limit, "refuse unless equal to the recorded block limit");

  std::string audit_path;
  auto* audit = app.add_subcommand("audit", "audit a trace without re-running it");
  audit->add_option("trace", audit_path, "trace file")->required()->check(CLI::ExistingFile);

  std::vector<std::string> batch_paths;
  std::string batch_out;
  bool serial = false;
  auto* batch = app.add_subcommand("batch", "run many scenarios in parallel");
  batch->add_option("scenarios", batch_paths, "scenario files")->required()->check(CLI::ExistingFile);
  batch->add_option("--out", batch_out, "output directory (default: $ICOSIM_OUT_DIR or .)");
  batch->add_flag("--serial", serial, "use the single-threaded runner");

  std::string normalize_path;
  auto* normalize = app.add_subcommand("normalize", "print a scenario in normalized form");
  normalize->add_option("scenario", normalize_path, "scenario file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitClean : kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*replay) return cmd_replay(trace_path, gas_limit);
    if (*audit) return cmd_audit(audit_path);
    if (*batch) return cmd_batch(batch_paths, batch_out, serial);
    if (*normalize) {
      std::cout << format_scenario(parse_scenario(read_file(normalize_path)));
      return kExitClean;
    }
  } catch (const Error& e) {
    std::cerr << "icosim: " << e.what() << "\n";
    return e.code() == ErrorCode::DigestMismatch ? kExitViolation : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "icosim: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
