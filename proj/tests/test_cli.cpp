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


#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "icosim/cli.hpp"

namespace icosim {
namespace {

namespace fs = std::filesystem;
using testing::read_file;
using testing::scenario_path;

struct Output {
  int code = -1;
  std::string text;
};

Output icosim(const std::string& args) {
  std::string command = std::string(ICOSIM_BIN) + " " + args + " 2>&1";
  Output out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.text.append(buf.data(), n);
  int status = pclose(pipe);
  out.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("icosim-cli-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out() const { return "--out " + dir_.string(); }
  fs::path file(const std::string& name) const { return dir_ / name; }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name), std::ios::binary) << text;
  }

  fs::path dir_;
};

TEST_F(Cli, RunWritesTraceSummaryAndAudit) {
  Output o = icosim("run " + scenario_path("whale.scn") + " " + out());
  EXPECT_EQ(o.code, kExitClean) << o.text;
  EXPECT_NE(o.text.find("final V 79"), std::string::npos) << o.text;
  EXPECT_TRUE(fs::exists(file("whale.trace")));
  EXPECT_TRUE(fs::exists(file("whale.summary.txt")));
  EXPECT_EQ(read_file(file("whale.audit.txt").string()), "audit\tclean\tblocks=6\n");
  EXPECT_EQ(read_file(file("whale.summary.txt").string()), o.text);
}

TEST_F(Cli, OutputDirectoryFromTheEnvironment) {
  std::string cmd = "ICOSIM_OUT_DIR=" + dir_.string() + " " + ICOSIM_BIN + " run " + scenario_path("sniper.scn") +
                    " > /dev/null";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(file("sniper.trace")));
  EXPECT_TRUE(fs::exists(file("sniper.audit.txt")));
}

TEST_F(Cli, FullReportListsBlocks) {
  Output o = icosim("run " + scenario_path("whale.scn") + " --report full " + out());
  EXPECT_EQ(o.code, kExitClean);
  EXPECT_NE(o.text.find("block"), std::string::npos);
  Output audit_only = icosim("run " + scenario_path("whale.scn") + " --audit-only");
  EXPECT_EQ(audit_only.text, "audit\tclean\tblocks=6\n");
}

TEST_F(Cli, BlackoutSummaryComparesWithTheClosedForm) {
  Output o = icosim("run " + scenario_path("blackout.scn") + " " + out());
  EXPECT_EQ(o.code, kExitClean);
  EXPECT_NE(o.text.find("measured advantage"), std::string::npos);
  EXPECT_NE(o.text.find("predicted advantage"), std::string::npos);
}

TEST_F(Cli, RunTwiceIsByteIdentical) {
  for (const char* name : {"whale", "blackout", "passive", "poke", "sniper", "truthful"}) {
    icosim("run " + scenario_path(std::string(name) + ".scn") + " " + out());
    std::string first = read_file(file(std::string(name) + ".trace").string());
    icosim("run " + scenario_path(std::string(name) + ".scn") + " " + out());
    EXPECT_EQ(first, read_file(file(std::string(name) + ".trace").string())) << name;
  }
}

TEST_F(Cli, ReplayVerifies) {
  icosim("run " + scenario_path("poke.scn") + " " + out());
  Output o = icosim("replay " + file("poke.trace").string());
  EXPECT_EQ(o.code, kExitClean) << o.text;
  EXPECT_NE(o.text.find("digest match sha256:"), std::string::npos);
  EXPECT_EQ(icosim("replay " + file("poke.trace").string() + " --gas-limit 6700000").code, kExitClean);
}

TEST_F(Cli, ReplayRefusesADifferentGasLimit) {
  icosim("run " + scenario_path("poke.scn") + " " + out());
  Output o = icosim("replay " + file("poke.trace").string() + " --gas-limit 1000000");
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.text.find("RefusedDifferentConfig"), std::string::npos);
}

TEST_F(Cli, TamperedTraceFailsReplayAndAudit) {
  icosim("run " + scenario_path("whale.scn") + " " + out());
  std::string text = read_file(file("whale.trace").string());
  text.replace(text.find("V=79"), 4, "V=78");
  write("forged.trace", text);
  Output replay = icosim("replay " + file("forged.trace").string());
  EXPECT_EQ(replay.code, kExitViolation);
  EXPECT_NE(replay.text.find("DigestMismatch"), std::string::npos);
  EXPECT_EQ(icosim("audit " + file("forged.trace").string()).code, kExitViolation);
}

TEST_F(Cli, ResealedForgeryIsCaughtByTheAuditor) {
  // a forger who recomputes the digest still fails the re-audit
  icosim("run " + scenario_path("whale.scn") + " " + out());
  Trace t = parse_trace(read_file(file("whale.trace").string())).trace;
  for (std::string& line : t.lines) {
    if (line.starts_with("block\t4\t")) line.replace(line.find("V=79"), 4, "V=70");
  }
  t.lines.pop_back();  // the recorded audit line
  write("resealed.trace", t.serialize());
  Output audit = icosim("audit " + file("resealed.trace").string());
  EXPECT_EQ(audit.code, kExitViolation) << audit.text;
  EXPECT_NE(audit.text.find("monotone"), std::string::npos) << audit.text;
  Output replay = icosim("replay " + file("resealed.trace").string());
  EXPECT_EQ(replay.code, kExitViolation);
}

TEST_F(Cli, Normalize) {
  Output o = icosim("normalize " + scenario_path("whale.scn"));
  EXPECT_EQ(o.code, kExitClean);
  EXPECT_EQ(parse_scenario(o.text), testing::bundled("whale.scn"));
  EXPECT_EQ(o.text.find('#'), std::string::npos);
}

TEST_F(Cli, BatchAgreesWithSerial) {
  std::string files;
  for (const char* name : {"whale", "blackout", "truthful"}) files += " " + scenario_path(std::string(name) + ".scn");
  Output parallel = icosim("batch" + files + " " + out());
  Output serial = icosim("batch --serial" + files + " " + out());
  EXPECT_EQ(parallel.code, kExitClean);
  EXPECT_EQ(parallel.text, serial.text);
  EXPECT_TRUE(fs::exists(file("truthful.trace")));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(icosim("").code, kExitUsage);
  EXPECT_EQ(icosim("frobnicate").code, kExitUsage);
  EXPECT_EQ(icosim("run /no/such/file.scn").code, kExitUsage);
  EXPECT_EQ(icosim("run " + scenario_path("whale.scn") + " --report fancy").code, kExitUsage);
  EXPECT_EQ(icosim("--help").code, kExitClean);
  write("bad.scn", "icosim-scenario\t1\nparam\tt\t2\nparam\tu\t5\nevent\t0\ta/0\tbid\tv=30\tcap=79\n");
  Output bad = icosim("run " + file("bad.scn").string() + " " + out());
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_NE(bad.text.find("ParseError at line 4, column 22"), std::string::npos) << bad.text;
}

}  // namespace
}  // namespace icosim
