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


#ifndef ICOSIM_TRACE_HPP_
#define ICOSIM_TRACE_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icosim/scenario.hpp"

namespace icosim {

// One trace line split into its tag, positional fields and key=value pairs.
struct Record {
  std::string tag;
  std::vector<std::string> positional;
  std::map<std::string, std::string> values;

  const std::string& get(const std::string& key) const;  // throws ParseError
  bool has(const std::string& key) const { return values.count(key) != 0; }
  Amount amount(const std::string& key) const;
  Rational rational(const std::string& key) const;
};

Record parse_record(std::string_view line);

// Builds one tab-separated line field by field.
class LineBuilder {
 public:
  explicit LineBuilder(std::string_view tag) : line_(tag) {}

  LineBuilder& field(std::string_view value);
  LineBuilder& kv(std::string_view key, std::string_view value);
  LineBuilder& kv(std::string_view key, Amount value) { return kv(key, value.str()); }
  LineBuilder& kv(std::string_view key, std::uint64_t value) { return kv(key, std::to_string(value)); }
  LineBuilder& kv(std::string_view key, const Rational& value) { return kv(key, rational_str(value)); }
  LineBuilder& kv(std::string_view key, bool value) { return kv(key, std::string_view(value ? "1" : "0")); }
  LineBuilder& kv(std::string_view key, const char* value) { return kv(key, std::string_view(value)); }

  std::string str() const { return line_; }

 private:
  std::string line_;
};

// Everything before the digest line. The digest covers exactly body().
struct Trace {
  std::vector<std::string> lines;

  std::string body() const;
  std::string digest() const;  // "sha256:<hex>"
  std::string serialize() const;

  // The scenario that was embedded when the trace was written.
  Scenario scenario() const;
  std::vector<Record> records() const;  // every line after the scenario block
};

struct ParsedTrace {
  Trace trace;
  std::string digest;  // as written in the file

  bool digest_matches() const { return trace.digest() == digest; }
};

// Structural parse only; the digest is compared by the caller.
ParsedTrace parse_trace(std::string_view text);

std::string sha256_hex(std::string_view data);

constexpr std::string_view kTraceHeader = "icosim-trace";

}  // namespace icosim

#endif  // ICOSIM_TRACE_HPP_
