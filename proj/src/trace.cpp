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


#include "icosim/trace.hpp"

#include <array>
#include <memory>

#include <openssl/evp.h>

namespace icosim {

const std::string& Record::get(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) raise(ErrorCode::ParseError, tag + " record without " + key + "=");
  return it->second;
}

Amount Record::amount(const std::string& key) const {
  try {
    return Amount::parse(get(key));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    raise(ErrorCode::ParseError, tag + " " + key + "=" + get(key));
  }
}

Rational Record::rational(const std::string& key) const { return parse_rational(get(key)); }

Record parse_record(std::string_view line) {
  Record record;
  auto fields = split_tabs(line);
  record.tag = std::string(fields[0]);
  for (std::size_t i = 1; i < fields.size(); ++i) {
    std::string_view f = fields[i];
    if (auto eq = f.find('='); eq != std::string_view::npos && eq > 0) {
      record.values[std::string(f.substr(0, eq))] = std::string(f.substr(eq + 1));
    } else {
      record.positional.emplace_back(f);
    }
  }
  return record;
}

LineBuilder& LineBuilder::field(std::string_view value) {
  line_.push_back('\t');
  line_.append(value);
  return *this;
}

LineBuilder& LineBuilder::kv(std::string_view key, std::string_view value) {
  line_.push_back('\t');
  line_.append(key);
  line_.push_back('=');
  line_.append(value);
  return *this;
}

std::string Trace::body() const {
  std::string out;
  for (const auto& line : lines) {
    out += line;
    out.push_back('\n');
  }
  return out;
}

std::string Trace::digest() const { return "sha256:" + sha256_hex(body()); }

std::string Trace::serialize() const { return body() + "digest\t" + digest() + "\n"; }

Scenario Trace::scenario() const {
  std::string text;
  for (const auto& line : lines) {
    if (line.starts_with("scenario\t")) text += line.substr(9) + "\n";
  }
  return parse_scenario(text);
}

std::vector<Record> Trace::records() const {
  std::vector<Record> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].starts_with("scenario\t")) continue;
    out.push_back(parse_record(lines[i]));
  }
  return out;
}

ParsedTrace parse_trace(std::string_view text) {
  ParsedTrace parsed;
  std::size_t line_no = 0;
  bool header = false;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!parsed.digest.empty()) throw ParseFailure(line_no, 1, "content after the digest line");
    if (!header) {
      if (line != std::string(kTraceHeader) + "\t1") throw ParseFailure(line_no, 1, "expected trace header");
      header = true;
    }
    if (line.starts_with("digest\t")) {
      parsed.digest = std::string(line.substr(7));
      continue;
    }
    if (line.empty()) throw ParseFailure(line_no, 1, "empty line in trace");
    parsed.trace.lines.emplace_back(line);
  }
  if (!header) throw ParseFailure(1, 1, "empty trace");
  if (parsed.digest.empty()) throw ParseFailure(line_no + 1, 1, "missing digest line");
  return parsed;
}

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xf]);
  }
  return out;
}

}  // namespace icosim
