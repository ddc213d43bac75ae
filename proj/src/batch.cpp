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


#include "icosim/batch.hpp"

#include <exception>

#include <omp.h>

namespace icosim {

namespace {

template <typename In, typename Out, typename Fn>
std::vector<Out> parallel_map(const std::vector<In>& inputs, Fn fn) {
  std::vector<Out> outputs(inputs.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(inputs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      outputs[i] = fn(inputs[i]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return outputs;
}

}  // namespace

std::vector<RunOutcome> run_batch(const std::vector<Scenario>& scenarios) {
  return parallel_map<Scenario, RunOutcome>(scenarios, run_and_audit);
}

std::vector<AuditReport> audit_batch(const std::vector<Trace>& traces) {
  return parallel_map<Trace, AuditReport>(traces, audit_trace);
}

std::vector<RunOutcome> run_batch_serial(const std::vector<Scenario>& scenarios) {
  std::vector<RunOutcome> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(run_and_audit(s));
  return out;
}

std::vector<AuditReport> audit_batch_serial(const std::vector<Trace>& traces) {
  std::vector<AuditReport> out;
  out.reserve(traces.size());
  for (const auto& t : traces) out.push_back(audit_trace(t));
  return out;
}

int batch_threads() { return omp_get_max_threads(); }

}  // namespace icosim
