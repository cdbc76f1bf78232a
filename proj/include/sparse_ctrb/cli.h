// Copyright 2026 The sparse_ctrb Authors
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

#ifndef SPARSE_CTRB_CLI_H_
#define SPARSE_CTRB_CLI_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sparse_ctrb/matcore.h"
#include "sparse_ctrb/system.h"

// JSON system files, JSON reports and the command layer behind the
// sparse_ctrb executable. Reports keep a fixed key order and carry
// "schema_version": 1.
namespace sparse_ctrb::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitInconclusive = 3;

// {"D": [[...]], "H": [[...]], "A"?: [[...]], "name"?: "..."}. Throws
// InputError on unknown keys, ragged or non-numeric arrays and inconsistent
// dimensions.
SystemModel ParseSystem(const Json& j);
SystemModel LoadSystemFile(const std::string& path);
Json SerializeSystem(const SystemModel& sys);

// A single positive number sets all three thresholds; "r,e,a" sets
// rank_rel, eig_cluster and residual_abs in that order.
Tolerance ParseTolerance(std::string_view text);

// Library defaults, overridden by SPARSE_CTRB_TOL when it is set.
Tolerance DefaultTolerance();

// Either an inline JSON array ("[1, 0, 2]") or a path to a file holding one.
Vector ParseVectorArgument(const std::string& text);

struct CommandOptions {
  std::string command;  // check, bounds, decompose, oracle or steer
  std::string system_path;
  int sparsity = 1;
  Tolerance tol;
  // When set, parsed with ParseTolerance and used in place of `tol`'s
  // thresholds; exact_rational is kept.
  std::optional<std::string> tol_text;
  bool timing = false;

  // check, oracle: state, output or common-support.
  std::string output_mode = "state";
  // bounds: sparse, relaxed, unconstrained, output or common-support.
  std::string variant = "sparse";

  // oracle and steer --schedule oracle.
  int max_k = 0;
  std::int64_t budget = 20'000'000;
  std::optional<double> deadline_seconds;

  // steer.
  std::optional<int> k;
  std::optional<std::string> x_init;
  std::optional<std::string> x_final;
  bool output_target = false;
  std::string schedule = "greedy";
};

struct CommandResult {
  Json report;
  int exit_code = kExitOk;
  // One human-readable line for stderr.
  std::string summary;
};

// Never throws for bad input: errors become an error report with exit code
// 2, exhausted budgets exit with 3.
CommandResult RunCommand(const CommandOptions& options);
CommandResult RunCommandOn(const SystemModel& sys,
                           const CommandOptions& options);

// Two-space indented report followed by a newline.
std::string RenderReport(const Json& report);

}  // namespace sparse_ctrb::cli

#endif  // SPARSE_CTRB_CLI_H_
