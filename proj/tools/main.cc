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

// sparse_ctrb <command> SYSTEM.json [flags]
//
// Report JSON goes to stdout, a one-line summary to stderr. Exit codes:
// 0 analysis complete (whatever the verdict), 2 input error, 3 budget
// exhausted.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sparse_ctrb/cli.h"

namespace {

using sparse_ctrb::cli::CommandOptions;

struct Shared {
  std::string path;
  int sparsity = 1;
  std::optional<std::string> tol;
  bool rational = false;
  bool timing = false;
};

CLI::App* AddCommand(CLI::App& app, const std::string& name,
                     const std::string& help, Shared& shared) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("system", shared.path, "System JSON file")->required();
  sub->add_option("-s,--sparsity", shared.sparsity,
                  "Nonzero entries allowed per input vector");
  sub->add_option("--tol", shared.tol,
                  "One threshold, or rank_rel,eig_cluster,residual_abs");
  sub->add_flag("--rational", shared.rational,
                "Exact rational arithmetic for rank decisions");
  sub->add_flag("--timing", shared.timing, "Report elapsed_ms");
  return sub;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Controllability of linear systems under input sparsity"};
  app.require_subcommand(1);
  Shared shared;
  CommandOptions o;
  const std::vector<std::string> modes{"state", "output", "common-support"};

  CLI::App* check = AddCommand(app, "check", "Fast sparse controllability test",
                               shared);
  check->add_option("--output-mode", o.output_mode)
      ->check(CLI::IsMember(modes));

  CLI::App* bounds = AddCommand(app, "bounds", "Bounds on K*", shared);
  bounds->add_option("--variant", o.variant)
      ->check(CLI::IsMember({"sparse", "relaxed", "unconstrained", "output",
                             "common-support"}));
  bounds->add_option("--deadline", o.deadline_seconds,
                     "Seconds allowed for the S* search");

  AddCommand(app, "decompose", "Sparse standard form", shared);

  CLI::App* oracle = AddCommand(app, "oracle",
                                "Exhaustive schedule search for K*", shared);
  oracle->add_option("--output-mode", o.output_mode)
      ->check(CLI::IsMember(modes));
  oracle->add_option("--max-k", o.max_k, "Largest K tried (0: default)");
  oracle->add_option("--budget", o.budget, "Rank evaluations allowed");
  oracle->add_option("--deadline", o.deadline_seconds, "Seconds allowed");

  CLI::App* steer = AddCommand(app, "steer", "Sparse input synthesis", shared);
  steer->add_option("--k", o.k, "Number of input vectors");
  steer->add_option("--x-init", o.x_init,
                    "Initial state: JSON array or file (default 0)");
  steer->add_option("--x-final", o.x_final,
                    "Target state or output: JSON array or file")
      ->required();
  steer->add_flag("--output-target", o.output_target,
                  "Treat the target as y = A x_K");
  steer->add_option("--schedule", o.schedule)
      ->check(CLI::IsMember({"greedy", "oracle"}));
  steer->add_option("--max-k", o.max_k, "Largest K tried by the oracle");
  steer->add_option("--budget", o.budget, "Rank evaluations allowed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sparse_ctrb::cli::kExitInputError;
  }

  o.command = app.get_subcommands().front()->get_name();
  o.system_path = shared.path;
  o.sparsity = shared.sparsity;
  o.timing = shared.timing;
  if (shared.tol) {
    o.tol_text = shared.tol;
  } else if (const char* env = std::getenv("SPARSE_CTRB_TOL");
             env != nullptr && *env != '\0') {
    o.tol_text = env;
  }
  o.tol.exact_rational = shared.rational;

  const sparse_ctrb::cli::CommandResult result =
      sparse_ctrb::cli::RunCommand(o);
  std::cout << sparse_ctrb::cli::RenderReport(result.report);
  std::cerr << result.summary << "\n";
  return result.exit_code;
}
