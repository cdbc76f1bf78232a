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

#include "sparse_ctrb/cli.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "sparse_ctrb/bounds.h"
#include "sparse_ctrb/ctrb.h"
#include "sparse_ctrb/decomp.h"
#include "sparse_ctrb/errors.h"
#include "sparse_ctrb/oracle.h"
#include "sparse_ctrb/steer.h"

namespace sparse_ctrb::cli {

namespace {

Matrix ParseMatrix(const Json& j, const char* key) {
  const std::string what = std::string("\"") + key + "\"";
  if (!j.is_array() || j.empty()) {
    throw InputError(what + " must be a non-empty array of rows");
  }
  const size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw InputError(what + " rows must be non-empty arrays");
  Matrix m(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    const Json& row = j[i];
    if (!row.is_array() || row.size() != cols) {
      throw InputError(what + " is not rectangular (row " + std::to_string(i) +
                       ")");
    }
    for (size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        throw InputError(what + " has a non-numeric entry at row " +
                         std::to_string(i) + ", column " + std::to_string(c));
      }
      m(i, c) = row[c].get<double>();
    }
  }
  RequireFinite(m, key);
  return m;
}

Json MatrixJson(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json VectorJson(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json ComplexJson(Complex c) {
  return Json{{"re", c.real()}, {"im", c.imag()}};
}

Json ComplexVectorJson(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(ComplexJson(v(i)));
  return out;
}

Json ScheduleJson(const SupportSchedule& sched) {
  Json out = Json::array();
  for (const auto& support : sched.supports) out.push_back(support);
  return out;
}

template <typename T>
Json OptionalJson(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json ToleranceJson(const Tolerance& tol) {
  return Json{{"rank_rel", tol.rank_rel},
              {"eig_cluster", tol.eig_cluster},
              {"residual_abs", tol.residual_abs},
              {"exact_rational", tol.exact_rational}};
}

Json OutcomeJson(OracleOutcome o) {
  switch (o) {
    case OracleOutcome::kTrue:
      return true;
    case OracleOutcome::kFalse:
      return false;
    case OracleOutcome::kInconclusive:
      break;
  }
  return nullptr;
}

std::string_view OutcomeName(OracleOutcome o) {
  switch (o) {
    case OracleOutcome::kTrue:
      return "true";
    case OracleOutcome::kFalse:
      return "false";
    case OracleOutcome::kInconclusive:
      break;
  }
  return "inconclusive";
}

std::string VerdictText(const Json& v) {
  return v.is_null() ? "undecided" : (v.get<bool>() ? "true" : "false");
}

double ParseDouble(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw InputError(std::string(what) + ": cannot parse \"" +
                     std::string(text) + "\" as a number");
  }
  return value;
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + path + ": " + e.what());
  }
}

// Everything a report carries besides the command payload.
struct Envelope {
  Json parameters = Json::object();
  Json witnesses = Json::object();
  std::vector<std::string> warnings;
};

struct Payload {
  // (key, value) pairs placed between "parameters" and "tolerance".
  std::vector<std::pair<std::string, Json>> fields;
  Envelope envelope;
  int exit_code = kExitOk;
  std::string summary;
};

SystemModel LoadForCommand(const CommandOptions& o) {
  if (o.system_path.empty()) throw InputError("no system file given");
  return LoadSystemFile(o.system_path);
}

Payload Check(const SystemModel& sys, const CommandOptions& o) {
  const Tolerance& tol = o.tol;
  sys.RequireSparsity(o.sparsity);
  Payload p;
  p.envelope.parameters = Json{{"sparsity", o.sparsity},
                               {"output_mode", o.output_mode}};
  Json verdict;
  Json details;
  if (o.output_mode == "state") {
    const ControllabilityReport r = SparsePbhTest(sys, o.sparsity, tol);
    const ControllabilityReport full = PbhTest(sys, tol);
    verdict = r.verdict;
    details = Json{{"controllable", full.verdict},
                   {"rank_condition_holds", r.rank_condition_holds},
                   {"inequality_holds", r.inequality_holds},
                   {"slack", OptionalJson(r.slack)},
                   {"rank_d", r.rank_d}};
    p.envelope.witnesses = Json{
        {"lambda", r.witness_lambda ? ComplexJson(*r.witness_lambda)
                                    : Json(nullptr)},
        {"z", r.witness_z ? ComplexVectorJson(*r.witness_z) : Json(nullptr)}};
  } else if (o.output_mode == "output") {
    const bool kalman = OutputKalmanTest(sys, tol);
    const bool pbh = OutputPbhNecessary(sys, tol);
    const bool sparse_necessary = OutputSparseNecessary(sys, o.sparsity, tol);
    const bool state_sparse = SparsePbhTest(sys, o.sparsity, tol).verdict;
    const bool full_row_rank = DecisionRank(sys.A(), tol) == sys.m();
    if (!kalman || !sparse_necessary) {
      verdict = false;
    } else if (o.sparsity == sys.L() || (state_sparse && full_row_rank)) {
      verdict = true;
    } else {
      verdict = nullptr;
      p.envelope.warnings.push_back(
          "output sparse controllability is not decided by the fast tests; "
          "run the oracle command with --output-mode output");
    }
    details = Json{{"output_controllable", kalman},
                   {"pbh_necessary", pbh},
                   {"sparse_necessary", sparse_necessary},
                   {"state_sparse_controllable", state_sparse}};
  } else if (o.output_mode == "common-support") {
    const CommonSupportResult r = CommonSupportTest(sys, o.sparsity, tol);
    verdict = r.verdict;
    details = Json{{"screen_evaluated", r.screen_evaluated},
                   {"screen_passed", r.screen_passed},
                   {"max_geometric_multiplicity",
                    r.max_geometric_multiplicity}};
    p.envelope.witnesses = Json{{"support", OptionalJson(r.witness_support)}};
  } else {
    throw InputError("unknown output mode \"" + o.output_mode + "\"");
  }
  p.fields.emplace_back("verdict", verdict);
  p.fields.emplace_back("details", std::move(details));
  p.summary = "check (" + o.output_mode + ", s=" +
              std::to_string(o.sparsity) + "): " + VerdictText(verdict);
  return p;
}

Payload Bounds(const SystemModel& sys, const CommandOptions& o) {
  const Tolerance& tol = o.tol;
  Payload p;
  p.envelope.parameters = Json{{"sparsity", o.sparsity},
                               {"variant", o.variant}};
  SStarOptions sstar_options;
  sstar_options.deadline_seconds = o.deadline_seconds;
  KStarBounds b;
  if (o.variant == "unconstrained") {
    b = KStarBoundsUnconstrained(sys, tol);
  } else {
    sys.RequireSparsity(o.sparsity);
    if (o.variant == "sparse") {
      b = KStarBoundsSparse(sys, o.sparsity, tol, sstar_options);
      p.envelope.witnesses = Json{
          {"s_star_support", SStar(sys, tol, sstar_options).support}};
    } else if (o.variant == "relaxed") {
      b = KStarBoundsRelaxed(sys, o.sparsity, tol);
    } else if (o.variant == "output") {
      b = OutputKStarBounds(sys, o.sparsity, tol);
    } else if (o.variant == "common-support") {
      b = CommonSupportKStarBounds(sys, o.sparsity, tol);
    } else {
      throw InputError("unknown bounds variant \"" + o.variant + "\"");
    }
  }
  p.fields.emplace_back(
      "bounds", Json{{"variant", std::string(BoundsVariantName(b.variant))},
                     {"lower", b.lower},
                     {"upper", b.upper},
                     {"q", b.q},
                     {"s_star", OptionalJson(b.s_star)},
                     {"r_star", b.r_star},
                     {"lower_num", b.lower_num},
                     {"lower_den", b.lower_den},
                     {"sparsity", OptionalJson(b.sparsity)}});
  p.summary = "bounds (" + o.variant + "): " + std::to_string(b.lower) +
              " <= K* <= " + std::to_string(b.upper);
  return p;
}

Payload Decompose(const SystemModel& sys, const CommandOptions& o) {
  const DecompositionResult res = StandardForm(sys, o.sparsity, o.tol);
  const VerificationReport report = VerifyStandardForm(sys, res, o.tol);
  Payload p;
  p.envelope.parameters = Json{{"sparsity", o.sparsity}};
  Json classes = Json::array();
  for (CoordinateClass c : res.classification) {
    classes.push_back(std::string(CoordinateClassName(c)));
  }
  Json checks = Json::array();
  for (const VerificationCheck& c : report.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"passed", c.passed},
                          {"residual", c.residual}});
  }
  p.fields.emplace_back(
      "decomposition",
      Json{{"controllable_dim", res.controllable_dim},
           {"core_dim", res.core_dim},
           {"sparse_dim", res.sparse_dim},
           {"classification", std::move(classes)},
           {"core_rank_mismatch", res.core_rank_mismatch},
           {"u", MatrixJson(res.u)},
           {"w", MatrixJson(res.w)},
           {"d_bar", MatrixJson(res.d_bar)},
           {"h_bar", MatrixJson(res.h_bar)},
           {"verification",
            Json{{"passed", report.passed()}, {"checks", std::move(checks)}}}});
  p.envelope.warnings = res.warnings;
  p.summary = "decompose (s=" + std::to_string(o.sparsity) +
              "): R=" + std::to_string(res.controllable_dim) +
              " r=" + std::to_string(res.core_dim) +
              " R_s=" + std::to_string(res.sparse_dim) +
              (report.passed() ? ", verification passed"
                               : ", verification FAILED");
  return p;
}

OracleBudget BudgetFrom(const CommandOptions& o) {
  if (o.max_k < 0) throw InputError("--max-k must be nonnegative");
  if (o.budget <= 0) throw InputError("--budget must be positive");
  OracleBudget budget;
  budget.max_k = o.max_k;
  budget.max_enumerations = o.budget;
  budget.deadline_seconds = o.deadline_seconds;
  return budget;
}

Payload Oracle(const SystemModel& sys, const CommandOptions& o) {
  const OracleBudget budget = BudgetFrom(o);
  MinKResult r;
  if (o.output_mode == "state") {
    r = ExactMinK(sys, o.sparsity, budget, o.tol);
  } else if (o.output_mode == "output") {
    r = ExactMinKOutput(sys, o.sparsity, budget, o.tol);
  } else if (o.output_mode == "common-support") {
    r = ExactMinKCommonSupport(sys, o.sparsity, budget, o.tol);
  } else {
    throw InputError("unknown output mode \"" + o.output_mode + "\"");
  }
  Payload p;
  p.envelope.parameters = Json{{"sparsity", o.sparsity},
                               {"output_mode", o.output_mode},
                               {"max_k", r.max_k},
                               {"budget", o.budget}};
  p.fields.emplace_back("verdict", OutcomeJson(r.outcome));
  p.fields.emplace_back(
      "search", Json{{"outcome", std::string(OutcomeName(r.outcome))},
                     {"k_star", OptionalJson(r.k)},
                     {"max_k", r.max_k},
                     {"enumerations", r.enumerations}});
  p.envelope.witnesses = Json{
      {"schedule", r.witness ? ScheduleJson(*r.witness) : Json(nullptr)}};
  p.summary = "oracle (" + o.output_mode + ", s=" +
              std::to_string(o.sparsity) + "): " +
              std::string(OutcomeName(r.outcome));
  if (r.k) p.summary += ", K*=" + std::to_string(*r.k);
  if (r.outcome == OracleOutcome::kInconclusive) {
    p.exit_code = kExitInconclusive;
    p.envelope.warnings.push_back("search budget exhausted before a decision");
  }
  return p;
}

Payload Steer(const SystemModel& sys, const CommandOptions& o) {
  sys.RequireSparsity(o.sparsity);
  if (!o.x_final) throw InputError("--x-final is required");
  const Vector x_init =
      o.x_init ? ParseVectorArgument(*o.x_init) : Vector(Vector::Zero(sys.N()));
  const Vector target = ParseVectorArgument(*o.x_final);
  if (o.k && *o.k < 0) throw InputError("--k must be nonnegative");

  Payload p;
  SupportSchedule sched;
  std::string source = o.schedule;
  if (o.schedule == "greedy") {
    if (!o.k) throw InputError("--k is required with the greedy schedule");
    sched = GreedySupportSchedule(sys, o.sparsity, *o.k, o.tol);
  } else if (o.schedule == "oracle") {
    const OracleBudget budget = BudgetFrom(o);
    OracleOutcome outcome;
    std::optional<SupportSchedule> witness;
    if (o.k) {
      const ScheduleSearchResult r =
          o.output_target
              ? OutputKalmanTypeRankTest(sys, o.sparsity, *o.k, budget, o.tol)
              : KalmanTypeRankTest(sys, o.sparsity, *o.k, budget, o.tol);
      outcome = r.outcome;
      witness = r.witness;
    } else {
      const MinKResult r =
          o.output_target ? ExactMinKOutput(sys, o.sparsity, budget, o.tol)
                          : ExactMinK(sys, o.sparsity, budget, o.tol);
      outcome = r.outcome;
      witness = r.witness;
      if (outcome == OracleOutcome::kFalse) {
        throw PreconditionError(
            "no schedule up to K=" + std::to_string(r.max_k) +
            " reaches full rank; pass --k to steer with a fixed horizon");
      }
    }
    if (outcome == OracleOutcome::kInconclusive) {
      throw BudgetExceededError("schedule search budget exhausted");
    }
    if (witness) {
      sched = *witness;
    } else {
      sched = GreedySupportSchedule(sys, o.sparsity, *o.k, o.tol);
      source = "greedy";
      p.envelope.warnings.push_back(
          "no full-rank schedule of the requested length; using the greedy "
          "schedule");
    }
  } else {
    throw InputError("unknown schedule \"" + o.schedule + "\"");
  }

  const SteeringPlan plan =
      o.output_target ? SolveOutputInputs(sys, sched, x_init, target, o.tol)
                      : SolveInputs(sys, sched, x_init, target, o.tol);
  p.envelope.parameters = Json{{"sparsity", o.sparsity},
                               {"k", OptionalJson(o.k)},
                               {"schedule", o.schedule},
                               {"output_target", o.output_target},
                               {"x_init", VectorJson(x_init)},
                               {"target", VectorJson(target)}};
  Json inputs = Json::array();
  for (const Vector& h : plan.inputs) inputs.push_back(VectorJson(h));
  Json trajectory = Json::array();
  for (const Vector& x : plan.trajectory) trajectory.push_back(VectorJson(x));
  const bool reached = plan.residual <= o.tol.residual_abs;
  p.fields.emplace_back(
      "plan", Json{{"k", sched.length()},
                   {"schedule_source", source},
                   {"schedule", ScheduleJson(sched)},
                   {"inputs", std::move(inputs)},
                   {"trajectory", std::move(trajectory)},
                   {"residual", plan.residual},
                   {"reached", reached}});
  if (!reached) {
    p.envelope.warnings.push_back(
        "target not reached; residual exceeds residual_abs");
  }
  std::ostringstream summary;
  summary << "steer (s=" << o.sparsity << ", K=" << sched.length()
          << "): residual " << plan.residual
          << (reached ? ", target reached" : ", target NOT reached");
  p.summary = summary.str();
  return p;
}

Payload Dispatch(const SystemModel& sys, const CommandOptions& o) {
  o.tol.Validate();
  if (o.command == "check") return Check(sys, o);
  if (o.command == "bounds") return Bounds(sys, o);
  if (o.command == "decompose") return Decompose(sys, o);
  if (o.command == "oracle") return Oracle(sys, o);
  if (o.command == "steer") return Steer(sys, o);
  throw InputError("unknown command \"" + o.command + "\"");
}

Json ElapsedJson(const CommandOptions& o,
                 std::chrono::steady_clock::time_point start) {
  if (!o.timing) return nullptr;
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

CommandResult ErrorResult(const CommandOptions& o, std::string_view kind,
                          const std::string& message, int exit_code,
                          std::chrono::steady_clock::time_point start) {
  CommandResult out;
  out.exit_code = exit_code;
  out.report = Json{{"schema_version", kSchemaVersion},
                    {"command", o.command},
                    {"error", Json{{"kind", kind}, {"message", message}}},
                    {"elapsed_ms", ElapsedJson(o, start)}};
  out.summary = o.command + ": error: " + message;
  return out;
}

template <typename Body>
CommandResult Guarded(const CommandOptions& o, Body body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    return body(start);
  } catch (const PreconditionError& e) {
    return ErrorResult(o, "precondition", e.what(), kExitInputError, start);
  } catch (const InputError& e) {
    return ErrorResult(o, "input", e.what(), kExitInputError, start);
  } catch (const BudgetExceededError& e) {
    return ErrorResult(o, "budget", e.what(), kExitInconclusive, start);
  }
}

CommandOptions Resolved(const CommandOptions& options) {
  CommandOptions o = options;
  if (o.tol_text) {
    o.tol = ParseTolerance(*o.tol_text);
    o.tol.exact_rational = options.tol.exact_rational;
  }
  return o;
}

CommandResult Run(const SystemModel& sys, const CommandOptions& options,
                  std::chrono::steady_clock::time_point start) {
  const CommandOptions o = Resolved(options);
  Payload p = Dispatch(sys, o);
  std::vector<std::string> warnings = sys.warnings();
  warnings.insert(warnings.end(), p.envelope.warnings.begin(),
                  p.envelope.warnings.end());
  Json report = {{"schema_version", kSchemaVersion},
                 {"command", o.command},
                 {"system", Json{{"name", sys.name().empty()
                                              ? Json(nullptr)
                                              : Json(sys.name())},
                                 {"N", sys.N()},
                                 {"L", sys.L()},
                                 {"m", sys.m()}}},
                 {"parameters", std::move(p.envelope.parameters)}};
  for (auto& [key, value] : p.fields) report[key] = std::move(value);
  report["tolerance"] = ToleranceJson(o.tol);
  report["witnesses"] = std::move(p.envelope.witnesses);
  report["warnings"] = warnings;
  report["elapsed_ms"] = ElapsedJson(o, start);
  return CommandResult{std::move(report), p.exit_code, std::move(p.summary)};
}

}  // namespace

SystemModel ParseSystem(const Json& j) {
  if (!j.is_object()) throw InputError("system file must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "D" && key != "H" && key != "A" && key != "name") {
      throw InputError("unknown key \"" + key + "\" in system file");
    }
  }
  if (!j.contains("D")) throw InputError("missing \"D\" in system file");
  if (!j.contains("H")) throw InputError("missing \"H\" in system file");
  Matrix d = ParseMatrix(j.at("D"), "D");
  Matrix h = ParseMatrix(j.at("H"), "H");
  std::optional<Matrix> a;
  if (j.contains("A")) a = ParseMatrix(j.at("A"), "A");
  std::string name;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) {
      throw InputError("\"name\" must be a string");
    }
    name = j.at("name").get<std::string>();
  }
  return SystemModel(std::move(d), std::move(h), std::move(a),
                     std::move(name));
}

SystemModel LoadSystemFile(const std::string& path) {
  return ParseSystem(ReadJsonFile(path));
}

Json SerializeSystem(const SystemModel& sys) {
  Json j = Json::object();
  if (!sys.name().empty()) j["name"] = sys.name();
  j["D"] = MatrixJson(sys.D());
  j["H"] = MatrixJson(sys.H());
  if (sys.has_output()) j["A"] = MatrixJson(sys.A());
  return j;
}

Tolerance ParseTolerance(std::string_view text) {
  std::vector<double> values;
  size_t pos = 0;
  while (true) {
    const size_t comma = text.find(',', pos);
    values.push_back(ParseDouble(
        Trim(text.substr(pos, comma == std::string_view::npos
                                  ? std::string_view::npos
                                  : comma - pos)),
        "tolerance"));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  Tolerance tol;
  if (values.size() == 1) {
    tol.rank_rel = tol.eig_cluster = tol.residual_abs = values[0];
  } else if (values.size() == 3) {
    tol.rank_rel = values[0];
    tol.eig_cluster = values[1];
    tol.residual_abs = values[2];
  } else {
    throw InputError(
        "tolerance must be one number or rank_rel,eig_cluster,residual_abs");
  }
  tol.Validate();
  return tol;
}

Tolerance DefaultTolerance() {
  const char* env = std::getenv("SPARSE_CTRB_TOL");
  if (env == nullptr || *env == '\0') return Tolerance();
  try {
    return ParseTolerance(env);
  } catch (const InputError& e) {
    throw InputError(std::string("SPARSE_CTRB_TOL: ") + e.what());
  }
}

Vector ParseVectorArgument(const std::string& text) {
  const std::string_view trimmed = Trim(text);
  Json j;
  if (!trimmed.empty() && trimmed.front() == '[') {
    try {
      j = Json::parse(trimmed);
    } catch (const Json::parse_error& e) {
      throw InputError("malformed vector \"" + text + "\": " + e.what());
    }
  } else {
    j = ReadJsonFile(text);
  }
  if (!j.is_array()) throw InputError("vector must be a JSON array");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError("vector entries must be numbers");
    v(i) = j[i].get<double>();
  }
  RequireFinite(v, "vector");
  return v;
}

CommandResult RunCommandOn(const SystemModel& sys,
                           const CommandOptions& options) {
  return Guarded(options, [&](auto start) { return Run(sys, options, start); });
}

CommandResult RunCommand(const CommandOptions& options) {
  return Guarded(options, [&](auto start) {
    return Run(LoadForCommand(options), options, start);
  });
}

std::string RenderReport(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace sparse_ctrb::cli
