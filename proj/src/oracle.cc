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

#include "sparse_ctrb/oracle.h"

#include <algorithm>
#include <chrono>
#include <string>
#include <utility>

#include "sparse_ctrb/bounds.h"
#include "sparse_ctrb/combinations.h"
#include "sparse_ctrb/ctrb.h"
#include "sparse_ctrb/errors.h"
#include "sparse_ctrb/exact.h"

namespace sparse_ctrb {

namespace {

using exact::RationalMatrix;
using Clock = std::chrono::steady_clock;

int CeilDiv(int a, int b) { return (a + b - 1) / b; }

Matrix Normalized(const Matrix& m) {
  const double norm = SpectralNorm(m);
  return norm > 0.0 ? Matrix(m / norm) : m;
}

Matrix SelectColumns(const Matrix& m, const std::vector<int>& cols) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) out.col(j) = m.col(cols[j]);
  return out;
}

Matrix HConcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

// Shared across every search started by one public call.
class Meter {
 public:
  explicit Meter(const OracleBudget& budget) : max_(budget.max_enumerations) {
    if (budget.deadline_seconds) {
      deadline_ = Clock::now() +
                  std::chrono::duration_cast<Clock::duration>(
                      std::chrono::duration<double>(*budget.deadline_seconds));
    }
  }

  bool Charge() {
    ++count_;
    if (count_ > max_) exhausted_ = true;
    if (deadline_ && (count_ & 63) == 0 && Clock::now() > *deadline_) {
      exhausted_ = true;
    }
    return !exhausted_;
  }

  bool exhausted() const { return exhausted_; }
  std::int64_t count() const { return count_; }

 private:
  std::int64_t max_;
  std::optional<Clock::time_point> deadline_;
  std::int64_t count_ = 0;
  bool exhausted_ = false;
};

// Depth-first search over schedules S_1..S_K (S_1 outermost, subsets in
// lexicographic order), so the first success is the lexicographically first
// schedule. Rank bounds at internal nodes come from an incrementally
// orthogonalized basis; every reported rank is recomputed on the full
// submatrix.
class ScheduleSearch {
 public:
  ScheduleSearch(const Matrix& d, const Matrix& h, const Matrix* premul,
                 int s, int k, const Tolerance& tol, bool prune, Meter* meter)
      : s_(s), k_(k), tol_(tol),
        exact_(tol.exact_rational), prune_(prune), meter_(meter),
        subsets_(Combinations(static_cast<int>(h.cols()), s)) {
    // Block j (0-based) is P D^{K-1-j} H. Scaling D, H and P only rescales
    // columns, so the rank decisions use normalized factors.
    // With P present, rank cutoffs are taken relative to the unpremultiplied
    // columns so that P D^i H which vanishes exactly is not ranked by noise.
    const Matrix dn = Normalized(d);
    Matrix power = Normalized(h);
    if (premul) premul_ = Normalized(*premul);
    blocks_.resize(k_);
    raw_blocks_.resize(k_);
    col_ref_.resize(k_);
    for (int j = k_ - 1; j >= 0; --j) {
      raw_blocks_[j] = power;
      blocks_[j] = premul ? Matrix(premul_ * power) : power;
      col_ref_[j] = raw_blocks_[j].colwise().norm().transpose();
      if (j > 0) power = dn * power;
    }
    if (exact_) {
      const RationalMatrix dq = RationalMatrix::FromDouble(d);
      RationalMatrix powq = RationalMatrix::FromDouble(h);
      const std::optional<RationalMatrix> pq =
          premul ? std::optional(RationalMatrix::FromDouble(*premul))
                 : std::nullopt;
      exact_blocks_.resize(k_);
      for (int j = k_ - 1; j >= 0; --j) {
        exact_blocks_[j] = pq ? *pq * powq : powq;
        if (j > 0) powq = dq * powq;
      }
    }
    rows_ = static_cast<int>(blocks_[0].rows());
    suffix_cap_.assign(k_ + 1, 0);
    for (int j = k_ - 1; j >= 0; --j) {
      const int block_rank = exact_ ? exact::Rank(exact_blocks_[j])
                                    : BlockRank(raw_blocks_[j]);
      suffix_cap_[j] = suffix_cap_[j + 1] + std::min(s_, block_rank);
    }
    suffix_all_.resize(k_ + 1);
    suffix_all_[k_] = Matrix(rows_, 0);
    suffix_ref_.assign(k_ + 1, 0.0);
    for (int j = k_ - 1; j >= 0; --j) {
      suffix_all_[j] = HConcat(blocks_[j], suffix_all_[j + 1]);
      suffix_ref_[j] = std::max(suffix_ref_[j + 1], MaxOf(col_ref_[j]));
    }
    if (exact_) {
      exact_suffix_all_.resize(k_ + 1);
      exact_suffix_all_[k_] = RationalMatrix(rows_, 0);
      for (int j = k_ - 1; j >= 0; --j) {
        exact_suffix_all_[j] =
            RationalMatrix::HConcat(exact_blocks_[j], exact_suffix_all_[j + 1]);
      }
    }
  }

  int rows() const { return rows_; }

  // Some schedule reaches rank rows(). Returns nullopt when the budget ran
  // out before a decision.
  std::optional<std::optional<SupportSchedule>> FindFullRank() {
    chosen_.clear();
    found_.reset();
    if (prune_ && SpanRank(Root(), 0) < rows_) {
      return std::optional<SupportSchedule>();
    }
    const Step step = prune_ ? FindPruned(0, Root()) : FindAll(0);
    if (step == Step::kAborted) return std::nullopt;
    return std::optional<SupportSchedule>(found_);
  }

  // max over schedules of the rank; nullopt when the budget ran out.
  std::optional<int> MaxRank() {
    chosen_.clear();
    best_ = 0;
    ceiling_ = std::min(rows_, SpanRank(Root(), 0));
    if (ceiling_ == 0) return 0;
    const Step step = MaximizeNode(0, Root());
    if (step == Step::kAborted) return std::nullopt;
    return best_;
  }

 private:
  enum class Step { kContinue, kDone, kAborted };

  struct Prefix {
    Matrix basis;
    double ref = 0.0;
    int cols = 0;
    RationalMatrix independent;
    int rank = 0;
  };

  Prefix Root() const {
    Prefix p;
    p.basis = Matrix(rows_, 0);
    if (exact_) p.independent = RationalMatrix(rows_, 0);
    return p;
  }

  static double MaxOf(const Vector& v) {
    return v.size() > 0 ? v.maxCoeff() : 0.0;
  }

  // Rank of the block as it enters the search (premultiplied if P is set).
  int BlockRank(const Matrix& raw) const {
    return premul_.size() > 0 ? ProductRank(premul_, raw, tol_)
                              : Rank(raw, tol_);
  }

  Prefix Extend(const Prefix& p, const Matrix& cols, double cols_ref,
                const RationalMatrix* exact_cols) const {
    Prefix next;
    next.cols = p.cols + static_cast<int>(cols.cols());
    if (exact_) {
      next.independent = exact::IndependentColumns(
          RationalMatrix::HConcat(p.independent, *exact_cols));
      next.rank = next.independent.cols();
      return next;
    }
    next.ref = std::max(p.ref, cols_ref);
    Matrix residual = cols;
    if (p.basis.cols() > 0) {
      for (int pass = 0; pass < 2; ++pass) {
        residual -= p.basis * (p.basis.transpose() * residual);
      }
    }
    next.basis = p.basis;
    if (residual.cols() > 0 && next.ref > 0.0) {
      Eigen::JacobiSVD<Matrix> svd(residual, Eigen::ComputeThinU);
      const double threshold = tol_.rank_rel * next.ref *
                               std::max(rows_, next.cols);
      int added = 0;
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > threshold) ++added;
      }
      added = std::min<int>(added, rows_ - static_cast<int>(p.basis.cols()));
      if (added > 0) {
        next.basis.conservativeResize(Eigen::NoChange,
                                      p.basis.cols() + added);
        next.basis.rightCols(added) = svd.matrixU().leftCols(added);
      }
    }
    next.rank = static_cast<int>(next.basis.cols());
    return next;
  }

  Prefix ExtendBySupport(const Prefix& p, int depth,
                         const std::vector<int>& support) const {
    double ref = 0.0;
    for (int idx : support) ref = std::max(ref, col_ref_[depth](idx));
    if (exact_) {
      const RationalMatrix cols = exact_blocks_[depth].SelectCols(support);
      return Extend(p, SelectColumns(blocks_[depth], support), ref, &cols);
    }
    return Extend(p, SelectColumns(blocks_[depth], support), ref, nullptr);
  }

  int SpanRank(const Prefix& p, int from) const {
    return Extend(p, suffix_all_[from], suffix_ref_[from],
                  exact_ ? &exact_suffix_all_[from] : nullptr)
        .rank;
  }

  int FullRank(const std::vector<std::vector<int>>& supports) const {
    if (exact_) {
      RationalMatrix m(rows_, 0);
      for (int j = 0; j < k_; ++j) {
        m = RationalMatrix::HConcat(m,
                                    exact_blocks_[j].SelectCols(supports[j]));
      }
      return exact::Rank(std::move(m));
    }
    Matrix m(raw_blocks_[0].rows(), 0);
    for (int j = 0; j < k_; ++j) {
      m = HConcat(m, SelectColumns(raw_blocks_[j], supports[j]));
    }
    return BlockRank(m);
  }

  // chosen_ plus the lexicographically first completion.
  std::vector<std::vector<int>> Completed() const {
    std::vector<std::vector<int>> supports = chosen_;
    while (static_cast<int>(supports.size()) < k_) {
      supports.push_back(subsets_.front());
    }
    return supports;
  }

  SupportSchedule AsSchedule(std::vector<std::vector<int>> supports) const {
    SupportSchedule sched;
    sched.supports = std::move(supports);
    sched.s = s_;
    return sched;
  }

  Step FindPruned(int depth, const Prefix& prefix) {
    for (const std::vector<int>& subset : subsets_) {
      if (!meter_->Charge()) return Step::kAborted;
      const Prefix next = ExtendBySupport(prefix, depth, subset);
      chosen_.push_back(subset);
      if (next.rank >= rows_) {
        std::vector<std::vector<int>> supports = Completed();
        if (FullRank(supports) == rows_) {
          found_ = AsSchedule(std::move(supports));
          return Step::kDone;
        }
      }
      if (depth + 1 < k_ && next.rank + suffix_cap_[depth + 1] >= rows_ &&
          SpanRank(next, depth + 1) >= rows_) {
        const Step step = FindPruned(depth + 1, next);
        if (step != Step::kContinue) return step;
      }
      chosen_.pop_back();
    }
    return Step::kContinue;
  }

  Step FindAll(int depth) {
    for (const std::vector<int>& subset : subsets_) {
      if (!meter_->Charge()) return Step::kAborted;
      chosen_.push_back(subset);
      if (depth + 1 == k_) {
        if (FullRank(chosen_) == rows_) {
          found_ = AsSchedule(chosen_);
          return Step::kDone;
        }
      } else {
        const Step step = FindAll(depth + 1);
        if (step != Step::kContinue) return step;
      }
      chosen_.pop_back();
    }
    return Step::kContinue;
  }

  Step MaximizeNode(int depth, const Prefix& prefix) {
    for (const std::vector<int>& subset : subsets_) {
      if (!meter_->Charge()) return Step::kAborted;
      chosen_.push_back(subset);
      if (depth + 1 == k_) {
        best_ = std::max(best_, FullRank(chosen_));
        if (best_ == ceiling_) return Step::kDone;
      } else if (!prune_) {
        const Step step = MaximizeNode(depth + 1, prefix);
        if (step != Step::kContinue) return step;
      } else {
        const Prefix next = ExtendBySupport(prefix, depth, subset);
        if (next.rank + suffix_cap_[depth + 1] > best_ &&
            SpanRank(next, depth + 1) > best_) {
          const Step step = MaximizeNode(depth + 1, next);
          if (step != Step::kContinue) return step;
        }
      }
      chosen_.pop_back();
    }
    return Step::kContinue;
  }

  int s_;
  int k_;
  int rows_ = 0;
  Tolerance tol_;
  bool exact_;
  bool prune_;
  Meter* meter_;
  std::vector<std::vector<int>> subsets_;
  Matrix premul_;
  std::vector<Matrix> blocks_;
  std::vector<Matrix> raw_blocks_;
  std::vector<Vector> col_ref_;
  std::vector<double> suffix_ref_;
  std::vector<RationalMatrix> exact_blocks_;
  std::vector<int> suffix_cap_;
  std::vector<Matrix> suffix_all_;
  std::vector<RationalMatrix> exact_suffix_all_;

  std::vector<std::vector<int>> chosen_;
  std::optional<SupportSchedule> found_;
  int best_ = 0;
  int ceiling_ = 0;
};

void RequireLength(int k) {
  if (k < 1) throw InputError("schedule length K must be positive");
}

ScheduleSearchResult RunFind(const SystemModel& sys, const Matrix* premul,
                             int s, int k, const OracleBudget& budget,
                             const Tolerance& tol, Meter* meter) {
  ScheduleSearch search(sys.D(), sys.H(), premul, s, k, tol, budget.prune,
                        meter);
  ScheduleSearchResult result;
  const auto found = search.FindFullRank();
  if (!found) {
    result.outcome = OracleOutcome::kInconclusive;
  } else if (*found) {
    result.outcome = OracleOutcome::kTrue;
    result.witness = **found;
  }
  result.enumerations = meter->count();
  return result;
}

MinKResult MinK(const SystemModel& sys, const Matrix* premul, int s,
                int max_k, const OracleBudget& budget, const Tolerance& tol) {
  Meter meter(budget);
  MinKResult out;
  out.max_k = max_k;
  auto finish = [&](OracleOutcome outcome) {
    out.outcome = outcome;
    out.enumerations = meter.count();
    return out;
  };
  // Feasibility is monotone in K, so one search at max_k settles "never".
  ScheduleSearchResult top =
      RunFind(sys, premul, s, max_k, budget, tol, &meter);
  if (top.outcome != OracleOutcome::kTrue) return finish(top.outcome);
  for (int k = 1; k < max_k; ++k) {
    ScheduleSearchResult r = RunFind(sys, premul, s, k, budget, tol, &meter);
    if (r.outcome == OracleOutcome::kInconclusive) {
      return finish(OracleOutcome::kInconclusive);
    }
    if (r.outcome == OracleOutcome::kTrue) {
      out.k = k;
      out.witness = std::move(r.witness);
      return finish(OracleOutcome::kTrue);
    }
  }
  out.k = max_k;
  out.witness = std::move(top.witness);
  return finish(OracleOutcome::kTrue);
}

}  // namespace

void SupportSchedule::Validate(int num_inputs) const {
  if (s < 1) throw InputError("schedule sparsity must be positive");
  for (size_t i = 0; i < supports.size(); ++i) {
    const std::vector<int>& support = supports[i];
    if (static_cast<int>(support.size()) > s) {
      throw InputError("support " + std::to_string(i) + " has more than " +
                       std::to_string(s) + " indices");
    }
    for (size_t j = 0; j < support.size(); ++j) {
      if (support[j] < 0 || support[j] >= num_inputs) {
        throw InputError("support " + std::to_string(i) +
                         " indexes a missing input column");
      }
      if (j > 0 && support[j] <= support[j - 1]) {
        throw InputError("support " + std::to_string(i) +
                         " is not strictly increasing");
      }
    }
  }
}

Matrix ScheduleSubmatrix(const SystemModel& sys, const SupportSchedule& sched) {
  sched.Validate(sys.L());
  const int k = sched.length();
  int total = 0;
  for (const auto& support : sched.supports) {
    total += static_cast<int>(support.size());
  }
  Matrix out(sys.N(), total);
  Matrix power = sys.H();
  int col = total;
  for (int i = k - 1; i >= 0; --i) {
    const Matrix block = SelectColumns(power, sched.supports[i]);
    col -= static_cast<int>(block.cols());
    out.middleCols(col, block.cols()) = block;
    if (i > 0) power = sys.D() * power;
  }
  return out;
}

ScheduleSearchResult KalmanTypeRankTest(const SystemModel& sys, int s, int k,
                                        const OracleBudget& budget,
                                        const Tolerance& tol) {
  tol.Validate();
  sys.RequireSparsity(s);
  RequireLength(k);
  Meter meter(budget);
  return RunFind(sys, nullptr, s, k, budget, tol, &meter);
}

ScheduleSearchResult OutputKalmanTypeRankTest(const SystemModel& sys, int s,
                                              int k,
                                              const OracleBudget& budget,
                                              const Tolerance& tol) {
  tol.Validate();
  sys.RequireSparsity(s);
  RequireLength(k);
  Meter meter(budget);
  return RunFind(sys, &sys.A(), s, k, budget, tol, &meter);
}

int DefaultOracleMaxK(const SystemModel& sys, int s, const Tolerance& tol) {
  sys.RequireSparsity(s);
  const int fallback = sys.N() * CeilDiv(sys.L(), s);
  if (!SparsePbhTest(sys, s, tol).verdict) return fallback;
  try {
    return KStarBoundsSparse(sys, s, tol).upper;
  } catch (const BudgetExceededError&) {
    return fallback;
  }
}

MinKResult ExactMinK(const SystemModel& sys, int s, const OracleBudget& budget,
                     const Tolerance& tol) {
  tol.Validate();
  sys.RequireSparsity(s);
  const int max_k =
      budget.max_k > 0 ? budget.max_k : DefaultOracleMaxK(sys, s, tol);
  return MinK(sys, nullptr, s, max_k, budget, tol);
}

MinKResult ExactMinKOutput(const SystemModel& sys, int s,
                           const OracleBudget& budget, const Tolerance& tol) {
  tol.Validate();
  sys.RequireSparsity(s);
  const int max_k =
      budget.max_k > 0 ? budget.max_k : sys.N() * CeilDiv(sys.L(), s);
  return MinK(sys, &sys.A(), s, max_k, budget, tol);
}

MinKResult ExactMinKCommonSupport(const SystemModel& sys, int s,
                                  const OracleBudget& budget,
                                  const Tolerance& tol) {
  tol.Validate();
  sys.RequireSparsity(s);
  Meter meter(budget);
  MinKResult out;
  out.max_k = budget.max_k > 0 ? budget.max_k : sys.N();
  bool aborted = false;
  ForEachCombination(sys.L(), s, [&](const std::vector<int>& support) {
    const SystemModel sub = sys.WithInputColumns(support);
    const int limit = out.k ? *out.k - 1 : out.max_k;
    for (int k = 1; k <= limit; ++k) {
      if (!meter.Charge()) {
        aborted = true;
        return false;
      }
      const int rank =
          tol.exact_rational
              ? exact::Rank(exact::ControllabilityMatrix(
                    RationalMatrix::FromDouble(sub.D()),
                    RationalMatrix::FromDouble(sub.H()), k))
              : Rank(ControllabilityMatrix(Normalized(sub.D()),
                                           Normalized(sub.H()), k),
                     tol);
      if (rank == sys.N()) {
        out.k = k;
        out.witness = SupportSchedule{std::vector(k, support), s};
        break;
      }
    }
    return true;
  });
  out.enumerations = meter.count();
  if (aborted) {
    out.outcome = OracleOutcome::kInconclusive;
    out.k.reset();
    out.witness.reset();
  } else {
    out.outcome = out.k ? OracleOutcome::kTrue : OracleOutcome::kFalse;
  }
  return out;
}

RStarResult RStarSequence(const SystemModel& sys, int s, int k_max,
                          const OracleBudget& budget, const Tolerance& tol) {
  tol.Validate();
  sys.RequireSparsity(s);
  RequireLength(k_max);
  Meter meter(budget);
  RStarResult out;
  for (int k = 1; k <= k_max; ++k) {
    ScheduleSearch search(sys.D(), sys.H(), nullptr, s, k, tol, budget.prune,
                          &meter);
    const std::optional<int> r = search.MaxRank();
    if (!r) {
      out.outcome = OracleOutcome::kInconclusive;
      break;
    }
    out.values.push_back(*r);
  }
  out.enumerations = meter.count();
  return out;
}

SupportSchedule PartitionSchedule(int num_inputs, int s) {
  if (s < 1 || s > num_inputs) {
    throw InputError("sparsity must satisfy 1 <= s <= L");
  }
  SupportSchedule sched;
  sched.s = s;
  const int blocks = CeilDiv(num_inputs, s);
  for (int b = 0; b < blocks; ++b) {
    const int first = std::min(b * s, num_inputs - s);
    std::vector<int> support(s);
    for (int j = 0; j < s; ++j) support[j] = first + j;
    sched.supports.push_back(std::move(support));
  }
  return sched;
}

}  // namespace sparse_ctrb
