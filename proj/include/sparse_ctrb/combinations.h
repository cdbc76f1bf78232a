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

#ifndef SPARSE_CTRB_COMBINATIONS_H_
#define SPARSE_CTRB_COMBINATIONS_H_

#include <numeric>
#include <vector>

namespace sparse_ctrb {

// Visits the size-k subsets of {0, ..., n-1} in lexicographic order. `visit`
// receives a sorted index vector and returns false to stop. Returns false if
// the walk was stopped early.
template <typename Visitor>
bool ForEachCombination(int n, int k, Visitor&& visit) {
  if (k < 0 || k > n) return true;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!visit(static_cast<const std::vector<int>&>(idx))) return false;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// All size-k subsets of {0, ..., n-1} in lexicographic order.
inline std::vector<std::vector<int>> Combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  ForEachCombination(n, k, [&out](const std::vector<int>& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

}  // namespace sparse_ctrb

#endif  // SPARSE_CTRB_COMBINATIONS_H_
