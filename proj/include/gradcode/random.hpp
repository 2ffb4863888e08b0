// Copyright 2026 The gradcode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRADCODE_RANDOM_HPP_
#define GRADCODE_RANDOM_HPP_

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace gradcode {

using Rng = std::mt19937_64;

/// Uniform random k-subset of {0,...,n-1} via a Fisher-Yates prefix.
/// Returned indices are sorted ascending.
inline std::vector<int> random_subset(int n, int k, Rng& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  std::vector<int> subset(perm.begin(), perm.begin() + k);
  std::sort(subset.begin(), subset.end());
  return subset;
}

/// Derives an independent child seed from a base seed and a stream index.
/// splitmix64 finalizer; keeps parallel sweeps reproducible by seed alone.
inline std::uint64_t child_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace gradcode

#endif  // GRADCODE_RANDOM_HPP_
