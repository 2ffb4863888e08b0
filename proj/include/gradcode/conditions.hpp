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

#ifndef GRADCODE_CONDITIONS_HPP_
#define GRADCODE_CONDITIONS_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gradcode/coding.hpp"
#include "gradcode/errors.hpp"
#include "gradcode/expander.hpp"
#include "gradcode/random.hpp"

namespace gradcode {

enum class CheckMode { exhaustive, sampled };

/// Outcome of an EC or epsilon-AC verification sweep.
struct VerificationReport {
  std::string scheme_id;
  CheckMode mode = CheckMode::exhaustive;
  std::string norm;  // "inf" for EC, "l2" for epsilon-AC
  std::size_t sets_tested = 0;
  double max_residual = 0.0;
  double worst_margin = -std::numeric_limits<double>::infinity();  // residual - bound
  std::size_t violations = 0;
  std::vector<int> worst_set;  // 0-based
  double tolerance = 0.0;
  bool pass = false;
};

inline constexpr std::size_t kDefaultSubsetCap = 1'000'000;

namespace detail {

inline std::size_t binomial_capped(int n, int k, std::size_t cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const double next = static_cast<double>(result) * (n - k + i) / i;
    if (next > static_cast<double>(cap) * 2.0) return cap + 1;
    result = static_cast<std::size_t>(next + 0.5);
  }
  return result;
}

template <typename Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(std::as_const(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace detail

/// Verifies the exact-computation identity A(K) * B = 1 over survivor sets
/// of size n - s, either all of them (subject to the subset cap) or a
/// seeded sample. Residuals use the infinity norm; pass means every tested
/// set stayed within tolerance.
inline VerificationReport check_ec(
    const Eigen::MatrixXcd& b, int s,
    const std::function<Eigen::VectorXcd(const std::vector<int>&)>& decode_fn, CheckMode mode,
    std::size_t samples = 200, std::uint64_t seed = 0,
    std::size_t cap = kDefaultSubsetCap, double tolerance = tol::kEcResidual) {
  const int n = static_cast<int>(b.rows());
  VerificationReport report;
  report.mode = mode;
  report.norm = "inf";
  report.tolerance = tolerance;

  auto test_one = [&](const std::vector<int>& k) {
    const Eigen::VectorXcd a = decode_fn(k);
    const double residual = ((a.transpose() * b).array() - 1.0).abs().maxCoeff();
    ++report.sets_tested;
    if (residual > report.max_residual) {
      report.max_residual = residual;
      report.worst_set = k;
    }
    if (residual > tolerance) ++report.violations;
  };

  if (mode == CheckMode::exhaustive) {
    if (detail::binomial_capped(n, n - s, cap) > cap)
      throw CapExceeded("check_ec: C(n, n-s) exceeds the exhaustive cap");
    detail::for_each_subset(n, n - s, test_one);
  } else {
    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) test_one(random_subset(n, n - s, rng));
  }
  report.pass = report.violations == 0;
  return report;
}

/// Convenience overload running a scheme's own decoder.
inline VerificationReport check_ec(const ExactScheme& scheme, CheckMode mode,
                                   std::size_t samples = 200, std::uint64_t seed = 0,
                                   std::size_t cap = kDefaultSubsetCap) {
  auto decoder = [&scheme](const std::vector<int>& k) { return decode(scheme, k); };
  VerificationReport report = check_ec(scheme.b, scheme.s, decoder, mode, samples, seed, cap);
  report.scheme_id = scheme.is_real() ? "real-bch" : "complex-mds";
  return report;
}

/// Verifies the epsilon-AC condition d2(A(K) B, 1) <= eps(|K^c|) over seeded
/// samples of survivor sets for each requested straggler count. The bound
/// function must be non-decreasing with eps(0) = 0.
inline VerificationReport check_eps_ac(
    const Eigen::MatrixXd& b,
    const std::function<Eigen::VectorXd(const std::vector<int>&)>& decode_fn,
    const std::function<double(int)>& epsilon, std::span<const int> straggler_counts,
    std::size_t samples_per_s = 100, std::uint64_t seed = 0, double slack = 1e-9) {
  const int n = static_cast<int>(b.rows());
  if (std::abs(epsilon(0)) > 0.0)
    throw InvalidParams("check_eps_ac: epsilon(0) must be 0");
  for (std::size_t i = 1; i < straggler_counts.size(); ++i)
    if (epsilon(straggler_counts[i]) + 1e-12 < epsilon(straggler_counts[i - 1]) &&
        straggler_counts[i] >= straggler_counts[i - 1])
      throw InvalidParams("check_eps_ac: epsilon must be non-decreasing");

  VerificationReport report;
  report.mode = CheckMode::sampled;
  report.norm = "l2";
  report.tolerance = slack;
  Rng rng(seed);
  for (int s : straggler_counts) {
    if (s < 0 || s >= n) throw InvalidParams("check_eps_ac: straggler count out of range");
    const double bound = epsilon(s);
    for (std::size_t trial = 0; trial < samples_per_s; ++trial) {
      const std::vector<int> k = s == 0 ? [n] {
        std::vector<int> full(n);
        for (int i = 0; i < n; ++i) full[i] = i;
        return full;
      }() : random_subset(n, n - s, rng);
      const Eigen::VectorXd a = decode_fn(k);
      const double residual = ((a.transpose() * b).array() - 1.0).matrix().norm();
      ++report.sets_tested;
      const double margin = residual - bound;
      if (margin > report.worst_margin) {
        report.worst_margin = margin;
        report.worst_set = k;
        report.max_residual = residual;
      }
      if (residual > bound + slack) ++report.violations;
    }
  }
  report.pass = report.violations == 0;
  return report;
}

/// Error bound of the expander scheme: eps(s) = (lambda/d) sqrt(ns/(n-s)).
inline double epsilon_bound(int n, int s, double d, double lambda) {
  if (s < 0 || s >= n) throw InvalidParams("epsilon_bound: need 0 <= s < n");
  if (d <= 0.0 || lambda < 0.0) throw InvalidParams("epsilon_bound: need d > 0, lambda >= 0");
  if (s == 0) return 0.0;
  return lambda / d * std::sqrt(static_cast<double>(n) * s / (n - s));
}

/// Bipartite variant with sigma_2 in place of lambda.
inline double epsilon_bound_bipartite(int n, int s, double d, double lambda_bipartite) {
  return epsilon_bound(n, s, d, lambda_bipartite);
}

/// Error of the trivial (ignore-stragglers) scheme: exactly sqrt(s).
inline double epsilon_trivial(int s) { return std::sqrt(static_cast<double>(s)); }

/// Greedy straggler set realizing the sqrt(floor(s/d)) lower bound: repeatedly
/// remove a minimum-degree partition and its worker neighbors. Returns the
/// survivor set K (the n-s smallest worker indices untouched by the removals)
/// and the partition set Q that no survivor can reach.
struct AdversarialResult {
  std::vector<int> survivors;          // K, |K| = n - s
  std::vector<int> blocked_partitions; // Q, |Q| = floor(s / d)
};

inline AdversarialResult adversarial_straggler_set(const Eigen::MatrixXd& b, int s) {
  const int n = static_cast<int>(b.rows());
  std::vector<std::vector<int>> worker_parts(n);
  int d = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (b(i, j) != 0.0) worker_parts[i].push_back(j);
    d = std::max(d, static_cast<int>(worker_parts[i].size()));
  }
  if (s <= d)
    throw InvalidParams("adversarial_straggler_set: requires s > d (max row support)");
  if (s >= n) throw InvalidParams("adversarial_straggler_set: requires s < n");

  std::vector<bool> worker_alive(n, true), part_alive(n, true);
  std::vector<int> part_degree(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j : worker_parts[i]) ++part_degree[j];

  AdversarialResult result;
  const int rounds = s / d;
  for (int round = 0; round < rounds; ++round) {
    int pick = -1;
    for (int j = 0; j < n; ++j)
      if (part_alive[j] && (pick == -1 || part_degree[j] < part_degree[pick])) pick = j;
    part_alive[pick] = false;
    result.blocked_partitions.push_back(pick);
    for (int i = 0; i < n; ++i) {
      if (!worker_alive[i]) continue;
      if (b(i, pick) != 0.0) {
        worker_alive[i] = false;
        for (int j : worker_parts[i])
          if (part_alive[j]) --part_degree[j];
      }
    }
  }
  for (int i = 0; i < n && static_cast<int>(result.survivors.size()) < n - s; ++i)
    if (worker_alive[i]) result.survivors.push_back(i);
  if (static_cast<int>(result.survivors.size()) < n - s)
    throw InvalidParams("adversarial_straggler_set: internal invariant failed");
  return result;
}

/// Exact least-squares residual min_{supp(a) <= K} ||a B - 1||_2.
inline double min_norm_residual(const Eigen::MatrixXd& b, std::span<const int> k) {
  if (k.empty()) throw EmptySet("min_norm_residual: survivor set is empty");
  const Eigen::VectorXd a = optimal_decoder(b, k);
  return recovery_residual(a, b);
}

}  // namespace gradcode

#endif  // GRADCODE_CONDITIONS_HPP_
