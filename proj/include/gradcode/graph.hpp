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

#ifndef GRADCODE_GRAPH_HPP_
#define GRADCODE_GRAPH_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gradcode/errors.hpp"
#include "gradcode/random.hpp"

namespace gradcode {

/// Regular undirected graph together with its adjacency spectrum.
/// Simple graphs have a 0/1 adjacency with zero diagonal; the Margulis
/// family keeps edge multiplicities (a self-loop contributes 2 to its
/// diagonal entry) so that every row still sums to d.
struct SpectralGraph {
  int n = 0;
  int d = 0;
  Eigen::MatrixXd adjacency;
  Eigen::VectorXd eigenvalues;  // descending
  double lambda = 0.0;          // max(|eig_2|, |eig_n|)
  bool connected = false;
  bool simple = true;
};

/// Bipartite d-regular graph described by its n x n biadjacency block C.
struct BipartiteGraph {
  int n = 0;
  int d = 0;
  Eigen::MatrixXd biadjacency;     // C
  Eigen::VectorXd singular_values; // descending
  double lambda_bipartite = 0.0;   // sigma_2
  bool connected = false;
};

struct SpectrumSummary {
  double lambda1 = 0.0;
  double lambda = 0.0;
  Eigen::VectorXd spectrum;  // descending
};

/// Eigenvalues of the (symmetric) adjacency matrix in descending order and
/// the expansion parameter lambda = max(|eig_2|, |eig_n|).
inline SpectrumSummary spectral_gap(const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols())
    throw DimensionMismatch("spectral_gap: adjacency must be square");
  if ((adjacency - adjacency.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw InvalidParams("spectral_gap: adjacency must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency);
  SpectrumSummary out;
  out.spectrum = solver.eigenvalues().reverse();
  out.lambda1 = out.spectrum(0);
  const int n = static_cast<int>(out.spectrum.size());
  out.lambda = n > 1 ? std::max(std::abs(out.spectrum(1)), std::abs(out.spectrum(n - 1))) : 0.0;
  return out;
}

inline SpectrumSummary spectral_gap(const SpectralGraph& g) { return spectral_gap(g.adjacency); }

namespace detail {

inline bool is_connected(const Eigen::MatrixXd& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<int> stack = {0};
  seen[0] = true;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n; ++u) {
      if (u != v && adjacency(v, u) != 0.0 && !seen[u]) {
        seen[u] = true;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

/// Pairing-model attempt that joins uniformly chosen legal stub pairs and
/// reports failure when only illegal pairs remain. Restart-on-collision is
/// hopeless beyond small d (acceptance probability decays like
/// exp(-(d^2-1)/4)), so stuck states, not collisions, trigger the retry.
inline bool pair_stubs_once(int n, int d, Rng& rng, Eigen::MatrixXd& adjacency) {
  adjacency.setZero(n, n);
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v) stubs.insert(stubs.end(), d, v);

  while (!stubs.empty()) {
    bool placed = false;
    for (int probe = 0; probe < 64 && !placed; ++probe) {
      std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      if (i == j) continue;
      const int u = stubs[i], v = stubs[j];
      if (u == v || adjacency(u, v) != 0.0) continue;
      adjacency(u, v) = adjacency(v, u) = 1.0;
      const auto [lo, hi] = std::minmax(i, j);
      stubs[hi] = stubs.back();
      stubs.pop_back();
      stubs[lo] = stubs.back();
      stubs.pop_back();
      placed = true;
    }
    if (placed) continue;
    // Sampling stalled; check whether any legal pair exists at all.
    std::size_t li = 0, lj = 0;
    bool found = false;
    for (std::size_t i = 0; i < stubs.size() && !found; ++i)
      for (std::size_t j = i + 1; j < stubs.size() && !found; ++j)
        if (stubs[i] != stubs[j] && adjacency(stubs[i], stubs[j]) == 0.0) {
          li = i;
          lj = j;
          found = true;
        }
    if (!found) return false;
    const int u = stubs[li], v = stubs[lj];
    adjacency(u, v) = adjacency(v, u) = 1.0;
    stubs[lj] = stubs.back();
    stubs.pop_back();
    stubs[li] = stubs.back();
    stubs.pop_back();
  }
  return true;
}

inline SpectralGraph finish_graph(Eigen::MatrixXd adjacency, int d, bool simple) {
  SpectralGraph g;
  g.n = static_cast<int>(adjacency.rows());
  g.d = d;
  g.adjacency = std::move(adjacency);
  g.connected = is_connected(g.adjacency);
  g.simple = simple;
  const SpectrumSummary spec = spectral_gap(g.adjacency);
  g.eigenvalues = spec.spectrum;
  g.lambda = spec.lambda;
  return g;
}

}  // namespace detail

inline constexpr int kGraphMaxAttempts = 1000;

/// Random simple connected d-regular graph on n vertices, configuration
/// (pairing) model. Deterministic for a fixed seed.
inline SpectralGraph random_regular_graph(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1 || d >= n)
    throw InvalidParams("random_regular_graph: need 1 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw InvalidParams("random_regular_graph: n*d must be even");
  Rng rng(seed);
  Eigen::MatrixXd adjacency;
  for (int attempt = 0; attempt < kGraphMaxAttempts; ++attempt) {
    if (!detail::pair_stubs_once(n, d, rng, adjacency)) continue;
    if (!detail::is_connected(adjacency)) continue;
    return detail::finish_graph(std::move(adjacency), d, /*simple=*/true);
  }
  throw GenerationFailure("random_regular_graph: no connected simple graph in " +
                          std::to_string(kGraphMaxAttempts) + " attempts");
}

/// 8-regular Margulis (Gabber-Galil) multigraph on Z_m x Z_m. Each vertex
/// (x, y) connects through the four maps (x+2y, y), (x+2y+1, y), (x, y+2x),
/// (x, y+2x+1) and their inverses. Edge multiplicities are kept and a
/// self-loop adds 2 to the diagonal, so every row sums to exactly 8.
inline SpectralGraph margulis_graph(int m) {
  if (m < 2) throw InvalidParams("margulis_graph: need m >= 2");
  const int n = m * m;
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
  auto id = [m](int x, int y) {
    x %= m;
    if (x < 0) x += m;
    y %= m;
    if (y < 0) y += m;
    return x * m + y;
  };
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) {
      const int v = id(x, y);
      const int forward[4] = {id(x + 2 * y, y), id(x + 2 * y + 1, y), id(x, y + 2 * x),
                              id(x, y + 2 * x + 1)};
      for (int u : forward) {
        adjacency(v, u) += 1.0;
        adjacency(u, v) += 1.0;
      }
    }
  }
  bool simple = true;
  for (int v = 0; v < n && simple; ++v) {
    if (adjacency(v, v) != 0.0) simple = false;
    for (int u = 0; u < n && simple; ++u)
      if (adjacency(v, u) > 1.0) simple = false;
  }
  return detail::finish_graph(std::move(adjacency), 8, simple);
}

/// Builds a SpectralGraph from an explicit adjacency matrix (used by graph
/// file loading and by tests that construct special instances by hand).
inline SpectralGraph spectral_graph_from_adjacency(const Eigen::MatrixXd& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  if (n == 0 || adjacency.cols() != n)
    throw InvalidParams("spectral_graph_from_adjacency: square nonempty matrix required");
  const Eigen::VectorXd row_sums = adjacency.rowwise().sum();
  if ((row_sums.array() - row_sums(0)).abs().maxCoeff() > 0.0)
    throw InvalidParams("spectral_graph_from_adjacency: graph is not regular");
  bool simple = true;
  for (int v = 0; v < n && simple; ++v) {
    if (adjacency(v, v) != 0.0) simple = false;
    for (int u = 0; u < n && simple; ++u)
      if (adjacency(v, u) != 0.0 && adjacency(v, u) != 1.0) simple = false;
  }
  return detail::finish_graph(adjacency, static_cast<int>(std::llround(row_sums(0))), simple);
}

/// Random connected d-regular bipartite graph with n vertices per side.
inline BipartiteGraph random_bipartite_graph(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1 || d > n)
    throw InvalidParams("random_bipartite_graph: need 1 <= d <= n");
  Rng rng(seed);
  for (int attempt = 0; attempt < kGraphMaxAttempts; ++attempt) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    std::vector<int> left, right;
    left.reserve(static_cast<std::size_t>(n) * d);
    right.reserve(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v) {
      left.insert(left.end(), d, v);
      right.insert(right.end(), d, v);
    }
    bool stuck = false;
    while (!left.empty() && !stuck) {
      bool placed = false;
      for (int probe = 0; probe < 64 && !placed; ++probe) {
        std::uniform_int_distribution<std::size_t> pick(0, left.size() - 1);
        const std::size_t i = pick(rng);
        const std::size_t j = pick(rng);
        if (c(left[i], right[j]) != 0.0) continue;
        c(left[i], right[j]) = 1.0;
        left[i] = left.back();
        left.pop_back();
        right[j] = right.back();
        right.pop_back();
        placed = true;
      }
      if (placed) continue;
      std::size_t li = 0, lj = 0;
      bool found = false;
      for (std::size_t i = 0; i < left.size() && !found; ++i)
        for (std::size_t j = 0; j < right.size() && !found; ++j)
          if (c(left[i], right[j]) == 0.0) {
            li = i;
            lj = j;
            found = true;
          }
      if (!found) {
        stuck = true;
        break;
      }
      c(left[li], right[lj]) = 1.0;
      left[li] = left.back();
      left.pop_back();
      right[lj] = right.back();
      right.pop_back();
    }
    if (stuck) continue;

    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    full.topRightCorner(n, n) = c;
    full.bottomLeftCorner(n, n) = c.transpose();
    if (!detail::is_connected(full)) continue;

    BipartiteGraph g;
    g.n = n;
    g.d = d;
    g.biadjacency = std::move(c);
    g.connected = true;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g.biadjacency);
    g.singular_values = svd.singularValues();
    g.lambda_bipartite = n > 1 ? g.singular_values(1) : 0.0;
    return g;
  }
  throw GenerationFailure("random_bipartite_graph: no connected simple graph in " +
                          std::to_string(kGraphMaxAttempts) + " attempts");
}

/// Complete bipartite graph K_{n,n}: C is all ones, sigma_2 = 0.
inline BipartiteGraph complete_bipartite_graph(int n) {
  if (n < 1) throw InvalidParams("complete_bipartite_graph: need n >= 1");
  BipartiteGraph g;
  g.n = n;
  g.d = n;
  g.biadjacency = Eigen::MatrixXd::Ones(n, n);
  g.connected = true;
  g.singular_values = Eigen::VectorXd::Zero(n);
  g.singular_values(0) = static_cast<double>(n);
  g.lambda_bipartite = 0.0;
  return g;
}

/// Builds a BipartiteGraph from an explicit biadjacency block.
inline BipartiteGraph bipartite_graph_from_biadjacency(const Eigen::MatrixXd& c) {
  const int n = static_cast<int>(c.rows());
  if (n == 0 || c.cols() != n)
    throw InvalidParams("bipartite_graph_from_biadjacency: square nonempty block required");
  const Eigen::VectorXd row_sums = c.rowwise().sum();
  const Eigen::VectorXd col_sums = c.colwise().sum();
  if ((row_sums.array() - row_sums(0)).abs().maxCoeff() > 0.0 ||
      (col_sums.array() - row_sums(0)).abs().maxCoeff() > 0.0)
    throw InvalidParams("bipartite_graph_from_biadjacency: graph is not biregular");
  BipartiteGraph g;
  g.n = n;
  g.d = static_cast<int>(std::llround(row_sums(0)));
  g.biadjacency = c;
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  full.topRightCorner(n, n) = c;
  full.bottomLeftCorner(n, n) = c.transpose();
  g.connected = detail::is_connected(full);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g.biadjacency);
  g.singular_values = svd.singularValues();
  g.lambda_bipartite = n > 1 ? g.singular_values(1) : 0.0;
  return g;
}

}  // namespace gradcode

#endif  // GRADCODE_GRAPH_HPP_
