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

#ifndef GRADCODE_EXPANDER_HPP_
#define GRADCODE_EXPANDER_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <vector>

#include "gradcode/errors.hpp"
#include "gradcode/graph.hpp"

namespace gradcode {

enum class ApproxKind { expander, bipartite, identity };

/// Approximate encoding scheme: B is a normalized adjacency (or biadjacency)
/// matrix, row-stochastic with at most d nonzeros per row. Unlike the exact
/// schemes, the straggler count is not baked in; recovery quality degrades
/// gracefully with the number of stragglers.
struct ApproxScheme {
  int n = 0;
  int d = 0;
  Eigen::MatrixXd b;
  ApproxKind kind = ApproxKind::identity;
  double bound_lambda = 0.0;  // lambda (expander) or sigma_2 (bipartite); 0 for identity
  // Set when a bipartite graph was handed to build_expander_scheme; the
  // lambda = d degeneracy makes the error bound trivial there.
  bool bipartite_input = false;
};

/// B = A_G / d over a connected regular graph.
inline ApproxScheme build_expander_scheme(const SpectralGraph& g) {
  if (!g.connected) throw Disconnected("build_expander_scheme: graph must be connected");
  ApproxScheme scheme;
  scheme.n = g.n;
  scheme.d = g.d;
  scheme.b = g.adjacency / static_cast<double>(g.d);
  scheme.kind = ApproxKind::expander;
  scheme.bound_lambda = g.lambda;
  // Bipartite spectra satisfy eig_n = -d, which collapses the bound.
  scheme.bipartite_input = std::abs(g.eigenvalues(g.n - 1) + g.d) < 1e-9;
  return scheme;
}

/// B = C / d over a connected bipartite regular graph; workers sit on the
/// left side, partitions on the right, and the bound uses sigma_2 < d.
inline ApproxScheme build_bipartite_scheme(const BipartiteGraph& g) {
  if (!g.connected) throw Disconnected("build_bipartite_scheme: graph must be connected");
  ApproxScheme scheme;
  scheme.n = g.n;
  scheme.d = g.d;
  scheme.b = g.biadjacency / static_cast<double>(g.d);
  scheme.kind = ApproxKind::bipartite;
  scheme.bound_lambda = g.lambda_bipartite;
  return scheme;
}

/// The trivial scheme: B = I. Paired with the characteristic-vector decoder
/// it ignores stragglers outright, with recovery error exactly sqrt(s).
inline ApproxScheme identity_scheme(int n) {
  if (n < 1) throw InvalidParams("identity_scheme: need n >= 1");
  ApproxScheme scheme;
  scheme.n = n;
  scheme.d = 1;
  scheme.b = Eigen::MatrixXd::Identity(n, n);
  scheme.kind = ApproxKind::identity;
  scheme.bound_lambda = 0.0;
  return scheme;
}

/// Closed-form decoder A(K) = u_K + 1: weight n/(n-s) on survivors, zero on
/// stragglers, where s = n - |K|.
inline Eigen::VectorXd linear_decoder(std::span<const int> k, int n) {
  if (k.empty()) throw EmptySet("linear_decoder: survivor set is empty");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  const double weight = static_cast<double>(n) / static_cast<double>(k.size());
  for (int i : k) {
    if (i < 0 || i >= n) throw InvalidParams("linear_decoder: index out of range");
    a(i) = weight;
  }
  return a;
}

/// Characteristic-vector decoder 1_K of the trivial (ignore-stragglers)
/// scheme.
inline Eigen::VectorXd trivial_decoder(std::span<const int> k, int n) {
  if (k.empty()) throw EmptySet("trivial_decoder: survivor set is empty");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  for (int i : k) {
    if (i < 0 || i >= n) throw InvalidParams("trivial_decoder: index out of range");
    a(i) = 1.0;
  }
  return a;
}

/// Minimum-norm least-squares decoder: minimizes ||a^T B(K,:) - 1|| over
/// coefficients supported on K, embedded back into length n.
inline Eigen::VectorXd optimal_decoder(const Eigen::MatrixXd& b, std::span<const int> k) {
  if (k.empty()) throw EmptySet("optimal_decoder: survivor set is empty");
  const int n = static_cast<int>(b.rows());
  Eigen::MatrixXd rows(k.size(), b.cols());
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0 || k[i] >= n) throw InvalidParams("optimal_decoder: index out of range");
    rows.row(i) = b.row(k[i]);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(rows.transpose());
  const Eigen::VectorXd coeff = cod.solve(Eigen::VectorXd::Ones(b.cols()));
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < k.size(); ++i) a(k[i]) = coeff(i);
  return a;
}

inline Eigen::VectorXd optimal_decoder(const ApproxScheme& scheme, std::span<const int> k) {
  return optimal_decoder(scheme.b, k);
}

/// Complex variant used when decoding restricted or exact matrices least-
/// squares style.
inline Eigen::VectorXcd optimal_decoder(const Eigen::MatrixXcd& b, std::span<const int> k) {
  if (k.empty()) throw EmptySet("optimal_decoder: survivor set is empty");
  const int n = static_cast<int>(b.rows());
  Eigen::MatrixXcd rows(k.size(), b.cols());
  for (std::size_t i = 0; i < k.size(); ++i) rows.row(i) = b.row(k[i]);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(rows.transpose());
  const Eigen::VectorXcd coeff = cod.solve(Eigen::VectorXcd::Ones(b.cols()));
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(n);
  for (std::size_t i = 0; i < k.size(); ++i) a(k[i]) = coeff(i);
  return a;
}

/// l2 recovery error ||a^T B - 1||_2 of a decoding vector.
inline double recovery_residual(const Eigen::VectorXd& a, const Eigen::MatrixXd& b) {
  return ((a.transpose() * b).array() - 1.0).matrix().norm();
}

}  // namespace gradcode

#endif  // GRADCODE_EXPANDER_HPP_
