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

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "gradcode/graph.hpp"

using gradcode::BipartiteGraph;
using gradcode::SpectralGraph;
using gradcode::margulis_graph;
using gradcode::random_bipartite_graph;
using gradcode::random_regular_graph;
using gradcode::spectral_gap;

namespace {
Eigen::MatrixXd cycle_adjacency(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, (i + 1) % n) = 1.0;
    a((i + 1) % n, i) = 1.0;
  }
  return a;
}
}  // namespace

TEST_CASE("random regular graph generation") {
  SECTION("n=4 d=3 is the complete graph K4") {
    const SpectralGraph g = random_regular_graph(4, 3, 1);
    CHECK((g.adjacency - (Eigen::MatrixXd::Ones(4, 4) - Eigen::MatrixXd::Identity(4, 4)))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  SECTION("generated instances satisfy the regularity invariants") {
    for (auto [n, d, seed] : std::vector<std::tuple<int, int, int>>{
             {30, 3, 7}, {30, 5, 8}, {50, 8, 9}, {20, 19, 10}}) {
      const SpectralGraph g = random_regular_graph(n, d, seed);
      INFO("n=" << n << " d=" << d);
      CHECK(g.adjacency.diagonal().cwiseAbs().maxCoeff() == 0.0);
      CHECK((g.adjacency - g.adjacency.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK((g.adjacency.rowwise().sum().array() - d).abs().maxCoeff() == 0.0);
      CHECK(g.connected);
      CHECK(g.simple);
      CHECK(std::abs(g.eigenvalues(0) - d) < 1e-10);  // lambda_1 = d
      CHECK(g.eigenvalues(n - 1) >= -d - 1e-10);
    }
  }
  SECTION("deterministic for a fixed seed") {
    const SpectralGraph a = random_regular_graph(30, 3, 123);
    const SpectralGraph b = random_regular_graph(30, 3, 123);
    CHECK((a.adjacency - b.adjacency).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("parameter validation") {
    CHECK_THROWS_AS(random_regular_graph(5, 3, 0), gradcode::InvalidParams);  // odd n*d
    CHECK_THROWS_AS(random_regular_graph(4, 4, 0), gradcode::InvalidParams);  // d >= n
    CHECK_THROWS_AS(random_regular_graph(4, 0, 0), gradcode::InvalidParams);
  }
  SECTION("impossible connectivity exhausts the retry budget") {
    // A 1-regular graph is a perfect matching and can never connect 4 nodes.
    CHECK_THROWS_AS(random_regular_graph(4, 1, 0), gradcode::GenerationFailure);
  }
}

TEST_CASE("margulis family") {
  SECTION("m=8: row sums 8 and lambda at most 5*sqrt(2)") {
    const SpectralGraph g = margulis_graph(8);
    CHECK(g.n == 64);
    CHECK(g.d == 8);
    CHECK((g.adjacency.rowwise().sum().array() - 8.0).abs().maxCoeff() == 0.0);
    CHECK((g.adjacency - g.adjacency.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.lambda <= 5.0 * std::sqrt(2.0) + 1e-6);
    CHECK_FALSE(g.simple);  // multiplicities kept so every row stays at 8
  }
  SECTION("m=16 is connected") {
    const SpectralGraph g = margulis_graph(16);
    CHECK(g.connected);
    CHECK(std::abs(g.eigenvalues(0) - 8.0) < 1e-9);
  }
  SECTION("parameter validation") { CHECK_THROWS_AS(margulis_graph(1), gradcode::InvalidParams); }
}

TEST_CASE("spectral gap") {
  SECTION("K4 has spectrum (3, -1, -1, -1)") {
    const Eigen::MatrixXd a = Eigen::MatrixXd::Ones(4, 4) - Eigen::MatrixXd::Identity(4, 4);
    const auto spec = spectral_gap(a);
    CHECK(std::abs(spec.lambda1 - 3.0) < 1e-12);
    CHECK(std::abs(spec.lambda - 1.0) < 1e-12);
    for (int i = 1; i < 4; ++i) CHECK(std::abs(spec.spectrum(i) + 1.0) < 1e-12);
  }
  SECTION("C6 is bipartite: lambda = 2 = d") {
    const auto spec = spectral_gap(cycle_adjacency(6));
    CHECK(std::abs(spec.spectrum(1) - 1.0) < 1e-12);  // 2 cos(2 pi / 6)
    CHECK(std::abs(spec.spectrum(5) + 2.0) < 1e-12);
    CHECK(std::abs(spec.lambda - 2.0) < 1e-12);
  }
  SECTION("connected non-bipartite graphs have lambda < d") {
    for (int seed : {1, 2, 3}) {
      const SpectralGraph g = random_regular_graph(24, 4, seed);
      const bool bipartite = std::abs(g.eigenvalues(g.n - 1) + g.d) < 1e-9;
      if (!bipartite) CHECK(g.lambda < g.d);
    }
  }
  SECTION("asymmetric input rejected") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(spectral_gap(bad), gradcode::InvalidParams);
  }
}

TEST_CASE("bipartite graphs") {
  SECTION("complete bipartite has sigma_2 = 0") {
    const BipartiteGraph g = gradcode::complete_bipartite_graph(5);
    CHECK(g.lambda_bipartite == 0.0);
    CHECK(std::abs(g.singular_values(0) - 5.0) < 1e-12);
  }
  SECTION("random (20, 4): regular both sides, sigma_1 = d, connected") {
    const BipartiteGraph g = random_bipartite_graph(20, 4, 11);
    CHECK((g.biadjacency.rowwise().sum().array() - 4.0).abs().maxCoeff() == 0.0);
    CHECK((g.biadjacency.colwise().sum().array() - 4.0).abs().maxCoeff() == 0.0);
    CHECK(std::abs(g.singular_values(0) - 4.0) < 1e-10);
    CHECK(g.lambda_bipartite < 4.0);
    CHECK(g.connected);
  }
  SECTION("singular values match the 2n-vertex adjacency spectrum") {
    const BipartiteGraph g = random_bipartite_graph(12, 3, 5);
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(24, 24);
    full.topRightCorner(12, 12) = g.biadjacency;
    full.bottomLeftCorner(12, 12) = g.biadjacency.transpose();
    const auto spec = spectral_gap(full);
    std::vector<double> expected;
    for (int i = 0; i < 12; ++i) {
      expected.push_back(g.singular_values(i));
      expected.push_back(-g.singular_values(i));
    }
    std::sort(expected.rbegin(), expected.rend());
    for (int i = 0; i < 24; ++i) CHECK(std::abs(spec.spectrum(i) - expected[i]) < 1e-8);
  }
  SECTION("determinism") {
    const BipartiteGraph a = random_bipartite_graph(10, 3, 77);
    const BipartiteGraph b = random_bipartite_graph(10, 3, 77);
    CHECK((a.biadjacency - b.biadjacency).cwiseAbs().maxCoeff() == 0.0);
  }
}
