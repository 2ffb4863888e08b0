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
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "gradcode/coding.hpp"
#include "gradcode/random.hpp"

using gradcode::Complex;
using gradcode::ExactScheme;
using gradcode::build_complex_scheme;
using gradcode::build_real_bch_scheme;
using gradcode::decode_complex;
using gradcode::decode_real;

namespace {

constexpr Complex kI{0.0, 1.0};

double ec_residual(const Eigen::VectorXcd& a, const Eigen::MatrixXcd& b) {
  return ((a.transpose() * b).array() - 1.0).abs().maxCoeff();
}

// Independent oracle for a decoding vector: solve the dense linear system
// A_K * B(K,:) = 1 over the survivor rows. For |K| = n-s the survivor rows
// are a basis, so the solution is unique and comparable entrywise.
Eigen::VectorXcd solve_decoder_directly(const Eigen::MatrixXcd& b, const std::vector<int>& k) {
  const int n = static_cast<int>(b.rows());
  Eigen::MatrixXcd rows(k.size(), n);
  for (std::size_t i = 0; i < k.size(); ++i) rows.row(i) = b.row(k[i]);
  const Eigen::VectorXcd sol =
      rows.transpose().partialPivLu().solve(Eigen::VectorXcd::Ones(n));
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(n);
  for (std::size_t i = 0; i < k.size(); ++i) full(k[i]) = sol(i);
  return full;
}

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

TEST_CASE("complex scheme n=4 s=1 matches the hand-expanded construction") {
  const ExactScheme sch = build_complex_scheme(4, 1);
  // m(x) = (x - a_2)(x - a_3) = (x+1)(x+i); c1 = (m(1), m(i), 0, 0).
  CHECK(std::abs(sch.c1(0) - Complex{2.0, 2.0}) < 1e-14);
  CHECK(std::abs(sch.c1(1) - Complex{-2.0, 2.0}) < 1e-14);
  CHECK(sch.c1(2) == Complex{0.0, 0.0});
  CHECK(sch.c1(3) == Complex{0.0, 0.0});

  // Circulant layout: column j is c1 shifted down by j.
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(sch.b(i, j) == sch.c1((i - j + 4) % 4));

  for (int i = 0; i < 4; ++i) CHECK(gradcode::row_support(sch.b, i) == 2);
}

TEST_CASE("complex scheme invariants across sizes") {
  for (auto [n, s] : std::vector<std::pair<int, int>>{{3, 1}, {6, 2}, {9, 4}, {10, 9}}) {
    const ExactScheme sch = build_complex_scheme(n, s);
    INFO("n=" << n << " s=" << s);

    for (int i = 0; i < n; ++i) CHECK(gradcode::row_support(sch.b, i) == s + 1);
    for (int j = s + 1; j < n; ++j) CHECK(sch.c1(j) == Complex{0.0, 0.0});

    // Circulant: B_{i,j} = B_{i+1 mod n, j+1 mod n}.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(std::abs(sch.b(i, j) - sch.b((i + 1) % n, (j + 1) % n)) == 0.0);

    CHECK(ec_residual(sch.x_prime, sch.b) < 1e-9);
    for (int j = n - s; j < n; ++j) CHECK(sch.x_prime(j) == Complex{0.0, 0.0});
  }
  CHECK_THROWS_AS(build_complex_scheme(4, 0), gradcode::InvalidParams);
  CHECK_THROWS_AS(build_complex_scheme(4, 4), gradcode::InvalidParams);
}

TEST_CASE("x_prime back-substitution") {
  SECTION("complex n=4 s=1") {
    const ExactScheme sch = build_complex_scheme(4, 1);
    const Eigen::VectorXcd xp = gradcode::precompute_x_prime(sch.b, 4, 1);
    CHECK(xp(3) == Complex{0.0, 0.0});
    CHECK(ec_residual(xp, sch.b) < 1e-12);
  }
  SECTION("real n=4 s=1 has the hand-computed triangle solution (1, 0, 1, 0)") {
    const ExactScheme sch = build_real_bch_scheme(4, 1);
    CHECK(std::abs(sch.x_prime(0) - Complex{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(sch.x_prime(1)) < 1e-12);
    CHECK(std::abs(sch.x_prime(2) - Complex{1.0, 0.0}) < 1e-12);
    CHECK(sch.x_prime(3) == Complex{0.0, 0.0});
  }
  SECTION("s = n-1 reduces to a single unknown") {
    const ExactScheme sch = build_complex_scheme(5, 4);
    CHECK(std::abs(sch.x_prime(0) - 1.0 / sch.b(0, 0)) < 1e-12);
    for (int j = 1; j < 5; ++j) CHECK(sch.x_prime(j) == Complex{0.0, 0.0});
  }
}

TEST_CASE("complex decoding") {
  SECTION("K = first n-s positions returns x_prime") {
    const ExactScheme sch = build_complex_scheme(6, 2);
    const std::vector<int> k = {0, 1, 2, 3};
    const Eigen::VectorXcd a = decode_complex(sch, k);
    CHECK((a - sch.x_prime).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("n=4 s=1 K={2,3,4} (1-based) against the dense-solve oracle") {
    const ExactScheme sch = build_complex_scheme(4, 1);
    const std::vector<int> k = {1, 2, 3};
    const Eigen::VectorXcd a = decode_complex(sch, k);
    CHECK(a(0) == Complex{0.0, 0.0});
    CHECK(ec_residual(a, sch.b) < 1e-12);
    const Eigen::VectorXcd oracle = solve_decoder_directly(sch.b, k);
    CHECK((a - oracle).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("exhaustive EC over all survivor sets, n=10 s=3") {
    const ExactScheme sch = build_complex_scheme(10, 3);
    double worst = 0.0;
    int count = 0;
    for_each_subset(10, 7, [&](const std::vector<int>& k) {
      const Eigen::VectorXcd a = decode_complex(sch, k);
      worst = std::max(worst, ec_residual(a, sch.b));
      for (int j : gradcode::detail::complement(k, 10)) CHECK(a(j) == Complex{0.0, 0.0});
      ++count;
    });
    CHECK(count == 120);
    CHECK(worst < 1e-8);
  }
  SECTION("wrong set size rejected") {
    const ExactScheme sch = build_complex_scheme(6, 2);
    const std::vector<int> k = {0, 1, 2};
    CHECK_THROWS_AS(decode_complex(sch, k), gradcode::WrongSetSize);
  }
}

TEST_CASE("real BCH construction") {
  SECTION("n=4 s=1: single root -1, c1 = (1, 1, 0, 0)") {
    const ExactScheme sch = build_real_bch_scheme(4, 1);
    CHECK(std::abs(sch.c1(0) - Complex{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(sch.c1(1) - Complex{1.0, 0.0}) < 1e-15);
    CHECK(sch.c1(2) == Complex{0.0, 0.0});
    CHECK(sch.c1(3) == Complex{0.0, 0.0});
    REQUIRE(sch.roots.size() == 1);
    CHECK(std::abs(sch.roots[0] - Complex{-1.0, 0.0}) < 1e-15);
  }
  SECTION("n=5 s=2: conjugate pair makes the coefficients real") {
    const ExactScheme sch = build_real_bch_scheme(5, 2);
    // G(x) = x^2 - (w^2 + w^3) x + w^5; w^2 + w^3 = 2 cos(4 pi / 5).
    const double golden = 1.6180339887498949;  // -(w^2 + w^3)
    CHECK(std::abs(sch.c1(0) - Complex{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(sch.c1(1) - Complex{golden, 0.0}) < 1e-14);
    CHECK(std::abs(sch.c1(2) - Complex{1.0, 0.0}) < 1e-14);
    for (int j = 3; j < 5; ++j) CHECK(sch.c1(j) == Complex{0.0, 0.0});
    for (int i = 0; i < 5; ++i) CHECK(sch.b(i, 0).imag() == 0.0);
  }
  SECTION("parity violations rejected") {
    CHECK_THROWS_AS(build_real_bch_scheme(4, 2), gradcode::ParityMismatch);
    CHECK_THROWS_AS(build_real_bch_scheme(5, 3), gradcode::ParityMismatch);
  }
  SECTION("the all-ones vector is in the code: 1(r) = 0 for every code root") {
    for (auto [n, s] : std::vector<std::pair<int, int>>{{4, 1}, {7, 2}, {10, 3}, {11, 4}}) {
      const ExactScheme sch = build_real_bch_scheme(n, s);
      for (const Complex& r : sch.roots) {
        Complex sum{0.0, 0.0};
        Complex pw{1.0, 0.0};
        for (int j = 0; j < n; ++j) {
          sum += pw;
          pw *= r;
        }
        CHECK(std::abs(sum) < 1e-12);
      }
    }
  }
}

TEST_CASE("real decoding") {
  SECTION("K = first n-s positions returns x_prime") {
    const ExactScheme sch = build_real_bch_scheme(7, 2);
    const std::vector<int> k = {0, 1, 2, 3, 4};
    const Eigen::VectorXd a = decode_real(sch, k);
    CHECK((a.cast<Complex>() - sch.x_prime).cwiseAbs().maxCoeff() < 1e-12);
  }
  SECTION("n=4 s=1 K={1,2,4} (1-based) is real, zero at 3, matches dense solve") {
    const ExactScheme sch = build_real_bch_scheme(4, 1);
    const std::vector<int> k = {0, 1, 3};
    const Eigen::VectorXd a = decode_real(sch, k);
    CHECK(a(2) == 0.0);
    CHECK(ec_residual(a.cast<Complex>(), sch.b) < 1e-12);
    const Eigen::VectorXcd oracle = solve_decoder_directly(sch.b, k);
    CHECK((a.cast<Complex>() - oracle).cwiseAbs().maxCoeff() < 1e-10);
  }
  SECTION("randomized sweep n=11 s=4") {
    const ExactScheme sch = build_real_bch_scheme(11, 4);
    gradcode::Rng rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::vector<int> k = gradcode::random_subset(11, 7, rng);
      const Eigen::VectorXd a = decode_real(sch, k);
      worst = std::max(worst, ec_residual(a.cast<Complex>(), sch.b));
    }
    CHECK(worst < 1e-8);
  }
  SECTION("exhaustive EC, n=10 s=3 real") {
    const ExactScheme sch = build_real_bch_scheme(10, 3);
    double worst = 0.0;
    for_each_subset(10, 7, [&](const std::vector<int>& k) {
      const Eigen::VectorXd a = decode_real(sch, k);
      worst = std::max(worst, ec_residual(a.cast<Complex>(), sch.b));
    });
    CHECK(worst < 1e-8);
  }
  SECTION("wrong set size rejected") {
    const ExactScheme sch = build_real_bch_scheme(7, 2);
    std::vector<int> k = {0, 1, 2};
    CHECK_THROWS_AS(decode_real(sch, k), gradcode::WrongSetSize);
  }
}

TEST_CASE("rank property: every n-s rows of B are linearly independent") {
  auto check_rank = [](const ExactScheme& sch) {
    const int n = sch.n, s = sch.s;
    for_each_subset(n, n - s, [&](const std::vector<int>& rows) {
      Eigen::MatrixXcd sub(n - s, n);
      for (int i = 0; i < n - s; ++i) sub.row(i) = sch.b.row(rows[i]);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub);
      CHECK(svd.singularValues()(n - s - 1) > 1e-6);
    });
  };
  check_rank(build_complex_scheme(6, 2));
  check_rank(build_real_bch_scheme(7, 2));
}

TEST_CASE("restriction to k partitions") {
  const ExactScheme sch = build_complex_scheme(4, 1);
  SECTION("k = n leaves the matrix unchanged") {
    const auto r = gradcode::restrict_to_k_partitions(sch, 4);
    CHECK((r.b_hat - sch.b).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("k = 3 still decodes to all-ones over the kept columns") {
    const auto r = gradcode::restrict_to_k_partitions(sch, 3);
    for_each_subset(4, 3, [&](const std::vector<int>& k) {
      const Eigen::VectorXcd a = decode_complex(sch, k);
      const Eigen::RowVectorXcd prod = a.transpose() * r.b_hat;
      CHECK((prod.array() - 1.0).abs().maxCoeff() < 1e-12);
    });
  }
  SECTION("row support never grows under column deletion") {
    const auto r = gradcode::restrict_to_k_partitions(sch, 2);
    for (int i = 0; i < 4; ++i) {
      int sub = 0;
      for (int j = 0; j < 2; ++j)
        if (r.b_hat(i, j) != Complex{0.0, 0.0}) ++sub;
      CHECK(sub <= gradcode::row_support(sch.b, i));
    }
  }
  SECTION("out-of-range k rejected") {
    CHECK_THROWS_AS(gradcode::restrict_to_k_partitions(sch, 0), gradcode::InvalidParams);
    CHECK_THROWS_AS(gradcode::restrict_to_k_partitions(sch, 5), gradcode::InvalidParams);
  }
}

TEST_CASE("dispatching decode accepts oversized survivor sets") {
  const ExactScheme sch = build_complex_scheme(6, 2);
  const std::vector<int> k = {0, 2, 3, 4, 5};  // n-s+1 survivors
  const Eigen::VectorXcd a = gradcode::decode(sch, k);
  CHECK(ec_residual(a, sch.b) < 1e-10);
  CHECK(a(1) == Complex{0.0, 0.0});
  const std::vector<int> too_small = {0, 1, 2};
  CHECK_THROWS_AS(gradcode::decode(sch, too_small), gradcode::WrongSetSize);
}
