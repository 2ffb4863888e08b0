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

#ifndef GRADCODE_CODING_HPP_
#define GRADCODE_CODING_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "gradcode/errors.hpp"
#include "gradcode/polynomial.hpp"

namespace gradcode {

enum class FieldTag { complex_field, real_field };

namespace tol {
// Construction-time assertions scale with the largest matrix entry.
inline constexpr double kConstruction = 1e-9;
// Residual threshold for the exact-recovery identity A(K) * B = 1.
inline constexpr double kEcResidual = 1e-8;
// Largest imaginary residue tolerated before truncating to the reals.
inline constexpr double kImagResidue = 1e-9;
}  // namespace tol

/// A straggler-tolerant exact encoding scheme: a circulant matrix B whose
/// columns are the cyclic shifts of a minimum-weight codeword c1 of a cyclic
/// MDS code containing the all-ones vector. Tolerates any s stragglers out
/// of n workers with storage overhead s+1.
struct ExactScheme {
  int n = 0;                       // workers = partitions
  int s = 0;                       // straggler tolerance
  FieldTag field = FieldTag::complex_field;
  Eigen::MatrixXcd b;              // n x n circulant; imag parts identically 0 when real
  Eigen::VectorXcd c1;             // generating codeword, support {0,...,s}
  Eigen::VectorXcd x_prime;        // x' * b = 1, support within first n-s coordinates
  std::vector<Complex> roots;      // evaluation points (complex) or code roots (real)
  std::vector<Complex> dual_multipliers;  // GRS column multipliers, complex case only

  bool is_real() const { return field == FieldTag::real_field; }
};

namespace detail {

/// Circulant matrix whose column j is c1 cyclically shifted down by j.
inline Eigen::MatrixXcd circulant_from_first_column(const Eigen::VectorXcd& c1) {
  const int n = static_cast<int>(c1.size());
  Eigen::MatrixXcd b(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) b(i, j) = c1((i - j + n) % n);
  return b;
}

inline std::vector<int> complement(std::span<const int> k, int n) {
  std::vector<bool> in(n, false);
  for (int i : k) in[i] = true;
  std::vector<int> out;
  out.reserve(n - k.size());
  for (int i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

/// Dual-code generator V*D for the complex construction: V is the s x n
/// Vandermonde on the roots of unity, D = diag(a_j / n).
inline Eigen::MatrixXcd dual_generator(const ExactScheme& scheme) {
  const int n = scheme.n, s = scheme.s;
  Eigen::MatrixXcd vd(s, n);
  for (int j = 0; j < n; ++j) {
    const Complex alpha = scheme.roots[j];
    Complex pw = scheme.dual_multipliers[j];  // ell_j * alpha^0
    for (int k = 0; k < s; ++k) {
      vd(k, j) = pw;
      pw *= alpha;
    }
  }
  return vd;
}

}  // namespace detail

/// Solves x'' * B' = 1 over the upper-left (n-s) x (n-s) block of B by back
/// substitution and returns x' = (x'', 0, ..., 0). B' must be lower
/// triangular with nonzero diagonal, which both constructions guarantee.
inline Eigen::VectorXcd precompute_x_prime(const Eigen::MatrixXcd& b, int n, int s) {
  const int m = n - s;
  const double diag_tol = tol::kConstruction * (1.0 + b.cwiseAbs().maxCoeff());
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  for (int j = m - 1; j >= 0; --j) {
    if (std::abs(b(j, j)) <= diag_tol)
      throw SingularTriangular("precompute_x_prime: zero diagonal in triangular block");
    Complex acc{0.0, 0.0};
    // Column j of B' has at most s+1 nonzeros below the diagonal.
    const int lo = std::min(m - 1, j + s);
    for (int i = j + 1; i <= lo; ++i) acc += x(i) * b(i, j);
    x(j) = (Complex{1.0, 0.0} - acc) / b(j, j);
  }
  const double residual = ((x.transpose() * b).array() - 1.0).abs().maxCoeff();
  if (residual > tol::kEcResidual)
    throw SingularTriangular("precompute_x_prime: residual " + std::to_string(residual));
  return x;
}

/// Builds the complex cyclic-MDS scheme: c1 is the evaluation of
/// m(x) = prod_{j=s+1}^{n-1} (x - a_j) on the roots of unity, zero beyond
/// position s by construction, and B is the circulant on c1.
inline ExactScheme build_complex_scheme(int n, int s) {
  if (s < 1 || s >= n) throw InvalidParams("build_complex_scheme: need 1 <= s < n");
  const RootsOfUnity roots = RootsOfUnity::of_order(n);

  Polynomial m = Polynomial::constant(Complex{1.0, 0.0});
  for (int j = s + 1; j < n; ++j) m.mul_linear(roots.value[j]);

  ExactScheme scheme;
  scheme.n = n;
  scheme.s = s;
  scheme.field = FieldTag::complex_field;
  scheme.roots = roots.value;
  scheme.c1 = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j <= s; ++j) scheme.c1(j) = m(roots.value[j]);
  scheme.b = detail::circulant_from_first_column(scheme.c1);

  // Standard GRS duality on the roots of unity: ell_j = a_j / n.
  scheme.dual_multipliers.resize(n);
  for (int j = 0; j < n; ++j) scheme.dual_multipliers[j] = roots.value[j] / static_cast<double>(n);

  // The derivation of the multipliers is checked, not trusted: every row of
  // V*D must annihilate every column of B.
  const Eigen::MatrixXcd vd = detail::dual_generator(scheme);
  const double ortho = (vd * scheme.b).cwiseAbs().maxCoeff();
  if (ortho > tol::kConstruction * (1.0 + scheme.b.cwiseAbs().maxCoeff()))
    throw InvalidParams("build_complex_scheme: dual generator fails orthogonality, residual " +
                        std::to_string(ortho));

  scheme.x_prime = precompute_x_prime(scheme.b, n, s);
  return scheme;
}

/// Builds the real BCH scheme of Construction 1: c1 holds the coefficients
/// of the generator polynomial G(x) = prod_{r in R} (x - r), where R is a
/// conjugation-closed run of s roots of unity. Requires n != s (mod 2).
inline ExactScheme build_real_bch_scheme(int n, int s) {
  if (s < 1 || s >= n) throw InvalidParams("build_real_bch_scheme: need 1 <= s < n");
  if (((n - s) % 2) == 0)
    throw ParityMismatch("build_real_bch_scheme: construction needs n != s (mod 2)");
  const RootsOfUnity roots = RootsOfUnity::of_order(n);

  int first = 0;
  if (n % 2 == 0) {  // n even, s odd
    const int sp = s / 2;
    first = n / 2 - sp;
  } else {  // n odd, s even
    first = n / 2 - s / 2 + 1;
  }

  ExactScheme scheme;
  scheme.n = n;
  scheme.s = s;
  scheme.field = FieldTag::real_field;
  scheme.roots.reserve(s);
  Polynomial g = Polynomial::constant(Complex{1.0, 0.0});
  for (int k = first; k < first + s; ++k) {
    scheme.roots.push_back(roots.value[k % n]);
    g.mul_linear(roots.value[k % n]);
  }

  scheme.c1 = Eigen::VectorXcd::Zero(n);
  double worst_imag = 0.0;
  for (int j = 0; j <= s; ++j) {
    const Complex c = g.coeff(j);
    worst_imag = std::max(worst_imag, std::abs(c.imag()));
    scheme.c1(j) = Complex{c.real(), 0.0};
  }
  if (worst_imag > tol::kImagResidue)
    throw InvalidParams("build_real_bch_scheme: generator polynomial not real, residue " +
                        std::to_string(worst_imag));

  scheme.b = detail::circulant_from_first_column(scheme.c1);
  scheme.x_prime = precompute_x_prime(scheme.b, n, s);
  // The triangular block is real, so x' is real up to representation.
  for (int i = 0; i < n; ++i) scheme.x_prime(i) = Complex{scheme.x_prime(i).real(), 0.0};
  return scheme;
}

/// Decoding vector for the complex scheme: interpolate f of degree < s with
/// f(a_j) = -x'_j / ell_j on the straggler positions, evaluate f on all
/// roots of unity, scale by the multipliers, add x'.
inline Eigen::VectorXcd decode_complex(const ExactScheme& scheme, std::span<const int> k) {
  if (scheme.field != FieldTag::complex_field)
    throw InvalidParams("decode_complex: scheme is not complex");
  const int n = scheme.n, s = scheme.s;
  if (static_cast<int>(k.size()) != n - s)
    throw WrongSetSize("decode_complex: |K| must be n - s");

  const std::vector<int> kc = detail::complement(k, n);
  std::vector<std::pair<Complex, Complex>> pts;
  pts.reserve(kc.size());
  for (int j : kc)
    pts.emplace_back(scheme.roots[j], -scheme.x_prime(j) / scheme.dual_multipliers[j]);
  const Polynomial f = interpolate(pts);

  const std::vector<Complex> fvals = eval_on_roots_of_unity(f, n);
  Eigen::VectorXcd a(n);
  for (int j = 0; j < n; ++j)
    a(j) = fvals[j] * scheme.dual_multipliers[j] + scheme.x_prime(j);
  for (int j : kc) a(j) = Complex{0.0, 0.0};
  return a;
}

/// Decoding vector for the real scheme: solve f * V_{K^c} = -x'_{K^c} over
/// the s x s generalized Vandermonde block of the dual generator, extend by
/// y = f * V, add x', and truncate the (verified-tiny) imaginary residue.
inline Eigen::VectorXd decode_real(const ExactScheme& scheme, std::span<const int> k) {
  if (scheme.field != FieldTag::real_field)
    throw InvalidParams("decode_real: scheme is not real");
  const int n = scheme.n, s = scheme.s;
  if (static_cast<int>(k.size()) != n - s)
    throw WrongSetSize("decode_real: |K| must be n - s");

  const std::vector<int> kc = detail::complement(k, n);
  // V_{i,j} = r_i^j over the code roots; the K^c column block is invertible
  // because the dual code is MDS.
  Eigen::MatrixXcd v_kc(s, s);
  Eigen::VectorXcd rhs(s);
  for (int col = 0; col < s; ++col) {
    const int j = kc[col];
    for (int i = 0; i < s; ++i) v_kc(i, col) = std::pow(scheme.roots[i], j);
    rhs(col) = -scheme.x_prime(j);
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v_kc.transpose());
  const Eigen::VectorXcd f = lu.solve(rhs);
  if (!f.allFinite())
    throw SingularVandermonde("decode_real: degenerate Vandermonde block");

  Eigen::VectorXd a(n);
  double worst_imag = 0.0;
  std::vector<Complex> pw(s, Complex{1.0, 0.0});  // r_i^j, advanced per column
  for (int j = 0; j < n; ++j) {
    Complex y{0.0, 0.0};
    for (int i = 0; i < s; ++i) {
      y += f(i) * pw[i];
      pw[i] *= scheme.roots[i];
    }
    const Complex entry = y + scheme.x_prime(j);
    worst_imag = std::max(worst_imag, std::abs(entry.imag()));
    a(j) = entry.real();
  }
  if (worst_imag > tol::kImagResidue)
    throw SingularVandermonde("decode_real: imaginary residue " + std::to_string(worst_imag));
  for (int j : kc) a(j) = 0.0;
  return a;
}

/// Dispatching decoder. Survivor sets larger than n-s are admissible (any
/// superset of a decodable set works); the first n-s survivors are used.
inline Eigen::VectorXcd decode(const ExactScheme& scheme, std::span<const int> k) {
  const int need = scheme.n - scheme.s;
  if (static_cast<int>(k.size()) < need)
    throw WrongSetSize("decode: |K| must be at least n - s");
  std::span<const int> head = k.subspan(0, need);
  if (scheme.is_real()) {
    const Eigen::VectorXd a = decode_real(scheme, head);
    return a.cast<Complex>();
  }
  return decode_complex(scheme, head);
}

/// A scheme re-targeted to k <= n data partitions by keeping the first k
/// columns of B. Decoding vectors are unchanged.
struct RestrictedScheme {
  ExactScheme base;
  int k = 0;
  Eigen::MatrixXcd b_hat;  // n x k
};

inline RestrictedScheme restrict_to_k_partitions(const ExactScheme& scheme, int k) {
  if (k < 1 || k > scheme.n)
    throw InvalidParams("restrict_to_k_partitions: need 1 <= k <= n");
  RestrictedScheme r;
  r.base = scheme;
  r.k = k;
  r.b_hat = scheme.b.leftCols(k);
  return r;
}

/// Row support size of a (possibly complex) matrix row, with exact-zero test.
inline int row_support(const Eigen::MatrixXcd& b, int row) {
  int count = 0;
  for (int j = 0; j < b.cols(); ++j)
    if (b(row, j) != Complex{0.0, 0.0}) ++count;
  return count;
}

}  // namespace gradcode

#endif  // GRADCODE_CODING_HPP_
