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

#ifndef GRADCODE_POLYNOMIAL_HPP_
#define GRADCODE_POLYNOMIAL_HPP_

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "gradcode/errors.hpp"

namespace gradcode {

using Complex = std::complex<double>;

/// Polynomial over the complex numbers, coefficients stored lowest degree
/// first. The zero polynomial is the empty coefficient list.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial constant(Complex c) { return Polynomial({c}); }

  /// Degree of the polynomial; -1 encodes the zero polynomial (degree -inf).
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  Complex coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Complex{0.0, 0.0}; }

  /// Horner evaluation.
  Complex operator()(Complex x) const {
    Complex acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// In-place multiplication by the monic linear factor (x - root).
  Polynomial& mul_linear(Complex root) {
    if (is_zero()) return *this;
    coeffs_.push_back(Complex{0.0, 0.0});
    for (std::size_t i = coeffs_.size() - 1; i > 0; --i)
      coeffs_[i] = coeffs_[i - 1] - root * coeffs_[i];
    coeffs_[0] *= -root;
    return *this;
  }

  Polynomial& operator+=(const Polynomial& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), Complex{0.0, 0.0});
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    trim();
    return *this;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == Complex{0.0, 0.0}) coeffs_.pop_back();
  }

  std::vector<Complex> coeffs_;
};

/// The n complex roots of unity of order n, value[j] = e^{2*pi*i*j/n}.
struct RootsOfUnity {
  int n = 0;
  std::vector<Complex> value;

  static RootsOfUnity of_order(int n) {
    if (n < 1) throw InvalidParams("roots of unity: n must be >= 1");
    RootsOfUnity r;
    r.n = n;
    r.value.reserve(n);
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n;
      r.value.emplace_back(std::cos(theta), std::sin(theta));
    }
    return r;
  }
};

namespace detail {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// In-place iterative radix-2 transform computing a[j] <- sum_k a[k] w^{jk}
/// with w = e^{2*pi*i/n}. Requires power-of-two length.
inline void fft_pow2(std::vector<Complex>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double theta = 2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wlen{std::cos(theta), std::sin(theta)};
    for (std::size_t i = 0; i < n; i += len) {
      Complex w{1.0, 0.0};
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace detail

/// Evaluates p at all n-th roots of unity, returning (p(a_0),...,p(a_{n-1})).
/// Coefficients are first folded modulo x^n - 1 (exact on the root set), so
/// any degree is accepted. Power-of-two n goes through the radix-2 transform,
/// other n through direct evaluation.
inline std::vector<Complex> eval_on_roots_of_unity(const Polynomial& p, int n) {
  if (n < 1) throw InvalidParams("eval_on_roots_of_unity: n must be >= 1");
  std::vector<Complex> folded(static_cast<std::size_t>(n), Complex{0.0, 0.0});
  const auto& c = p.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) folded[k % n] += c[k];

  if (detail::is_power_of_two(static_cast<std::size_t>(n))) {
    detail::fft_pow2(folded);
    return folded;
  }
  const RootsOfUnity roots = RootsOfUnity::of_order(n);
  std::vector<Complex> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Complex acc{0.0, 0.0};
    const Complex x = roots.value[j];
    for (auto it = folded.rbegin(); it != folded.rend(); ++it) acc = acc * x + *it;
    out[j] = acc;
  }
  return out;
}

/// Newton interpolation through the given (x, y) points; returns the unique
/// polynomial of degree < m. Nodes must be pairwise distinct.
inline Polynomial interpolate(const std::vector<std::pair<Complex, Complex>>& points) {
  const std::size_t m = points.size();
  if (m == 0) throw InvalidParams("interpolate: need at least one point");
  constexpr double kNodeTol = 1e-12;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (std::abs(points[i].first - points[j].first) <= kNodeTol)
        throw DuplicateNode("interpolate: coincident nodes");

  // Divided differences, then expansion of the Newton form.
  std::vector<Complex> dd(m);
  for (std::size_t i = 0; i < m; ++i) dd[i] = points[i].second;
  for (std::size_t level = 1; level < m; ++level)
    for (std::size_t i = m - 1; i >= level; --i)
      dd[i] = (dd[i] - dd[i - 1]) / (points[i].first - points[i - level].first);

  std::vector<Complex> coeffs(m, Complex{0.0, 0.0});
  std::vector<Complex> basis = {Complex{1.0, 0.0}};  // prod (x - x_j), j < level
  for (std::size_t level = 0; level < m; ++level) {
    for (std::size_t k = 0; k < basis.size(); ++k) coeffs[k] += dd[level] * basis[k];
    if (level + 1 < m) {
      basis.push_back(Complex{0.0, 0.0});
      const Complex node = points[level].first;
      for (std::size_t k = basis.size() - 1; k > 0; --k)
        basis[k] = basis[k - 1] - node * basis[k];
      basis[0] *= -node;
    }
  }
  return Polynomial(std::move(coeffs));
}

}  // namespace gradcode

#endif  // GRADCODE_POLYNOMIAL_HPP_
