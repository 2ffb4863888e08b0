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

#ifndef GRADCODE_SCHEME_HPP_
#define GRADCODE_SCHEME_HPP_

#include <Eigen/Dense>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gradcode/coding.hpp"
#include "gradcode/errors.hpp"
#include "gradcode/expander.hpp"

namespace gradcode {

/// Either family of encoding scheme, as stored in scheme files and consumed
/// by the simulator.
using AnyScheme = std::variant<ExactScheme, ApproxScheme>;

inline int scheme_workers(const AnyScheme& scheme) {
  return std::visit([](const auto& s) { return s.n; }, scheme);
}

inline bool scheme_is_complex(const AnyScheme& scheme) {
  const auto* exact = std::get_if<ExactScheme>(&scheme);
  return exact != nullptr && !exact->is_real();
}

/// The encoding matrix as a complex matrix (real schemes cast).
inline Eigen::MatrixXcd scheme_matrix(const AnyScheme& scheme) {
  if (const auto* exact = std::get_if<ExactScheme>(&scheme)) return exact->b;
  return std::get<ApproxScheme>(scheme).b.cast<Complex>();
}

/// Real view of the encoding matrix; exact complex schemes are rejected.
inline Eigen::MatrixXd scheme_matrix_real(const AnyScheme& scheme) {
  if (const auto* exact = std::get_if<ExactScheme>(&scheme)) {
    if (!exact->is_real())
      throw InvalidParams("scheme_matrix_real: scheme is complex");
    return exact->b.real();
  }
  return std::get<ApproxScheme>(scheme).b;
}

inline std::string scheme_kind_string(const AnyScheme& scheme) {
  if (const auto* exact = std::get_if<ExactScheme>(&scheme))
    return exact->is_real() ? "real-bch" : "complex-mds";
  switch (std::get<ApproxScheme>(scheme).kind) {
    case ApproxKind::expander: return "expander";
    case ApproxKind::bipartite: return "bipartite";
    case ApproxKind::identity: return "identity";
  }
  return "identity";
}

/// Largest row support of the encoding matrix (the storage overhead d).
inline int scheme_storage_overhead(const AnyScheme& scheme) {
  const Eigen::MatrixXcd b = scheme_matrix(scheme);
  int overhead = 0;
  for (int i = 0; i < b.rows(); ++i) overhead = std::max(overhead, row_support(b, i));
  return overhead;
}

enum class DecoderKind { exact, linear, optimal, trivial };

inline std::string to_string(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::exact: return "exact";
    case DecoderKind::linear: return "linear";
    case DecoderKind::optimal: return "optimal";
    case DecoderKind::trivial: return "trivial";
  }
  return "exact";
}

inline DecoderKind decoder_kind_from_string(const std::string& name) {
  if (name == "exact") return DecoderKind::exact;
  if (name == "linear") return DecoderKind::linear;
  if (name == "optimal") return DecoderKind::optimal;
  if (name == "trivial") return DecoderKind::trivial;
  throw InvalidParams("unknown decoder kind: " + name);
}

/// Decoding vector for a scheme/decoder pair on survivor set K.
inline Eigen::VectorXcd decoding_vector(const AnyScheme& scheme, DecoderKind kind,
                                        std::span<const int> k) {
  const int n = scheme_workers(scheme);
  switch (kind) {
    case DecoderKind::exact: {
      const auto* exact = std::get_if<ExactScheme>(&scheme);
      if (exact == nullptr)
        throw InvalidParams("decoding_vector: exact decoder needs an exact scheme");
      return decode(*exact, k);
    }
    case DecoderKind::linear:
      return linear_decoder(k, n).cast<Complex>();
    case DecoderKind::trivial:
      return trivial_decoder(k, n).cast<Complex>();
    case DecoderKind::optimal: {
      if (scheme_is_complex(scheme)) return optimal_decoder(scheme_matrix(scheme), k);
      return optimal_decoder(scheme_matrix_real(scheme), k).cast<Complex>();
    }
  }
  throw InvalidParams("decoding_vector: unknown decoder kind");
}

}  // namespace gradcode

#endif  // GRADCODE_SCHEME_HPP_
