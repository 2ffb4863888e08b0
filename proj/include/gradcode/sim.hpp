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

#ifndef GRADCODE_SIM_HPP_
#define GRADCODE_SIM_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "gradcode/conditions.hpp"
#include "gradcode/errors.hpp"
#include "gradcode/random.hpp"
#include "gradcode/scheme.hpp"

namespace gradcode {

/// Binary-labelled dataset for logistic regression: rows of `features` are
/// the examples, labels are -1 or +1.
struct Dataset {
  Eigen::MatrixXd features;  // m x p
  Eigen::VectorXd labels;    // entries in {-1, +1}

  int examples() const { return static_cast<int>(features.rows()); }
  int dim() const { return static_cast<int>(features.cols()); }
};

/// Standard-normal features, labels sign(w*^T x) flipped with the given
/// probability. The planted model w* is drawn from the same stream.
inline Dataset make_synthetic_dataset(int m, int p, double flip_prob, std::uint64_t seed) {
  if (m < 1 || p < 1) throw InvalidParams("make_synthetic_dataset: need m, p >= 1");
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd truth(p);
  for (int j = 0; j < p; ++j) truth(j) = gauss(rng);
  Dataset data;
  data.features.resize(m, p);
  data.labels.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < p; ++j) data.features(i, j) = gauss(rng);
    const double margin = data.features.row(i).dot(truth);
    double label = margin >= 0.0 ? 1.0 : -1.0;
    if (unit(rng) < flip_prob) label = -label;
    data.labels(i) = label;
  }
  return data;
}

/// Data partitioned into n equal parts with the worker assignment read off
/// the support of the encoding matrix rows. When n does not divide m the
/// final rows are repeated to even out the last part.
struct PartitionedDataset {
  int parts = 0;
  std::vector<std::vector<int>> part_rows;    // dataset row indices per part
  std::vector<std::vector<int>> worker_parts; // supp(B_i) per worker
};

inline PartitionedDataset partition(const Dataset& data, const AnyScheme& scheme,
                                    std::uint64_t seed) {
  const int n = scheme_workers(scheme);
  const int m = data.examples();
  if (m < n) throw TooFewExamples("partition: fewer examples than partitions");

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = m - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(order[i], order[pick(rng)]);
  }
  const int part_size = (m + n - 1) / n;
  while (static_cast<int>(order.size()) < part_size * n) order.push_back(order.back());

  PartitionedDataset out;
  out.parts = n;
  out.part_rows.resize(n);
  for (int j = 0; j < n; ++j)
    out.part_rows[j].assign(order.begin() + static_cast<std::ptrdiff_t>(j) * part_size,
                            order.begin() + static_cast<std::ptrdiff_t>(j + 1) * part_size);

  const Eigen::MatrixXcd b = scheme_matrix(scheme);
  out.worker_parts.resize(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (b(i, j) != Complex{0.0, 0.0}) out.worker_parts[i].push_back(j);
  return out;
}

/// Mean logistic loss (1/m) sum log(1 + exp(-y w^T x)) over the given rows.
inline double logistic_loss(const Eigen::VectorXd& w, const Eigen::MatrixXd& x,
                            const Eigen::VectorXd& y) {
  if (x.cols() != w.size() || x.rows() != y.size())
    throw DimensionMismatch("logistic_loss: shape mismatch");
  double total = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    const double margin = -y(i) * x.row(i).dot(w);
    // log(1 + e^t) computed stably on both tails.
    total += margin > 0.0 ? margin + std::log1p(std::exp(-margin)) : std::log1p(std::exp(margin));
  }
  return total / static_cast<double>(x.rows());
}

/// Gradient of the mean logistic loss: (1/m) sum -y x sigma(-y w^T x).
inline Eigen::VectorXd logistic_gradient(const Eigen::VectorXd& w, const Eigen::MatrixXd& x,
                                         const Eigen::VectorXd& y) {
  if (x.cols() != w.size() || x.rows() != y.size())
    throw DimensionMismatch("logistic_gradient: shape mismatch");
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(w.size());
  for (int i = 0; i < x.rows(); ++i) {
    const double margin = -y(i) * x.row(i).dot(w);
    const double sigma = 1.0 / (1.0 + std::exp(-margin));
    grad.noalias() += -y(i) * sigma * x.row(i).transpose();
  }
  grad /= static_cast<double>(x.rows());
  if (!grad.allFinite()) throw InvalidParams("logistic_gradient: non-finite result");
  return grad;
}

namespace detail {

inline Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, const std::vector<int>& rows) {
  Eigen::MatrixXd out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = m.row(rows[i]);
  return out;
}

inline Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& rows) {
  Eigen::VectorXd out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out(i) = v(rows[i]);
  return out;
}

}  // namespace detail

/// The matrix of scaled partial gradients: row j is (1/n) grad L_{S_j}(w).
inline Eigen::MatrixXd empirical_loss_matrix(const Dataset& data, const PartitionedDataset& parts,
                                             const Eigen::VectorXd& w) {
  const int n = parts.parts;
  Eigen::MatrixXd nw(n, w.size());
  for (int j = 0; j < n; ++j) {
    const Eigen::MatrixXd x = detail::gather_rows(data.features, parts.part_rows[j]);
    const Eigen::VectorXd y = detail::gather(data.labels, parts.part_rows[j]);
    nw.row(j) = logistic_gradient(w, x, y).transpose() / static_cast<double>(n);
  }
  return nw;
}

/// Message of worker i: (1/n) sum_{j in supp(B_i)} B_{i,j} grad_j, where
/// `part_gradients[j]` is the raw partial gradient of part j (no 1/n).
inline Eigen::VectorXcd worker_message(
    const AnyScheme& scheme, int worker,
    const std::vector<std::optional<Eigen::VectorXd>>& part_gradients) {
  const int n = scheme_workers(scheme);
  if (worker < 0 || worker >= n) throw InvalidParams("worker_message: worker index out of range");
  const Eigen::MatrixXcd b = scheme_matrix(scheme);
  Eigen::VectorXcd message;
  for (int j = 0; j < n; ++j) {
    if (b(worker, j) == Complex{0.0, 0.0}) continue;
    if (!part_gradients[j].has_value())
      throw MissingPart("worker_message: worker lacks partial gradient " + std::to_string(j));
    const Eigen::VectorXd& g = *part_gradients[j];
    if (message.size() == 0) message = Eigen::VectorXcd::Zero(g.size());
    if (g.size() != message.size()) throw DimensionMismatch("worker_message: gradient sizes differ");
    message += b(worker, j) / static_cast<double>(n) * g.cast<Complex>();
  }
  return message;
}

/// Packs a real n x p matrix into n x ceil(p/2) complex columns by pairing
/// adjacent columns as re + i*im; an odd final column stays real.
inline Eigen::MatrixXcd pack_columns(const Eigen::MatrixXd& n_mat) {
  const int p = static_cast<int>(n_mat.cols());
  const int packed = (p + 1) / 2;
  Eigen::MatrixXcd out(n_mat.rows(), packed);
  for (int j = 0; j < packed; ++j) {
    const int re = 2 * j, im = 2 * j + 1;
    if (im < p)
      out.col(j) = n_mat.col(re) + Complex{0.0, 1.0} * n_mat.col(im);
    else
      out.col(j) = n_mat.col(re).cast<Complex>();
  }
  return out;
}

/// The expansion e(v) = (Re v_1, Im v_1, Re v_2, ...), truncated to p
/// entries (an odd p drops the final imaginary slot).
inline Eigen::VectorXd unpack_vector(const Eigen::VectorXcd& v, int p) {
  if (static_cast<int>(v.size()) != (p + 1) / 2)
    throw DimensionMismatch("unpack_vector: packed length does not match p");
  Eigen::VectorXd out(p);
  for (int j = 0; j < p; ++j)
    out(j) = j % 2 == 0 ? v(j / 2).real() : v(j / 2).imag();
  return out;
}

/// Row-wise e(.); unpack_columns(pack_columns(N), p) == N exactly.
inline Eigen::MatrixXd unpack_columns(const Eigen::MatrixXcd& m, int p) {
  Eigen::MatrixXd out(m.rows(), p);
  for (int i = 0; i < m.rows(); ++i)
    out.row(i) = unpack_vector(m.row(i).transpose(), p).transpose();
  return out;
}

/// Master-side aggregation v_t = A(K_t) . a over the response matrix with
/// zero rows at stragglers.
inline Eigen::VectorXcd master_aggregate(const AnyScheme& scheme, DecoderKind decoder,
                                         const std::vector<int>& survivors,
                                         const Eigen::MatrixXcd& responses) {
  const int n = scheme_workers(scheme);
  if (responses.rows() != n) throw DimensionMismatch("master_aggregate: response rows != n");
  if (survivors.empty()) throw EmptySet("master_aggregate: no survivors");
  const Eigen::VectorXcd a = decoding_vector(scheme, decoder, survivors);
  return (a.transpose() * responses).transpose();
}

/// Which workers respond each iteration: either a uniformly random straggler
/// set of fixed size, or the first responders under shifted-exponential
/// delays. A per-iteration schedule can override the constant s.
struct StragglerModel {
  enum class Kind { fixed_random, delay_tail };
  Kind kind = Kind::fixed_random;
  int s = 0;
  std::uint64_t seed = 0;
  double delay_shift = 1.0;  // delay-tail: delay = shift + Exp(rate)
  double delay_rate = 1.0;
  std::vector<int> schedule;  // optional s_t per iteration (1-based t)

  int straggler_count(int t) const {
    if (!schedule.empty()) {
      if (t < 1 || t > static_cast<int>(schedule.size()))
        throw InvalidParams("straggler schedule shorter than the run");
      return schedule[t - 1];
    }
    return s;
  }

  std::vector<int> survivors(int n, int t, Rng& rng) const {
    const int st = straggler_count(t);
    if (st < 0 || st >= n) throw InvalidParams("straggler count out of range");
    if (kind == Kind::fixed_random) return random_subset(n, n - st, rng);
    std::vector<std::pair<double, int>> delays(n);
    std::exponential_distribution<double> exp_draw(delay_rate);
    for (int i = 0; i < n; ++i) delays[i] = {delay_shift + exp_draw(rng), i};
    std::sort(delays.begin(), delays.end());
    std::vector<int> k(n - st);
    for (int i = 0; i < n - st; ++i) k[i] = delays[i].second;
    std::sort(k.begin(), k.end());
    return k;
  }
};

/// Learning rate schedule: either constant or c1 / (t + c2).
struct LearningRate {
  bool is_constant = false;
  double constant = 0.1;
  double c1 = 1.0;
  double c2 = 0.0;

  static LearningRate constant_rate(double eta) {
    LearningRate lr;
    lr.is_constant = true;
    lr.constant = eta;
    return lr;
  }
  static LearningRate inverse_rate(double c1, double c2) {
    LearningRate lr;
    lr.is_constant = false;
    lr.c1 = c1;
    lr.c2 = c2;
    return lr;
  }
  double at(int t) const { return is_constant ? constant : c1 / (t + c2); }
};

struct GdConfig {
  DecoderKind decoder = DecoderKind::exact;
  int iterations = 100;
  LearningRate lr = LearningRate::constant_rate(0.1);
  StragglerModel straggler;
  bool pack = false;
  std::uint64_t partition_seed = 0;
};

struct IterationRecord {
  int t = 0;                   // 1-based
  int straggler_count = 0;     // s_t
  std::vector<int> survivors;  // K_t
  double l2_dev = 0.0;         // || v_t - grad L_S(w_t) ||_2
  double bound = 0.0;          // eps(s_t) * spectral_norm(N(w_t)); 0 for exact schemes
  double loss = 0.0;           // L_S(w_t), before the update
};

struct SimRun {
  std::vector<IterationRecord> records;
  std::vector<Eigen::VectorXd> trajectory;  // w^(t+1) after each iteration
  Eigen::VectorXd final_w;
};

namespace detail {

inline double epsilon_for(const AnyScheme& scheme, DecoderKind decoder, int n, int st) {
  if (std::holds_alternative<ExactScheme>(scheme)) return 0.0;
  const auto& approx = std::get<ApproxScheme>(scheme);
  if (approx.kind == ApproxKind::identity)
    return decoder == DecoderKind::trivial || decoder == DecoderKind::optimal
               ? epsilon_trivial(st)
               : std::sqrt(static_cast<double>(n) * st / std::max(1, n - st));
  return epsilon_bound(n, st, approx.d, approx.bound_lambda);
}

}  // namespace detail

/// Full synchronous loop: broadcast w, collect coded partial-gradient
/// messages from the survivors, aggregate with the decoder, step. Logical
/// time only; the straggler model decides the survivor sets.
inline SimRun run_gd(const AnyScheme& scheme, const Dataset& data, const GdConfig& config) {
  const int n = scheme_workers(scheme);
  const int p = data.dim();
  const PartitionedDataset parts = partition(data, scheme, config.partition_seed);
  const Eigen::MatrixXcd b = scheme_matrix(scheme);
  const bool pack = config.pack && scheme_is_complex(scheme);

  SimRun run;
  run.records.reserve(config.iterations);
  run.trajectory.reserve(config.iterations);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  Rng straggler_rng(config.straggler.seed);

  for (int t = 1; t <= config.iterations; ++t) {
    const Eigen::MatrixXd nw = empirical_loss_matrix(data, parts, w);
    const Eigen::VectorXd full_grad = nw.colwise().sum().transpose();

    IterationRecord rec;
    rec.t = t;
    rec.straggler_count = config.straggler.straggler_count(t);
    rec.survivors = config.straggler.survivors(n, t, straggler_rng);
    rec.loss = logistic_loss(w, data.features, data.labels);

    // Responses: row i is worker i's message, zero if it straggled.
    const Eigen::MatrixXcd payload = pack ? pack_columns(nw) : nw.cast<Complex>();
    Eigen::MatrixXcd responses = Eigen::MatrixXcd::Zero(n, payload.cols());
    for (int i : rec.survivors) responses.row(i) = b.row(i) * payload;

    const Eigen::VectorXcd v = master_aggregate(scheme, config.decoder, rec.survivors, responses);
    Eigen::VectorXd v_real;
    if (pack) {
      v_real = unpack_vector(v, p);
      rec.l2_dev = (v_real - full_grad).norm();
    } else {
      v_real = v.real();
      rec.l2_dev = std::sqrt((v.real() - full_grad).squaredNorm() + v.imag().squaredNorm());
    }

    const double eps = detail::epsilon_for(scheme, config.decoder, n, rec.straggler_count);
    if (eps > 0.0) {
      const Eigen::JacobiSVD<Eigen::MatrixXd> svd(nw);
      rec.bound = eps * svd.singularValues()(0);
    }

    w -= config.lr.at(t) * v_real;
    run.records.push_back(std::move(rec));
    run.trajectory.push_back(w);
  }
  run.final_w = w;
  return run;
}

/// Centralized full-gradient descent with the same schedule, for reference
/// trajectories.
inline SimRun run_centralized_gd(const Dataset& data, int iterations, const LearningRate& lr) {
  SimRun run;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(data.dim());
  for (int t = 1; t <= iterations; ++t) {
    IterationRecord rec;
    rec.t = t;
    rec.loss = logistic_loss(w, data.features, data.labels);
    w -= lr.at(t) * logistic_gradient(w, data.features, data.labels);
    run.records.push_back(std::move(rec));
    run.trajectory.push_back(w);
  }
  run.final_w = w;
  return run;
}

/// One row of the recovery-error sweep table.
struct SweepRow {
  int n = 0, d = 0, s = 0;
  std::string decoder;
  double mean_residual = 0.0;
  double std_residual = 0.0;
  double bound = 0.0;  // mean of the per-draw spectral bounds
};

/// Recovery-error sweep over straggler counts: `trials` independent draws of
/// (graph, K) per s, reporting mean/stddev of ||A(K) B - 1||_2 per decoder
/// against the per-draw spectral bound.
inline std::vector<SweepRow> l2_sweep(int n, int d, int s_min, int s_max, int trials,
                                      const std::vector<DecoderKind>& decoders,
                                      std::uint64_t seed) {
  if (s_min < 0 || s_max >= n || s_min > s_max || trials < 1)
    throw InvalidParams("l2_sweep: bad straggler range or trial count");
  for (DecoderKind kind : decoders)
    if (kind == DecoderKind::exact)
      throw InvalidParams("l2_sweep: sweep covers approximate decoders only");

  std::vector<ApproxScheme> draws;
  draws.reserve(trials);
  for (int trial = 0; trial < trials; ++trial)
    draws.push_back(build_expander_scheme(random_regular_graph(n, d, child_seed(seed, trial))));

  std::vector<SweepRow> rows;
  for (int s = s_min; s <= s_max; ++s) {
    Rng k_rng(child_seed(seed, 1'000'000 + s));
    std::vector<std::vector<int>> survivor_sets(trials);
    for (int trial = 0; trial < trials; ++trial)
      survivor_sets[trial] = s == 0 ? [n] {
        std::vector<int> full(n);
        std::iota(full.begin(), full.end(), 0);
        return full;
      }() : random_subset(n, n - s, k_rng);

    double bound_sum = 0.0;
    for (const auto& draw : draws) bound_sum += epsilon_bound(n, s, d, draw.bound_lambda);

    for (DecoderKind kind : decoders) {
      SweepRow row;
      row.n = n;
      row.d = d;
      row.s = s;
      row.decoder = to_string(kind);
      row.bound = bound_sum / trials;
      double sum = 0.0, sum_sq = 0.0;
      for (int trial = 0; trial < trials; ++trial) {
        const Eigen::VectorXd a =
            kind == DecoderKind::optimal
                ? optimal_decoder(draws[trial].b, survivor_sets[trial])
                : (kind == DecoderKind::linear
                       ? linear_decoder(survivor_sets[trial], n)
                       : trivial_decoder(survivor_sets[trial], n));
        const double res = recovery_residual(a, draws[trial].b);
        sum += res;
        sum_sq += res * res;
      }
      row.mean_residual = sum / trials;
      row.std_residual = std::sqrt(std::max(0.0, sum_sq / trials - row.mean_residual * row.mean_residual));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace gradcode

#endif  // GRADCODE_SIM_HPP_
