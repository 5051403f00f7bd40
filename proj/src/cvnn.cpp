// Copyright 2026 The qcsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qcsynth/cvnn.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

#include "binary_io.hpp"
#include "qcsynth/error.hpp"
#include "qcsynth/rng.hpp"

namespace qcsynth {

namespace {

constexpr char kWeightsMagic[5] = "AQCW";
constexpr std::uint32_t kWeightsVersion = 1;

// Layer-type byte in the weights file.
constexpr std::uint8_t kLayerComplex = 0;
constexpr std::uint8_t kLayerReal = 1;
constexpr std::uint8_t kLayerComplexModReLU = 2;

template <typename S>
using MatS = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using VecS = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using ConstMatMap = Eigen::Map<const MatS<S>>;
template <typename S>
using ConstVecMap = Eigen::Map<const VecS<S>>;

// Column-wise softmax and the matching mean cross-entropy, computed from
// logits so that log(0) never appears. The loss is accumulated in double.
template <typename S>
double softmax_cross_entropy(const MatS<S>& logits, const MatS<S>* targets, MatS<S>& probs) {
  probs.resize(logits.rows(), logits.cols());
  double loss = 0.0;
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const S m = logits.col(c).maxCoeff();
    const VecS<S> shifted = logits.col(c).array() - m;
    const VecS<S> e = shifted.array().exp();
    const S z = e.sum();
    probs.col(c) = e / z;
    if (targets) {
      const double log_z = std::log(static_cast<double>(z));
      for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        const double q = static_cast<double>((*targets)(r, c));
        if (q != 0.0) loss -= q * (static_cast<double>(shifted(r)) - log_z);
      }
    }
  }
  return logits.cols() ? loss / static_cast<double>(logits.cols()) : 0.0;
}

}  // namespace

std::string_view activation_name(ComplexActivation a) {
  return a == ComplexActivation::kModReLU ? "modrelu" : "crelu";
}

ComplexActivation parse_activation(std::string_view name) {
  if (name == "crelu") return ComplexActivation::kSplitCReLU;
  if (name == "modrelu") return ComplexActivation::kModReLU;
  throw InvalidArgument("unknown activation '" + std::string(name) + "' (crelu|modrelu)");
}

void NetworkConfig::validate() const {
  if (n_qubits == 0 || n_qubits > 8) throw InvalidArgument("network qubit count must be in [1, 8]");
  if (vocab_size == 0) throw InvalidArgument("vocabulary size must be positive");
  if (complex_widths.empty()) throw InvalidArgument("need at least one complex layer");
  for (std::size_t w : complex_widths) {
    if (w == 0) throw InvalidArgument("layer widths must be positive");
  }
  if (real_hidden == 0) throw InvalidArgument("layer widths must be positive");
}

Eigen::VectorXd network_input(const OperatorTable& table) {
  const auto flat = table.flat();
  const auto n = static_cast<Eigen::Index>(flat.size());
  Eigen::VectorXd v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = flat[static_cast<std::size_t>(i)].real();
    v(n + i) = flat[static_cast<std::size_t>(i)].imag();
  }
  return v;
}

void network_input_from_interleaved(std::span<const double> interleaved,
                                    Eigen::Ref<Eigen::VectorXd> out) {
  const auto n = static_cast<Eigen::Index>(interleaved.size() / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = interleaved[static_cast<std::size_t>(2 * i)];
    out(n + i) = interleaved[static_cast<std::size_t>(2 * i + 1)];
  }
}

double cross_entropy(std::span<const double> pred, std::span<const std::uint8_t> target) {
  const double hot = std::accumulate(target.begin(), target.end(), 0.0);
  if (hot <= 0.0) throw InvalidArgument("target has no hot entry");
  double loss = 0.0;
  for (std::size_t g = 0; g < pred.size(); ++g) {
    if (target[g]) loss -= (1.0 / hot) * std::log(pred[g]);
  }
  return loss;
}

template <typename S>
struct Network::Cache {
  // acts[k] is the input of layer k (complex layers first, then real ones);
  // pre[k] is the pre-activation output of layer k.
  std::vector<MatS<S>> acts;
  std::vector<MatS<S>> pre;
};

Network::Network(NetworkConfig config) : config_(std::move(config)) {
  config_.validate();
  build_layout();
  Rng rng = make_rng(config_.seed, 0x1417);
  for (std::size_t k = 0; k < complex_layer_count(); ++k) {
    auto layer = complex_layer(k);
    const double stddev = 1.0 / std::sqrt(static_cast<double>(layer.weight_re.cols()));
    for (Eigen::Index i = 0; i < layer.weight_re.size(); ++i) {
      layer.weight_re.data()[i] = stddev * standard_normal(rng);
    }
    for (Eigen::Index i = 0; i < layer.weight_im.size(); ++i) {
      layer.weight_im.data()[i] = stddev * standard_normal(rng);
    }
  }
  for (std::size_t k = 0; k < 2; ++k) {
    auto layer = real_layer(k);
    const double stddev = 1.0 / std::sqrt(static_cast<double>(layer.weight.cols()));
    for (Eigen::Index i = 0; i < layer.weight.size(); ++i) {
      layer.weight.data()[i] = stddev * standard_normal(rng);
    }
  }
}

void Network::build_layout() {
  std::size_t offset = 0;
  std::size_t in = config_.input_dim();
  const bool mod = config_.activation == ComplexActivation::kModReLU;
  complex_offsets_.clear();
  real_offsets_.clear();
  for (std::size_t out : config_.complex_widths) {
    Offsets o;
    o.rows = out;
    o.cols = in;
    o.w_re = offset;
    offset += out * in;
    o.w_im = offset;
    offset += out * in;
    o.b_re = offset;
    offset += out;
    o.b_im = offset;
    offset += out;
    o.mod = offset;
    if (mod) offset += out;
    complex_offsets_.push_back(o);
    in = out;
  }
  const std::size_t real_rows[2] = {config_.real_hidden, config_.vocab_size};
  in = 2 * in;
  for (std::size_t out : real_rows) {
    Offsets o;
    o.rows = out;
    o.cols = in;
    o.w = offset;
    offset += out * in;
    o.b = offset;
    offset += out;
    real_offsets_.push_back(o);
    in = out;
  }
  params_.assign(offset, 0.0);
  adam_m_.assign(offset, 0.0);
  adam_v_.assign(offset, 0.0);
  adam_t_ = 0;
}

Network::ComplexLayerView Network::complex_layer(std::size_t i) {
  const Offsets& o = complex_offsets_.at(i);
  const auto r = static_cast<Eigen::Index>(o.rows);
  const auto c = static_cast<Eigen::Index>(o.cols);
  const bool mod = config_.activation == ComplexActivation::kModReLU;
  double* p = params_.data();
  return ComplexLayerView{Eigen::Map<Eigen::MatrixXd>(p + o.w_re, r, c),
                          Eigen::Map<Eigen::MatrixXd>(p + o.w_im, r, c),
                          Eigen::Map<Eigen::VectorXd>(p + o.b_re, r),
                          Eigen::Map<Eigen::VectorXd>(p + o.b_im, r),
                          Eigen::Map<Eigen::VectorXd>(p + o.mod, mod ? r : 0)};
}

Network::RealLayerView Network::real_layer(std::size_t i) {
  const Offsets& o = real_offsets_.at(i);
  double* p = params_.data();
  return RealLayerView{
      Eigen::Map<Eigen::MatrixXd>(p + o.w, static_cast<Eigen::Index>(o.rows), static_cast<Eigen::Index>(o.cols)),
      Eigen::Map<Eigen::VectorXd>(p + o.b, static_cast<Eigen::Index>(o.rows))};
}

template <typename S>
Network::Mat<S> Network::run(const S* p, const Mat<S>& inputs, Cache<S>* cache) const {
  if (static_cast<std::size_t>(inputs.rows()) != 2 * config_.input_dim()) {
    throw DimensionError("network expects " + std::to_string(2 * config_.input_dim()) +
                         " stacked inputs, got " + std::to_string(inputs.rows()));
  }
  const Eigen::Index batch = inputs.cols();
  const bool mod = config_.activation == ComplexActivation::kModReLU;
  if (cache) {
    cache->acts.clear();
    cache->pre.clear();
  }

  MatS<S> h = inputs;
  for (const Offsets& o : complex_offsets_) {
    const auto r = static_cast<Eigen::Index>(o.rows);
    const auto c = static_cast<Eigen::Index>(o.cols);
    const ConstMatMap<S> a(p + o.w_re, r, c);
    const ConstMatMap<S> b(p + o.w_im, r, c);
    MatS<S> z(2 * r, batch);
    z.topRows(r).noalias() = a * h.topRows(c);
    z.topRows(r).noalias() -= b * h.bottomRows(c);
    z.topRows(r).colwise() += ConstVecMap<S>(p + o.b_re, r);
    z.bottomRows(r).noalias() = b * h.topRows(c);
    z.bottomRows(r).noalias() += a * h.bottomRows(c);
    z.bottomRows(r).colwise() += ConstVecMap<S>(p + o.b_im, r);
    if (cache) cache->acts.push_back(std::move(h));
    h.resize(2 * r, batch);
    if (mod) {
      const ConstVecMap<S> offset(p + o.mod, r);
      for (Eigen::Index col = 0; col < batch; ++col) {
        for (Eigen::Index k = 0; k < r; ++k) {
          const S re = z(k, col);
          const S im = z(r + k, col);
          const S mag = std::hypot(re, im);
          const S s = mag + offset(k);
          const S scale = (mag > S(0) && s > S(0)) ? s / mag : S(0);
          h(k, col) = re * scale;
          h(r + k, col) = im * scale;
        }
      }
    } else {
      h = z.cwiseMax(S(0));
    }
    if (cache) cache->pre.push_back(std::move(z));
  }

  {
    const Offsets& o = real_offsets_[0];
    const auto r = static_cast<Eigen::Index>(o.rows);
    MatS<S> z(r, batch);
    z.noalias() = ConstMatMap<S>(p + o.w, r, static_cast<Eigen::Index>(o.cols)) * h;
    z.colwise() += ConstVecMap<S>(p + o.b, r);
    if (cache) cache->acts.push_back(std::move(h));
    h = z.cwiseMax(S(0));
    if (cache) cache->pre.push_back(std::move(z));
  }
  const Offsets& o = real_offsets_[1];
  const auto r = static_cast<Eigen::Index>(o.rows);
  MatS<S> logits(r, batch);
  logits.noalias() = ConstMatMap<S>(p + o.w, r, static_cast<Eigen::Index>(o.cols)) * h;
  logits.colwise() += ConstVecMap<S>(p + o.b, r);
  if (cache) cache->acts.push_back(std::move(h));
  return logits;
}

template <typename S>
double Network::gradient(const S* p, const Mat<S>& inputs, const Mat<S>& targets, S* grad) const {
  Cache<S> cache;
  const MatS<S> logits = run(p, inputs, &cache);
  MatS<S> probs;
  const double loss = softmax_cross_entropy<S>(logits, &targets, probs);
  const bool mod = config_.activation == ComplexActivation::kModReLU;

  // d loss / d logits.
  MatS<S> g = (probs - targets) * (S(1) / static_cast<S>(inputs.cols()));

  const std::size_t n_complex = complex_offsets_.size();
  for (std::size_t k = 2; k-- > 0;) {
    const Offsets& o = real_offsets_[k];
    const auto r = static_cast<Eigen::Index>(o.rows);
    const auto c = static_cast<Eigen::Index>(o.cols);
    const MatS<S>& in = cache.acts[n_complex + k];
    Eigen::Map<MatS<S>>(grad + o.w, r, c).noalias() = g * in.transpose();
    Eigen::Map<VecS<S>>(grad + o.b, r) = g.rowwise().sum();
    MatS<S> g_in(c, g.cols());
    g_in.noalias() = ConstMatMap<S>(p + o.w, r, c).transpose() * g;
    if (k == 1) {
      // Back through the ReLU of the first real layer.
      g_in = (cache.pre[n_complex].array() > S(0)).select(g_in, S(0));
    }
    g = std::move(g_in);
  }

  for (std::size_t k = n_complex; k-- > 0;) {
    const Offsets& o = complex_offsets_[k];
    const auto r = static_cast<Eigen::Index>(o.rows);
    const auto c = static_cast<Eigen::Index>(o.cols);
    const MatS<S>& z = cache.pre[k];
    // g holds d loss / d activation; map it back to the pre-activation.
    if (mod) {
      const ConstVecMap<S> offset(p + o.mod, r);
      Eigen::Map<VecS<S>> g_mod(grad + o.mod, r);
      g_mod.setZero();
      for (Eigen::Index col = 0; col < z.cols(); ++col) {
        for (Eigen::Index u = 0; u < r; ++u) {
          const S re = z(u, col);
          const S im = z(r + u, col);
          const S mag = std::hypot(re, im);
          const S b = offset(u);
          const S gr = g(u, col);
          const S gi = g(r + u, col);
          if (!(mag > S(0) && mag + b > S(0))) {
            g(u, col) = S(0);
            g(r + u, col) = S(0);
            continue;
          }
          const S radial = gr * re + gi * im;
          const S factor = S(1) + b / mag;
          const S mag3 = mag * mag * mag;
          g(u, col) = gr * factor - b * re * radial / mag3;
          g(r + u, col) = gi * factor - b * im * radial / mag3;
          g_mod(u) += radial / mag;
        }
      }
    } else {
      g = (z.array() > S(0)).select(g, S(0));
    }
    const MatS<S>& in = cache.acts[k];
    const auto g_re = g.topRows(r);
    const auto g_im = g.bottomRows(r);
    const auto x = in.topRows(c);
    const auto y = in.bottomRows(c);
    Eigen::Map<MatS<S>> d_a(grad + o.w_re, r, c);
    Eigen::Map<MatS<S>> d_b(grad + o.w_im, r, c);
    d_a.noalias() = g_re * x.transpose();
    d_a.noalias() += g_im * y.transpose();
    d_b.noalias() = g_im * x.transpose();
    d_b.noalias() -= g_re * y.transpose();
    Eigen::Map<VecS<S>>(grad + o.b_re, r) = g_re.rowwise().sum();
    Eigen::Map<VecS<S>>(grad + o.b_im, r) = g_im.rowwise().sum();
    if (k == 0) break;
    const ConstMatMap<S> a(p + o.w_re, r, c);
    const ConstMatMap<S> b(p + o.w_im, r, c);
    MatS<S> g_in(2 * c, g.cols());
    g_in.topRows(c).noalias() = a.transpose() * g_re;
    g_in.topRows(c).noalias() += b.transpose() * g_im;
    g_in.bottomRows(c).noalias() = a.transpose() * g_im;
    g_in.bottomRows(c).noalias() -= b.transpose() * g_re;
    g = std::move(g_in);
  }
  return loss;
}

Eigen::MatrixXd Network::forward_batch(const Eigen::MatrixXd& inputs) const {
  Eigen::MatrixXd probs;
  softmax_cross_entropy<double>(run<double>(params_.data(), inputs, nullptr), nullptr, probs);
  return probs;
}

Eigen::VectorXd Network::forward(const Eigen::VectorXd& input) const {
  return forward_batch(input);
}

std::vector<double> Network::forward(const OperatorTable& table) const {
  if (table.n_qubits() != config_.n_qubits) {
    throw DimensionError("network built for " + std::to_string(config_.n_qubits) +
                         " qubits, table has " + std::to_string(table.n_qubits()));
  }
  const Eigen::VectorXd p = forward(network_input(table));
  return std::vector<double>(p.data(), p.data() + p.size());
}

double Network::loss_and_gradient(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                                  std::vector<double>& grad, Precision precision) const {
  if (static_cast<std::size_t>(targets.rows()) != config_.vocab_size || targets.cols() != inputs.cols()) {
    throw DimensionError("target batch shape does not match the network");
  }
  grad.assign(params_.size(), 0.0);
  if (precision == Precision::kDouble) return gradient<double>(params_.data(), inputs, targets, grad.data());
  // Reused across calls so that each step does not fault in fresh pages.
  thread_local AlignedVector<float> p, g;
  p.assign(params_.begin(), params_.end());
  g.assign(params_.size(), 0.0f);
  const double loss = gradient<float>(p.data(), inputs.cast<float>(), targets.cast<float>(), g.data());
  std::copy(g.begin(), g.end(), grad.begin());
  return loss;
}

void Network::adam_step(std::span<const double> gradient, const AdamConfig& adam) {
  if (gradient.size() != params_.size()) throw DimensionError("gradient size mismatch");
  ++adam_t_;
  const double t = static_cast<double>(adam_t_);
  const double step = adam.learning_rate / (1.0 - std::pow(adam.beta1, t));
  const double inv_sqrt_c2 = 1.0 / std::sqrt(1.0 - std::pow(adam.beta2, t));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const double g = gradient[i];
    adam_m_[i] = adam.beta1 * adam_m_[i] + (1.0 - adam.beta1) * g;
    adam_v_[i] = adam.beta2 * adam_v_[i] + (1.0 - adam.beta2) * g * g;
    params_[i] -= step * adam_m_[i] / (std::sqrt(adam_v_[i]) * inv_sqrt_c2 + adam.epsilon);
  }
}

// Flushes subnormal floats to zero while alive. Late in training many Adam
// second moments and small activations fall below the float32 normal range,
// and subnormal arithmetic is an order of magnitude slower on x86.
class FlushSubnormals {
 public:
#if defined(__SSE__)
  FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushSubnormals() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;
#endif
};

// Float32 copies of the parameters and Adam moments for the single-precision
// training loop. Keeping the whole step in float halves the memory traffic of
// the optimizer update, which is bandwidth-bound at the default widths.
class SinglePrecisionTrainer {
 public:
  explicit SinglePrecisionTrainer(const Network& net)
      : params_(net.params_.begin(), net.params_.end()),
        m_(net.adam_m_.begin(), net.adam_m_.end()),
        v_(net.adam_v_.begin(), net.adam_v_.end()),
        grad_(net.params_.size()),
        t_(net.adam_t_) {}

  double step(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
              const AdamConfig& adam) {
    const double loss =
        net.gradient<float>(params_.data(), inputs.cast<float>(), targets.cast<float>(), grad_.data());
    if (!std::isfinite(loss)) {
      throw NumericalError("non-finite loss " + std::to_string(loss) + " at Adam step " + std::to_string(t_ + 1) +
                           " (batch of " + std::to_string(inputs.cols()) + ")");
    }
    ++t_;
    const double t = static_cast<double>(t_);
    const auto step = static_cast<float>(adam.learning_rate / (1.0 - std::pow(adam.beta1, t)));
    const auto inv_sqrt_c2 = static_cast<float>(1.0 / std::sqrt(1.0 - std::pow(adam.beta2, t)));
    const auto b1 = static_cast<float>(adam.beta1);
    const auto b2 = static_cast<float>(adam.beta2);
    const auto eps = static_cast<float>(adam.epsilon);
    for (std::size_t i = 0; i < params_.size(); ++i) {
      const float g = grad_[i];
      m_[i] = b1 * m_[i] + (1.0f - b1) * g;
      v_[i] = b2 * v_[i] + (1.0f - b2) * g * g;
      params_[i] -= step * m_[i] / (std::sqrt(v_[i]) * inv_sqrt_c2 + eps);
    }
    return loss;
  }

  void store(Network& net) const {
    std::copy(params_.begin(), params_.end(), net.params_.begin());
    std::copy(m_.begin(), m_.end(), net.adam_m_.begin());
    std::copy(v_.begin(), v_.end(), net.adam_v_.begin());
    net.adam_t_ = t_;
  }

 private:
  AlignedVector<float> params_, m_, v_, grad_;
  std::uint64_t t_;
};

double Network::train_step(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                           const AdamConfig& adam, Precision precision) {
  thread_local std::vector<double> gradient;
  const double loss = loss_and_gradient(inputs, targets, gradient, precision);
  if (!std::isfinite(loss)) {
    throw NumericalError("non-finite loss " + std::to_string(loss) + " at Adam step " +
                         std::to_string(adam_t_ + 1) + " (batch of " + std::to_string(inputs.cols()) +
                         "); parameters left unchanged");
  }
  adam_step(gradient, adam);
  return loss;
}

void check_compatible(const Network& net, std::size_t n_qubits, std::size_t vocab_size) {
  if (net.vocab_size() != vocab_size) {
    throw DimensionError("model vocabulary size " + std::to_string(net.vocab_size()) +
                         " does not match requested vocabulary size " + std::to_string(vocab_size));
  }
  if (net.n_qubits() != n_qubits) {
    throw DimensionError("model built for " + std::to_string(net.n_qubits()) +
                         " qubits, target has " + std::to_string(n_qubits));
  }
}

namespace {

void fill_batch(const Dataset& data, std::span<const std::size_t> rows, Eigen::MatrixXd& inputs,
                Eigen::MatrixXd& targets) {
  const auto b = static_cast<Eigen::Index>(rows.size());
  inputs.resize(static_cast<Eigen::Index>(data.input_doubles()), b);
  targets.setZero(static_cast<Eigen::Index>(data.vocab_size()), b);
  for (Eigen::Index col = 0; col < b; ++col) {
    const std::size_t row = rows[static_cast<std::size_t>(col)];
    network_input_from_interleaved(data.input(row), inputs.col(col));
    const auto t = data.target(row);
    double hot = 0.0;
    for (std::uint8_t v : t) hot += v ? 1.0 : 0.0;
    if (hot == 0.0) throw InvalidArgument("training pair " + std::to_string(row) + " has no hot entry");
    for (std::size_t g = 0; g < t.size(); ++g) {
      if (t[g]) targets(static_cast<Eigen::Index>(g), col) = 1.0 / hot;
    }
  }
}

}  // namespace

double dataset_loss(const Network& net, const Dataset& data, std::size_t batch_size) {
  if (data.empty()) throw InvalidArgument("empty dataset");
  check_compatible(net, data.n_qubits(), data.vocab_size());
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Eigen::MatrixXd inputs, targets, probs;
  double total = 0.0;
  for (std::size_t start = 0; start < rows.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, rows.size() - start);
    fill_batch(data, std::span<const std::size_t>(rows).subspan(start, n), inputs, targets);
    Eigen::MatrixXd logits = net.forward_batch(inputs);
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      for (Eigen::Index r = 0; r < logits.rows(); ++r) {
        if (targets(r, c) != 0.0) total -= targets(r, c) * std::log(logits(r, c));
      }
    }
  }
  return total / static_cast<double>(rows.size());
}

TrainLog train(Network& net, const Dataset& data, const TrainConfig& cfg,
               const std::function<void(std::size_t, double)>& on_epoch) {
  if (data.empty()) throw InvalidArgument("empty dataset");
  if (cfg.batch_size == 0) throw InvalidArgument("batch size must be positive");
  check_compatible(net, data.n_qubits(), data.vocab_size());
  TrainLog log;
  log.initial_loss = std::numeric_limits<double>::quiet_NaN();
  if (cfg.epochs == 0) return log;
  log.initial_loss = dataset_loss(net, data);

  Rng rng = make_rng(cfg.seed, 0x5348);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::MatrixXd inputs, targets;
  std::optional<SinglePrecisionTrainer> single;
  std::optional<FlushSubnormals> flush;
  if (cfg.precision == Precision::kSingle) {
    single.emplace(net);
    flush.emplace();
  }
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t n = std::min(cfg.batch_size, order.size() - start);
      fill_batch(data, std::span<const std::size_t>(order).subspan(start, n), inputs, targets);
      double loss = 0.0;
      if (single) {
        try {
          loss = single->step(net, inputs, targets, cfg.adam);
        } catch (const NumericalError&) {
          single->store(net);
          throw;
        }
      } else {
        loss = net.train_step(inputs, targets, cfg.adam, Precision::kDouble);
      }
      total += loss * static_cast<double>(n);
    }
    if (single) single->store(net);
    const double mean = total / static_cast<double>(order.size());
    log.epoch_loss.push_back(mean);
    if (on_epoch) on_epoch(epoch, mean);
  }
  return log;
}

void save_weights(const std::filesystem::path& path, const Network& net) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write weights " + path.string());
  Network mut = net;
  const bool mod = net.config().activation == ComplexActivation::kModReLU;
  out.write(kWeightsMagic, 4);
  detail::write_u32(out, kWeightsVersion);
  detail::write_u32(out, static_cast<std::uint32_t>(net.n_qubits()));
  detail::write_u32(out, static_cast<std::uint32_t>(net.vocab_size()));
  detail::write_u32(out, static_cast<std::uint32_t>(net.complex_layer_count() + 2));
  auto write_matrix = [&](const Eigen::Map<Eigen::MatrixXd>& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) detail::write_f64(out, m(r, c));
    }
  };
  auto write_vector = [&](const Eigen::Map<Eigen::VectorXd>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) detail::write_f64(out, v(i));
  };
  for (std::size_t k = 0; k < net.complex_layer_count(); ++k) {
    auto layer = mut.complex_layer(k);
    detail::write_u8(out, mod ? kLayerComplexModReLU : kLayerComplex);
    detail::write_u32(out, static_cast<std::uint32_t>(layer.weight_re.rows()));
    detail::write_u32(out, static_cast<std::uint32_t>(layer.weight_re.cols()));
    write_matrix(layer.weight_re);
    write_matrix(layer.weight_im);
    write_vector(layer.bias_re);
    write_vector(layer.bias_im);
    if (mod) write_vector(layer.mod_bias);
  }
  for (std::size_t k = 0; k < 2; ++k) {
    auto layer = mut.real_layer(k);
    detail::write_u8(out, kLayerReal);
    detail::write_u32(out, static_cast<std::uint32_t>(layer.weight.rows()));
    detail::write_u32(out, static_cast<std::uint32_t>(layer.weight.cols()));
    write_matrix(layer.weight);
    write_vector(layer.bias);
  }
  out.close();
  if (!out) throw IoError("write failed for " + path.string());
}

Network load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open weights " + path.string());
  detail::expect_magic(in, kWeightsMagic, "weights");
  const std::uint32_t version = detail::read_u32(in, "version");
  if (version != kWeightsVersion) throw FormatError("unsupported weights version " + std::to_string(version));
  const std::uint32_t n = detail::read_u32(in, "qubit count");
  const std::uint32_t vocab = detail::read_u32(in, "vocabulary size");
  const std::uint32_t layer_count = detail::read_u32(in, "layer count");
  if (n == 0 || n > 8 || layer_count < 3 || layer_count > 1024) {
    throw FormatError("corrupt weights header");
  }

  struct Raw {
    std::uint8_t type;
    std::uint32_t rows, cols;
    std::vector<double> values;  // file order
  };
  std::vector<Raw> layers;
  for (std::uint32_t k = 0; k < layer_count; ++k) {
    Raw raw;
    raw.type = detail::read_u8(in, "layer type");
    raw.rows = detail::read_u32(in, "layer rows");
    raw.cols = detail::read_u32(in, "layer cols");
    if (raw.rows == 0 || raw.cols == 0 || raw.rows > (1u << 20) || raw.cols > (1u << 20)) {
      throw FormatError("corrupt layer shape");
    }
    const std::size_t rc = std::size_t{raw.rows} * raw.cols;
    std::size_t count = 0;
    switch (raw.type) {
      case kLayerComplex: count = 2 * rc + 2 * raw.rows; break;
      case kLayerComplexModReLU: count = 2 * rc + 3 * raw.rows; break;
      case kLayerReal: count = rc + raw.rows; break;
      default: throw FormatError("unknown layer type " + std::to_string(raw.type));
    }
    raw.values.resize(count);
    for (double& v : raw.values) v = detail::read_f64(in, "layer parameters");
    layers.push_back(std::move(raw));
  }

  NetworkConfig cfg;
  cfg.n_qubits = n;
  cfg.vocab_size = vocab;
  cfg.complex_widths.clear();
  const std::size_t n_complex = layer_count - 2;
  for (std::size_t k = 0; k < n_complex; ++k) {
    if (layers[k].type == kLayerReal) throw FormatError("expected complex layer at position " + std::to_string(k));
    cfg.complex_widths.push_back(layers[k].rows);
  }
  cfg.activation = layers[0].type == kLayerComplexModReLU ? ComplexActivation::kModReLU
                                                          : ComplexActivation::kSplitCReLU;
  for (std::size_t k = 0; k < n_complex; ++k) {
    if ((layers[k].type == kLayerComplexModReLU) != (cfg.activation == ComplexActivation::kModReLU)) {
      throw FormatError("mixed complex activations");
    }
  }
  if (layers[n_complex].type != kLayerReal || layers[n_complex + 1].type != kLayerReal) {
    throw FormatError("expected two real layers at the end");
  }
  cfg.real_hidden = layers[n_complex].rows;
  if (layers[n_complex + 1].rows != vocab) {
    throw DimensionError("output layer has " + std::to_string(layers[n_complex + 1].rows) +
                         " rows, header vocabulary size is " + std::to_string(vocab));
  }

  Network net(cfg);
  // Shape chain check.
  std::size_t expected_cols = cfg.input_dim();
  for (std::size_t k = 0; k < n_complex; ++k) {
    if (layers[k].cols != expected_cols) throw DimensionError("layer " + std::to_string(k) + " input width mismatch");
    expected_cols = layers[k].rows;
  }
  expected_cols *= 2;
  for (std::size_t k = n_complex; k < layer_count; ++k) {
    if (layers[k].cols != expected_cols) throw DimensionError("layer " + std::to_string(k) + " input width mismatch");
    expected_cols = layers[k].rows;
  }

  auto read_matrix = [](const std::vector<double>& v, std::size_t& pos, Eigen::Map<Eigen::MatrixXd> m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = v[pos++];
    }
  };
  auto read_vector = [](const std::vector<double>& v, std::size_t& pos, Eigen::Map<Eigen::VectorXd> m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = v[pos++];
  };
  for (std::size_t k = 0; k < n_complex; ++k) {
    auto layer = net.complex_layer(k);
    std::size_t pos = 0;
    read_matrix(layers[k].values, pos, layer.weight_re);
    read_matrix(layers[k].values, pos, layer.weight_im);
    read_vector(layers[k].values, pos, layer.bias_re);
    read_vector(layers[k].values, pos, layer.bias_im);
    read_vector(layers[k].values, pos, layer.mod_bias);
  }
  for (std::size_t k = 0; k < 2; ++k) {
    auto layer = net.real_layer(k);
    std::size_t pos = 0;
    read_matrix(layers[n_complex + k].values, pos, layer.weight);
    read_vector(layers[n_complex + k].values, pos, layer.bias);
  }
  return net;
}

}  // namespace qcsynth
