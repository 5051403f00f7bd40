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

// Complex-valued classifier: a stack of complex dense layers, a bridge that
// concatenates real and imaginary parts, and two real dense layers ending in
// a softmax over the gate vocabulary.
//
// Complex parameters are trained as pairs of real parameters. A complex
// layer with weights A + iB acting on z = x + iy computes
// (Ax - By) + i(Bx + Ay); activations are stored stacked as
// [real parts; imaginary parts], one column per sample.

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qcsynth/dataset.hpp"
#include "qcsynth/state.hpp"

namespace qcsynth {

/// Parameter storage with a fixed base alignment. Eigen picks its vectorized
/// reduction order from the data address, so a fixed alignment keeps training
/// bitwise repeatable within one process.
template <typename T>
using AlignedVector = std::vector<T, Eigen::aligned_allocator<T>>;

enum class ComplexActivation : std::uint8_t {
  /// ReLU on the real and imaginary parts independently.
  kSplitCReLU = 0,
  /// z -> ReLU(|z| + b) z / |z| with a learned real offset b per unit.
  kModReLU = 1,
};

std::string_view activation_name(ComplexActivation a);
ComplexActivation parse_activation(std::string_view name);

struct NetworkConfig {
  std::size_t n_qubits = 4;
  std::size_t vocab_size = 36;
  std::vector<std::size_t> complex_widths = std::vector<std::size_t>(10, 256);
  /// Width of the first real layer; the second real layer has vocab_size
  /// outputs.
  std::size_t real_hidden = 512;
  ComplexActivation activation = ComplexActivation::kSplitCReLU;
  std::uint64_t seed = 0;

  /// 4^n complex inputs (the flattened operator table).
  std::size_t input_dim() const { return std::size_t{1} << (2 * n_qubits); }
  void validate() const;
};

/// Arithmetic used for the forward and backward passes during training.
/// Network::train_step keeps parameters and optimizer state in double either
/// way. train() with kSingle runs the whole loop, Adam update included, on
/// float copies and writes them back after every epoch.
enum class Precision : std::uint8_t { kDouble, kSingle };

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Stacked network inputs ([re; im], one column per sample) for a table.
Eigen::VectorXd network_input(const OperatorTable& table);
/// Same, from the interleaved (re, im) layout of a dataset row.
void network_input_from_interleaved(std::span<const double> interleaved,
                                    Eigen::Ref<Eigen::VectorXd> out);

/// -sum_g q_g log(pred_g) with q = target / sum(target).
double cross_entropy(std::span<const double> pred, std::span<const std::uint8_t> target);

class Network {
 public:
  /// Dense layer parameters viewed in place inside the flat parameter vector.
  struct ComplexLayerView {
    Eigen::Map<Eigen::MatrixXd> weight_re;
    Eigen::Map<Eigen::MatrixXd> weight_im;
    Eigen::Map<Eigen::VectorXd> bias_re;
    Eigen::Map<Eigen::VectorXd> bias_im;
    /// Empty unless the activation is modReLU.
    Eigen::Map<Eigen::VectorXd> mod_bias;
  };
  struct RealLayerView {
    Eigen::Map<Eigen::MatrixXd> weight;
    Eigen::Map<Eigen::VectorXd> bias;
  };

  /// Random initialization: weights N(0, 1/fan_in) (real and imaginary parts
  /// drawn independently), biases zero.
  explicit Network(NetworkConfig config);

  const NetworkConfig& config() const { return config_; }
  std::size_t n_qubits() const { return config_.n_qubits; }
  std::size_t vocab_size() const { return config_.vocab_size; }
  std::size_t complex_layer_count() const { return config_.complex_widths.size(); }

  ComplexLayerView complex_layer(std::size_t i);
  RealLayerView real_layer(std::size_t i);

  /// All trainable parameters, flattened.
  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  /// Probabilities for one stacked input of size 2 * input_dim.
  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  std::vector<double> forward(const OperatorTable& table) const;
  /// One column of probabilities per input column.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& inputs) const;

  /// Mean cross-entropy over the batch; `targets` holds the normalized
  /// target distribution q per column. Fills `gradient` (size of
  /// parameters()) with d loss / d parameter.
  double loss_and_gradient(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                           std::vector<double>& gradient,
                           Precision precision = Precision::kDouble) const;

  /// One Adam update with the given gradient.
  void adam_step(std::span<const double> gradient, const AdamConfig& adam);

  /// loss_and_gradient + adam_step. Throws NumericalError on a non-finite
  /// loss without touching the parameters.
  double train_step(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                    const AdamConfig& adam, Precision precision = Precision::kDouble);

  std::uint64_t adam_steps() const { return adam_t_; }

 private:
  friend class SinglePrecisionTrainer;

  template <typename S>
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  template <typename S>
  struct Cache;

  void build_layout();
  template <typename S>
  Mat<S> run(const S* p, const Mat<S>& inputs, Cache<S>* cache) const;
  template <typename S>
  double gradient(const S* p, const Mat<S>& inputs, const Mat<S>& targets, S* grad) const;

  NetworkConfig config_;
  AlignedVector<double> params_;
  AlignedVector<double> adam_m_;
  AlignedVector<double> adam_v_;
  std::uint64_t adam_t_ = 0;

  struct Offsets {
    std::size_t rows = 0, cols = 0;
    std::size_t w_re = 0, w_im = 0, b_re = 0, b_im = 0, mod = 0;  // complex
    std::size_t w = 0, b = 0;                                     // real
  };
  std::vector<Offsets> complex_offsets_;
  std::vector<Offsets> real_offsets_;
};

struct TrainConfig {
  std::size_t batch_size = 64;
  std::size_t epochs = 40;
  AdamConfig adam;
  Precision precision = Precision::kSingle;
  std::uint64_t seed = 0;
};

struct TrainLog {
  /// Mean loss over the dataset before the first update (NaN if epochs = 0).
  double initial_loss = 0.0;
  /// Mean of the minibatch losses seen during each epoch.
  std::vector<double> epoch_loss;
};

/// Minibatch Adam over a reshuffled dataset each epoch.
TrainLog train(Network& net, const Dataset& data, const TrainConfig& cfg,
               const std::function<void(std::size_t epoch, double loss)>& on_epoch = {});

/// Mean loss of the network over a dataset.
double dataset_loss(const Network& net, const Dataset& data, std::size_t batch_size = 256);

void save_weights(const std::filesystem::path& path, const Network& net);
Network load_weights(const std::filesystem::path& path);

/// Throws DimensionError naming both sizes unless the network's output and
/// input dimensions fit the given vocabulary.
void check_compatible(const Network& net, std::size_t n_qubits, std::size_t vocab_size);

}  // namespace qcsynth
