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

// Training data: random loop-free circuits and the (table, frontier) pairs
// peeled off them, plus the binary corpus format.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "qcsynth/circuit.hpp"
#include "qcsynth/gate.hpp"
#include "qcsynth/rng.hpp"
#include "qcsynth/state.hpp"

namespace qcsynth {

/// Network input (an operator table) and the multi-hot vector of every gate
/// that may legally be emitted next.
struct TrainingPair {
  OperatorTable input;
  std::vector<std::uint8_t> target;
};

struct CorpusConfig {
  std::size_t n_qubits = 4;
  KindSet kinds = kSynthesisKinds;
  /// Two-qubit gate count of every generated circuit.
  std::size_t circuit_cost = 10;
  std::size_t circuit_count = 100000;
  std::uint64_t seed = 0;
  DedupMode dedup = DedupMode::kSemantic;
  std::size_t jobs = 1;
};

/// Uniform gates from `vocab`, skipping any that would close a loop with the
/// circuit so far, until the quantum cost reaches `cost`.
Circuit random_circuit(const GateVocabulary& vocab, std::size_t cost, Rng& rng);

/// Largest frontier extract_pairs will enumerate subsets of.
inline constexpr std::size_t kMaxFrontier = 8;

/// Frontier peeling: for the remaining circuit with frontier T, one pair per
/// proper subset T' of T (input = table with T' removed, target = T \ T'),
/// then T is removed and the process repeats until nothing is left.
std::vector<TrainingPair> extract_pairs(const Circuit& c, const GateVocabulary& vocab);

/// In-memory corpus in file layout: per pair 2*4^n doubles (interleaved
/// re, im; column-major table) and vocab_size target bytes.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t n_qubits, KindSet kinds);

  std::size_t n_qubits() const { return n_qubits_; }
  KindSet kinds() const { return kinds_; }
  std::size_t vocab_size() const { return vocab_size_; }
  std::size_t input_doubles() const { return input_doubles_; }
  std::size_t size() const { return targets_.size() / (vocab_size_ ? vocab_size_ : 1); }
  bool empty() const { return targets_.empty(); }

  void add(const TrainingPair& pair);
  void reserve(std::size_t pairs);

  std::span<const double> input(std::size_t i) const {
    return std::span<const double>(inputs_).subspan(i * input_doubles_, input_doubles_);
  }
  std::span<const std::uint8_t> target(std::size_t i) const {
    return std::span<const std::uint8_t>(targets_).subspan(i * vocab_size_, vocab_size_);
  }

 private:
  std::size_t n_qubits_ = 0;
  KindSet kinds_;
  std::size_t vocab_size_ = 0;
  std::size_t input_doubles_ = 0;
  std::vector<double> inputs_;
  std::vector<std::uint8_t> targets_;
};

/// Streams pairs to an AQCD file; the pair count in the header is patched on
/// finish().
class DatasetWriter {
 public:
  DatasetWriter(const std::filesystem::path& path, std::size_t n_qubits, KindSet kinds);
  ~DatasetWriter();
  DatasetWriter(const DatasetWriter&) = delete;
  DatasetWriter& operator=(const DatasetWriter&) = delete;

  void write(const TrainingPair& pair);
  std::uint64_t count() const { return count_; }
  void finish();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t n_qubits_;
  std::size_t vocab_size_;
  std::uint64_t count_ = 0;
  bool finished_ = false;
};

void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

struct CorpusReport {
  std::size_t circuits = 0;
  std::size_t attempts = 0;
  std::size_t duplicates_rejected = 0;
  std::uint64_t pairs = 0;
  std::vector<std::string> warnings;
};

/// Generates cfg.circuit_count distinct circuits and writes all their pairs.
/// Candidate k draws from stream k of cfg.seed, so the file depends only on
/// the config and not on cfg.jobs. Gives up after 50x circuit_count attempts
/// with a shortfall warning.
CorpusReport generate_corpus(const CorpusConfig& cfg, const std::filesystem::path& out);

}  // namespace qcsynth
