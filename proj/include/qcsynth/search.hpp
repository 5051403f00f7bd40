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

// Backward synthesis: starting from the target table, repeatedly un-apply a
// chosen gate until the residual is the identity. The chosen gates, read in
// reverse, form a circuit realizing the target.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qcsynth/circuit.hpp"
#include "qcsynth/cvnn.hpp"
#include "qcsynth/gate.hpp"
#include "qcsynth/rng.hpp"
#include "qcsynth/spec.hpp"
#include "qcsynth/state.hpp"

namespace qcsynth {

/// Scores every vocabulary entry for the current residual.
class GatePolicy {
 public:
  virtual ~GatePolicy() = default;
  virtual std::size_t n_qubits() const = 0;
  virtual std::size_t vocab_size() const = 0;
  /// Writes one non-negative probability per vocabulary entry into `out`.
  virtual void probabilities(const OperatorTable& residual, std::span<double> out) const = 0;
};

/// Adapts a trained network to GatePolicy.
class NetworkPolicy final : public GatePolicy {
 public:
  explicit NetworkPolicy(const Network& net) : net_(net) {}
  std::size_t n_qubits() const override { return net_.n_qubits(); }
  std::size_t vocab_size() const override { return net_.vocab_size(); }
  void probabilities(const OperatorTable& residual, std::span<double> out) const override;

 private:
  const Network& net_;
};

struct SearchConfig {
  /// Gates per attempt. 0 selects the default: twice the target's reference
  /// cost (at least 12) when known, otherwise 30.
  std::size_t max_depth = 0;
  std::size_t max_restarts = 1000;
  double tolerance = 1e-6;
  double temperature = 1.0;
  /// Never emit the exact inverse of the previous gate.
  bool guard_inverse = true;
  bool allow_global_phase = false;
  /// Run simplify() on a found circuit before it is verified and returned.
  bool simplify = true;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t depth_for(const TargetStates& target) const;
};

enum class SearchOutcome { kFound, kExhausted };

std::string_view outcome_name(SearchOutcome o);

struct SearchResult {
  SearchOutcome outcome = SearchOutcome::kExhausted;
  /// Execution order. Empty unless found.
  Circuit circuit;
  /// Failed attempts before the successful one (or all attempts when
  /// exhausted).
  std::size_t restarts = 0;
  double elapsed_seconds = 0.0;
  /// Number of gates un-applied across all attempts.
  std::uint64_t gates_evaluated = 0;

  bool found() const { return outcome == SearchOutcome::kFound; }
};

/// Uniformly random gates from `vocab`. Restarts count attempts whose
/// max_depth gates never reached the identity.
SearchResult random_search(const TargetStates& target, const GateVocabulary& vocab,
                           const SearchConfig& cfg, Rng& rng);

/// Gates sampled from the policy's probabilities sharpened by 1/temperature.
/// Throws DimensionError if the policy does not fit the target.
SearchResult guided_search(const TargetStates& target, const GateVocabulary& vocab,
                           const GatePolicy& policy, const SearchConfig& cfg, Rng& rng);

/// Pushes every basis state forward through `circuit` and compares the
/// images to the target columns. Returns the inputs whose images differ.
std::vector<std::size_t> mismatched_inputs(const Circuit& circuit, const TargetStates& target,
                                           double tolerance, bool allow_global_phase = false);

/// Re-simulates a found circuit; throws VerificationError on mismatch.
SearchResult verified(SearchResult result, const TargetStates& target, const SearchConfig& cfg);

/// Search with the verification pass applied. `policy` null selects random
/// search.
SearchResult run_with_verification(const TargetStates& target, const GateVocabulary& vocab,
                                   const GatePolicy* policy, const SearchConfig& cfg, Rng& rng);

/// vocab_size^depth as a double (the count of distinct gate sequences).
double search_space_size(std::size_t vocab_size, std::size_t depth);

}  // namespace qcsynth
