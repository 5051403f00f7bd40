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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qcsynth/gate.hpp"

namespace qcsynth {

/// Gate sequence in execution order (left to right).
class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits = 0) : n_qubits_(n_qubits) {}
  /// Validates every gate against n_qubits.
  Circuit(std::size_t n_qubits, std::vector<GateInstance> gates);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<GateInstance>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  const GateInstance& operator[](std::size_t i) const { return gates_[i]; }

  void push_back(const GateInstance& g);
  void pop_back() { gates_.pop_back(); }

  Circuit reversed() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t n_qubits_;
  std::vector<GateInstance> gates_;
};

/// Dependency DAG: edge i -> j iff j is the next gate after i on some shared
/// qubit. Edges only point forward in sequence order.
class CircuitDag {
 public:
  explicit CircuitDag(std::size_t node_count) : successors_(node_count) {}

  std::size_t node_count() const { return successors_.size(); }
  const std::vector<std::size_t>& successors(std::size_t node) const {
    return successors_[node];
  }
  std::size_t edge_count() const;

  void add_edge(std::size_t from, std::size_t to);

  /// Nodes without outgoing edges, ascending.
  std::vector<std::size_t> frontier() const;

  bool is_acyclic() const;

 private:
  std::vector<std::vector<std::size_t>> successors_;
};

CircuitDag to_dag(const Circuit& c);

/// Number of gates with a control operand.
std::size_t quantum_cost(const Circuit& c);

/// Removes pairs (g, inverse_of(g)) whose intervening gates are all disjoint
/// from g's qubits, until no such pair remains.
Circuit eliminate_loops(const Circuit& c);

/// True iff appending g to c would create a pair eliminate_loops removes.
bool closes_loop(const Circuit& c, const GateInstance& g);

/// Sufficient condition for a * b == b * a. Gates on disjoint qubits
/// commute; so do X, V, VDG and their controlled forms whenever neither
/// gate's target is the other's control, since they all act on their target
/// as powers of V.
bool commutes(const GateInstance& a, const GateInstance& b);

/// Exact peephole reduction. Gates with the same operands are merged when
/// only commuting gates separate them: powers of V on one target add modulo
/// four (CV CV becomes CX, CX CV becomes CVDG, inverse pairs vanish) and H H
/// vanishes. Repeats until nothing merges. The unitary is unchanged and the
/// quantum cost never increases.
Circuit simplify(const Circuit& c);

enum class DedupMode { kSemantic, kSequence };

/// Equality key for corpus deduplication. Semantic keys hold the circuit
/// unitary rounded to 9 decimals; sequence keys hold the gate tokens.
class DedupKey {
 public:
  friend bool operator==(const DedupKey&, const DedupKey&) = default;
  std::size_t hash() const;

 private:
  friend DedupKey dedup_key(const Circuit&, DedupMode);
  std::vector<std::int64_t> values_;
};

struct DedupKeyHash {
  std::size_t operator()(const DedupKey& k) const { return k.hash(); }
};

/// Semantic mode requires n <= 6.
DedupKey dedup_key(const Circuit& c, DedupMode mode = DedupMode::kSemantic);

/// Parses comma- or newline-separated gate tokens. Lines starting with '#'
/// are comments.
Circuit parse_circuit(std::string_view text, std::size_t n_qubits);

/// "CV(0,3), CV(1,3), ..." form.
std::string to_string(const Circuit& c);

/// `# n=<qubits>` header plus one token per line.
std::string serialize_circuit_file(const Circuit& c);
Circuit parse_circuit_file(std::string_view text);

Circuit read_circuit_file(const std::filesystem::path& path);
void write_circuit_file(const std::filesystem::path& path, const Circuit& c);

}  // namespace qcsynth
