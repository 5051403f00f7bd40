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

// Synthesis targets: classical reversible truth tables and complex amplitude
// tables, plus the built-in 4-qubit benchmark gates.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcsynth/state.hpp"

namespace qcsynth {

/// Output bit pattern for each of the 2^n input patterns (MSB = qubit 0).
struct TruthTableSpec {
  std::size_t n_qubits = 0;
  std::vector<std::uint32_t> outputs;

  /// Throws SpecError naming the colliding inputs when outputs repeat.
  void validate() const;
};

/// The images of the computational basis a synthesized circuit must produce.
struct TargetStates {
  OperatorTable table;
  std::string name;
  /// Best known quantum cost, when one is published for a benchmark; used to
  /// size the default search depth.
  std::optional<std::size_t> reference_cost;

  std::size_t n_qubits() const { return table.n_qubits(); }
};

/// HNG, PFAG, IG, MIG, OTG, MKG, TSG.
const std::vector<std::string>& benchmark_names();

/// Evaluates the benchmark's output formulas over the 16 inputs
/// (A, B, C, D) = (q0, q1, q2, q3). Throws InvalidArgument for an unknown
/// name and SpecError if the formulas are not a bijection.
TruthTableSpec benchmark(std::string_view name);

/// Lowest quantum cost achieved for the benchmark in the reference results.
std::optional<std::size_t> benchmark_reference_cost(std::string_view name);

/// Column j = basis_state(outputs[j]).
TargetStates spec_to_targets(const TruthTableSpec& spec);

TargetStates benchmark_targets(std::string_view name);

/// Parses a `# truthtable n=<q>` or `# amplitudes n=<q>` document.
/// Amplitude tables must be orthonormal within 1e-6.
TargetStates parse_spec(std::string_view text);
TargetStates load_spec(const std::filesystem::path& path);

/// Inverse of parse_spec for permutation targets / arbitrary tables.
std::string serialize_truth_table(const TruthTableSpec& spec);
std::string serialize_amplitudes(const OperatorTable& table);

std::string bit_string(std::uint32_t value, std::size_t width);

}  // namespace qcsynth
