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

// Statevector and operator-table simulation.
//
// Bit convention: qubit 0 is the top circuit wire and the most significant
// bit of a basis index, so on n qubits qubit q lives at bit (n - 1 - q).

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qcsynth/gate.hpp"

namespace qcsynth {

class Circuit;

inline std::size_t bit_of_qubit(std::size_t n_qubits, std::size_t qubit) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

/// 2^n complex amplitudes.
class StateVector {
 public:
  StateVector() = default;
  StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  std::span<Complex> amplitudes() { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm_squared() const;

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Complex> amplitudes_;
};

/// |j> on n qubits. Throws InvalidArgument if j >= 2^n.
StateVector basis_state(std::size_t j, std::size_t n_qubits);

/// In-place gate application on a 2^n amplitude span; O(2^n), no dense
/// embedding is materialized.
void apply_gate_inplace(std::span<Complex> amplitudes, std::size_t n_qubits,
                        const GateInstance& g);

StateVector apply_gate(StateVector s, const GateInstance& g);

/// The 2^n images of the computational basis under an operator. Column j is
/// the image of |j>; storage is column-major, so columns are contiguous and
/// flat() is the column-major flattening.
class OperatorTable {
 public:
  OperatorTable() = default;
  /// `entries` is column-major, size 4^n.
  OperatorTable(std::size_t n_qubits, std::vector<Complex> entries);

  static OperatorTable identity(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return dim_; }

  Complex operator()(std::size_t row, std::size_t col) const {
    return entries_[col * dim_ + row];
  }
  Complex& operator()(std::size_t row, std::size_t col) {
    return entries_[col * dim_ + row];
  }

  std::span<const Complex> column(std::size_t j) const {
    return std::span<const Complex>(entries_).subspan(j * dim_, dim_);
  }
  std::span<Complex> column(std::size_t j) {
    return std::span<Complex>(entries_).subspan(j * dim_, dim_);
  }

  std::span<const Complex> flat() const { return entries_; }

  friend bool operator==(const OperatorTable&, const OperatorTable&) = default;

 private:
  std::size_t n_qubits_ = 0;
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

void apply_gate_table_inplace(OperatorTable& t, const GateInstance& g);
void apply_inverse_table_inplace(OperatorTable& t, const GateInstance& g);

OperatorTable apply_gate_table(OperatorTable t, const GateInstance& g);
OperatorTable apply_inverse_table(OperatorTable t, const GateInstance& g);

/// Identity table pushed through every gate in execution order.
OperatorTable circuit_unitary(const Circuit& c);

struct IdentityCheck {
  double tolerance = 1e-6;
  /// Divide out the phase of the largest-magnitude entry before comparing.
  bool allow_global_phase = false;
};

/// True iff max |t - I| <= tolerance (after optional phase factoring).
bool is_identity(const OperatorTable& t, double tolerance, bool allow_global_phase = false);
inline bool is_identity(const OperatorTable& t, IdentityCheck check) {
  return is_identity(t, check.tolerance, check.allow_global_phase);
}

/// max |a - b| elementwise, optionally after aligning the global phase of
/// `a` to `b` at b's largest-magnitude entry.
double max_abs_diff(const OperatorTable& a, const OperatorTable& b,
                    bool allow_global_phase = false);

/// max over column pairs of |<c_i, c_j> - delta_ij|.
double orthonormality_error(const OperatorTable& t);

/// Row-major debug dump, one row per line, entries `%.12e%+.12ej`.
std::string to_debug_string(const OperatorTable& t);

}  // namespace qcsynth
