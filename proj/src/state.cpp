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

#include "qcsynth/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qcsynth/circuit.hpp"
#include "qcsynth/error.hpp"

namespace qcsynth {

namespace {

void apply_operator(std::span<Complex> amps, std::size_t n_qubits, const GateInstance& g,
                    const std::array<Complex, 4>& op) {
  const std::size_t tbit = bit_of_qubit(n_qubits, g.target);
  const std::size_t cbit = g.control ? bit_of_qubit(n_qubits, *g.control) : 0;
  const std::size_t dim = amps.size();
  for (std::size_t j = 0; j < dim; ++j) {
    if (j & tbit) continue;
    if (cbit && !(j & cbit)) continue;
    const std::size_t j1 = j | tbit;
    const Complex a = amps[j];
    const Complex b = amps[j1];
    amps[j] = op[0] * a + op[1] * b;
    amps[j1] = op[2] * a + op[3] * b;
  }
}

std::size_t dim_of(std::size_t n_qubits) { return std::size_t{1} << n_qubits; }

Complex unit_phase_of_largest(const OperatorTable& t) {
  std::size_t best = 0;
  double best_mag = -1.0;
  const auto flat = t.flat();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double m = std::abs(flat[i]);
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  if (best_mag <= 0.0) return 1.0;
  return flat[best] / best_mag;
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != dim_of(n_qubits)) {
    throw DimensionError("state vector needs 2^n amplitudes");
  }
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const Complex& a : amplitudes_) s += std::norm(a);
  return s;
}

StateVector basis_state(std::size_t j, std::size_t n_qubits) {
  const std::size_t dim = dim_of(n_qubits);
  if (j >= dim) {
    throw InvalidArgument("basis index " + std::to_string(j) + " out of range for " +
                          std::to_string(n_qubits) + " qubits");
  }
  std::vector<Complex> amps(dim, 0.0);
  amps[j] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

void apply_gate_inplace(std::span<Complex> amplitudes, std::size_t n_qubits,
                        const GateInstance& g) {
  apply_operator(amplitudes, n_qubits, g, target_operator(g.kind));
}

StateVector apply_gate(StateVector s, const GateInstance& g) {
  g.validate(s.n_qubits());
  apply_gate_inplace(s.amplitudes(), s.n_qubits(), g);
  return s;
}

OperatorTable::OperatorTable(std::size_t n_qubits, std::vector<Complex> entries)
    : n_qubits_(n_qubits), dim_(dim_of(n_qubits)), entries_(std::move(entries)) {
  if (entries_.size() != dim_ * dim_) {
    throw DimensionError("operator table needs 4^n entries");
  }
}

OperatorTable OperatorTable::identity(std::size_t n_qubits) {
  const std::size_t dim = dim_of(n_qubits);
  std::vector<Complex> e(dim * dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) e[j * dim + j] = 1.0;
  return OperatorTable(n_qubits, std::move(e));
}

void apply_gate_table_inplace(OperatorTable& t, const GateInstance& g) {
  const auto op = target_operator(g.kind);
  for (std::size_t j = 0; j < t.dim(); ++j) apply_operator(t.column(j), t.n_qubits(), g, op);
}

void apply_inverse_table_inplace(OperatorTable& t, const GateInstance& g) {
  const auto op = target_operator(inverse_kind(g.kind));
  for (std::size_t j = 0; j < t.dim(); ++j) apply_operator(t.column(j), t.n_qubits(), g, op);
}

OperatorTable apply_gate_table(OperatorTable t, const GateInstance& g) {
  g.validate(t.n_qubits());
  apply_gate_table_inplace(t, g);
  return t;
}

OperatorTable apply_inverse_table(OperatorTable t, const GateInstance& g) {
  g.validate(t.n_qubits());
  apply_inverse_table_inplace(t, g);
  return t;
}

OperatorTable circuit_unitary(const Circuit& c) {
  OperatorTable t = OperatorTable::identity(c.n_qubits());
  for (const auto& g : c.gates()) apply_gate_table_inplace(t, g);
  return t;
}

bool is_identity(const OperatorTable& t, double tolerance, bool allow_global_phase) {
  if (!(tolerance > 0.0)) throw InvalidArgument("identity tolerance must be positive");
  const Complex phase = allow_global_phase ? std::conj(unit_phase_of_largest(t)) : Complex{1.0};
  for (std::size_t col = 0; col < t.dim(); ++col) {
    const auto c = t.column(col);
    for (std::size_t row = 0; row < t.dim(); ++row) {
      const Complex expected = row == col ? 1.0 : 0.0;
      if (std::abs(c[row] * phase - expected) > tolerance) return false;
    }
  }
  return true;
}

double max_abs_diff(const OperatorTable& a, const OperatorTable& b, bool allow_global_phase) {
  if (a.dim() != b.dim()) throw DimensionError("table sizes differ");
  Complex phase = 1.0;
  if (allow_global_phase) {
    // Rotate a onto b at b's dominant entry.
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < b.flat().size(); ++i) {
      if (std::abs(b.flat()[i]) > best_mag) {
        best_mag = std::abs(b.flat()[i]);
        best = i;
      }
    }
    const Complex av = a.flat()[best];
    const Complex bv = b.flat()[best];
    if (std::abs(av) > 0.0 && std::abs(bv) > 0.0) {
      phase = (bv / std::abs(bv)) / (av / std::abs(av));
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i) {
    worst = std::max(worst, std::abs(a.flat()[i] * phase - b.flat()[i]));
  }
  return worst;
}

double orthonormality_error(const OperatorTable& t) {
  double worst = 0.0;
  for (std::size_t i = 0; i < t.dim(); ++i) {
    const auto ci = t.column(i);
    for (std::size_t j = i; j < t.dim(); ++j) {
      const auto cj = t.column(j);
      Complex dot = 0.0;
      for (std::size_t k = 0; k < t.dim(); ++k) dot += std::conj(ci[k]) * cj[k];
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

std::string to_debug_string(const OperatorTable& t) {
  std::string out;
  char buf[64];
  for (std::size_t row = 0; row < t.dim(); ++row) {
    for (std::size_t col = 0; col < t.dim(); ++col) {
      if (col) out += ' ';
      const Complex v = t(row, col);
      std::snprintf(buf, sizeof(buf), "%.12e%+.12ej", v.real(), v.imag());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace qcsynth
