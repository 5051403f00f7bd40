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

// Primitive gates, their matrices, and the indexed gate vocabulary.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcsynth {

using Complex = std::complex<double>;

enum class GateKind : std::uint8_t { X = 0, V, VDG, H, CX, CV, CVDG };

inline constexpr std::array<GateKind, 7> kAllGateKinds = {
    GateKind::X,  GateKind::V,  GateKind::VDG, GateKind::H,
    GateKind::CX, GateKind::CV, GateKind::CVDG};

constexpr bool is_controlled(GateKind kind) {
  return kind == GateKind::CX || kind == GateKind::CV || kind == GateKind::CVDG;
}

/// Text token name, e.g. "CVDG".
std::string_view kind_name(GateKind kind);
std::optional<GateKind> kind_from_name(std::string_view name);

/// Set of gate kinds, stored as a bitmask with bit i = GateKind value i.
/// The mask is what the dataset file header records.
class KindSet {
 public:
  constexpr KindSet() = default;
  constexpr KindSet(std::initializer_list<GateKind> kinds) {
    for (GateKind k : kinds) insert(k);
  }

  static constexpr KindSet from_mask(std::uint8_t mask) {
    KindSet s;
    s.mask_ = static_cast<std::uint8_t>(mask & 0x7f);
    return s;
  }

  constexpr void insert(GateKind k) {
    mask_ = static_cast<std::uint8_t>(mask_ | (1u << static_cast<unsigned>(k)));
  }
  constexpr bool contains(GateKind k) const {
    return (mask_ >> static_cast<unsigned>(k)) & 1u;
  }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint8_t mask() const { return mask_; }

  /// Kinds in enumeration order.
  std::vector<GateKind> kinds() const;

  friend constexpr bool operator==(KindSet, KindSet) = default;

 private:
  std::uint8_t mask_ = 0;
};

/// {CX, CV, CVDG}: the synthesis vocabulary.
inline constexpr KindSet kSynthesisKinds{GateKind::CX, GateKind::CV, GateKind::CVDG};

/// Parses a comma-separated kind list such as "CX,CV,CVDG".
KindSet parse_kind_set(std::string_view text);
std::string to_string(KindSet kinds);

/// One gate applied to concrete qubits. `control` is set iff the kind is
/// controlled.
struct GateInstance {
  GateKind kind = GateKind::X;
  std::optional<std::uint32_t> control;
  std::uint32_t target = 0;

  static GateInstance single(GateKind kind, std::uint32_t target);
  static GateInstance controlled(GateKind kind, std::uint32_t control,
                                 std::uint32_t target);

  /// Throws InvalidArgument when operands are inconsistent with the kind or
  /// out of range for an n-qubit register.
  void validate(std::size_t n_qubits) const;

  bool touches(std::uint32_t qubit) const {
    return target == qubit || (control && *control == qubit);
  }

  friend bool operator==(const GateInstance&, const GateInstance&) = default;
};

bool shares_qubit(const GateInstance& a, const GateInstance& b);

/// Conjugate transpose as a gate: V<->VDG, CV<->CVDG, others self-inverse.
GateKind inverse_kind(GateKind kind);
GateInstance inverse_of(const GateInstance& g);

/// Token form, e.g. "CV(0,3)" or "H(1)".
std::string to_string(const GateInstance& g);

/// Dense row-major square matrix of a gate kind: 2x2 for single-qubit kinds,
/// 4x4 for controlled kinds with basis order |control target>.
struct GateMatrix {
  std::size_t dim = 0;
  std::vector<Complex> entries;

  Complex operator()(std::size_t row, std::size_t col) const {
    return entries[row * dim + col];
  }
};

GateMatrix matrix_of(GateKind kind);

/// 2x2 operator applied to the target qubit (for controlled kinds, the
/// operator applied when the control is 1).
std::array<Complex, 4> target_operator(GateKind kind);

/// Ordered gate vocabulary on n qubits: by kind, then control, then target.
class GateVocabulary {
 public:
  GateVocabulary(std::size_t n_qubits, KindSet kinds);

  std::size_t n_qubits() const { return n_qubits_; }
  KindSet kinds() const { return kinds_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<GateInstance>& entries() const { return entries_; }
  const GateInstance& operator[](std::size_t i) const { return entries_[i]; }

  std::optional<std::size_t> index_of(const GateInstance& g) const;

  /// Index of inverse_of(entries()[i]), always present in a closed vocabulary.
  std::optional<std::size_t> inverse_index(std::size_t i) const {
    return inverse_[i];
  }

 private:
  std::size_t slot(const GateInstance& g) const;

  std::size_t n_qubits_;
  KindSet kinds_;
  std::vector<GateInstance> entries_;
  // Dense lookup: kind * n * n + control * n + target -> index + 1 (0 = absent).
  std::vector<std::uint32_t> lookup_;
  std::vector<std::optional<std::size_t>> inverse_;
};

GateVocabulary build_vocabulary(std::size_t n_qubits, KindSet kinds);

}  // namespace qcsynth
