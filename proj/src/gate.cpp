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

#include "qcsynth/gate.hpp"

#include <cmath>
#include <numbers>

#include "qcsynth/error.hpp"

namespace qcsynth {

std::string_view kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::X: return "X";
    case GateKind::V: return "V";
    case GateKind::VDG: return "VDG";
    case GateKind::H: return "H";
    case GateKind::CX: return "CX";
    case GateKind::CV: return "CV";
    case GateKind::CVDG: return "CVDG";
  }
  return "?";
}

std::optional<GateKind> kind_from_name(std::string_view name) {
  for (GateKind k : kAllGateKinds) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<GateKind> KindSet::kinds() const {
  std::vector<GateKind> out;
  for (GateKind k : kAllGateKinds) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

KindSet parse_kind_set(std::string_view text) {
  KindSet set;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      auto kind = kind_from_name(item);
      if (!kind) throw InvalidArgument("unknown gate kind '" + std::string(item) + "'");
      set.insert(*kind);
    }
    pos = comma + 1;
  }
  if (set.empty()) throw InvalidArgument("empty gate kind set");
  return set;
}

std::string to_string(KindSet kinds) {
  std::string out;
  for (GateKind k : kinds.kinds()) {
    if (!out.empty()) out += ',';
    out += kind_name(k);
  }
  return out;
}

GateInstance GateInstance::single(GateKind kind, std::uint32_t target) {
  if (is_controlled(kind)) {
    throw InvalidArgument(std::string(kind_name(kind)) + " needs a control qubit");
  }
  return GateInstance{kind, std::nullopt, target};
}

GateInstance GateInstance::controlled(GateKind kind, std::uint32_t control,
                                      std::uint32_t target) {
  if (!is_controlled(kind)) {
    throw InvalidArgument(std::string(kind_name(kind)) + " takes no control qubit");
  }
  if (control == target) throw InvalidArgument("control equals target");
  return GateInstance{kind, control, target};
}

void GateInstance::validate(std::size_t n_qubits) const {
  if (is_controlled(kind) != control.has_value()) {
    throw InvalidArgument("bad arity for " + std::string(kind_name(kind)));
  }
  if (target >= n_qubits || (control && *control >= n_qubits)) {
    throw InvalidArgument("qubit index out of range in " + to_string(*this) +
                          " (n=" + std::to_string(n_qubits) + ")");
  }
  if (control && *control == target) {
    throw InvalidArgument("control equals target in " + to_string(*this));
  }
}

bool shares_qubit(const GateInstance& a, const GateInstance& b) {
  if (a.touches(b.target)) return true;
  return b.control && a.touches(*b.control);
}

GateKind inverse_kind(GateKind kind) {
  switch (kind) {
    case GateKind::V: return GateKind::VDG;
    case GateKind::VDG: return GateKind::V;
    case GateKind::CV: return GateKind::CVDG;
    case GateKind::CVDG: return GateKind::CV;
    default: return kind;
  }
}

GateInstance inverse_of(const GateInstance& g) {
  GateInstance inv = g;
  inv.kind = inverse_kind(g.kind);
  return inv;
}

std::string to_string(const GateInstance& g) {
  std::string out(kind_name(g.kind));
  out += '(';
  if (g.control) {
    out += std::to_string(*g.control);
    out += ',';
  }
  out += std::to_string(g.target);
  out += ')';
  return out;
}

std::array<Complex, 4> target_operator(GateKind kind) {
  using namespace std::complex_literals;
  const Complex v_coef = (1.0 + 1.0i) / 2.0;
  const Complex vdg_coef = (1.0 - 1.0i) / 2.0;
  const double h = std::numbers::sqrt2 / 2.0;
  switch (kind) {
    case GateKind::X:
    case GateKind::CX:
      return {0.0, 1.0, 1.0, 0.0};
    case GateKind::V:
    case GateKind::CV:
      return {v_coef, v_coef * -1.0i, v_coef * -1.0i, v_coef};
    case GateKind::VDG:
    case GateKind::CVDG:
      return {vdg_coef, vdg_coef * 1.0i, vdg_coef * 1.0i, vdg_coef};
    case GateKind::H:
      return {h, h, h, -h};
  }
  return {1.0, 0.0, 0.0, 1.0};
}

GateMatrix matrix_of(GateKind kind) {
  const auto op = target_operator(kind);
  if (!is_controlled(kind)) return GateMatrix{2, {op[0], op[1], op[2], op[3]}};
  GateMatrix m{4, std::vector<Complex>(16, 0.0)};
  m.entries[0 * 4 + 0] = 1.0;
  m.entries[1 * 4 + 1] = 1.0;
  m.entries[2 * 4 + 2] = op[0];
  m.entries[2 * 4 + 3] = op[1];
  m.entries[3 * 4 + 2] = op[2];
  m.entries[3 * 4 + 3] = op[3];
  return m;
}

GateVocabulary::GateVocabulary(std::size_t n_qubits, KindSet kinds)
    : n_qubits_(n_qubits), kinds_(kinds) {
  if (n_qubits == 0) throw InvalidArgument("vocabulary needs at least one qubit");
  if (kinds.empty()) throw InvalidArgument("empty gate kind set");
  const auto n = static_cast<std::uint32_t>(n_qubits);
  for (GateKind k : kinds.kinds()) {
    if (is_controlled(k)) {
      for (std::uint32_t c = 0; c < n; ++c) {
        for (std::uint32_t t = 0; t < n; ++t) {
          if (c != t) entries_.push_back(GateInstance{k, c, t});
        }
      }
    } else {
      for (std::uint32_t t = 0; t < n; ++t) entries_.push_back(GateInstance{k, std::nullopt, t});
    }
  }
  lookup_.assign(kAllGateKinds.size() * n_qubits * n_qubits, 0);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    lookup_[slot(entries_[i])] = static_cast<std::uint32_t>(i + 1);
  }
  inverse_.reserve(entries_.size());
  for (const auto& g : entries_) inverse_.push_back(index_of(inverse_of(g)));
}

std::size_t GateVocabulary::slot(const GateInstance& g) const {
  const std::size_t c = g.control ? *g.control : g.target;
  return (static_cast<std::size_t>(g.kind) * n_qubits_ + c) * n_qubits_ + g.target;
}

std::optional<std::size_t> GateVocabulary::index_of(const GateInstance& g) const {
  if (g.target >= n_qubits_ || (g.control && *g.control >= n_qubits_)) return std::nullopt;
  if (is_controlled(g.kind) != g.control.has_value()) return std::nullopt;
  const std::uint32_t v = lookup_[slot(g)];
  if (v == 0) return std::nullopt;
  return v - 1;
}

GateVocabulary build_vocabulary(std::size_t n_qubits, KindSet kinds) {
  return GateVocabulary(n_qubits, kinds);
}

}  // namespace qcsynth
