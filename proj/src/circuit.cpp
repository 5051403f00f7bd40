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

#include "qcsynth/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qcsynth/error.hpp"
#include "qcsynth/state.hpp"

namespace qcsynth {

Circuit::Circuit(std::size_t n_qubits, std::vector<GateInstance> gates)
    : n_qubits_(n_qubits), gates_(std::move(gates)) {
  for (const auto& g : gates_) g.validate(n_qubits_);
}

void Circuit::push_back(const GateInstance& g) {
  g.validate(n_qubits_);
  gates_.push_back(g);
}

Circuit Circuit::reversed() const {
  Circuit out(n_qubits_);
  out.gates_.assign(gates_.rbegin(), gates_.rend());
  return out;
}

std::size_t CircuitDag::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : successors_) n += s.size();
  return n;
}

void CircuitDag::add_edge(std::size_t from, std::size_t to) {
  auto& s = successors_[from];
  if (std::find(s.begin(), s.end(), to) == s.end()) s.push_back(to);
}

std::vector<std::size_t> CircuitDag::frontier() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < successors_.size(); ++i) {
    if (successors_[i].empty()) out.push_back(i);
  }
  return out;
}

bool CircuitDag::is_acyclic() const {
  // Kahn's algorithm.
  std::vector<std::size_t> indegree(node_count(), 0);
  for (const auto& s : successors_) {
    for (std::size_t v : s) ++indegree[v];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < node_count(); ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::size_t u = ready.back();
    ready.pop_back();
    ++visited;
    for (std::size_t v : successors_[u]) {
      if (--indegree[v] == 0) ready.push_back(v);
    }
  }
  return visited == node_count();
}

CircuitDag to_dag(const Circuit& c) {
  CircuitDag dag(c.size());
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> last_on_qubit(c.n_qubits(), kNone);
  for (std::size_t j = 0; j < c.size(); ++j) {
    const auto& g = c[j];
    auto link = [&](std::uint32_t q) {
      if (last_on_qubit[q] != kNone) dag.add_edge(last_on_qubit[q], j);
      last_on_qubit[q] = j;
    };
    if (g.control) link(*g.control);
    link(g.target);
  }
  return dag;
}

std::size_t quantum_cost(const Circuit& c) {
  return static_cast<std::size_t>(std::count_if(
      c.gates().begin(), c.gates().end(), [](const GateInstance& g) { return g.control.has_value(); }));
}

namespace {

// Position in `gates` of the most recent gate sharing a qubit with g, or
// gates.size() when none does.
std::size_t last_blocking(const std::vector<GateInstance>& gates, const GateInstance& g) {
  for (std::size_t i = gates.size(); i-- > 0;) {
    if (shares_qubit(gates[i], g)) return i;
  }
  return gates.size();
}

}  // namespace

bool closes_loop(const Circuit& c, const GateInstance& g) {
  const std::size_t i = last_blocking(c.gates(), g);
  return i < c.size() && c[i] == inverse_of(g);
}

Circuit eliminate_loops(const Circuit& c) {
  std::vector<GateInstance> current = c.gates();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<GateInstance> out;
    out.reserve(current.size());
    for (const auto& g : current) {
      const std::size_t i = last_blocking(out, g);
      if (i < out.size() && out[i] == inverse_of(g)) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
      } else {
        out.push_back(g);
      }
    }
    current = std::move(out);
  }
  return Circuit(c.n_qubits(), std::move(current));
}

namespace {

// Exponent k with the gate acting on its target as V^k, or -1 for H.
int v_power(GateKind kind) {
  switch (kind) {
    case GateKind::V:
    case GateKind::CV:
      return 1;
    case GateKind::X:
    case GateKind::CX:
      return 2;
    case GateKind::VDG:
    case GateKind::CVDG:
      return 3;
    case GateKind::H:
      return -1;
  }
  return -1;
}

GateKind kind_for_power(int power, bool controlled) {
  switch (power) {
    case 1:
      return controlled ? GateKind::CV : GateKind::V;
    case 2:
      return controlled ? GateKind::CX : GateKind::X;
    default:
      return controlled ? GateKind::CVDG : GateKind::VDG;
  }
}

}  // namespace

bool commutes(const GateInstance& a, const GateInstance& b) {
  if (!shares_qubit(a, b)) return true;
  if (v_power(a.kind) < 0 || v_power(b.kind) < 0) return false;
  const bool a_hits_b = b.control && *b.control == a.target;
  const bool b_hits_a = a.control && *a.control == b.target;
  return !a_hits_b && !b_hits_a;
}

Circuit simplify(const Circuit& c) {
  std::vector<GateInstance> current = c.gates();
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<GateInstance> out;
    out.reserve(current.size());
    for (const auto& g : current) {
      bool merged = false;
      for (std::size_t i = out.size(); i-- > 0;) {
        const GateInstance& prev = out[i];
        if (prev.control == g.control && prev.target == g.target) {
          const int pa = v_power(prev.kind);
          const int pb = v_power(g.kind);
          if (pa < 0 && pb < 0) {
            out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
            merged = true;
          } else if (pa >= 0 && pb >= 0) {
            const int power = (pa + pb) % 4;
            if (power == 0) {
              out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
            } else {
              out[i].kind = kind_for_power(power, g.control.has_value());
            }
            merged = true;
          }
          break;
        }
        if (!commutes(prev, g)) break;
      }
      if (merged) {
        changed = true;
      } else {
        out.push_back(g);
      }
    }
    current = std::move(out);
  }
  return Circuit(c.n_qubits(), std::move(current));
}

std::size_t DedupKey::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::int64_t v : values_) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

DedupKey dedup_key(const Circuit& c, DedupMode mode) {
  DedupKey key;
  key.values_.push_back(static_cast<std::int64_t>(c.n_qubits()));
  if (mode == DedupMode::kSequence) {
    for (const auto& g : c.gates()) {
      key.values_.push_back(static_cast<std::int64_t>(g.kind) << 40 |
                            static_cast<std::int64_t>(g.control.value_or(0xfffff)) << 20 |
                            static_cast<std::int64_t>(g.target));
    }
    return key;
  }
  if (c.n_qubits() > 6) throw InvalidArgument("semantic dedup key supports at most 6 qubits");
  const OperatorTable t = circuit_unitary(c);
  key.values_.reserve(1 + 2 * t.flat().size());
  auto round9 = [](double x) {
    const auto v = static_cast<std::int64_t>(std::llround(x * 1e9));
    return v == 0 ? std::int64_t{0} : v;
  };
  for (const Complex& z : t.flat()) {
    key.values_.push_back(round9(z.real()));
    key.values_.push_back(round9(z.imag()));
  }
  return key;
}

namespace {

class TokenReader {
 public:
  explicit TokenReader(std::string_view text) : text_(text) {}

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  // Skips whitespace, separating commas and '#' comments.
  void skip_separators() {
    while (!at_end()) {
      const char ch = peek();
      if (ch == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
        advance();
      } else {
        break;
      }
    }
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) advance();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column_);
  }

  std::string_view read_name() {
    const std::size_t start = pos_;
    while (!at_end() && std::isalnum(static_cast<unsigned char>(peek()))) advance();
    return text_.substr(start, pos_ - start);
  }

  std::uint32_t read_index() {
    skip_spaces();
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (start == pos_) fail("expected qubit index");
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc()) fail("qubit index out of range");
    skip_spaces();
    return v;
  }

  void expect(char ch) {
    if (at_end() || peek() != ch) fail(std::string("expected '") + ch + "'");
    advance();
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

Circuit parse_circuit(std::string_view text, std::size_t n_qubits) {
  Circuit c(n_qubits);
  TokenReader in(text);
  in.skip_separators();
  while (!in.at_end()) {
    const std::size_t line = in.line();
    const std::size_t col = in.column();
    const std::string_view name = in.read_name();
    if (name.empty()) in.fail(std::string("unexpected character '") + in.peek() + "'");
    const auto kind = kind_from_name(name);
    if (!kind) throw ParseError("unknown gate kind '" + std::string(name) + "'", line, col);
    in.expect('(');
    std::vector<std::uint32_t> operands{in.read_index()};
    while (!in.at_end() && in.peek() == ',') {
      in.advance();
      operands.push_back(in.read_index());
    }
    in.expect(')');
    const std::size_t arity = is_controlled(*kind) ? 2 : 1;
    if (operands.size() != arity) {
      throw ParseError(std::string(name) + " takes " + std::to_string(arity) + " operand(s), got " +
                           std::to_string(operands.size()),
                       line, col);
    }
    for (std::uint32_t q : operands) {
      if (q >= n_qubits) {
        throw ParseError("qubit index " + std::to_string(q) + " >= n=" + std::to_string(n_qubits),
                         line, col);
      }
    }
    if (arity == 2 && operands[0] == operands[1]) {
      throw ParseError("control equals target", line, col);
    }
    c.push_back(arity == 2 ? GateInstance{*kind, operands[0], operands[1]}
                           : GateInstance{*kind, std::nullopt, operands[0]});
    in.skip_separators();
  }
  return c;
}

std::string to_string(const Circuit& c) {
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += to_string(c[i]);
  }
  return out;
}

std::string serialize_circuit_file(const Circuit& c) {
  std::string out = "# n=" + std::to_string(c.n_qubits()) + "\n";
  for (const auto& g : c.gates()) {
    out += to_string(g);
    out += '\n';
  }
  return out;
}

Circuit parse_circuit_file(std::string_view text) {
  const std::size_t eol = text.find('\n');
  std::string_view header = text.substr(0, eol);
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  constexpr std::string_view kPrefix = "# n=";
  if (header.substr(0, kPrefix.size()) != kPrefix) {
    throw ParseError("circuit file must start with '# n=<qubits>'", 1, 1);
  }
  std::size_t n = 0;
  const auto digits = header.substr(kPrefix.size());
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || n == 0) {
    throw ParseError("bad qubit count in header", 1, kPrefix.size() + 1);
  }
  return parse_circuit(text, n);
}

Circuit read_circuit_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open circuit file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_circuit_file(buf.str());
}

void write_circuit_file(const std::filesystem::path& path, const Circuit& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write circuit file " + path.string());
  out << serialize_circuit_file(c);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace qcsynth
