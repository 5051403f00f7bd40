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

#include "qcsynth/spec.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qcsynth/error.hpp"

namespace qcsynth {

namespace {

using Bits4 = std::array<int, 4>;
using Formula = std::function<Bits4(int, int, int, int)>;

struct BenchmarkDef {
  std::string_view name;
  std::size_t reference_cost;
  Formula outputs;
};

int neg(int x) { return 1 - x; }

// ⊕ is XOR, juxtaposition is AND, a bar is complement.
const std::vector<BenchmarkDef>& definitions() {
  static const std::vector<BenchmarkDef> defs = {
      {"HNG", 6,
       [](int a, int b, int c, int d) {
         return Bits4{a, b, a ^ b ^ c, ((a ^ b) & c) ^ (a & b) ^ d};
       }},
      {"PFAG", 6,
       [](int a, int b, int c, int d) {
         return Bits4{a, a ^ b, a ^ b ^ c, ((a ^ b) & c) ^ (a & b) ^ d};
       }},
      {"IG", 7,
       [](int a, int b, int c, int d) {
         return Bits4{a, a ^ b, (a & b) ^ c, (d & b) ^ (neg(b) & (a ^ d))};
       }},
      {"MIG", 7,
       [](int a, int b, int c, int d) {
         return Bits4{a, a ^ b, (a & b) ^ c, (a & neg(b)) ^ d};
       }},
      {"OTG", 8,
       [](int a, int b, int c, int d) {
         return Bits4{a, a ^ b, a ^ b ^ d, ((a ^ b) & d) ^ (a & b) ^ c};
       }},
      {"MKG", 9,
       [](int a, int b, int c, int d) {
         const int p = (neg(a) & neg(d)) ^ neg(b);
         return Bits4{a, c, p ^ c, (p & c) ^ ((a & b) ^ d)};
       }},
      {"TSG", 19,
       [](int a, int b, int c, int d) {
         const int p = (neg(a) & neg(c)) ^ neg(b);
         return Bits4{a, p, p ^ d, (p & d) ^ (a & b) ^ c};
       }},
  };
  return defs;
}

const BenchmarkDef* find_definition(std::string_view name) {
  for (const auto& d : definitions()) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::uint32_t parse_bits(std::string_view s, std::size_t width, std::size_t line) {
  if (s.size() != width) {
    throw ParseError("expected " + std::to_string(width) + "-bit pattern, got '" + std::string(s) + "'",
                     line, 1);
  }
  std::uint32_t v = 0;
  for (char ch : s) {
    if (ch != '0' && ch != '1') throw ParseError("bad bit '" + std::string(1, ch) + "'", line, 1);
    v = (v << 1) | static_cast<std::uint32_t>(ch - '0');
  }
  return v;
}

double parse_double(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + std::string(s) + "'", line, 1);
  }
  return v;
}

}  // namespace

void TruthTableSpec::validate() const {
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (outputs.size() != dim) {
    throw SpecError("truth table needs " + std::to_string(dim) + " rows, has " +
                    std::to_string(outputs.size()));
  }
  std::vector<std::size_t> first_input(dim, dim);
  for (std::size_t in = 0; in < dim; ++in) {
    const std::uint32_t out = outputs[in];
    if (out >= dim) throw SpecError("output pattern out of range in row " + bit_string(in, n_qubits));
    if (first_input[out] != dim) {
      throw SpecError("not reversible: inputs " + bit_string(first_input[out], n_qubits) + " and " +
                      bit_string(in, n_qubits) + " both map to " + bit_string(out, n_qubits));
    }
    first_input[out] = in;
  }
}

std::string bit_string(std::uint32_t value, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1u) s[i] = '1';
  }
  return s;
}

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& d : definitions()) v.emplace_back(d.name);
    return v;
  }();
  return names;
}

TruthTableSpec benchmark(std::string_view name) {
  const BenchmarkDef* def = find_definition(name);
  if (!def) throw InvalidArgument("unknown benchmark '" + std::string(name) + "'");
  TruthTableSpec spec{4, std::vector<std::uint32_t>(16)};
  for (std::uint32_t in = 0; in < 16; ++in) {
    const Bits4 o = def->outputs((in >> 3) & 1, (in >> 2) & 1, (in >> 1) & 1, in & 1);
    spec.outputs[in] = static_cast<std::uint32_t>(o[0] << 3 | o[1] << 2 | o[2] << 1 | o[3]);
  }
  spec.validate();
  return spec;
}

std::optional<std::size_t> benchmark_reference_cost(std::string_view name) {
  const BenchmarkDef* def = find_definition(name);
  if (!def) return std::nullopt;
  return def->reference_cost;
}

TargetStates spec_to_targets(const TruthTableSpec& spec) {
  spec.validate();
  OperatorTable t(spec.n_qubits,
                  std::vector<Complex>(spec.outputs.size() * spec.outputs.size(), 0.0));
  for (std::size_t j = 0; j < spec.outputs.size(); ++j) t(spec.outputs[j], j) = 1.0;
  return TargetStates{std::move(t), {}, std::nullopt};
}

TargetStates benchmark_targets(std::string_view name) {
  TargetStates t = spec_to_targets(benchmark(name));
  t.name = std::string(name);
  t.reference_cost = benchmark_reference_cost(name);
  return t;
}

TargetStates parse_spec(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  {
    std::size_t line_no = 0;
    for (std::string_view raw : split(text, '\n')) {
      ++line_no;
      const std::string_view s = trim(raw);
      if (!s.empty()) lines.emplace_back(line_no, s);
    }
  }
  if (lines.empty()) throw ParseError("empty spec file", 1, 1);

  const std::string_view header = lines.front().second;
  bool truth_table = false;
  std::string_view rest;
  if (header.starts_with("# truthtable n=")) {
    truth_table = true;
    rest = header.substr(15);
  } else if (header.starts_with("# amplitudes n=")) {
    rest = header.substr(15);
  } else {
    throw ParseError("spec header must be '# truthtable n=<q>' or '# amplitudes n=<q>'",
                     lines.front().first, 1);
  }
  std::size_t n = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), n);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || n == 0 || n > 12) {
    throw ParseError("bad qubit count in spec header", lines.front().first, 1);
  }
  const std::size_t dim = std::size_t{1} << n;
  if (lines.size() - 1 != dim) {
    throw ParseError("expected " + std::to_string(dim) + " rows, found " +
                         std::to_string(lines.size() - 1),
                     lines.back().first, 1);
  }

  if (truth_table) {
    TruthTableSpec spec{n, std::vector<std::uint32_t>(dim, 0)};
    std::vector<bool> seen(dim, false);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto [line_no, s] = lines[i];
      const std::size_t space = s.find_first_of(" \t");
      if (space == std::string_view::npos) throw ParseError("expected '<in_bits> <out_bits>'", line_no, 1);
      const std::uint32_t in = parse_bits(trim(s.substr(0, space)), n, line_no);
      const std::uint32_t out = parse_bits(trim(s.substr(space)), n, line_no);
      if (seen[in]) throw SpecError("duplicate input row " + bit_string(in, n) + " on line " + std::to_string(line_no));
      seen[in] = true;
      spec.outputs[in] = out;
    }
    return spec_to_targets(spec);
  }

  OperatorTable table(n, std::vector<Complex>(dim * dim, 0.0));
  for (std::size_t col = 0; col < dim; ++col) {
    const auto [line_no, s] = lines[col + 1];
    const auto entries = split(s, ';');
    if (entries.size() != dim) {
      throw ParseError("expected " + std::to_string(dim) + " amplitudes, found " +
                           std::to_string(entries.size()),
                       line_no, 1);
    }
    for (std::size_t row = 0; row < dim; ++row) {
      const auto parts = split(entries[row], ',');
      if (parts.size() != 2) throw ParseError("amplitude must be 're,im'", line_no, 1);
      table(row, col) = Complex(parse_double(parts[0], line_no), parse_double(parts[1], line_no));
    }
  }
  const double err = orthonormality_error(table);
  if (err > 1e-6) {
    throw SpecError("amplitude columns are not orthonormal (max error " + std::to_string(err) + ")");
  }
  return TargetStates{std::move(table), {}, std::nullopt};
}

TargetStates load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open spec file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  TargetStates t = parse_spec(buf.str());
  t.name = path.stem().string();
  return t;
}

std::string serialize_truth_table(const TruthTableSpec& spec) {
  std::string out = "# truthtable n=" + std::to_string(spec.n_qubits) + "\n";
  for (std::size_t in = 0; in < spec.outputs.size(); ++in) {
    out += bit_string(static_cast<std::uint32_t>(in), spec.n_qubits);
    out += ' ';
    out += bit_string(spec.outputs[in], spec.n_qubits);
    out += '\n';
  }
  return out;
}

std::string serialize_amplitudes(const OperatorTable& table) {
  std::string out = "# amplitudes n=" + std::to_string(table.n_qubits()) + "\n";
  char buf[80];
  for (std::size_t col = 0; col < table.dim(); ++col) {
    for (std::size_t row = 0; row < table.dim(); ++row) {
      if (row) out += ';';
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g", table(row, col).real(), table(row, col).imag());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace qcsynth
