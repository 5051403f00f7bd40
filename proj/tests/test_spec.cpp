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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "qcsynth/circuit.hpp"
#include "qcsynth/error.hpp"
#include "qcsynth/spec.hpp"

namespace qcsynth {
namespace {

std::uint32_t pattern(int a, int b, int c, int d) {
  return static_cast<std::uint32_t>(a << 3 | b << 2 | c << 1 | d);
}

TEST(Benchmark, HngExamples) {
  const TruthTableSpec s = benchmark("HNG");
  EXPECT_EQ(s.outputs[pattern(1, 1, 0, 0)], pattern(1, 1, 0, 1));
  EXPECT_EQ(s.outputs[pattern(0, 0, 0, 0)], pattern(0, 0, 0, 0));
}

TEST(Benchmark, PfagExample) {
  EXPECT_EQ(benchmark("PFAG").outputs[pattern(1, 0, 0, 0)], pattern(1, 1, 1, 0));
}

TEST(Benchmark, AllBijectiveAndFirstOutputPassesThrough) {
  for (const auto& name : benchmark_names()) {
    const TruthTableSpec s = benchmark(name);
    EXPECT_NO_THROW(s.validate()) << name;
    for (std::uint32_t in = 0; in < 16; ++in) EXPECT_EQ(s.outputs[in] >> 3, in >> 3) << name;
    EXPECT_TRUE(benchmark_reference_cost(name).has_value());
  }
  EXPECT_EQ(benchmark_names().size(), 7u);
  EXPECT_THROW(benchmark("FOO"), InvalidArgument);
  EXPECT_EQ(benchmark_reference_cost("TSG"), 19u);
}

// Second, independently written evaluation of the output formulas using
// bool arithmetic.
TEST(Benchmark, FormulasMatchIndependentEvaluation) {
  auto x = [](bool p, bool q) { return p != q; };
  for (std::uint32_t in = 0; in < 16; ++in) {
    const bool A = in & 8, B = in & 4, C = in & 2, D = in & 1;
    auto pack = [](bool o0, bool o1, bool o2, bool o3) {
      return static_cast<std::uint32_t>(o0) << 3 | static_cast<std::uint32_t>(o1) << 2 |
             static_cast<std::uint32_t>(o2) << 1 | static_cast<std::uint32_t>(o3);
    };
    const bool mkg_p = x(!A && !D, !B);
    const bool tsg_p = x(!A && !C, !B);
    EXPECT_EQ(benchmark("HNG").outputs[in], pack(A, B, x(x(A, B), C), x(x(x(A, B) && C, A && B), D)));
    EXPECT_EQ(benchmark("PFAG").outputs[in], pack(A, x(A, B), x(x(A, B), C), x(x(x(A, B) && C, A && B), D)));
    EXPECT_EQ(benchmark("IG").outputs[in], pack(A, x(A, B), x(A && B, C), x(D && B, !B && x(A, D))));
    EXPECT_EQ(benchmark("MIG").outputs[in], pack(A, x(A, B), x(A && B, C), x(A && !B, D)));
    EXPECT_EQ(benchmark("OTG").outputs[in], pack(A, x(A, B), x(x(A, B), D), x(x(x(A, B) && D, A && B), C)));
    EXPECT_EQ(benchmark("MKG").outputs[in], pack(A, C, x(mkg_p, C), x(mkg_p && C, x(A && B, D))));
    EXPECT_EQ(benchmark("TSG").outputs[in], pack(A, tsg_p, x(tsg_p, D), x(x(tsg_p && D, A && B), C)));
  }
}

TEST(TruthTable, CollisionNamesRows) {
  TruthTableSpec s{2, {0, 1, 1, 3}};
  try {
    s.validate();
    FAIL() << "expected SpecError";
  } catch (const SpecError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("01"), std::string::npos);
    EXPECT_NE(msg.find("10"), std::string::npos);
  }
}

TEST(SpecToTargets, IdentityAndCx) {
  EXPECT_EQ(spec_to_targets(TruthTableSpec{2, {0, 1, 2, 3}}).table, OperatorTable::identity(2));
  // out = (a, a xor b)
  const TargetStates cx = spec_to_targets(TruthTableSpec{2, {0, 1, 3, 2}});
  const double want[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(cx.table(r, c), Complex(want[r][c]));
  }
}

TEST(SpecToTargets, HngColumn) {
  const TargetStates t = benchmark_targets("HNG");
  EXPECT_EQ(t.table(pattern(1, 1, 0, 1), pattern(1, 1, 0, 0)), Complex(1.0));
  EXPECT_EQ(t.name, "HNG");
  EXPECT_EQ(t.reference_cost, 6u);
}

TEST(ConventionPin, HngSequenceEqualsTruthTable) {
  const Circuit c = parse_circuit("CV(0,3), CV(1,3), CV(2,3), CX(0,2), CX(1,2), CVDG(2,3)", 4);
  EXPECT_EQ(max_abs_diff(circuit_unitary(c), benchmark_targets("HNG").table), 0.0);
}

TEST(ParseSpec, BellAmplitudes) {
  const std::string text =
      "# amplitudes n=2\n"
      "0.70710678118654752,0;0,0;0,0;0.70710678118654752,0\n"
      "0,0;0.70710678118654752,0;0.70710678118654752,0;0,0\n"
      "0.70710678118654752,0;0,0;0,0;-0.70710678118654752,0\n"
      "0,0;0.70710678118654752,0;-0.70710678118654752,0;0,0\n";
  const TargetStates t = parse_spec(text);
  EXPECT_EQ(t.n_qubits(), 2u);
  EXPECT_NEAR(t.table(3, 2).real(), -0.70710678118654752, 1e-15);
  EXPECT_LE(max_abs_diff(parse_spec(serialize_amplitudes(t.table)).table, t.table), 0.0);
}

TEST(ParseSpec, TruthTableMatchesBenchmark) {
  const TargetStates t = parse_spec(serialize_truth_table(benchmark("HNG")));
  EXPECT_EQ(t.table, benchmark_targets("HNG").table);
}

TEST(ParseSpec, Errors) {
  EXPECT_THROW(parse_spec("# truthtable n=1\n0 1\n0 0\n"), SpecError);
  EXPECT_THROW(parse_spec("# truthtable n=1\n0 1\n1 1\n"), SpecError);
  EXPECT_THROW(parse_spec("# truthtable n=1\n0 1\n"), ParseError);
  EXPECT_THROW(parse_spec("# truthtable n=1\n0 2\n1 0\n"), ParseError);
  EXPECT_THROW(parse_spec("# nonsense\n"), ParseError);
  EXPECT_THROW(parse_spec(""), ParseError);
  EXPECT_THROW(parse_spec("# amplitudes n=1\n1,0;0,0\n1,0;0,0\n"), SpecError);
  EXPECT_THROW(parse_spec("# amplitudes n=1\n1,0;0,0\n0,0\n"), ParseError);
}

TEST(LoadSpec, FileAndMissingFile) {
  const auto path = std::filesystem::temp_directory_path() / "qcsynth_spec_test.tt";
  {
    std::ofstream out(path);
    out << serialize_truth_table(benchmark("PFAG"));
  }
  const TargetStates t = load_spec(path);
  EXPECT_EQ(t.table, benchmark_targets("PFAG").table);
  EXPECT_EQ(t.name, "qcsynth_spec_test");
  std::filesystem::remove(path);
  EXPECT_THROW(load_spec(path), IoError);
}

}  // namespace
}  // namespace qcsynth
