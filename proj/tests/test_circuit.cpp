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

#include "oracles.hpp"
#include "qcsynth/circuit.hpp"
#include "qcsynth/error.hpp"
#include "qcsynth/rng.hpp"
#include "qcsynth/state.hpp"

namespace qcsynth {
namespace {

GateInstance h(std::uint32_t q) { return GateInstance::single(GateKind::H, q); }
GateInstance cx(std::uint32_t c, std::uint32_t t) { return GateInstance::controlled(GateKind::CX, c, t); }
GateInstance cv(std::uint32_t c, std::uint32_t t) { return GateInstance::controlled(GateKind::CV, c, t); }
GateInstance cvdg(std::uint32_t c, std::uint32_t t) { return GateInstance::controlled(GateKind::CVDG, c, t); }

Circuit hng() {
  return Circuit(4, {cv(0, 3), cv(1, 3), cv(2, 3), cx(0, 2), cx(1, 2), cvdg(2, 3)});
}

Circuit random_circuit_of(std::size_t n, std::size_t len, KindSet kinds, Rng& rng) {
  const GateVocabulary vocab(n, kinds);
  Circuit c(n);
  for (std::size_t k = 0; k < len; ++k) c.push_back(vocab[uniform_index(rng, vocab.size())]);
  return c;
}

TEST(Dag, HadamardSandwichFrontier) {
  const Circuit c(2, {h(0), h(1), cx(0, 1), h(0), h(1)});
  const CircuitDag dag = to_dag(c);
  EXPECT_EQ(dag.frontier(), (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(dag.successors(2), (std::vector<std::size_t>{3, 4}));
}

TEST(Dag, SingleGate) {
  const CircuitDag dag = to_dag(Circuit(2, {cx(0, 1)}));
  EXPECT_EQ(dag.node_count(), 1u);
  EXPECT_EQ(dag.edge_count(), 0u);
  EXPECT_EQ(dag.frontier(), (std::vector<std::size_t>{0}));
}

TEST(Dag, HngFrontierIsLastGate) {
  EXPECT_EQ(to_dag(hng()).frontier(), (std::vector<std::size_t>{5}));
}

TEST(DagProperty, AcyclicForwardEdgesAndDisjointFrontier) {
  Rng rng = make_rng(8);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const Circuit c = random_circuit_of(n, 1 + uniform_index(rng, 20), kSynthesisKinds, rng);
      const CircuitDag dag = to_dag(c);
      EXPECT_TRUE(dag.is_acyclic());
      for (std::size_t i = 0; i < dag.node_count(); ++i) {
        for (std::size_t j : dag.successors(i)) EXPECT_LT(i, j);
      }
      const auto front = dag.frontier();
      EXPECT_LE(front.size(), n / 2);
      for (std::size_t a = 0; a < front.size(); ++a) {
        for (std::size_t b = a + 1; b < front.size(); ++b) EXPECT_FALSE(shares_qubit(c[front[a]], c[front[b]]));
      }
    }
  }
}

TEST(DagTest, CycleDetection) {
  CircuitDag dag(3);
  dag.add_edge(0, 1);
  dag.add_edge(1, 2);
  EXPECT_TRUE(dag.is_acyclic());
  dag.add_edge(2, 0);
  EXPECT_FALSE(dag.is_acyclic());
}

TEST(QuantumCost, CountsControlledGates) {
  EXPECT_EQ(quantum_cost(hng()), 6u);
  EXPECT_EQ(quantum_cost(Circuit(2, {h(0), cx(0, 1), h(1)})), 1u);
  EXPECT_EQ(quantum_cost(Circuit(3)), 0u);
}

TEST(LoopElimination, Examples) {
  EXPECT_TRUE(eliminate_loops(Circuit(1, {h(0), h(0)})).empty());
  EXPECT_TRUE(eliminate_loops(Circuit(2, {cv(0, 1), cvdg(0, 1)})).empty());
  EXPECT_EQ(eliminate_loops(Circuit(4, {cv(0, 1), cx(2, 3), cvdg(0, 1)})), Circuit(4, {cx(2, 3)}));
  EXPECT_EQ(eliminate_loops(Circuit(2, {cv(0, 1), cx(1, 0), cvdg(0, 1)})),
            Circuit(2, {cv(0, 1), cx(1, 0), cvdg(0, 1)}));
}

TEST(LoopElimination, CascadesToFixpoint) {
  EXPECT_TRUE(eliminate_loops(Circuit(2, {cv(0, 1), cx(1, 0), cx(1, 0), cvdg(0, 1)})).empty());
}

TEST(LoopEliminationProperty, PreservesUnitary) {
  Rng rng = make_rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const Circuit c = random_circuit_of(3, uniform_index(rng, 12), KindSet{GateKind::H, GateKind::X, GateKind::CX, GateKind::CV, GateKind::CVDG}, rng);
    const Circuit reduced = eliminate_loops(c);
    EXPECT_LE(reduced.size(), c.size());
    EXPECT_LE(max_abs_diff(circuit_unitary(reduced), circuit_unitary(c)), 1e-10) << to_string(c);
    EXPECT_EQ(eliminate_loops(reduced), reduced);
  }
}

TEST(ClosesLoop, MatchesElimination) {
  const Circuit c(4, {cv(0, 1), cx(2, 3)});
  EXPECT_TRUE(closes_loop(c, cvdg(0, 1)));
  EXPECT_FALSE(closes_loop(c, cv(0, 1)));
  EXPECT_TRUE(closes_loop(c, cx(2, 3)));
  EXPECT_FALSE(closes_loop(c, cvdg(1, 0)));
}

TEST(Commutes, SoundAgainstDenseProducts) {
  const GateVocabulary vocab(3, KindSet{GateKind::X, GateKind::V, GateKind::VDG, GateKind::H, GateKind::CX,
                                        GateKind::CV, GateKind::CVDG});
  int claimed = 0;
  for (const auto& a : vocab.entries()) {
    for (const auto& b : vocab.entries()) {
      if (!commutes(a, b)) continue;
      ++claimed;
      EXPECT_EQ(commutes(b, a), true);
      const testing::CMat ma = testing::embed(a, 3);
      const testing::CMat mb = testing::embed(b, 3);
      EXPECT_LE((ma * mb - mb * ma).cwiseAbs().maxCoeff(), 1e-12) << to_string(a) << " " << to_string(b);
    }
  }
  EXPECT_GT(claimed, 0);
}

TEST(Commutes, Examples) {
  EXPECT_TRUE(commutes(cv(0, 3), cv(1, 3)));
  EXPECT_TRUE(commutes(cx(0, 2), cv(0, 3)));
  EXPECT_TRUE(commutes(cx(2, 3), cv(0, 1)));
  EXPECT_FALSE(commutes(cx(0, 2), cvdg(2, 3)));
  EXPECT_FALSE(commutes(cx(1, 0), cv(0, 1)));
  EXPECT_FALSE(commutes(h(3), cv(0, 3)));
}

TEST(Simplify, Examples) {
  EXPECT_EQ(simplify(Circuit(2, {cv(0, 1), cv(0, 1)})), Circuit(2, {cx(0, 1)}));
  EXPECT_EQ(simplify(Circuit(2, {cx(0, 1), cv(0, 1)})), Circuit(2, {cvdg(0, 1)}));
  EXPECT_TRUE(simplify(Circuit(2, {cvdg(0, 1), cv(0, 1)})).empty());
  EXPECT_TRUE(simplify(Circuit(1, {h(0), h(0)})).empty());
  EXPECT_EQ(simplify(Circuit(3, {cv(0, 1), cx(2, 1), cv(0, 1)})), Circuit(3, {cx(0, 1), cx(2, 1)}));
  EXPECT_EQ(simplify(Circuit(3, {cv(0, 1), cx(1, 2), cv(0, 1)})), Circuit(3, {cv(0, 1), cx(1, 2), cv(0, 1)}));
  EXPECT_EQ(simplify(Circuit(2, {cx(0, 1), cx(1, 0), cx(1, 0), cx(0, 1)})), Circuit(2));
  EXPECT_EQ(simplify(hng()), hng());
}

TEST(SimplifyProperty, ExactAndNeverCostlier) {
  Rng rng = make_rng(12);
  const KindSet all{GateKind::X, GateKind::V, GateKind::VDG, GateKind::H, GateKind::CX, GateKind::CV, GateKind::CVDG};
  for (int trial = 0; trial < 400; ++trial) {
    const KindSet kinds = trial % 2 ? all : kSynthesisKinds;
    const Circuit c = random_circuit_of(3, uniform_index(rng, 16), kinds, rng);
    const Circuit s = simplify(c);
    EXPECT_LE(quantum_cost(s), quantum_cost(c));
    EXPECT_LE(quantum_cost(s), quantum_cost(eliminate_loops(c)));
    EXPECT_LE(testing::max_diff(circuit_unitary(s), testing::dense_unitary(c)), 1e-10) << to_string(c);
    EXPECT_EQ(simplify(s), s);
  }
}

TEST(DedupKeyTest, Examples) {
  EXPECT_EQ(dedup_key(Circuit(1, {h(0), h(0)})), dedup_key(Circuit(1)));
  EXPECT_FALSE(dedup_key(Circuit(2, {cx(0, 1)})) == dedup_key(Circuit(2, {cx(1, 0)})));
  EXPECT_EQ(dedup_key(Circuit(2, {h(0), h(1), cx(0, 1), h(0), h(1)})),
            dedup_key(Circuit(2, {h(0), h(1), cx(0, 1), h(1), h(0)})));
  EXPECT_FALSE(dedup_key(Circuit(2, {h(0), h(1), cx(0, 1), h(0), h(1)}), DedupMode::kSequence) ==
               dedup_key(Circuit(2, {h(0), h(1), cx(0, 1), h(1), h(0)}), DedupMode::kSequence));
  EXPECT_THROW(dedup_key(Circuit(7)), InvalidArgument);
}

TEST(DedupKeyProperty, EqualUnitariesGiveEqualKeys) {
  Rng rng = make_rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    const Circuit c = random_circuit_of(4, 2 + uniform_index(rng, 10), kSynthesisKinds, rng);
    // Swap one adjacent pair on disjoint qubits, when there is one.
    std::vector<GateInstance> gates = c.gates();
    for (std::size_t i = 0; i + 1 < gates.size(); ++i) {
      if (!shares_qubit(gates[i], gates[i + 1])) {
        std::swap(gates[i], gates[i + 1]);
        break;
      }
    }
    const Circuit d(4, gates);
    ASSERT_LE(max_abs_diff(circuit_unitary(c), circuit_unitary(d)), 5e-10);
    EXPECT_EQ(dedup_key(c), dedup_key(d));
    EXPECT_EQ(dedup_key(c).hash(), dedup_key(d).hash());
  }
}

TEST(Parse, HngSequence) {
  EXPECT_EQ(parse_circuit("CV(0,3), CV(1,3), CV(2,3), CX(0,2), CX(1,2), CVDG(2,3)", 4), hng());
  EXPECT_EQ(parse_circuit("CV(0, 3), CV(1, 3)\nCV(2, 3) # comment\nCX(0,2) CX(1,2), CVDG(2,3)", 4), hng());
}

TEST(Parse, EmptyText) { EXPECT_TRUE(parse_circuit("", 3).empty()); }

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_circuit("CX(0,1)\n  CX(0,0)", 2);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_NE(std::string(e.what()).find("control equals target"), std::string::npos);
  }
  EXPECT_THROW(parse_circuit("CNOT(0,1)", 2), ParseError);
  EXPECT_THROW(parse_circuit("CX(0)", 2), ParseError);
  EXPECT_THROW(parse_circuit("H(0,1)", 2), ParseError);
  EXPECT_THROW(parse_circuit("CX(0,2)", 2), ParseError);
  EXPECT_THROW(parse_circuit("CX(0,1", 2), ParseError);
  EXPECT_THROW(parse_circuit("CX[0,1]", 2), ParseError);
}

TEST(Serialize, RoundTrip) {
  Rng rng = make_rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Circuit c = random_circuit_of(4, uniform_index(rng, 15),
                                        KindSet{GateKind::X, GateKind::V, GateKind::VDG, GateKind::H, GateKind::CX,
                                                GateKind::CV, GateKind::CVDG},
                                        rng);
    EXPECT_EQ(parse_circuit_file(serialize_circuit_file(c)), c);
    EXPECT_EQ(parse_circuit(to_string(c), 4), c);
  }
  EXPECT_EQ(serialize_circuit_file(Circuit(2, {cx(0, 1)})), "# n=2\nCX(0,1)\n");
  EXPECT_THROW(parse_circuit_file("CX(0,1)\n"), ParseError);
}

}  // namespace
}  // namespace qcsynth
