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

#include "qcsynth/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qcsynth/error.hpp"

namespace qcsynth {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_vocabulary(const TargetStates& target, const GateVocabulary& vocab) {
  if (vocab.n_qubits() != target.n_qubits()) {
    throw DimensionError("vocabulary built for " + std::to_string(vocab.n_qubits()) +
                         " qubits, target has " + std::to_string(target.n_qubits()));
  }
}

// Converts policy probabilities into sampling weights: p^(1/T), with the
// guarded entry removed. Falls back to uniform over the allowed entries when
// every weight underflows.
void sampling_weights(std::span<double> p, double temperature, std::optional<std::size_t> banned) {
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double v = (banned && *banned == i) || !(p[i] > 0.0) ? -std::numeric_limits<double>::infinity()
                                                               : std::log(p[i]) / temperature;
    p[i] = v;
    max_log = std::max(max_log, v);
  }
  double total = 0.0;
  for (double& v : p) {
    v = std::isfinite(max_log) ? std::exp(v - max_log) : 0.0;
    total += v;
  }
  if (total > 0.0) return;
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = (banned && *banned == i) ? 0.0 : 1.0;
}

}  // namespace

void NetworkPolicy::probabilities(const OperatorTable& residual, std::span<double> out) const {
  const Eigen::VectorXd p = net_.forward(network_input(residual));
  std::copy(p.data(), p.data() + p.size(), out.begin());
}

void SearchConfig::validate() const {
  if (max_restarts == 0) throw InvalidArgument("max_restarts must be at least 1");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (!(temperature > 0.0)) throw InvalidArgument("temperature must be positive");
}

std::size_t SearchConfig::depth_for(const TargetStates& target) const {
  if (max_depth > 0) return max_depth;
  if (target.reference_cost) return std::max<std::size_t>(12, 2 * *target.reference_cost);
  return 30;
}

std::string_view outcome_name(SearchOutcome o) {
  return o == SearchOutcome::kFound ? "found" : "exhausted";
}

SearchResult random_search(const TargetStates& target, const GateVocabulary& vocab,
                           const SearchConfig& cfg, Rng& rng) {
  cfg.validate();
  check_vocabulary(target, vocab);
  const auto start = Clock::now();
  const std::size_t depth = cfg.depth_for(target);
  const IdentityCheck check{cfg.tolerance, cfg.allow_global_phase};
  SearchResult result;
  result.circuit = Circuit(target.n_qubits());
  if (is_identity(target.table, check)) {
    result.outcome = SearchOutcome::kFound;
    result.elapsed_seconds = seconds_since(start);
    return result;
  }
  std::vector<GateInstance> generated;
  for (std::size_t attempt = 0; attempt < cfg.max_restarts; ++attempt) {
    OperatorTable residual = target.table;
    generated.clear();
    for (std::size_t step = 0; step < depth; ++step) {
      const GateInstance& g = vocab[static_cast<std::size_t>(uniform_index(rng, vocab.size()))];
      apply_inverse_table_inplace(residual, g);
      generated.push_back(g);
      ++result.gates_evaluated;
      if (is_identity(residual, check)) {
        result.outcome = SearchOutcome::kFound;
        result.circuit = Circuit(target.n_qubits(), {generated.rbegin(), generated.rend()});
        if (cfg.simplify) result.circuit = simplify(result.circuit);
        result.restarts = attempt;
        result.elapsed_seconds = seconds_since(start);
        return result;
      }
    }
  }
  result.restarts = cfg.max_restarts;
  result.elapsed_seconds = seconds_since(start);
  return result;
}

SearchResult guided_search(const TargetStates& target, const GateVocabulary& vocab,
                           const GatePolicy& policy, const SearchConfig& cfg, Rng& rng) {
  cfg.validate();
  check_vocabulary(target, vocab);
  if (policy.n_qubits() != target.n_qubits()) {
    throw DimensionError("model built for " + std::to_string(policy.n_qubits()) +
                         " qubits, target has " + std::to_string(target.n_qubits()));
  }
  if (policy.vocab_size() != vocab.size()) {
    throw DimensionError("model vocabulary size " + std::to_string(policy.vocab_size()) +
                         " does not match vocabulary size " + std::to_string(vocab.size()));
  }
  const auto start = Clock::now();
  const std::size_t depth = cfg.depth_for(target);
  const IdentityCheck check{cfg.tolerance, cfg.allow_global_phase};
  SearchResult result;
  result.circuit = Circuit(target.n_qubits());
  std::vector<double> weights(vocab.size());
  std::vector<std::size_t> generated;

  for (std::size_t attempt = 0; attempt < cfg.max_restarts; ++attempt) {
    OperatorTable residual = target.table;
    generated.clear();
    for (std::size_t step = 0;; ++step) {
      if (is_identity(residual, check)) {
        result.outcome = SearchOutcome::kFound;
        Circuit c(target.n_qubits());
        for (auto it = generated.rbegin(); it != generated.rend(); ++it) c.push_back(vocab[*it]);
        result.circuit = cfg.simplify ? simplify(c) : std::move(c);
        result.restarts = attempt;
        result.elapsed_seconds = seconds_since(start);
        return result;
      }
      if (step == depth) break;
      policy.probabilities(residual, weights);
      std::optional<std::size_t> banned;
      if (cfg.guard_inverse && !generated.empty()) banned = vocab.inverse_index(generated.back());
      sampling_weights(weights, cfg.temperature, banned);
      const std::size_t pick = sample_weighted(rng, weights);
      apply_inverse_table_inplace(residual, vocab[pick]);
      generated.push_back(pick);
      ++result.gates_evaluated;
    }
  }
  result.restarts = cfg.max_restarts;
  result.elapsed_seconds = seconds_since(start);
  return result;
}

std::vector<std::size_t> mismatched_inputs(const Circuit& circuit, const TargetStates& target,
                                           double tolerance, bool allow_global_phase) {
  if (circuit.n_qubits() != target.n_qubits()) {
    throw DimensionError("circuit has " + std::to_string(circuit.n_qubits()) + " qubits, target has " +
                         std::to_string(target.n_qubits()));
  }
  const std::size_t n = target.n_qubits();
  const std::size_t dim = target.table.dim();
  std::vector<StateVector> images;
  images.reserve(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    StateVector s = basis_state(j, n);
    for (const auto& g : circuit.gates()) apply_gate_inplace(s.amplitudes(), n, g);
    images.push_back(std::move(s));
  }
  Complex phase = 1.0;
  if (allow_global_phase) {
    std::size_t best_row = 0, best_col = 0;
    double best = -1.0;
    for (std::size_t col = 0; col < dim; ++col) {
      for (std::size_t row = 0; row < dim; ++row) {
        if (std::abs(target.table(row, col)) > best) {
          best = std::abs(target.table(row, col));
          best_row = row;
          best_col = col;
        }
      }
    }
    const Complex got = images[best_col].amplitudes()[best_row];
    if (std::abs(got) > 0.0 && best > 0.0) {
      const Complex want = target.table(best_row, best_col);
      phase = (want / std::abs(want)) / (got / std::abs(got));
    }
  }
  std::vector<std::size_t> bad;
  for (std::size_t j = 0; j < dim; ++j) {
    const auto amps = images[j].amplitudes();
    for (std::size_t row = 0; row < dim; ++row) {
      if (std::abs(amps[row] * phase - target.table(row, j)) > tolerance) {
        bad.push_back(j);
        break;
      }
    }
  }
  return bad;
}

SearchResult verified(SearchResult result, const TargetStates& target, const SearchConfig& cfg) {
  if (!result.found()) {
    result.circuit = Circuit(target.n_qubits());
    return result;
  }
  const auto bad = mismatched_inputs(result.circuit, target, cfg.tolerance, cfg.allow_global_phase);
  if (!bad.empty()) {
    throw VerificationError("found circuit [" + to_string(result.circuit) + "] fails on input " +
                            bit_string(static_cast<std::uint32_t>(bad.front()), target.n_qubits()) +
                            " (" + std::to_string(bad.size()) + " mismatching inputs)");
  }
  return result;
}

SearchResult run_with_verification(const TargetStates& target, const GateVocabulary& vocab,
                                   const GatePolicy* policy, const SearchConfig& cfg, Rng& rng) {
  SearchResult r = policy ? guided_search(target, vocab, *policy, cfg, rng)
                          : random_search(target, vocab, cfg, rng);
  return verified(std::move(r), target, cfg);
}

double search_space_size(std::size_t vocab_size, std::size_t depth) {
  return std::pow(static_cast<double>(vocab_size), static_cast<double>(depth));
}

}  // namespace qcsynth
