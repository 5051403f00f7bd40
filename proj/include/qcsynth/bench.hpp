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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcsynth/search.hpp"

namespace qcsynth {

struct TrialRecord {
  std::string benchmark;
  std::size_t trial = 0;
  SearchOutcome outcome = SearchOutcome::kExhausted;
  /// Present iff found.
  std::optional<std::size_t> cost;
  std::size_t restarts = 0;
  double elapsed_seconds = 0.0;
  std::uint64_t seed = 0;
  /// The found circuit (not part of the CSV).
  std::optional<Circuit> circuit;
};

struct TrialOptions {
  std::size_t trials = 100;
  /// Worker threads; trials are independent and seeded seed + trial.
  std::size_t jobs = 1;
};

/// Runs `trials` verified searches (guided when `policy` is set, random
/// otherwise). Trial i uses SearchConfig::seed + i.
std::vector<TrialRecord> run_trials(const TargetStates& target, const GateVocabulary& vocab,
                                    const GatePolicy* policy, const SearchConfig& cfg,
                                    const TrialOptions& options);

struct MeanStd {
  double mean = 0.0;
  /// Population standard deviation; absent with fewer than two samples.
  std::optional<double> stddev;
};

/// Statistics over the successful trials of one benchmark.
struct BenchSummary {
  std::string benchmark;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::optional<std::size_t> min_cost;
  std::optional<MeanStd> elapsed;
  std::optional<MeanStd> restarts;
  std::map<std::size_t, std::size_t> cost_histogram;
};

/// One summary per benchmark name, in order of first appearance.
std::vector<BenchSummary> summarize(const std::vector<TrialRecord>& records);

/// `benchmark,trial,outcome,cost,restarts,elapsed_s,seed`
std::string results_csv(const std::vector<TrialRecord>& records);
/// `benchmark,cost,count`, sorted by cost within each benchmark.
std::string histogram_csv(const std::vector<BenchSummary>& summaries);
std::string summary_json(const std::vector<BenchSummary>& summaries);

/// Parses results_csv output back into records (circuits are not stored).
std::vector<TrialRecord> parse_results_csv(std::string_view text);

/// Writes results.csv, histogram.csv and summary.json into `dir`.
void write_reports(const std::filesystem::path& dir, const std::vector<TrialRecord>& records);

}  // namespace qcsynth
