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

#include "qcsynth/bench.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "parallel.hpp"
#include "qcsynth/error.hpp"

namespace qcsynth {

namespace {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(',', pos);
    out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

template <typename T>
T parse_number(std::string_view s, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + std::string(s) + "'", line, 1);
  }
  return v;
}

nlohmann::json mean_std_json(const std::optional<MeanStd>& m) {
  nlohmann::json j;
  j["mean"] = m ? nlohmann::json(m->mean) : nlohmann::json(nullptr);
  j["std"] = m && m->stddev ? nlohmann::json(*m->stddev) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

std::vector<TrialRecord> run_trials(const TargetStates& target, const GateVocabulary& vocab,
                                    const GatePolicy* policy, const SearchConfig& cfg,
                                    const TrialOptions& options) {
  std::vector<TrialRecord> records(options.trials);
  detail::parallel_for(options.trials, options.jobs, [&](std::size_t i) {
    SearchConfig trial_cfg = cfg;
    trial_cfg.seed = cfg.seed + i;
    Rng rng = make_rng(trial_cfg.seed);
    const SearchResult r = run_with_verification(target, vocab, policy, trial_cfg, rng);
    TrialRecord& rec = records[i];
    rec.benchmark = target.name;
    rec.trial = i;
    rec.outcome = r.outcome;
    rec.restarts = r.restarts;
    rec.elapsed_seconds = r.elapsed_seconds;
    rec.seed = trial_cfg.seed;
    if (r.found()) {
      rec.cost = quantum_cost(r.circuit);
      rec.circuit = r.circuit;
    }
  });
  return records;
}

std::vector<BenchSummary> summarize(const std::vector<TrialRecord>& records) {
  std::vector<BenchSummary> out;
  std::vector<std::vector<const TrialRecord*>> groups;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(), [&](const BenchSummary& s) { return s.benchmark == r.benchmark; });
    if (it == out.end()) {
      out.push_back(BenchSummary{});
      out.back().benchmark = r.benchmark;
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    BenchSummary& s = out[k];
    std::vector<double> times, restarts;
    for (const TrialRecord* r : groups[k]) {
      ++s.trials;
      if (r->outcome != SearchOutcome::kFound) continue;
      ++s.successes;
      if (r->cost) ++s.cost_histogram[*r->cost];
      times.push_back(r->elapsed_seconds);
      restarts.push_back(static_cast<double>(r->restarts));
    }
    if (!s.cost_histogram.empty()) s.min_cost = s.cost_histogram.begin()->first;
    if (!times.empty()) {
      s.elapsed = mean_std(times);
      s.restarts = mean_std(restarts);
    }
  }
  return out;
}

std::string results_csv(const std::vector<TrialRecord>& records) {
  std::string out = "benchmark,trial,outcome,cost,restarts,elapsed_s,seed\n";
  for (const auto& r : records) {
    out += r.benchmark + ',' + std::to_string(r.trial) + ',' + std::string(outcome_name(r.outcome)) + ',' +
           (r.cost ? std::to_string(*r.cost) : std::string()) + ',' + std::to_string(r.restarts) + ',' +
           format_double(r.elapsed_seconds) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

std::string histogram_csv(const std::vector<BenchSummary>& summaries) {
  std::string out = "benchmark,cost,count\n";
  for (const auto& s : summaries) {
    for (const auto& [cost, count] : s.cost_histogram) {
      out += s.benchmark + ',' + std::to_string(cost) + ',' + std::to_string(count) + '\n';
    }
  }
  return out;
}

std::string summary_json(const std::vector<BenchSummary>& summaries) {
  nlohmann::json root = nlohmann::json::array();
  for (const auto& s : summaries) {
    nlohmann::json j;
    j["benchmark"] = s.benchmark;
    j["trials"] = s.trials;
    j["success_count"] = s.successes;
    j["min_cost"] = s.min_cost ? nlohmann::json(*s.min_cost) : nlohmann::json(nullptr);
    j["elapsed_s"] = mean_std_json(s.elapsed);
    j["restarts"] = mean_std_json(s.restarts);
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [cost, count] : s.cost_histogram) hist[std::to_string(cost)] = count;
    j["cost_histogram"] = hist;
    root.push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

std::vector<TrialRecord> parse_results_csv(std::string_view text) {
  std::vector<TrialRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != "benchmark,trial,outcome,cost,restarts,elapsed_s,seed") {
        throw ParseError("unexpected results header", 1, 1);
      }
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 7) throw ParseError("expected 7 fields", line_no, 1);
    TrialRecord r;
    r.benchmark = std::string(f[0]);
    r.trial = parse_number<std::size_t>(f[1], line_no);
    if (f[2] == "found") {
      r.outcome = SearchOutcome::kFound;
    } else if (f[2] == "exhausted") {
      r.outcome = SearchOutcome::kExhausted;
    } else {
      throw ParseError("bad outcome '" + std::string(f[2]) + "'", line_no, 1);
    }
    if (!f[3].empty()) r.cost = parse_number<std::size_t>(f[3], line_no);
    r.restarts = parse_number<std::size_t>(f[4], line_no);
    r.elapsed_seconds = parse_number<double>(f[5], line_no);
    r.seed = parse_number<std::uint64_t>(f[6], line_no);
    out.push_back(std::move(r));
  }
  return out;
}

void write_reports(const std::filesystem::path& dir, const std::vector<TrialRecord>& records) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const auto summaries = summarize(records);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    out << body;
    if (!out) throw IoError("write failed for " + (dir / name).string());
  };
  write("results.csv", results_csv(records));
  write("histogram.csv", histogram_csv(summaries));
  write("summary.json", summary_json(summaries));
}

}  // namespace qcsynth
