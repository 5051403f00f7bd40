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

#include "qcsynth/dataset.hpp"

#include <algorithm>
#include <unordered_set>

#include "binary_io.hpp"
#include "parallel.hpp"
#include "qcsynth/error.hpp"

namespace qcsynth {

namespace {

constexpr char kDatasetMagic[5] = "AQCD";
constexpr std::uint32_t kDatasetVersion = 1;
// Consecutive loop-closing draws tolerated before the vocabulary is declared
// unable to extend the circuit.
constexpr std::size_t kMaxConsecutiveRejections = 10000;

std::size_t table_entries(std::size_t n_qubits) { return std::size_t{1} << (2 * n_qubits); }

}  // namespace

Circuit random_circuit(const GateVocabulary& vocab, std::size_t cost, Rng& rng) {
  Circuit c(vocab.n_qubits());
  if (cost == 0) return c;
  const bool has_controlled = std::any_of(vocab.entries().begin(), vocab.entries().end(),
                                          [](const GateInstance& g) { return g.control.has_value(); });
  if (!has_controlled) throw InvalidArgument("vocabulary has no two-qubit gate; cost can never grow");
  std::size_t current_cost = 0;
  std::size_t rejections = 0;
  while (current_cost < cost) {
    const GateInstance& g = vocab[static_cast<std::size_t>(uniform_index(rng, vocab.size()))];
    if (closes_loop(c, g)) {
      if (++rejections > kMaxConsecutiveRejections) {
        throw InvalidArgument("vocabulary cannot extend the circuit without loops");
      }
      continue;
    }
    rejections = 0;
    c.push_back(g);
    if (g.control) ++current_cost;
  }
  return c;
}

std::vector<TrainingPair> extract_pairs(const Circuit& c, const GateVocabulary& vocab) {
  if (c.n_qubits() != vocab.n_qubits()) throw DimensionError("circuit and vocabulary qubit counts differ");
  std::vector<TrainingPair> out;
  std::vector<GateInstance> remainder = c.gates();
  while (!remainder.empty()) {
    const Circuit current(c.n_qubits(), remainder);
    const std::vector<std::size_t> frontier = to_dag(current).frontier();
    if (frontier.size() > kMaxFrontier) {
      throw InvalidArgument("frontier of " + std::to_string(frontier.size()) +
                            " gates exceeds the subset enumeration cap");
    }
    std::vector<std::size_t> hot_index;
    hot_index.reserve(frontier.size());
    for (std::size_t node : frontier) {
      const auto idx = vocab.index_of(remainder[node]);
      if (!idx) throw InvalidArgument(to_string(remainder[node]) + " is not in the vocabulary");
      hot_index.push_back(*idx);
    }
    const OperatorTable full = circuit_unitary(current);
    const std::size_t all = (std::size_t{1} << frontier.size()) - 1;
    // Bit i of `removed` set means frontier[i] belongs to T'.
    for (std::size_t removed = 0; removed < all; ++removed) {
      TrainingPair pair{full, std::vector<std::uint8_t>(vocab.size(), 0)};
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        if ((removed >> i) & 1u) {
          apply_inverse_table_inplace(pair.input, remainder[frontier[i]]);
        } else {
          pair.target[hot_index[i]] = 1;
        }
      }
      out.push_back(std::move(pair));
    }
    std::vector<GateInstance> next;
    next.reserve(remainder.size() - frontier.size());
    for (std::size_t i = 0, f = 0; i < remainder.size(); ++i) {
      if (f < frontier.size() && frontier[f] == i) {
        ++f;
        continue;
      }
      next.push_back(remainder[i]);
    }
    remainder = std::move(next);
  }
  return out;
}

Dataset::Dataset(std::size_t n_qubits, KindSet kinds)
    : n_qubits_(n_qubits),
      kinds_(kinds),
      vocab_size_(build_vocabulary(n_qubits, kinds).size()),
      input_doubles_(2 * table_entries(n_qubits)) {}

void Dataset::reserve(std::size_t pairs) {
  inputs_.reserve(pairs * input_doubles_);
  targets_.reserve(pairs * vocab_size_);
}

void Dataset::add(const TrainingPair& pair) {
  if (pair.input.n_qubits() != n_qubits_ || pair.target.size() != vocab_size_) {
    throw DimensionError("training pair does not match dataset shape");
  }
  for (const Complex& z : pair.input.flat()) {
    inputs_.push_back(z.real());
    inputs_.push_back(z.imag());
  }
  targets_.insert(targets_.end(), pair.target.begin(), pair.target.end());
}

DatasetWriter::DatasetWriter(const std::filesystem::path& path, std::size_t n_qubits, KindSet kinds)
    : path_(path),
      out_(path, std::ios::binary | std::ios::trunc),
      n_qubits_(n_qubits),
      vocab_size_(build_vocabulary(n_qubits, kinds).size()) {
  if (!out_) throw IoError("cannot write dataset " + path.string());
  out_.write(kDatasetMagic, 4);
  detail::write_u32(out_, kDatasetVersion);
  detail::write_u32(out_, static_cast<std::uint32_t>(n_qubits));
  detail::write_u32(out_, static_cast<std::uint32_t>(vocab_size_));
  detail::write_u8(out_, kinds.mask());
  detail::write_u64(out_, 0);
}

DatasetWriter::~DatasetWriter() {
  if (!finished_) {
    try {
      finish();
    } catch (...) {
    }
  }
}

void DatasetWriter::write(const TrainingPair& pair) {
  if (pair.input.n_qubits() != n_qubits_ || pair.target.size() != vocab_size_) {
    throw DimensionError("training pair does not match dataset shape");
  }
  for (const Complex& z : pair.input.flat()) {
    detail::write_f64(out_, z.real());
    detail::write_f64(out_, z.imag());
  }
  out_.write(reinterpret_cast<const char*>(pair.target.data()),
             static_cast<std::streamsize>(pair.target.size()));
  ++count_;
}

void DatasetWriter::finish() {
  if (finished_) return;
  finished_ = true;
  // magic(4) + version(4) + n(4) + vocab(4) + mask(1)
  out_.seekp(17);
  detail::write_u64(out_, count_);
  out_.close();
  if (!out_) throw IoError("write failed for " + path_.string());
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  DatasetWriter w(path, data.n_qubits(), data.kinds());
  for (std::size_t i = 0; i < data.size(); ++i) {
    TrainingPair p{OperatorTable::identity(data.n_qubits()),
                   std::vector<std::uint8_t>(data.target(i).begin(), data.target(i).end())};
    const auto in = data.input(i);
    std::vector<Complex> entries(in.size() / 2);
    for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = Complex(in[2 * k], in[2 * k + 1]);
    p.input = OperatorTable(data.n_qubits(), std::move(entries));
    w.write(p);
  }
  w.finish();
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset " + path.string());
  detail::expect_magic(in, kDatasetMagic, "dataset");
  const std::uint32_t version = detail::read_u32(in, "version");
  if (version != kDatasetVersion) {
    throw FormatError("unsupported dataset version " + std::to_string(version));
  }
  const std::uint32_t n = detail::read_u32(in, "qubit count");
  const std::uint32_t vocab_size = detail::read_u32(in, "vocabulary size");
  const KindSet kinds = KindSet::from_mask(detail::read_u8(in, "kind mask"));
  const std::uint64_t count = detail::read_u64(in, "pair count");
  if (n == 0 || n > 8 || kinds.empty()) throw FormatError("corrupt dataset header");
  Dataset data(n, kinds);
  if (data.vocab_size() != vocab_size) {
    throw DimensionError("dataset header vocabulary size " + std::to_string(vocab_size) +
                         " does not match its kind set (" + std::to_string(data.vocab_size()) + ")");
  }
  data.reserve(count);
  const std::size_t entries = table_entries(n);
  std::vector<char> raw(entries * 16);
  TrainingPair pair{OperatorTable::identity(n), std::vector<std::uint8_t>(vocab_size)};
  std::vector<Complex> values(entries);
  for (std::uint64_t p = 0; p < count; ++p) {
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      throw FormatError("corrupt file: dataset truncated at pair " + std::to_string(p));
    }
    for (std::size_t k = 0; k < entries; ++k) {
      std::uint64_t re = 0, im = 0;
      for (int b = 0; b < 8; ++b) {
        re |= static_cast<std::uint64_t>(static_cast<unsigned char>(raw[16 * k + b])) << (8 * b);
        im |= static_cast<std::uint64_t>(static_cast<unsigned char>(raw[16 * k + 8 + b])) << (8 * b);
      }
      values[k] = Complex(std::bit_cast<double>(re), std::bit_cast<double>(im));
    }
    pair.input = OperatorTable(n, values);
    in.read(reinterpret_cast<char*>(pair.target.data()), vocab_size);
    if (in.gcount() != static_cast<std::streamsize>(vocab_size)) {
      throw FormatError("corrupt file: dataset truncated at pair " + std::to_string(p));
    }
    data.add(pair);
  }
  return data;
}

CorpusReport generate_corpus(const CorpusConfig& cfg, const std::filesystem::path& out) {
  CorpusReport report;
  const GateVocabulary vocab = build_vocabulary(cfg.n_qubits, cfg.kinds);
  DatasetWriter writer(out, cfg.n_qubits, cfg.kinds);
  if (cfg.circuit_cost == 0 || cfg.circuit_count == 0) {
    report.warnings.push_back("circuit cost and count must be positive; wrote an empty dataset");
    writer.finish();
    return report;
  }

  std::unordered_set<DedupKey, DedupKeyHash> seen;
  const std::size_t max_attempts = 50 * cfg.circuit_count;
  const std::size_t block = std::max<std::size_t>(64, 8 * cfg.jobs);
  std::size_t next = 0;
  while (report.circuits < cfg.circuit_count && next < max_attempts) {
    const std::size_t b = std::min(block, max_attempts - next);
    std::vector<Circuit> candidates(b);
    std::vector<DedupKey> keys(b);
    detail::parallel_for(b, cfg.jobs, [&](std::size_t i) {
      Rng rng = make_rng(cfg.seed, next + i);
      candidates[i] = random_circuit(vocab, cfg.circuit_cost, rng);
      keys[i] = dedup_key(candidates[i], cfg.dedup);
    });
    std::vector<std::size_t> accepted;
    for (std::size_t i = 0; i < b && report.circuits < cfg.circuit_count; ++i) {
      ++report.attempts;
      if (seen.insert(keys[i]).second) {
        accepted.push_back(i);
        ++report.circuits;
      } else {
        ++report.duplicates_rejected;
      }
    }
    next += b;

    std::vector<std::vector<TrainingPair>> pairs(accepted.size());
    detail::parallel_for(accepted.size(), cfg.jobs, [&](std::size_t i) {
      pairs[i] = extract_pairs(candidates[accepted[i]], vocab);
    });
    for (const auto& list : pairs) {
      for (const auto& p : list) writer.write(p);
    }
  }
  writer.finish();
  report.pairs = writer.count();
  if (report.circuits < cfg.circuit_count) {
    report.warnings.push_back("shortfall: only " + std::to_string(report.circuits) + " of " +
                              std::to_string(cfg.circuit_count) + " distinct circuits found in " +
                              std::to_string(report.attempts) + " attempts");
  }
  return report;
}

}  // namespace qcsynth
