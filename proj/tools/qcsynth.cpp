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

// Command-line front end: gen-data, train, synth, bench, verify and
// random-baseline.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qcsynth/bench.hpp"
#include "qcsynth/circuit.hpp"
#include "qcsynth/cvnn.hpp"
#include "qcsynth/dataset.hpp"
#include "qcsynth/error.hpp"
#include "qcsynth/search.hpp"
#include "qcsynth/spec.hpp"

namespace {

using namespace qcsynth;

enum ExitCode : int {
  kOk = 0,
  kMismatch = 1,
  kUsage = 2,
  kExhausted = 3,
  kVerificationFailed = 4,
  kIo = 5,
  kNumerical = 6,
};

struct Globals {
  std::uint64_t seed = 0;
  std::size_t qubits = 4;
  std::size_t jobs = 1;
};

struct TargetChoice {
  std::string benchmark;
  std::string spec;

  void add_to(CLI::App* cmd) {
    auto* b = cmd->add_option("--benchmark", benchmark, "Built-in benchmark name");
    auto* s = cmd->add_option("--spec", spec, "Truth-table or amplitude spec file");
    b->excludes(s);
    s->excludes(b);
  }

  TargetStates load(std::size_t qubits) const {
    if (benchmark.empty() == spec.empty()) throw CLI::ValidationError("give exactly one of --benchmark or --spec");
    TargetStates t = benchmark.empty() ? load_spec(spec) : benchmark_targets(benchmark);
    if (!benchmark.empty() && qubits != t.n_qubits()) {
      throw InvalidArgument("benchmark " + benchmark + " has " + std::to_string(t.n_qubits()) +
                            " qubits, --qubits is " + std::to_string(qubits));
    }
    return t;
  }
};

struct SearchFlags {
  std::size_t max_restarts = 1000;
  std::size_t max_depth = 0;
  double temperature = 1.0;
  double tolerance = 1e-6;
  bool no_guard = false;
  bool allow_global_phase = false;
  bool no_simplify = false;
  std::string kinds = "CX,CV,CVDG";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--max-restarts", max_restarts, "Attempts before giving up")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--max-depth", max_depth, "Gates per attempt (0: twice the reference cost, min 12, else 30)")->capture_default_str();
    cmd->add_option("--temperature", temperature, "Sampling temperature")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--tolerance", tolerance, "Identity tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_flag("--no-guard", no_guard, "Allow undoing the previous gate");
    cmd->add_flag("--allow-global-phase", allow_global_phase, "Accept a residual equal to the identity up to phase");
    cmd->add_flag("--no-simplify", no_simplify, "Report the search output without peephole merging");
    cmd->add_option("--kinds", kinds, "Gate kinds of the model's vocabulary")->capture_default_str();
  }

  SearchConfig config(std::uint64_t seed) const {
    SearchConfig cfg;
    cfg.max_restarts = max_restarts;
    cfg.max_depth = max_depth;
    cfg.temperature = temperature;
    cfg.tolerance = tolerance;
    cfg.guard_inverse = !no_guard;
    cfg.allow_global_phase = allow_global_phase;
    cfg.simplify = !no_simplify;
    cfg.seed = seed;
    return cfg;
  }
};

Network load_model(const std::string& path, const GateVocabulary& vocab) {
  Network net = load_weights(path);
  check_compatible(net, vocab.n_qubits(), vocab.size());
  return net;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

int run(int argc, char** argv) {
  CLI::App app{"Reversible and quantum circuit synthesis with a complex-valued gate policy"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with default option values");
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--qubits", g.qubits, "Qubit count")->check(CLI::Range(1, 8))->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "Generate a training corpus");
  std::size_t gen_cost = 10, gen_count = 100000;
  std::string gen_kinds = "CX,CV,CVDG", gen_out, gen_dedup = "semantic";
  gen->add_option("--cost", gen_cost, "Two-qubit gates per circuit")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--count", gen_count, "Distinct circuits")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--kinds", gen_kinds, "Gate kinds")->capture_default_str();
  gen->add_option("--dedup", gen_dedup, "semantic or sequence")->check(CLI::IsMember({"semantic", "sequence"}))->capture_default_str();
  gen->add_option("--out", gen_out, "Output dataset")->required();

  // train
  auto* tr = app.add_subcommand("train", "Train the gate policy network");
  std::string tr_data, tr_out, tr_activation = "crelu", tr_precision = "single";
  TrainConfig tcfg;
  std::size_t tr_width = 256, tr_layers = 10, tr_hidden = 512;
  tr->add_option("--data", tr_data, "Dataset file")->required();
  tr->add_option("--out", tr_out, "Output weights")->required();
  tr->add_option("--epochs", tcfg.epochs, "Epochs")->capture_default_str();
  tr->add_option("--batch-size", tcfg.batch_size, "Minibatch size")->check(CLI::PositiveNumber)->capture_default_str();
  tr->add_option("--lr", tcfg.adam.learning_rate, "Adam learning rate")->check(CLI::PositiveNumber)->capture_default_str();
  tr->add_option("--width", tr_width, "Complex layer width")->check(CLI::PositiveNumber)->capture_default_str();
  tr->add_option("--layers", tr_layers, "Complex layer count")->check(CLI::PositiveNumber)->capture_default_str();
  tr->add_option("--real-hidden", tr_hidden, "Real hidden layer width")->check(CLI::PositiveNumber)->capture_default_str();
  tr->add_option("--precision", tr_precision, "Arithmetic of the training passes")->check(CLI::IsMember({"single", "double"}))->capture_default_str();
  tr->add_option("--activation", tr_activation, "crelu or modrelu")->check(CLI::IsMember({"crelu", "modrelu"}))->capture_default_str();

  // synth
  auto* sy = app.add_subcommand("synth", "Synthesize one circuit");
  std::string sy_model, sy_out;
  TargetChoice sy_target;
  SearchFlags sy_flags;
  sy->add_option("--model", sy_model, "Weights file")->required();
  sy->add_option("--out", sy_out, "Write the circuit here");
  sy_target.add_to(sy);
  sy_flags.add_to(sy);

  // bench
  auto* be = app.add_subcommand("bench", "Repeated trials with reports");
  std::string be_model, be_out = "bench_out";
  std::vector<std::string> be_names;
  std::size_t be_trials = 100;
  bool be_serial = false;
  SearchFlags be_flags;
  be->add_option("--model", be_model, "Weights file")->required();
  be->add_option("--benchmarks", be_names, "Comma-separated benchmark names")->delimiter(',')->required();
  be->add_option("--trials", be_trials, "Trials per benchmark")->check(CLI::PositiveNumber)->capture_default_str();
  be->add_option("--out-dir", be_out, "Report directory")->capture_default_str();
  be->add_flag("--serial", be_serial, "One trial at a time (faithful timings)");
  be_flags.add_to(be);

  // verify
  auto* ve = app.add_subcommand("verify", "Check a circuit file against a target");
  std::string ve_circuit;
  TargetChoice ve_target;
  double ve_tol = 1e-6;
  ve->add_option("--circuit", ve_circuit, "Circuit file")->required();
  ve->add_option("--tolerance", ve_tol, "Amplitude tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  ve_target.add_to(ve);

  // random-baseline
  auto* rb = app.add_subcommand("random-baseline", "Uniform random search with a time budget");
  std::string rb_name;
  double rb_budget = 60.0;
  std::size_t rb_depth = 0;
  rb->add_option("--benchmark", rb_name, "Benchmark name")->required();
  rb->add_option("--budget-seconds", rb_budget, "Wall-clock budget")->check(CLI::PositiveNumber)->capture_default_str();
  rb->add_option("--depth", rb_depth, "Sequence length (0: the reference cost)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (gen->parsed()) {
    CorpusConfig cfg;
    cfg.n_qubits = g.qubits;
    cfg.kinds = parse_kind_set(gen_kinds);
    cfg.circuit_cost = gen_cost;
    cfg.circuit_count = gen_count;
    cfg.seed = g.seed;
    cfg.dedup = gen_dedup == "semantic" ? DedupMode::kSemantic : DedupMode::kSequence;
    cfg.jobs = g.jobs;
    const CorpusReport rep = generate_corpus(cfg, gen_out);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "circuits=" << rep.circuits << " pairs=" << rep.pairs << " attempts=" << rep.attempts
              << " duplicates_rejected=" << rep.duplicates_rejected << "\n";
    return kOk;
  }

  if (tr->parsed()) {
    std::cout << "epochs=" << tcfg.epochs << " batch=" << tcfg.batch_size << "\n";
    const Dataset data = load_dataset(tr_data);
    if (data.n_qubits() != g.qubits) {
      throw InvalidArgument("dataset has " + std::to_string(data.n_qubits()) + " qubits, --qubits is " +
                            std::to_string(g.qubits));
    }
    NetworkConfig ncfg;
    ncfg.n_qubits = data.n_qubits();
    ncfg.vocab_size = data.vocab_size();
    ncfg.complex_widths.assign(tr_layers, tr_width);
    ncfg.real_hidden = tr_hidden;
    ncfg.activation = parse_activation(tr_activation);
    ncfg.seed = g.seed;
    tcfg.seed = g.seed;
    tcfg.precision = tr_precision == "double" ? Precision::kDouble : Precision::kSingle;
    Network net(ncfg);
    std::cout << "pairs=" << data.size() << " parameters=" << net.parameters().size() << std::endl;
    const auto start = std::chrono::steady_clock::now();
    const TrainLog log = train(net, data, tcfg, [&](std::size_t epoch, double loss) {
      const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::cout << "epoch " << epoch + 1 << " loss=" << fmt(loss, "%.6f") << " elapsed_s=" << fmt(t, "%.1f")
                << std::endl;
    });
    if (tcfg.epochs) std::cout << "initial_loss=" << fmt(log.initial_loss, "%.6f") << "\n";
    save_weights(tr_out, net);
    std::cout << "wrote " << tr_out << "\n";
    return kOk;
  }

  if (sy->parsed()) {
    const TargetStates target = sy_target.load(g.qubits);
    const GateVocabulary vocab(target.n_qubits(), parse_kind_set(sy_flags.kinds));
    const Network net = load_model(sy_model, vocab);
    const NetworkPolicy policy(net);
    const SearchConfig cfg = sy_flags.config(g.seed);
    Rng rng = make_rng(cfg.seed);
    const SearchResult r = run_with_verification(target, vocab, &policy, cfg, rng);
    std::cout << "outcome=" << outcome_name(r.outcome) << " restarts=" << r.restarts
              << " gates_evaluated=" << r.gates_evaluated << " elapsed_s=" << fmt(r.elapsed_seconds) << "\n";
    if (!r.found()) return kExhausted;
    std::cout << "cost=" << quantum_cost(r.circuit) << "\ncircuit: " << to_string(r.circuit) << "\n";
    if (!sy_out.empty()) write_circuit_file(sy_out, r.circuit);
    return kOk;
  }

  if (be->parsed()) {
    const GateVocabulary vocab(g.qubits, parse_kind_set(be_flags.kinds));
    const Network net = load_model(be_model, vocab);
    const NetworkPolicy policy(net);
    const SearchConfig cfg = be_flags.config(g.seed);
    std::vector<TrialRecord> all;
    for (const auto& name : be_names) {
      const TargetStates target = benchmark_targets(name);
      auto recs = run_trials(target, vocab, &policy, cfg, TrialOptions{be_trials, be_serial ? 1 : g.jobs});
      all.insert(all.end(), recs.begin(), recs.end());
    }
    write_reports(be_out, all);
    for (const auto& s : summarize(all)) {
      std::cout << s.benchmark << ": success=" << s.successes << "/" << s.trials
                << " min_cost=" << (s.min_cost ? std::to_string(*s.min_cost) : "-");
      if (s.restarts) {
        std::cout << " restarts=" << fmt(s.restarts->mean)
                  << (s.restarts->stddev ? "±" + fmt(*s.restarts->stddev) : "")
                  << " elapsed_s=" << fmt(s.elapsed->mean)
                  << (s.elapsed->stddev ? "±" + fmt(*s.elapsed->stddev) : "");
      }
      std::cout << "\n";
    }
    std::cout << "reports in " << be_out << "\n";
    return kOk;
  }

  if (ve->parsed()) {
    const TargetStates target = ve_target.load(g.qubits);
    const Circuit c = read_circuit_file(ve_circuit);
    const auto bad = mismatched_inputs(c, target, ve_tol);
    std::cout << "gates=" << c.size() << " cost=" << quantum_cost(c) << "\n";
    if (bad.empty()) {
      std::cout << "OK: all " << target.table.dim() << " basis images match\n";
      return kOk;
    }
    const OperatorTable got = circuit_unitary(c);
    const std::size_t n = target.n_qubits();
    std::cout << "MISMATCH on " << bad.size() << " of " << target.table.dim() << " inputs\n";
    for (std::size_t j : bad) {
      std::cout << "  input " << bit_string(static_cast<std::uint32_t>(j), n) << ":";
      for (std::size_t row = 0; row < target.table.dim(); ++row) {
        const Complex want = target.table(row, j);
        const Complex have = got(row, j);
        if (std::abs(want - have) > ve_tol) {
          std::cout << " [" << bit_string(static_cast<std::uint32_t>(row), n) << " expected "
                    << fmt(want.real()) << fmt(want.imag(), "%+.6g") << "j got " << fmt(have.real())
                    << fmt(have.imag(), "%+.6g") << "j]";
        }
      }
      std::cout << "\n";
    }
    return kMismatch;
  }

  if (rb->parsed()) {
    const TargetStates target = benchmark_targets(rb_name);
    const GateVocabulary vocab(target.n_qubits(), kSynthesisKinds);
    const std::size_t depth = rb_depth ? rb_depth : target.reference_cost.value_or(6);
    SearchConfig cfg;
    cfg.max_depth = depth;
    cfg.max_restarts = 1000;
    Rng rng = make_rng(g.seed);
    std::uint64_t gates = 0;
    double elapsed = 0.0;
    std::optional<SearchResult> hit;
    while (elapsed < rb_budget && !hit) {
      SearchResult r = run_with_verification(target, vocab, nullptr, cfg, rng);
      gates += r.gates_evaluated;
      elapsed += r.elapsed_seconds;
      if (r.found()) hit = std::move(r);
    }
    const double space = search_space_size(vocab.size(), depth);
    const double gates_per_second = static_cast<double>(gates) / elapsed;
    const double sequences_per_second = gates_per_second / static_cast<double>(depth);
    const double hours = 0.5 * space / sequences_per_second / 3600.0;
    std::cout << "vocabulary=" << vocab.size() << " depth=" << depth << " space_size=" << fmt(space, "%.6e")
              << " (" << vocab.size() << "^" << depth << ")\n";
    std::cout << "elapsed_s=" << fmt(elapsed) << " gates=" << gates << " gates_per_second=" << fmt(gates_per_second)
              << " sequences_per_second=" << fmt(sequences_per_second) << "\n";
    std::cout << "estimated_hours_to_half_coverage=" << fmt(hours)
              << " (0.5 * space_size / sequences_per_second / 3600)\n";
    if (hit) std::cout << "found within budget: " << to_string(hit->circuit) << "\n";
    return kOk;
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
