// Copyright 2026 The ssum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ssum: generate datasets, sum them with any engine, check engines against
// the exact oracle, and benchmark.
//
// Exit status: 0 success, 1 verification mismatch, 2 usage error,
// 3 input/output error, 4 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ssum/datasets.hpp"
#include "ssum/errors.hpp"
#include "ssum/extmem.hpp"
#include "ssum/mapreduce.hpp"
#include "ssum/oracle.hpp"
#include "ssum/parallel.hpp"
#include "ssum/rounded_sum.hpp"
#include "ssum/value_stream.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kMismatch = 1, kUsage = 2, kIo = 3, kInternal = 4 };

enum class Algo { Naive, Compensated, Stream, Tree, Truncated, Extmem, MapReduce, Oracle };
enum class Format { Binary, Text };

const std::map<std::string, Algo> kAlgos{
    {"naive", Algo::Naive},         {"compensated", Algo::Compensated},
    {"stream", Algo::Stream},       {"tree", Algo::Tree},
    {"truncated", Algo::Truncated}, {"extmem", Algo::Extmem},
    {"mapreduce", Algo::MapReduce}, {"oracle", Algo::Oracle}};

const std::map<std::string, Format> kFormats{{"binary", Format::Binary}, {"text", Format::Text}};

const std::map<std::string, ssum::NonFinitePolicy> kPolicies{
    {"reject", ssum::NonFinitePolicy::Reject}, {"propagate", ssum::NonFinitePolicy::Propagate}};

std::string algo_name(Algo a) {
  for (const auto& [name, value] : kAlgos) {
    if (value == a) return name;
  }
  return "?";
}

bool is_parallel(Algo a) {
  return a == Algo::Tree || a == Algo::Truncated || a == Algo::MapReduce;
}

std::size_t hardware_threads() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

struct EngineOptions {
  Algo algo = Algo::Tree;
  std::size_t workers = hardware_threads();
  std::size_t reducers = 1;
  std::size_t partitions = 16;
  std::size_t chunk = 4096;
  std::size_t mem_budget = 64u << 20;
  std::size_t block = 1u << 16;
  std::string tmpdir = fs::temp_directory_path().string();
  ssum::NonFinitePolicy policy = ssum::NonFinitePolicy::Reject;
};

struct InputOptions {
  std::string path = "-";
  Format format = Format::Binary;
};

void add_engine_options(CLI::App* cmd, EngineOptions& eo) {
  cmd->add_option("--algo", eo.algo, "summation engine")
      ->transform(CLI::CheckedTransformer(kAlgos, CLI::ignore_case));
  cmd->add_option("--workers", eo.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--reducers", eo.reducers, "reducers for mapreduce")->check(CLI::PositiveNumber);
  cmd->add_option("--partitions", eo.partitions, "input splits for mapreduce")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--chunk", eo.chunk, "values per tree leaf")->check(CLI::PositiveNumber);
  cmd->add_option("--mem-budget", eo.mem_budget, "extmem working memory in bytes")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--block", eo.block, "extmem records per sorted run")->check(CLI::PositiveNumber);
  cmd->add_option("--tmpdir", eo.tmpdir, "extmem scratch directory");
  cmd->add_option("--nonfinite", eo.policy, "NaN/Inf handling: reject or propagate")
      ->transform(CLI::CheckedTransformer(kPolicies, CLI::ignore_case));
}

void add_input_options(CLI::App* cmd, InputOptions& io) {
  cmd->add_option("--in", io.path, "input file, - for stdin");
  cmd->add_option("--format", io.format, "binary (little-endian binary64) or text")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

// Owns the underlying istream for a ValueStream.
class Input {
 public:
  explicit Input(const InputOptions& o) {
    std::istream* in = &std::cin;
    const std::string name = o.path == "-" ? "<stdin>" : o.path;
    if (o.path != "-") {
      auto mode = o.format == Format::Binary ? std::ios::in | std::ios::binary : std::ios::in;
      file_ = std::make_unique<std::ifstream>(o.path, mode);
      if (!*file_) throw ssum::IoFailure(o.path, ssum::IoOp::Open);
      in = file_.get();
    }
    if (o.format == Format::Binary) {
      stream_ = std::make_unique<ssum::BinaryStream>(*in, name);
    } else {
      stream_ = std::make_unique<ssum::TextStream>(*in, name);
    }
  }
  ssum::ValueStream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::unique_ptr<ssum::ValueStream> stream_;
};

// Counts the values pulled through a stream.
class CountingStream final : public ssum::ValueStream {
 public:
  explicit CountingStream(ssum::ValueStream& inner) : inner_(inner) {}
  std::size_t read(std::span<double> out) override {
    const std::size_t got = inner_.read(out);
    count_ += got;
    return got;
  }
  std::uint64_t count() const noexcept { return count_; }

 private:
  ssum::ValueStream& inner_;
  std::uint64_t count_ = 0;
};

// Exactness and direction of a baseline value against the exact sum.
ssum::RoundedSum describe_baseline(double value, std::span<const double> xs,
                                   ssum::NonFinitePolicy policy) {
  ssum::RoundedSum r;
  r.value = value;
  if (auto special = ssum::screen_nonfinite(xs, policy)) {
    r.exact = special->bits() == r.bits();
    r.direction = r.exact ? ssum::Rounding::Exact : ssum::Rounding::RoundedUp;
    return r;
  }
  ssum::ExactFixedPoint diff;
  for (double x : xs) diff.add(x);
  const ssum::RoundedSum truth = diff.round();
  r.msd_exponent = truth.msd_exponent;
  if (!std::isfinite(value)) {
    r.exact = false;
    r.direction = value > 0 ? ssum::Rounding::RoundedUp : ssum::Rounding::RoundedDown;
    return r;
  }
  diff.add(-value);
  r.exact = diff.is_zero();
  r.direction = r.exact ? ssum::Rounding::Exact
                        : (diff.is_negative() ? ssum::Rounding::RoundedUp
                                              : ssum::Rounding::RoundedDown);
  return r;
}

ssum::RoundedSum run_on_values(std::span<const double> xs, const EngineOptions& eo) {
  switch (eo.algo) {
    case Algo::Naive:
      return describe_baseline(ssum::naive_sum(xs), xs, eo.policy);
    case Algo::Compensated:
      return describe_baseline(ssum::compensated_sum(xs), xs, eo.policy);
    case Algo::Stream: {
      ssum::SpanStream in(xs);
      return ssum::sum_inmemory_stream(in, eo.policy);
    }
    case Algo::Tree:
      return ssum::sum_tree(xs, {eo.workers, eo.chunk}, eo.policy);
    case Algo::Truncated:
      return ssum::sum_truncated(xs, {eo.workers, eo.chunk}, 2, ssum::StopMode::ExponentGap,
                                 eo.policy)
          .result;
    case Algo::Extmem: {
      ssum::SpanStream in(xs);
      return ssum::sum_external(in, {eo.mem_budget, eo.block}, eo.tmpdir, nullptr, {}, eo.policy);
    }
    case Algo::MapReduce: {
      ssum::JobConfig job;
      job.reducers = eo.reducers;
      job.workers = eo.workers;
      job.policy = eo.policy;
      return ssum::run_job(ssum::split_even(xs, eo.partitions), job);
    }
    case Algo::Oracle:
      if (auto special = ssum::screen_nonfinite(xs, eo.policy)) return *special;
      return ssum::oracle_sum(xs);
  }
  return {};
}

struct Summed {
  ssum::RoundedSum result;
  std::uint64_t n = 0;
};

// Streaming engines consume the input directly; the others load it first.
Summed run_on_input(const InputOptions& io, const EngineOptions& eo) {
  Input input(io);
  CountingStream counted(input.stream());
  if (eo.algo == Algo::Stream) {
    const auto r = ssum::sum_inmemory_stream(counted, eo.policy);
    return {r, counted.count()};
  }
  if (eo.algo == Algo::Extmem) {
    const auto r =
        ssum::sum_external(counted, {eo.mem_budget, eo.block}, eo.tmpdir, nullptr, {}, eo.policy);
    return {r, counted.count()};
  }
  const auto xs = ssum::read_all(counted);
  return {run_on_values(xs, eo), xs.size()};
}

json to_json(const ssum::RoundedSum& r, std::uint64_t n) {
  json j;
  j["value_hex"] = ssum::hex_bits(r.value);
  j["value"] = ssum::shortest_decimal(r.value);
  j["exact"] = r.exact;
  j["direction"] = std::string(ssum::to_string(r.direction));
  j["n"] = n;
  return j;
}

void print_result(const ssum::RoundedSum& r, std::uint64_t n, bool as_json) {
  if (as_json) {
    std::cout << to_json(r, n).dump(2) << '\n';
  } else {
    std::cout << ssum::hex_bits(r.value) << ' ' << ssum::shortest_decimal(r.value) << '\n';
  }
}

int cmd_gen(const ssum::DatasetSpec& spec, const std::string& out, Format format) {
  const auto xs = ssum::generate(spec);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (out != "-") {
    file.open(out, format == Format::Binary ? std::ios::out | std::ios::binary : std::ios::out);
    if (!file) throw ssum::IoFailure(out, ssum::IoOp::Open);
    os = &file;
  }
  if (format == Format::Binary) {
    ssum::write_binary(*os, xs);
  } else {
    ssum::write_text(*os, xs);
  }
  os->flush();
  if (!*os) throw ssum::IoFailure(out == "-" ? "<stdout>" : out, ssum::IoOp::Write);
  return kOk;
}

int cmd_verify(const InputOptions& io, const EngineOptions& eo, bool as_json) {
  Input input(io);
  const auto xs = ssum::read_all(input.stream());
  const ssum::RoundedSum got = run_on_values(xs, eo);
  EngineOptions oracle_opts = eo;
  oracle_opts.algo = Algo::Oracle;
  const ssum::RoundedSum want = run_on_values(xs, oracle_opts);
  const bool match = got.bits() == want.bits();
  if (as_json) {
    json j;
    j["algo"] = algo_name(eo.algo);
    j["result"] = to_json(got, xs.size());
    j["oracle"] = to_json(want, xs.size());
    j["match"] = match;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << algo_name(eo.algo) << ' ' << ssum::hex_bits(got.value) << ' '
              << ssum::shortest_decimal(got.value) << '\n'
              << "oracle " << ssum::hex_bits(want.value) << ' '
              << ssum::shortest_decimal(want.value) << '\n'
              << (match ? "match" : "MISMATCH") << '\n';
  }
  return match ? kOk : kMismatch;
}

struct BenchOptions {
  std::vector<std::string> algos{"stream", "tree", "truncated", "extmem", "mapreduce"};
  std::vector<std::uint64_t> sizes{1'000'000};
  std::vector<std::size_t> threads;
  int kind = 2;
  int delta = 2000;
  std::uint64_t seed = 1;
  int repeats = 1;
  std::string out = "-";
  std::string format = "csv";
};

int cmd_bench(const BenchOptions& bo, EngineOptions eo) {
  std::vector<std::size_t> threads = bo.threads;
  if (threads.empty()) {
    threads.push_back(1);
    if (hardware_threads() > 1) threads.push_back(hardware_threads());
  }
  json rows = json::array();
  bool all_pass = true;
  for (std::uint64_t n : bo.sizes) {
    const ssum::DatasetSpec spec{ssum::dataset_kind(bo.kind), n, bo.delta, bo.seed};
    const auto xs = ssum::generate(spec);
    const std::uint64_t truth = ssum::oracle_sum(xs).bits();
    for (const std::string& name : bo.algos) {
      const auto it = kAlgos.find(name);
      if (it == kAlgos.end()) throw CLI::ValidationError("--algos", "unknown engine " + name);
      eo.algo = it->second;
      for (std::size_t t : threads) {
        if (!is_parallel(eo.algo) && t != threads.front()) continue;
        eo.workers = is_parallel(eo.algo) ? t : 1;
        double best = 0.0;
        std::uint64_t bits = 0;
        for (int rep = 0; rep < std::max(1, bo.repeats); ++rep) {
          const auto t0 = std::chrono::steady_clock::now();
          bits = run_on_values(xs, eo).bits();
          const double s =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          best = rep == 0 ? s : std::min(best, s);
        }
        json row;
        row["algo"] = name;
        row["n"] = n;
        row["kind"] = bo.kind;
        row["delta"] = bo.delta;
        row["threads"] = eo.workers;
        row["seconds"] = best;
        row["throughput"] = best > 0 ? static_cast<double>(n) / best : 0.0;
        row["value_hex"] = ssum::hex_bits(std::bit_cast<double>(bits));
        row["pass"] = bits == truth;
        // Baselines are reported, never gated.
        if (eo.algo != Algo::Naive && eo.algo != Algo::Compensated) {
          all_pass = all_pass && bits == truth;
        }
        rows.push_back(row);
        std::cerr << name << " n=" << n << " threads=" << eo.workers << " " << best << " s\n";
      }
    }
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (bo.out != "-") {
    file.open(bo.out);
    if (!file) throw ssum::IoFailure(bo.out, ssum::IoOp::Open);
    os = &file;
  }
  if (bo.format == "json") {
    *os << rows.dump(2) << '\n';
  } else {
    *os << "algo,n,kind,delta,threads,seconds,throughput,value_hex,pass\n";
    for (const auto& r : rows) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f,%.6g", r["seconds"].get<double>(),
                    r["throughput"].get<double>());
      const std::string timing = buf;
      *os << r["algo"].get<std::string>() << ',' << r["n"].get<std::uint64_t>() << ','
          << r["kind"].get<int>() << ',' << r["delta"].get<int>() << ','
          << r["threads"].get<std::size_t>() << ',' << timing << ','
          << r["value_hex"].get<std::string>() << ',' << (r["pass"].get<bool>() ? "true" : "false")
          << '\n';
    }
  }
  if (!*os) throw ssum::IoFailure(bo.out, ssum::IoOp::Write);
  return all_pass ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correctly rounded summation of binary64 data"};
  app.require_subcommand(1);

  int kind = 1;
  ssum::DatasetSpec spec;
  std::string gen_out = "-";
  Format gen_format = Format::Binary;
  auto* gen = app.add_subcommand("gen", "write a generated dataset");
  gen->add_option("--kind", kind, "1 positive, 2 mixed, 3 ill-conditioned, 4 sum zero")
      ->required()
      ->check(CLI::Range(1, 4));
  gen->add_option("--n", spec.n, "number of values")->required()->check(CLI::PositiveNumber);
  gen->add_option("--delta", spec.delta, "exponent range")->check(CLI::Range(0, 2046));
  gen->add_option("--seed", spec.seed, "random seed");
  gen->add_option("--out", gen_out, "output file, - for stdout");
  gen->add_option("--format", gen_format, "binary or text")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  EngineOptions sum_engine;
  InputOptions sum_input;
  bool sum_json = false;
  auto* sum = app.add_subcommand("sum", "sum a dataset");
  add_engine_options(sum, sum_engine);
  add_input_options(sum, sum_input);
  sum->add_flag("--json", sum_json, "print a JSON object");

  EngineOptions verify_engine;
  InputOptions verify_input;
  bool verify_json = false;
  auto* verify = app.add_subcommand("verify", "sum with an engine and compare with the oracle");
  add_engine_options(verify, verify_engine);
  add_input_options(verify, verify_input);
  verify->add_flag("--json", verify_json, "print a JSON object");

  BenchOptions bench_opts;
  EngineOptions bench_engine;
  auto* bench = app.add_subcommand("bench", "time engines over a grid");
  bench->add_option("--algos", bench_opts.algos, "engines to time")->delimiter(',');
  bench->add_option("--sizes", bench_opts.sizes, "input sizes")->delimiter(',');
  bench->add_option("--threads", bench_opts.threads, "worker counts (default 1 and all cores)")
      ->delimiter(',');
  bench->add_option("--kind", bench_opts.kind, "dataset kind")->check(CLI::Range(1, 4));
  bench->add_option("--delta", bench_opts.delta, "exponent range")->check(CLI::Range(0, 2046));
  bench->add_option("--seed", bench_opts.seed, "random seed");
  bench->add_option("--repeats", bench_opts.repeats, "best of this many runs")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", bench_opts.out, "report file, - for stdout");
  bench->add_option("--report", bench_opts.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--reducers", bench_engine.reducers, "reducers for mapreduce")
      ->check(CLI::PositiveNumber);
  bench->add_option("--chunk", bench_engine.chunk, "values per tree leaf")
      ->check(CLI::PositiveNumber);
  bench->add_option("--mem-budget", bench_engine.mem_budget, "extmem working memory in bytes");
  bench->add_option("--tmpdir", bench_engine.tmpdir, "extmem scratch directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) {
      spec.kind = ssum::dataset_kind(kind);
      return cmd_gen(spec, gen_out, gen_format);
    }
    if (*sum) {
      const Summed s = run_on_input(sum_input, sum_engine);
      print_result(s.result, s.n, sum_json);
      return kOk;
    }
    if (*verify) return cmd_verify(verify_input, verify_engine, verify_json);
    if (*bench) return cmd_bench(bench_opts, bench_engine);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "ssum: " << e.what() << '\n';
    return kUsage;
  } catch (const ssum::InvalidSpec& e) {
    std::cerr << "ssum: " << e.what() << '\n';
    return kUsage;
  } catch (const ssum::BudgetTooSmall& e) {
    std::cerr << "ssum: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ssum: " << e.what() << '\n';
    return kUsage;
  } catch (const ssum::IoFailure& e) {
    std::cerr << "ssum: " << e.what() << '\n';
    return kIo;
  } catch (const ssum::NonFiniteInput& e) {
    std::cerr << "ssum: " << e.what() << " (use --nonfinite propagate to accept it)\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "ssum: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
