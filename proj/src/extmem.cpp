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

#include "ssum/extmem.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdio>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "ssum/dense_accumulator.hpp"
#include "ssum/errors.hpp"

namespace ssum {
namespace {

constexpr std::size_t kWindow = 4;
constexpr std::size_t kHeapEntryBytes = 16;

// Resident-byte meter. Exceeding the limit is a bug in the planner, so it
// throws std::logic_error rather than a budget error.
class Meter {
 public:
  explicit Meter(std::size_t limit) : limit_(limit) {}

  void charge(std::size_t bytes) {
    current_ += bytes;
    peak_ = std::max(peak_, current_);
    if (current_ > limit_) throw std::logic_error("resident data exceeds the memory budget");
  }
  void release(std::size_t bytes) noexcept { current_ -= bytes; }
  std::size_t peak() const noexcept { return peak_; }

 private:
  std::size_t limit_;
  std::size_t current_ = 0;
  std::size_t peak_ = 0;
};

class Charge {
 public:
  Charge(Meter& meter, std::size_t bytes) : meter_(meter), bytes_(bytes) { meter_.charge(bytes_); }
  ~Charge() { meter_.release(bytes_); }
  Charge(const Charge&) = delete;
  Charge& operator=(const Charge&) = delete;

 private:
  Meter& meter_;
  std::size_t bytes_;
};

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_file(const std::filesystem::path& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw IoFailure(path, IoOp::Open, std::error_code(errno, std::generic_category()).message());
  }
  std::setvbuf(f.get(), nullptr, _IONBF, 0);
  return f;
}

class RecordWriter {
 public:
  RecordWriter(std::filesystem::path path, Meter& meter, std::size_t chunk)
      : path_(std::move(path)),
        charge_(meter, chunk * kRecordSize),
        file_(open_file(path_, "wb")),
        chunk_(chunk) {
    bytes_.reserve(chunk * kRecordSize);
  }

  void push(const ComponentRecord& r) {
    const auto enc = encode_record(r);
    bytes_.insert(bytes_.end(), enc.begin(), enc.end());
    ++written_;
    if (bytes_.size() == chunk_ * kRecordSize) flush();
  }

  void close() {
    flush();
    if (std::fclose(file_.release()) != 0) throw IoFailure(path_, IoOp::Write);
  }

  std::uint64_t written() const noexcept { return written_; }

 private:
  void flush() {
    if (bytes_.empty()) return;
    if (std::fwrite(bytes_.data(), 1, bytes_.size(), file_.get()) != bytes_.size()) {
      throw IoFailure(path_, IoOp::Write);
    }
    bytes_.clear();
  }

  std::filesystem::path path_;
  Charge charge_;
  File file_;
  std::size_t chunk_;
  std::vector<unsigned char> bytes_;
  std::uint64_t written_ = 0;
};

class RecordReader {
 public:
  RecordReader(std::filesystem::path path, Meter& meter, std::size_t chunk)
      : path_(std::move(path)),
        charge_(meter, chunk * kRecordSize),
        file_(open_file(path_, "rb")),
        bytes_(chunk * kRecordSize) {}

  bool next(ComponentRecord& out) {
    if (pos_ == size_) {
      size_ = std::fread(bytes_.data(), 1, bytes_.size(), file_.get());
      pos_ = 0;
      if (std::ferror(file_.get())) throw IoFailure(path_, IoOp::Read);
      if (size_ % kRecordSize != 0) throw IoFailure(path_, IoOp::Read, "truncated record");
      if (size_ == 0) return false;
    }
    out = decode_record(bytes_.data() + pos_);
    pos_ += kRecordSize;
    return true;
  }

 private:
  std::filesystem::path path_;
  Charge charge_;
  File file_;
  std::vector<unsigned char> bytes_;
  std::size_t size_ = 0;
  std::size_t pos_ = 0;
};

// Files created under tmpdir; removed on scope exit even when unwinding.
class Scratch {
 public:
  explicit Scratch(std::filesystem::path dir) : dir_(std::move(dir)) {}
  ~Scratch() {
    for (const auto& p : files_) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;

  std::filesystem::path next_run() {
    char name[32];
    std::snprintf(name, sizeof name, "run_%04zu.cmp", run_counter_++);
    return track(dir_ / name);
  }
  std::filesystem::path track(std::filesystem::path p) {
    files_.push_back(p);
    return p;
  }
  void remove(const std::filesystem::path& p) {
    std::error_code ec;
    std::filesystem::remove(p, ec);
    if (ec) throw IoFailure(p, IoOp::Remove, ec.message());
    files_.erase(std::remove(files_.begin(), files_.end(), p), files_.end());
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
  std::size_t run_counter_ = 0;
};

struct Plan {
  std::size_t block = 0;
  std::size_t input_batch = 0;
  std::size_t spill_chunk = 0;
  std::size_t fan_in = 0;
  std::size_t merge_chunk = 0;
  std::size_t scan_chunk = 0;
  std::size_t load_chunk = 0;
};

Plan plan_for(const MemoryBudget& budget, const RadixConfig& config) {
  const std::size_t m = budget.bytes;
  const std::size_t b = budget.block_records;
  if (b == 0) throw BudgetTooSmall("block size must be at least one record");
  if (m / (2 * kRecordSize) < b) {
    throw BudgetTooSmall("memory budget " + std::to_string(m) + " bytes is below two blocks of " +
                         std::to_string(b) + " records");
  }
  Plan plan;
  plan.block = b;
  // Spill: the run buffer, an input batch, and a write chunk of equal length.
  plan.input_batch = std::min(b, (m - b * kRecordSize) / (8 + kRecordSize));
  plan.spill_chunk = plan.input_batch;
  // Each of k inputs and the output gets a chunk; the heap and the scan
  // window take the rest. With tiny blocks the heap can crowd out the
  // chunks, so k backs off until a one-record chunk fits.
  std::size_t k = std::max<std::size_t>(2, m / (2 * b * kRecordSize));
  auto chunk_after = [&](std::size_t fixed) -> std::size_t {
    if (m < fixed) return 0;
    return std::min(b, (m - fixed) / ((k + 1) * kRecordSize));
  };
  while (k > 2 && chunk_after(k * kHeapEntryBytes + kWindow * 8) == 0) --k;
  plan.fan_in = k;
  plan.merge_chunk = chunk_after(k * kHeapEntryBytes);
  plan.scan_chunk = chunk_after(k * kHeapEntryBytes + kWindow * 8);
  // Loading keeps the digit list and then the dense accumulator resident.
  const auto digits = static_cast<std::size_t>(config.digit_count());
  const std::size_t digit_list = digits * kRecordSize;
  if (m >= digit_list + digits * 8) {
    plan.load_chunk = std::min(b, (m - digit_list) / kRecordSize);
  }
  if (plan.input_batch == 0 || plan.merge_chunk == 0 || plan.scan_chunk == 0 ||
      plan.load_chunk == 0) {
    throw BudgetTooSmall("memory budget " + std::to_string(m) +
                         " bytes leaves no room for merge or scan buffers");
  }
  return plan;
}

struct HeapEntry {
  ComponentRecord record;
  std::size_t source;
};

bool heap_after(const HeapEntry& a, const HeapEntry& b) {
  if (a.record.index != b.record.index) return a.record.index > b.record.index;
  return a.source > b.source;
}

// Streams the merged order of `runs` into `sink`.
void merge_runs(const std::vector<std::filesystem::path>& runs, Meter& meter, std::size_t chunk,
                const std::function<void(const ComponentRecord&)>& sink) {
  const Charge heap_charge(meter, runs.size() * kHeapEntryBytes);
  std::vector<std::unique_ptr<RecordReader>> readers;
  readers.reserve(runs.size());
  std::vector<HeapEntry> heap;
  heap.reserve(runs.size());
  for (std::size_t s = 0; s < runs.size(); ++s) {
    readers.push_back(std::make_unique<RecordReader>(runs[s], meter, chunk));
    HeapEntry e{{}, s};
    if (readers[s]->next(e.record)) {
      heap.push_back(e);
      std::push_heap(heap.begin(), heap.end(), heap_after);
    }
  }
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), heap_after);
    HeapEntry& top = heap.back();
    sink(top.record);
    if (readers[top.source]->next(top.record)) {
      std::push_heap(heap.begin(), heap.end(), heap_after);
    } else {
      heap.pop_back();
    }
  }
}

// Ascending-index fold through a small dense window. Digits below the
// window are final: carries only move upward and no later record can
// target them.
class WindowScan {
 public:
  WindowScan(const RadixConfig& config, RecordWriter& out, Meter& meter)
      : config_(config), out_(out), charge_(meter, kWindow * 8) {}

  void add(const ComponentRecord& r) {
    if (!started_) {
      lo_ = r.index;
      started_ = true;
    }
    if (r.index < lo_) throw std::logic_error("record targets a digit already emitted");
    while (lo_ < r.index) {
      if (window_is_zero()) {
        lo_ = r.index;
        break;
      }
      slide();
    }
    window_[0] += r.mantissa;
    if (++adds_ >= config_.max_raw_adds()) normalize_local();
  }

  void finish() {
    if (!started_) return;
    while (!window_is_zero()) slide();
  }

 private:
  bool window_is_zero() const noexcept {
    return std::all_of(window_.begin(), window_.end(), [](std::int64_t d) { return d == 0; });
  }

  void normalize_local() {
    const int w = config_.width();
    const std::int64_t half = config_.radix() / 2;
    for (std::size_t j = 0; j + 1 < kWindow; ++j) {
      const std::int64_t carry = (window_[j] + half) >> w;
      window_[j] -= carry << w;
      window_[j + 1] += carry;
    }
    if (window_[kWindow - 1] > config_.max_digit() || window_[kWindow - 1] < -config_.max_digit()) {
      throw std::logic_error("carry escaped the scan window");
    }
    adds_ = 0;
  }

  void slide() {
    normalize_local();
    if (window_[0] != 0) {
      if (lo_ >= config_.digit_count()) throw CapacityOverflow("carry beyond the top digit");
      out_.push(ComponentRecord{lo_, window_[0]});
    }
    std::rotate(window_.begin(), window_.begin() + 1, window_.end());
    window_[kWindow - 1] = 0;
    ++lo_;
  }

  RadixConfig config_;
  RecordWriter& out_;
  Charge charge_;
  std::array<std::int64_t, kWindow> window_{};
  std::int32_t lo_ = 0;
  bool started_ = false;
  std::int64_t adds_ = 0;
};

// Reads the emitted digits from the most significant end. They were
// emitted balanced and non-overlapping, so a signed-carry pass finds
// nothing to move; that is checked, then the digits are loaded.
DenseAccumulator load_back_to_front(const std::filesystem::path& path, std::uint64_t count,
                                    const RadixConfig& config, Meter& meter, std::size_t chunk) {
  const Charge list_charge(meter, static_cast<std::size_t>(config.digit_count()) * kRecordSize);
  std::vector<Digit> digits;
  digits.reserve(static_cast<std::size_t>(config.digit_count()));
  {
    const Charge buffer_charge(meter, chunk * kRecordSize);
    std::vector<unsigned char> bytes(chunk * kRecordSize);
    File f = open_file(path, "rb");
    const std::int64_t half = config.radix() / 2;
    std::uint64_t remaining = count;
    std::int32_t above = config.digit_count();
    while (remaining > 0) {
      const std::uint64_t take = std::min<std::uint64_t>(remaining, chunk);
      remaining -= take;
      if (std::fseek(f.get(), static_cast<long>(remaining * kRecordSize), SEEK_SET) != 0 ||
          std::fread(bytes.data(), kRecordSize, take, f.get()) != take) {
        throw IoFailure(path, IoOp::Read);
      }
      for (std::uint64_t i = take; i-- > 0;) {
        const ComponentRecord r = decode_record(bytes.data() + i * kRecordSize);
        if (r.index >= above || r.index < 0) throw std::logic_error("emitted digits out of order");
        if (r.mantissa < -half || r.mantissa >= half) {
          throw std::logic_error("emitted digit needs a carry");
        }
        above = r.index;
        digits.push_back(Digit{r.index, r.mantissa});
      }
    }
  }
  std::reverse(digits.begin(), digits.end());
  const Charge dense_charge(meter, static_cast<std::size_t>(config.digit_count()) * 8);
  return DenseAccumulator::from_digits(config, digits);
}

}  // namespace

std::array<unsigned char, kRecordSize> encode_record(const ComponentRecord& r) noexcept {
  std::array<unsigned char, kRecordSize> out{};
  const auto index = static_cast<std::uint32_t>(r.index);
  const auto mantissa = static_cast<std::uint64_t>(r.mantissa);
  for (int b = 0; b < 4; ++b) out[b] = static_cast<unsigned char>(index >> (8 * b));
  for (int b = 0; b < 8; ++b) out[4 + b] = static_cast<unsigned char>(mantissa >> (8 * b));
  return out;
}

ComponentRecord decode_record(const unsigned char* bytes) noexcept {
  std::uint32_t index = 0;
  std::uint64_t mantissa = 0;
  for (int b = 3; b >= 0; --b) index = (index << 8) | bytes[b];
  for (int b = 7; b >= 0; --b) mantissa = (mantissa << 8) | bytes[4 + b];
  return ComponentRecord{static_cast<std::int32_t>(index), static_cast<std::int64_t>(mantissa)};
}

RoundedSum sum_external(ValueStream& input, const MemoryBudget& budget,
                        const std::filesystem::path& tmpdir, ExtmemStats* stats,
                        const RadixConfig& config, NonFinitePolicy policy) {
  const Plan plan = plan_for(budget, config);
  if (!std::filesystem::is_directory(tmpdir)) {
    throw IoFailure(tmpdir, IoOp::Open, "not a directory");
  }
  Meter meter(budget.bytes);
  Scratch scratch(tmpdir);
  ExtmemStats local;
  local.budget_bytes = budget.bytes;
  local.fan_in = plan.fan_in;
  SpecialValues specials;

  // Decompose and spill sorted runs.
  std::vector<std::filesystem::path> runs;
  {
    const Charge run_charge(meter, plan.block * kRecordSize);
    const Charge input_charge(meter, plan.input_batch * 8);
    std::vector<ComponentRecord> run;
    run.reserve(plan.block);
    std::vector<double> batch(plan.input_batch);
    auto spill = [&] {
      if (run.empty()) return;
      std::sort(run.begin(), run.end(), [](const ComponentRecord& a, const ComponentRecord& b) {
        return a.index < b.index;
      });
      runs.push_back(scratch.next_run());
      RecordWriter writer(runs.back(), meter, plan.spill_chunk);
      for (const auto& r : run) writer.push(r);
      writer.close();
      run.clear();
    };
    std::array<Digit, kMaxDecomposedDigits> parts;
    while (const std::size_t got = input.read(batch)) {
      for (std::size_t i = 0; i < got; ++i) {
        const double x = batch[i];
        ++local.values;
        if (!specials.admit(x, policy)) continue;
        const std::size_t count = detail::decompose_into(x, config, parts);
        for (std::size_t j = 0; j < count; ++j) {
          if (run.size() == plan.block) spill();
          run.push_back(ComponentRecord{parts[j].index, parts[j].mantissa});
          ++local.records;
        }
      }
    }
    spill();
  }
  local.runs = runs.size();

  // Merge passes until one final k-way merge remains.
  while (runs.size() > plan.fan_in) {
    std::vector<std::filesystem::path> next;
    for (std::size_t first = 0; first < runs.size(); first += plan.fan_in) {
      const std::size_t last = std::min(runs.size(), first + plan.fan_in);
      const std::vector<std::filesystem::path> group(runs.begin() + first, runs.begin() + last);
      if (group.size() == 1) {
        next.push_back(group.front());
        continue;
      }
      next.push_back(scratch.next_run());
      RecordWriter writer(next.back(), meter, plan.merge_chunk);
      merge_runs(group, meter, plan.merge_chunk,
                 [&](const ComponentRecord& r) { writer.push(r); });
      writer.close();
      for (const auto& p : group) scratch.remove(p);
    }
    runs = std::move(next);
    ++local.merge_passes;
  }
  if (runs.size() > 1) ++local.merge_passes;

  // Final merge streamed through the scan window.
  const std::filesystem::path digits_path = scratch.track(tmpdir / "digits.cmp");
  std::uint64_t emitted = 0;
  {
    RecordWriter writer(digits_path, meter, plan.scan_chunk);
    WindowScan scan(config, writer, meter);
    merge_runs(runs, meter, plan.scan_chunk, [&](const ComponentRecord& r) { scan.add(r); });
    scan.finish();
    writer.close();
    emitted = writer.written();
  }
  for (const auto& p : runs) scratch.remove(p);
  local.emitted_digits = emitted;

  const DenseAccumulator acc =
      load_back_to_front(digits_path, emitted, config, meter, plan.load_chunk);
  scratch.remove(digits_path);
  local.peak_resident_bytes = meter.peak();
  if (stats != nullptr) *stats = local;
  if (specials.any()) return specials.result();
  return round_to_double(acc);
}

RoundedSum sum_inmemory_stream(ValueStream& input, NonFinitePolicy policy) {
  DenseAccumulator acc;
  SpecialValues specials;
  std::vector<double> batch(4096);
  while (const std::size_t got = input.read(batch)) {
    for (std::size_t i = 0; i < got; ++i) {
      if (specials.admit(batch[i], policy)) acc.add_scalar(batch[i]);
    }
  }
  if (specials.any()) return specials.result();
  return round_to_double(acc);
}

}  // namespace ssum
