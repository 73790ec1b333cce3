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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ssum/datasets.hpp"
#include "ssum/errors.hpp"
#include "ssum/extmem.hpp"
#include "ssum/mapreduce.hpp"
#include "ssum/oracle.hpp"
#include "ssum/parallel.hpp"
#include "ssum/value_stream.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

ssum::NonFinitePolicy policy_of(const std::string& s) {
  if (s == "reject") return ssum::NonFinitePolicy::Reject;
  if (s == "propagate") return ssum::NonFinitePolicy::Propagate;
  throw py::value_error("nonfinite must be 'reject' or 'propagate'");
}

ssum::RoundedSum run(const Array& values, const std::string& algo, std::size_t workers,
                     std::size_t chunk, std::size_t reducers, std::size_t partitions,
                     std::size_t mem_budget, std::size_t block, const std::string& tmpdir,
                     const std::string& nonfinite) {
  const auto xs = view(values);
  const auto policy = policy_of(nonfinite);
  const ssum::ReductionPlan plan{workers, chunk};
  py::gil_scoped_release release;
  if (algo == "tree") return ssum::sum_tree(xs, plan, policy);
  if (algo == "truncated") {
    return ssum::sum_truncated(xs, plan, 2, ssum::StopMode::ExponentGap, policy).result;
  }
  if (algo == "stream") {
    ssum::SpanStream in(xs);
    return ssum::sum_inmemory_stream(in, policy);
  }
  if (algo == "extmem") {
    ssum::SpanStream in(xs);
    const std::string dir = tmpdir.empty() ? std::filesystem::temp_directory_path().string() : tmpdir;
    return ssum::sum_external(in, {mem_budget, block}, dir, nullptr, {}, policy);
  }
  if (algo == "mapreduce") {
    ssum::JobConfig job;
    job.reducers = reducers;
    job.workers = workers;
    job.policy = policy;
    return ssum::run_job(ssum::split_even(xs, partitions), job);
  }
  if (algo == "oracle") {
    if (auto special = ssum::screen_nonfinite(xs, policy)) return *special;
    return ssum::oracle_sum(xs);
  }
  throw std::invalid_argument("unknown algo " + algo);
}

}  // namespace

PYBIND11_MODULE(_ssum, m) {
  m.doc() = "Correctly rounded summation of binary64 data";

  auto base = py::register_exception<ssum::Error>(m, "Error");
  py::register_exception<ssum::NonFiniteInput>(m, "NonFiniteInput", base);
  py::register_exception<ssum::IoFailure>(m, "IoFailure", base);
  py::register_exception<ssum::BudgetTooSmall>(m, "BudgetTooSmall", base);
  py::register_exception<ssum::DecodeError>(m, "DecodeError", base);
  py::register_exception<ssum::InvalidSpec>(m, "InvalidSpec", base);

  py::class_<ssum::RoundedSum>(m, "RoundedSum")
      .def_readonly("value", &ssum::RoundedSum::value)
      .def_readonly("exact", &ssum::RoundedSum::exact)
      .def_property_readonly("direction",
                             [](const ssum::RoundedSum& r) { return std::string(to_string(r.direction)); })
      .def_property_readonly("bits", &ssum::RoundedSum::bits)
      .def_property_readonly("hex", [](const ssum::RoundedSum& r) { return ssum::hex_bits(r.value); })
      .def("__float__", [](const ssum::RoundedSum& r) { return r.value; })
      .def("__repr__", [](const ssum::RoundedSum& r) {
        return "RoundedSum(" + ssum::shortest_decimal(r.value) + ", " + ssum::hex_bits(r.value) +
               ", " + std::string(to_string(r.direction)) + ")";
      });

  m.def("sum", &run, py::arg("values"), py::arg("algo") = "tree", py::arg("workers") = 1,
        py::arg("chunk") = 4096, py::arg("reducers") = 1, py::arg("partitions") = 16,
        py::arg("mem_budget") = std::size_t{64} << 20, py::arg("block") = 65536,
        py::arg("tmpdir") = "", py::arg("nonfinite") = "reject",
        "Correctly rounded sum with the chosen engine: tree, truncated, stream, extmem, "
        "mapreduce or oracle.");

  m.def("naive_sum", [](const Array& a) { return ssum::naive_sum(view(a)); }, py::arg("values"));
  m.def("compensated_sum", [](const Array& a) { return ssum::compensated_sum(view(a)); },
        py::arg("values"));

  m.def(
      "condition_number",
      [](const Array& a) {
        const auto c = ssum::condition_number(view(a));
        return py::make_tuple(c.c, c.log2_c, c.infinite);
      },
      py::arg("values"), "Returns (C, log2 C, infinite).");

  m.def(
      "generate",
      [](int kind, std::uint64_t n, int delta, std::uint64_t seed) {
        ssum::DatasetSpec spec{ssum::dataset_kind(kind), n, delta, seed};
        std::vector<double> xs;
        {
          py::gil_scoped_release release;
          xs = ssum::generate(spec);
        }
        py::array_t<double> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(xs.size())});
        if (!xs.empty()) std::memcpy(out.mutable_data(), xs.data(), xs.size() * sizeof(double));
        return out;
      },
      py::arg("kind"), py::arg("n"), py::arg("delta") = 100, py::arg("seed") = 0);

  m.def(
      "encode",
      [](const Array& a) {
        ssum::DenseAccumulator acc;
        for (double x : view(a)) acc.add_scalar(x);
        const auto bytes = ssum::encode(ssum::SparseAccumulator::from_dense(acc));
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
      },
      py::arg("values"), "Wire bytes of the sparse accumulator holding the exact sum.");

  m.def(
      "decode_sum",
      [](const py::bytes& b) {
        const std::string s = b;
        const auto acc = ssum::decode(
            {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
        return ssum::round_to_double(acc.to_dense());
      },
      py::arg("data"), "Rounds the accumulator carried by wire bytes.");
}
