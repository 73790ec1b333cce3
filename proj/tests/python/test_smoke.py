# Copyright 2026 The ssum Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import struct
from fractions import Fraction

import numpy as np
import pytest

import ssum

ENGINES = ["tree", "truncated", "stream", "extmem", "mapreduce", "oracle"]


def bits(x):
    return struct.unpack("<Q", struct.pack("<d", x))[0]


def exact_sum(xs):
    # float(Fraction) rounds to nearest even.
    return float(sum(map(Fraction, xs.tolist())))


@pytest.mark.parametrize("algo", ENGINES)
@pytest.mark.parametrize("kind", [1, 2, 3, 4])
def test_engines_match_rational_sum(algo, kind, tmp_path):
    xs = ssum.generate(kind, 2000, delta=100, seed=5)
    r = ssum.sum(xs, algo=algo, reducers=3, tmpdir=str(tmp_path))
    assert r.bits == bits(exact_sum(xs))
    assert r.hex == "0x%016x" % r.bits


def test_cancellation_beats_baselines():
    xs = np.array([1e16, 1.0, -1e16])
    assert ssum.naive_sum(xs) == 0.0
    assert ssum.compensated_sum(xs) == 1.0
    r = ssum.sum(xs)
    assert float(r) == 1.0 and r.exact and r.direction == "exact"


def test_no_intermediate_overflow():
    r = ssum.sum([1e308, 1e308, -1e308, -1e308], algo="stream")
    assert r.bits == 0


def test_sum_zero_dataset():
    assert ssum.sum(ssum.generate(4, 1001, seed=7)).bits == 0


def test_positive_condition_number_is_one():
    c, log2c, infinite = ssum.condition_number(ssum.generate(1, 500, seed=2))
    assert (c, log2c, infinite) == (1.0, 0.0, False)


def test_nonfinite_policy():
    with pytest.raises(ssum.NonFiniteInput):
        ssum.sum([1.0, float("nan")])
    r = ssum.sum([1.0, float("inf")], nonfinite="propagate")
    assert r.value == float("inf")


def test_wire_round_trip():
    xs = ssum.generate(2, 300, delta=500, seed=9)
    data = ssum.encode(xs)
    assert data[:4] == b"SSAC" and data[4] == 1
    assert ssum.decode_sum(data).bits == ssum.sum(xs).bits
    assert ssum.encode([]) == b"SSAC\x01\x33\x00\x00\x00\x00\x00\x00"
    with pytest.raises(ssum.DecodeError):
        ssum.decode_sum(b"XSAC" + data[4:])


def test_generate_is_reproducible():
    a = ssum.generate(3, 100, delta=2000, seed=11)
    b = ssum.generate(3, 100, delta=2000, seed=11)
    assert np.array_equal(a.view(np.uint64), b.view(np.uint64))
    with pytest.raises(ssum.InvalidSpec):
        ssum.generate(2, 10, delta=5000)
