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

"""Correctly rounded summation of binary64 data."""

try:
    from ._ssum import *  # noqa: F401,F403  (installed wheel)
    from ._ssum import __doc__  # noqa: F401
except ImportError:
    from _ssum import *  # noqa: F401,F403  (build tree)

__all__ = [
    "Error",
    "NonFiniteInput",
    "IoFailure",
    "BudgetTooSmall",
    "DecodeError",
    "InvalidSpec",
    "RoundedSum",
    "sum",
    "naive_sum",
    "compensated_sum",
    "condition_number",
    "generate",
    "encode",
    "decode_sum",
]
