# Copyright 2026 The monokurt Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Kurtosis test of multivariate normality for two-step monotone incomplete data.

Samples are passed as two arrays: ``x`` holds the n complete rows of the X
block and ``y`` holds all N rows of the Y block, complete rows first.
"""

import json as _json

from ._core import (
    DataError,
    NumericError,
    SingularMatrixError,
    canonicalizer,
    draw_sample,
    expansion_order_check,
    impute,
    kurtosis,
    mle,
    nonnull_moments,
    null_moments,
    optimize_weights,
    read_csv,
    std_normal_cdf,
    transform,
    validate,
)
from . import _core

__all__ = [
    "DataError",
    "NumericError",
    "SingularMatrixError",
    "canonicalizer",
    "draw_sample",
    "expansion_order_check",
    "impute",
    "kurtosis",
    "mardia",
    "mle",
    "nonnull_moments",
    "null_calibration",
    "null_moments",
    "optimize_weights",
    "read_csv",
    "run_test",
    "std_normal_cdf",
    "transform",
    "validate",
    "variance_oracle",
]


def run_test(x, y, weights="tau-bar", c1=1.0, c2=1.0, alpha=0.05, sidedness="two-sided"):
    """Full test; returns the report as a dict."""
    return _json.loads(_core.run_test_json(x, y, weights, c1, c2, alpha, sidedness))


def mardia(rows, alpha=0.05):
    """Classical Mardia kurtosis test on complete rows."""
    return _json.loads(_core.mardia_json(rows, alpha))


def null_calibration(**kwargs):
    """Monte Carlo summary of the standardized statistic; see draw_sample for arguments."""
    return _json.loads(_core.null_calibration_json(**kwargs))


def variance_oracle(**kwargs):
    """Monte Carlo N*Var(b) with jackknife standard error."""
    return _json.loads(_core.variance_oracle_json(**kwargs))
