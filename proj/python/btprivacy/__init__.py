# Copyright 2026 The btp Authors
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

"""Back-translation text anonymization with METEOR, F1, GAR and P_Mean evaluation."""

from ._core import (
    BackendError,
    DataError,
    Error,
    LinearTextModel,
    UsageError,
    back_translate,
    evaluate,
    f1_score,
    format_fixed2,
    gar,
    load_corpus,
    meteor_corpus,
    meteor_sentence,
    p_mean,
    porter_stem,
    render,
    tokenize,
    transform_corpus,
    write_corpus,
)

__version__ = "0.1.0"

__all__ = [
    "BackendError",
    "DataError",
    "Error",
    "LinearTextModel",
    "UsageError",
    "back_translate",
    "evaluate",
    "f1_score",
    "format_fixed2",
    "gar",
    "load_corpus",
    "meteor_corpus",
    "meteor_sentence",
    "p_mean",
    "porter_stem",
    "render",
    "tokenize",
    "transform_corpus",
    "write_corpus",
]
